#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vnroles/embedding.hpp"
#include "vnroles/frame_matrix.hpp"
#include "vnroles/ingest.hpp"
#include "vnroles/occurrence.hpp"

namespace vnroles {

enum class Stage { Ingest, Matrix, Occurrence, Cluster, Tsne, All };

std::string to_string(Stage stage);
/// Throws Error{Config} for an unknown name.
Stage stage_from_string(const std::string& name);

struct RunConfig {
  Stage stage = Stage::All;
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  std::uint64_t seed = 42;
  double dependence_threshold = kDefaultDependenceThreshold;
  std::size_t pca_dims = 30;
  std::size_t kmeans_restarts = 10;
  std::size_t kmeans_max_iterations = 300;
  double perplexity = 5.0;
  std::size_t tsne_iterations = 1000;
  double learning_rate = 100.0;
  double exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  /// Run t-SNE on PCA scores instead of the raw perturbed vectors.
  bool tsne_pca = false;

  bool operator==(const RunConfig&) const = default;
};

std::string config_to_json(const RunConfig& config);
/// Keys absent from the document keep their value from `base`.
RunConfig config_from_json(const std::string& json_text, RunConfig base = {});

/// Seed handed to t-SNE initialisation, kept apart from the perturbation stream.
std::uint64_t tsne_seed(std::uint64_t run_seed);

/// In-memory results of every stage that ran.
struct PipelineArtifacts {
  std::map<std::string, std::string> files;  // file name → contents
  std::vector<std::string> warnings;
};

/// Computes the outputs for `config.stage` without touching the filesystem
/// beyond reading the input directory.
PipelineArtifacts compute_artifacts(const RunConfig& config);

/// compute_artifacts + write everything (including run_config.json) into the
/// output directory. On failure no output file from this run remains.
/// Returns the written paths.
std::vector<std::filesystem::path> run_pipeline(const RunConfig& config, std::vector<std::string>* warnings = nullptr);

}  // namespace vnroles
