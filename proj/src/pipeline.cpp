#include "vnroles/pipeline.hpp"

#include <array>
#include <optional>

#include <json.hpp>

#include "vnroles/error.hpp"
#include "vnroles/random.hpp"
#include "vnroles/report.hpp"

namespace vnroles {

namespace {

constexpr std::array<std::pair<Stage, const char*>, 6> kStageNames{{
    {Stage::Ingest, "ingest"},
    {Stage::Matrix, "matrix"},
    {Stage::Occurrence, "occurrence"},
    {Stage::Cluster, "cluster"},
    {Stage::Tsne, "tsne"},
    {Stage::All, "all"},
}};

bool wants(Stage configured, Stage stage) { return configured == Stage::All || configured == stage; }

}  // namespace

std::string to_string(Stage stage) {
  for (const auto& [s, name] : kStageNames) {
    if (s == stage) return name;
  }
  return "all";
}

Stage stage_from_string(const std::string& name) {
  for (const auto& [s, n] : kStageNames) {
    if (name == n) return s;
  }
  throw Error(ErrorCode::Config, "unknown stage '" + name + "'");
}

std::string config_to_json(const RunConfig& c) {
  nlohmann::ordered_json doc;
  doc["stage"] = to_string(c.stage);
  doc["input_dir"] = c.input_dir.generic_string();
  doc["output_dir"] = c.output_dir.generic_string();
  doc["seed"] = c.seed;
  doc["dependence_threshold"] = c.dependence_threshold;
  doc["pca_dims"] = c.pca_dims;
  doc["kmeans_restarts"] = c.kmeans_restarts;
  doc["kmeans_max_iterations"] = c.kmeans_max_iterations;
  doc["perplexity"] = c.perplexity;
  doc["tsne_iterations"] = c.tsne_iterations;
  doc["learning_rate"] = c.learning_rate;
  doc["exaggeration"] = c.exaggeration;
  doc["exaggeration_iterations"] = c.exaggeration_iterations;
  doc["tsne_pca"] = c.tsne_pca;
  return doc.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& json_text, RunConfig c) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    if (!doc.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
    auto take = [&](const char* key, auto& field) {
      if (doc.contains(key)) doc.at(key).get_to(field);
    };
    if (doc.contains("stage")) c.stage = stage_from_string(doc.at("stage").get<std::string>());
    if (doc.contains("input_dir")) c.input_dir = doc.at("input_dir").get<std::string>();
    if (doc.contains("output_dir")) c.output_dir = doc.at("output_dir").get<std::string>();
    take("seed", c.seed);
    take("dependence_threshold", c.dependence_threshold);
    take("pca_dims", c.pca_dims);
    take("kmeans_restarts", c.kmeans_restarts);
    take("kmeans_max_iterations", c.kmeans_max_iterations);
    take("perplexity", c.perplexity);
    take("tsne_iterations", c.tsne_iterations);
    take("learning_rate", c.learning_rate);
    take("exaggeration", c.exaggeration);
    take("exaggeration_iterations", c.exaggeration_iterations);
    take("tsne_pca", c.tsne_pca);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config: ") + e.what());
  }
  return c;
}

std::uint64_t tsne_seed(std::uint64_t run_seed) { return mix_seed(run_seed, 0x7453'4E45ULL); }

PipelineArtifacts compute_artifacts(const RunConfig& config) {
  if (config.input_dir.empty()) throw Error(ErrorCode::Config, "no input directory given");
  const auto roots = load_class_directory(config.input_dir);
  if (roots.empty()) throw Error(ErrorCode::Config, "no .xml class files in " + config.input_dir.string());

  PipelineArtifacts out;
  const Lexicon lexicon = compress(roots);
  out.warnings = lexicon.warnings;
  if (wants(config.stage, Stage::Ingest)) out.files["lexicon.json"] = lexicon_to_json(lexicon);
  if (config.stage == Stage::Ingest) return out;

  const RoleVocabulary vocab = build_vocabulary(lexicon);
  const ClassMatrix cm = class_matrix(lexicon, vocab);
  if (wants(config.stage, Stage::Matrix)) {
    const UniqueFrames frames = unique_frames(cm);
    out.files["matrix.csv"] = matrix_to_csv(cm);
    out.files["frames.json"] =
        frames_to_json(frames, frame_combination_count(static_cast<unsigned>(vocab.size()),
                                                       static_cast<unsigned>(frames.max_frame_size)));
  }

  const RoleVectorSet rvs = expand_to_verbs(cm);
  if (wants(config.stage, Stage::Occurrence)) {
    const OccurrenceMatrix om = occurrence_matrix(rvs);
    for (std::size_t r = 0; r < om.size(); ++r) {
      if (om.support[r] == 0) out.warnings.push_back("role " + vocab[r].name() + " has support 0");
    }
    out.files["occurrence.csv"] = occurrence_to_csv(om);
    out.files["dependence.json"] = dependence_to_json(dependence_pairs(om, config.dependence_threshold));
  }

  const bool all = config.stage == Stage::All;
  const bool cluster = wants(config.stage, Stage::Cluster);
  const bool embed = wants(config.stage, Stage::Tsne);
  if (!cluster && !embed) return out;

  const PerturbedMatrix pm = perturb(rvs, config.seed);
  std::optional<ReducedMatrix> reduced;
  auto reduce = [&]() -> const ReducedMatrix& {
    if (!reduced) reduced = pca_reduce(pm, config.pca_dims);
    return *reduced;
  };

  if (cluster) {
    if (all && vocab.size() < 3) {
      out.warnings.push_back("cluster stage skipped: needs at least 3 roles");
    } else {
      const KMeansOptions opts{config.kmeans_restarts, config.kmeans_max_iterations};
      out.files["clusters.json"] = clusters_to_json(cluster_sweep(reduce(), config.seed, opts));
    }
  }

  if (embed) {
    TsneOptions opts;
    opts.perplexity = config.perplexity;
    opts.iterations = config.tsne_iterations;
    opts.learning_rate = config.learning_rate;
    opts.exaggeration = config.exaggeration;
    opts.stop_exaggeration_iter = config.exaggeration_iterations;
    const double bound = (static_cast<double>(vocab.size()) - 1.0) / 3.0;
    if (all && (vocab.size() < 4 || !(config.perplexity < bound))) {
      out.warnings.push_back("tsne stage skipped: " + std::to_string(vocab.size()) +
                             " roles cannot support perplexity " + std::to_string(config.perplexity));
    } else {
      Embedding2D e = config.tsne_pca ? tsne(reduce().values, tsne_seed(config.seed), opts)
                                      : tsne(pm.values, tsne_seed(config.seed), opts);
      e.vocab = vocab;
      out.files["tsne.csv"] = embedding_to_csv(e);
      out.files["tsne.svg"] = embedding_to_svg(e);
    }
  }
  return out;
}

std::vector<std::filesystem::path> run_pipeline(const RunConfig& config, std::vector<std::string>* warnings) {
  if (config.output_dir.empty()) throw Error(ErrorCode::Config, "no output directory given");
  PipelineArtifacts artifacts = compute_artifacts(config);
  artifacts.files["run_config.json"] = config_to_json(config);
  if (warnings) *warnings = artifacts.warnings;

  std::vector<std::filesystem::path> written;
  try {
    std::filesystem::create_directories(config.output_dir);
    for (const auto& [name, contents] : artifacts.files) {
      const auto path = config.output_dir / name;
      write_file_atomic(path, contents);
      written.push_back(path);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return written;
}

}  // namespace vnroles
