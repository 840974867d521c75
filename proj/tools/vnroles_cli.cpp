// vnroles: role co-occurrence analysis of VerbNet-style class lexicons.
//
//   vnroles all --in <class dir> --out <dir> [--seed N] [--perplexity P] ...
//   vnroles fixture --in spec.json --out <class dir> [--seed N]
//   vnroles oracle --in <class dir> --out <dir>
//
// Exit status: 0 success, 1 input parse error, 2 configuration or other error.

#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "vnroles/error.hpp"
#include "vnroles/fixture.hpp"
#include "vnroles/oracle.hpp"
#include "vnroles/pipeline.hpp"
#include "vnroles/report.hpp"
#include "vnroles/simd/kernels.hpp"

namespace {

using vnroles::ErrorCode;

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml:
    case ErrorCode::SchemaViolation:
    case ErrorCode::CycleDetected:
    case ErrorCode::UnknownRole:
      return 1;
    default:
      return 2;
  }
}

struct StageFlags {
  std::string in;
  std::string out;
  std::string config;
  vnroles::RunConfig values;
  std::vector<CLI::Option*> overrides;
};

void add_stage_command(CLI::App& app, const std::string& name, const std::string& help, StageFlags& f) {
  auto* cmd = app.add_subcommand(name, help);
  cmd->add_option("--in", f.in, "Directory of class XML files");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--config", f.config, "JSON run configuration; explicit flags override it");
  auto& v = f.values;
  f.overrides = {
      cmd->add_option("--seed", v.seed, "Seed for noise, k-means and t-SNE"),
      cmd->add_option("--threshold", v.dependence_threshold, "Dependence threshold in percent (0,100]"),
      cmd->add_option("--pca-dims", v.pca_dims, "Requested PCA dimensions before clustering"),
      cmd->add_option("--kmeans-restarts", v.kmeans_restarts, "k-means++ restarts per k"),
      cmd->add_option("--kmeans-max-iters", v.kmeans_max_iterations, "Lloyd iteration cap"),
      cmd->add_option("--perplexity", v.perplexity, "t-SNE perplexity"),
      cmd->add_option("--tsne-iters", v.tsne_iterations, "t-SNE iterations"),
      cmd->add_option("--learning-rate", v.learning_rate, "t-SNE learning rate"),
      cmd->add_option("--exaggeration", v.exaggeration, "t-SNE early exaggeration factor"),
      cmd->add_option("--exaggeration-iters", v.exaggeration_iterations, "Iterations under exaggeration"),
      cmd->add_flag("--tsne-pca", v.tsne_pca, "Run t-SNE on PCA scores"),
  };
}

vnroles::RunConfig resolve(const std::string& name, const StageFlags& f) {
  vnroles::RunConfig c;
  if (!f.config.empty()) c = vnroles::config_from_json(vnroles::read_file(f.config));
  c.stage = vnroles::stage_from_string(name);
  if (!f.in.empty()) c.input_dir = f.in;
  if (!f.out.empty()) c.output_dir = f.out;
  const auto& v = f.values;
  const auto& o = f.overrides;
  if (o[0]->count()) c.seed = v.seed;
  if (o[1]->count()) c.dependence_threshold = v.dependence_threshold;
  if (o[2]->count()) c.pca_dims = v.pca_dims;
  if (o[3]->count()) c.kmeans_restarts = v.kmeans_restarts;
  if (o[4]->count()) c.kmeans_max_iterations = v.kmeans_max_iterations;
  if (o[5]->count()) c.perplexity = v.perplexity;
  if (o[6]->count()) c.tsne_iterations = v.tsne_iterations;
  if (o[7]->count()) c.learning_rate = v.learning_rate;
  if (o[8]->count()) c.exaggeration = v.exaggeration;
  if (o[9]->count()) c.exaggeration_iterations = v.exaggeration_iterations;
  if (o[10]->count()) c.tsne_pca = v.tsne_pca;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Role co-occurrence analysis for VerbNet-style lexicons"};
  app.require_subcommand(1);

  std::string isa = "auto";
  app.add_option("--isa", isa, "Kernel set: auto, scalar or avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  const std::vector<std::pair<std::string, std::string>> stages = {
      {"ingest", "Parse and compress the class hierarchy (lexicon.json)"},
      {"matrix", "Class x role matrix and frame statistics (matrix.csv, frames.json)"},
      {"occurrence", "Conditional occurrence matrix (occurrence.csv, dependence.json)"},
      {"cluster", "PCA + k-means sweep over perturbed role vectors (clusters.json)"},
      {"tsne", "2-D t-SNE embedding of perturbed role vectors (tsne.csv, tsne.svg)"},
      {"all", "Every stage"},
  };
  std::map<std::string, StageFlags> stage_flags;
  for (const auto& [name, help] : stages) add_stage_command(app, name, help, stage_flags[name]);

  std::string fixture_in, fixture_out;
  std::uint64_t fixture_seed = 42;
  auto* fixture = app.add_subcommand("fixture", "Generate class files from a JSON fixture spec");
  fixture->add_option("--in", fixture_in, "Fixture spec JSON")->required();
  fixture->add_option("--out", fixture_out, "Directory to write class files into")->required();
  fixture->add_option("--seed", fixture_seed, "Seed for member names");

  std::string oracle_in, oracle_out;
  auto* oracle = app.add_subcommand("oracle", "Brute-force occurrence matrix for small corpora");
  oracle->add_option("--in", oracle_in, "Directory of class XML files")->required();
  oracle->add_option("--out", oracle_out, "Output directory (occurrence.csv)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (isa == "scalar") vnroles::simd::set_active_isa(vnroles::simd::Isa::Scalar);
    if (isa == "avx2") vnroles::simd::set_active_isa(vnroles::simd::Isa::Avx2);

    if (fixture->parsed()) {
      const auto spec = vnroles::fixture_from_json(vnroles::read_file(fixture_in));
      for (const auto& p : vnroles::generate_fixture(spec, fixture_seed, fixture_out)) std::cout << p.string() << '\n';
      return 0;
    }
    if (oracle->parsed()) {
      const auto result = vnroles::oracle_occurrence(oracle_in);
      std::filesystem::create_directories(oracle_out);
      const auto path = std::filesystem::path(oracle_out) / "occurrence.csv";
      vnroles::write_file_atomic(path, vnroles::oracle_to_csv(result));
      std::cout << path.string() << '\n';
      return 0;
    }
    for (const auto& [name, help] : stages) {
      if (!app.got_subcommand(name)) continue;
      const auto config = resolve(name, stage_flags[name]);
      std::vector<std::string> warnings;
      const auto written = vnroles::run_pipeline(config, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& p : written) std::cout << p.string() << '\n';
    }
    return 0;
  } catch (const vnroles::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
