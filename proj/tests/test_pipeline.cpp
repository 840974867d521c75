#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>

#include "test_util.hpp"
#include "vnroles/error.hpp"
#include "vnroles/fixture.hpp"
#include "vnroles/oracle.hpp"
#include "vnroles/pipeline.hpp"
#include "vnroles/report.hpp"

using namespace vnroles;
using vnroles::testing::TempDir;

namespace {

FixtureSpec spec_of(std::vector<std::string> roles, std::vector<FixtureClass> classes,
                    std::vector<std::pair<std::string, std::string>> deps = {}) {
  return FixtureSpec{std::move(roles), std::move(classes), std::move(deps)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VNROLES_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count_files(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir)) return 0;
  return static_cast<std::size_t>(std::distance(std::filesystem::directory_iterator(dir), {}));
}

RunConfig small_config(const std::filesystem::path& in, const std::filesystem::path& out) {
  RunConfig c;
  c.input_dir = in;
  c.output_dir = out;
  c.perplexity = 2.0;
  c.tsne_iterations = 400;
  c.kmeans_restarts = 4;
  return c;
}

FixtureSpec ten_role_spec() {
  return spec_of({"Agent", "Beneficiary", "Destination", "Experiencer", "Instrument", "Patient", "Result", "Stimulus",
                  "Theme", "Topic"},
                 {
                     {"destroy-44", {"Agent", "Patient", "Instrument"}, 31, std::nullopt},
                     {"break-45.1", {"Agent", "Patient", "Instrument", "Result"}, 24, std::nullopt},
                     {"pelt-17.2", {"Agent", "Theme", "Destination"}, 7, std::nullopt},
                     {"cost-54.2", {"Theme", "Beneficiary"}, 5, std::nullopt},
                     {"amuse-31.1", {"Experiencer", "Stimulus"}, 12, std::nullopt},
                     {"amuse-31.1-1", {"Experiencer", "Stimulus", "Topic"}, 3, std::string("amuse-31.1")},
                     {"send-11.1", {"Agent", "Theme", "Destination", "Beneficiary"}, 9, std::nullopt},
                 },
                 {{"Instrument", "Agent"}});
}

}  // namespace

TEST_CASE("generate_fixture realises planted dependencies") {
  TempDir dir;
  const auto spec = ten_role_spec();
  generate_fixture(spec, 1, dir / "classes");
  const auto o = oracle_occurrence(dir / "classes");
  const auto idx = [&](const std::string& r) { return std::find(o.roles.begin(), o.roles.end(), r) - o.roles.begin(); };
  const auto n = o.roles.size();
  const auto instr = static_cast<std::size_t>(idx("Instrument"));
  const auto agent = static_cast<std::size_t>(idx("Agent"));
  CHECK(o.common[instr * n + agent] == o.support[instr]);
  CHECK(o.support[instr] == 55);
}

TEST_CASE("generate_fixture: single class, role and member") {
  TempDir dir;
  const auto files = generate_fixture(spec_of({"Theme"}, {{"only-1", {"Theme"}, 1, std::nullopt}}), 3, dir.path());
  CHECK(files.size() == 1);
  const auto lex = compress(load_class_directory(dir.path()));
  CHECK(lex.total_members == 1);
  CHECK(lex.classes.size() == 1);
}

TEST_CASE("generate_fixture: known classes reproduce the 0/1 pattern") {
  TempDir dir;
  const auto spec = spec_of({"Agent", "Beneficiary", "Destination", "Instrument", "Patient", "Result", "Theme", "Value"},
                            {
                                {"destroy-44", {"Agent", "Patient", "Instrument"}, 31, std::nullopt},
                                {"pelt-17.2", {"Agent", "Theme", "Destination"}, 7, std::nullopt},
                                {"cost-54.2", {"Theme", "Value", "Beneficiary"}, 5, std::nullopt},
                                {"break-45.1", {"Agent", "Patient", "Instrument", "Result"}, 24, std::nullopt},
                            });
  generate_fixture(spec, 1, dir / "in");
  RunConfig c;
  c.stage = Stage::Matrix;
  c.input_dir = dir / "in";
  c.output_dir = dir / "out";
  run_pipeline(c);
  CHECK(read_file(dir / "out" / "matrix.csv") ==
        "class_id,members,Agent,Beneficiary,Destination,Instrument,Patient,Result,Theme,Value\n"
        "destroy-44,31,1,0,0,1,1,0,0,0\n"
        "pelt-17.2,7,1,0,1,0,0,0,1,0\n"
        "cost-54.2,5,0,1,0,0,0,0,1,1\n"
        "break-45.1,24,1,0,0,1,1,1,0,0\n");
}

TEST_CASE("fixture validation") {
  auto code = [](const FixtureSpec& s) {
    try {
      validate_fixture(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  const FixtureClass ok{"a-1", {"A", "B"}, 2, std::nullopt};
  CHECK(code(spec_of({"A", "B"}, {ok}, {{"B", "A"}})) == ErrorCode::Io);  // valid
  CHECK(code(spec_of({"A", "B"}, {ok, {"b-1", {"B"}, 1, std::nullopt}}, {{"B", "A"}})) == ErrorCode::UnsatisfiableSpec);
  CHECK(code(spec_of({"A"}, {{"a-1", {"C"}, 1, std::nullopt}})) == ErrorCode::UnsatisfiableSpec);
  CHECK(code(spec_of({"A,B"}, {{"a-1", {"A,B"}, 1, std::nullopt}})) == ErrorCode::UnsatisfiableSpec);
  CHECK(code(spec_of({"A", "B"}, {ok, {"a-2", {"B"}, 1, std::string("a-1")}})) == ErrorCode::UnsatisfiableSpec);
  CHECK(code(spec_of({"A", "B"}, {{"a-1", {"A", "B"}, 0, std::nullopt}}, {{"B", "A"}})) ==
        ErrorCode::UnsatisfiableSpec);
}

TEST_CASE("fixture spec JSON round trip") {
  const auto spec = ten_role_spec();
  CHECK(fixture_from_json(fixture_to_json(spec)) == spec);
}

TEST_CASE("oracle on the expansion fixture") {
  TempDir dir;
  generate_fixture(spec_of({"A", "B"}, {{"x-1", {"A"}, 2, std::nullopt}, {"y-1", {"A", "B"}, 1, std::nullopt}}), 1,
                   dir.path());
  const auto o = oracle_occurrence(dir.path());
  CHECK(o.roles == std::vector<std::string>{"A", "B"});
  CHECK(o.support == std::vector<std::uint64_t>{3, 1});
  CHECK(o.common == std::vector<std::uint64_t>{3, 1, 1, 1});
  CHECK(oracle_to_csv(o) == "role,A,B\nA,100.0,33.3\nB,100.0,100.0\n");
}

TEST_CASE("oracle on a single-role corpus") {
  TempDir dir;
  generate_fixture(spec_of({"Theme"}, {{"t-1", {"Theme"}, 4, std::nullopt}}), 1, dir.path());
  CHECK(oracle_to_csv(oracle_occurrence(dir.path())) == "role,Theme\nTheme,100.0\n");
}

TEST_CASE("oracle refuses corpus-scale input") {
  TempDir dir;
  generate_fixture(spec_of({"A"}, {{"big-1", {"A"}, 201, std::nullopt}}), 1, dir.path());
  try {
    oracle_occurrence(dir.path());
    FAIL("expected ScaleExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScaleExceeded);
  }
}

TEST_CASE("oracle and pipeline agree on random fixtures") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    TempDir dir;
    generate_fixture(vnroles::testing::random_fixture(seed), seed, dir / "in");
    const auto o = oracle_occurrence(dir / "in");
    RunConfig c;
    c.stage = Stage::Occurrence;
    c.input_dir = dir / "in";
    c.output_dir = dir / "out";
    run_pipeline(c);
    CHECK(read_file(dir / "out" / "occurrence.csv") == oracle_to_csv(o));
  }
}

TEST_CASE("run_pipeline writes every artifact") {
  TempDir dir;
  generate_fixture(ten_role_spec(), 1, dir / "in");
  const auto c = small_config(dir / "in", dir / "out");
  const auto written = run_pipeline(c);
  for (const char* name : {"lexicon.json", "matrix.csv", "frames.json", "occurrence.csv", "dependence.json",
                           "clusters.json", "tsne.csv", "tsne.svg", "run_config.json"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(dir / "out" / name));
  }
  CHECK(written.size() == 9);
  CHECK(count_files(dir / "out") == 9);

  const auto deps = read_file(dir / "out" / "dependence.json");
  CHECK(deps.find("{\"dependent\":\"Instrument\",\"context\":\"Agent\",\"percent\":100.0}") != std::string::npos);
  CHECK(read_file(dir / "out" / "frames.json").find("\"unique_frame_count\":7") != std::string::npos);
}

TEST_CASE("run_pipeline is reproducible byte for byte") {
  TempDir dir;
  generate_fixture(ten_role_spec(), 1, dir / "in");
  const auto c = small_config(dir / "in", dir / "out");
  run_pipeline(c);
  std::map<std::string, std::string> first;
  for (const auto& e : std::filesystem::directory_iterator(dir / "out")) first[e.path().filename()] = read_file(e.path());
  run_pipeline(c);
  for (const auto& [name, contents] : first) CHECK(read_file(dir / "out" / name) == contents);
}

TEST_CASE("small corpora skip embedding stages in 'all'") {
  TempDir dir;
  generate_fixture(spec_of({"A", "B"}, {{"x-1", {"A"}, 2, std::nullopt}, {"y-1", {"A", "B"}, 1, std::nullopt}}), 1,
                   dir / "in");
  RunConfig c;
  c.input_dir = dir / "in";
  c.output_dir = dir / "out";
  std::vector<std::string> warnings;
  run_pipeline(c, &warnings);
  CHECK(std::filesystem::exists(dir / "out" / "occurrence.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "out" / "tsne.csv"));
  CHECK(warnings.size() == 2);

  c.stage = Stage::Tsne;
  CHECK_THROWS_AS(run_pipeline(c), Error);
}

TEST_CASE("run_pipeline leaves nothing behind on failure") {
  TempDir dir;
  std::filesystem::create_directories(dir / "in");
  vnroles::testing::write_text(dir / "in" / "a.xml", vnroles::testing::class_xml("VNCLASS", "a-1", {"A"}, 1));
  vnroles::testing::write_text(dir / "in" / "b.xml", "<VNCLASS ID=\"b\"><MEMBERS></VNCLASS>");
  RunConfig c;
  c.input_dir = dir / "in";
  c.output_dir = dir / "out";
  CHECK_THROWS_AS(run_pipeline(c), Error);
  CHECK(count_files(dir / "out") == 0);
}

TEST_CASE("config JSON round trip") {
  RunConfig c;
  c.stage = Stage::Cluster;
  c.input_dir = "/data/vn";
  c.output_dir = "out dir";
  c.seed = 0xFFFFFFFFFFFFFFFFULL;
  c.dependence_threshold = 90.5;
  c.pca_dims = 12;
  c.kmeans_restarts = 3;
  c.perplexity = 7.25;
  c.tsne_iterations = 1234;
  c.tsne_pca = true;
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK(config_from_json("{\"seed\": 9}").seed == 9);
  CHECK(config_from_json("{\"seed\": 9}").perplexity == 5.0);
  CHECK_THROWS_AS(config_from_json("{\"stage\": \"nope\"}"), Error);
  CHECK_THROWS_AS(config_from_json("[1,2]"), Error);
}

TEST_CASE("svg plot is fixed-size and stacks colliding labels") {
  Embedding2D e;
  e.vocab = RoleVocabulary({Role("Agent"), Role("Theme"), Role("Topic")});
  e.coords = {{0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}};
  const auto svg = embedding_to_svg(e);
  CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
  // Agent and Theme share a point: Theme's label moves one line down
  CHECK(svg.find("<text x=\"46.00\" y=\"562.00\">Agent</text>") != std::string::npos);
  CHECK(svg.find("<text x=\"46.00\" y=\"576.00\">Theme</text>") != std::string::npos);
  CHECK(svg == embedding_to_svg(e));
}

TEST_CASE("cli exit codes") {
  TempDir dir;
  std::filesystem::create_directories(dir / "empty");
  CHECK(run_cli("all --in " + (dir / "empty").string() + " --out " + (dir / "o1").string()) == 2);
  CHECK(count_files(dir / "o1") == 0);

  std::filesystem::create_directories(dir / "bad");
  vnroles::testing::write_text(dir / "bad" / "x.xml", "<VNCLASS ID=\"x\"><THEMROLES><THEMROLE/></THEMROLES></VNCLASS>");
  CHECK(run_cli("ingest --in " + (dir / "bad").string() + " --out " + (dir / "o2").string()) == 1);
  CHECK(count_files(dir / "o2") == 0);

  CHECK(run_cli("frobnicate") == 2);

  write_file_atomic(dir / "spec.json", fixture_to_json(ten_role_spec()));
  CHECK(run_cli("fixture --in " + (dir / "spec.json").string() + " --out " + (dir / "fx").string()) == 0);
  CHECK(run_cli("oracle --in " + (dir / "fx").string() + " --out " + (dir / "orc").string()) == 0);
  CHECK(run_cli("occurrence --in " + (dir / "fx").string() + " --out " + (dir / "occ").string()) == 0);
  CHECK(read_file(dir / "orc" / "occurrence.csv") == read_file(dir / "occ" / "occurrence.csv"));

  // --config supplies defaults; explicit flags win
  RunConfig base;
  base.perplexity = 2.0;
  base.tsne_iterations = 300;
  base.seed = 5;
  write_file_atomic(dir / "cfg.json", config_to_json(base));
  CHECK(run_cli("tsne --config " + (dir / "cfg.json").string() + " --in " + (dir / "fx").string() + " --out " +
                (dir / "ts").string() + " --seed 8") == 0);
  const auto used = config_from_json(read_file(dir / "ts" / "run_config.json"));
  CHECK(used.seed == 8);
  CHECK(used.perplexity == 2.0);
  CHECK(used.tsne_iterations == 300);
  CHECK(used.stage == Stage::Tsne);
  CHECK(std::filesystem::exists(dir / "ts" / "tsne.svg"));
}
