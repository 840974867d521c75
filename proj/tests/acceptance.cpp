// Acceptance checks, one line per criterion. Corpus-bound checks need a
// VerbNet class directory via --corpus <dir> or VNROLES_CORPUS; without one
// they print SKIPPED. Exit status is non-zero only if something FAILed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "test_util.hpp"
#include "vnroles/embedding.hpp"
#include "vnroles/error.hpp"
#include "vnroles/fixture.hpp"
#include "vnroles/frame_matrix.hpp"
#include "vnroles/ingest.hpp"
#include "vnroles/occurrence.hpp"
#include "vnroles/oracle.hpp"
#include "vnroles/pipeline.hpp"
#include "vnroles/random.hpp"
#include "vnroles/report.hpp"

using namespace vnroles;
using Clock = std::chrono::steady_clock;

namespace {

enum class Outcome { Pass, Fail, Skipped };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict fail(std::string d) { return {Outcome::Fail, std::move(d)}; }

int failures = 0;

void run(const std::string& name, double budget_ms, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = fail(std::string("exception: ") + e.what());
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (v.outcome == Outcome::Pass && ms > budget_ms) {
    v = fail(v.detail + "; over budget of " + std::to_string(static_cast<long>(budget_ms)) + " ms");
  }
  const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIPPED";
  if (v.outcome == Outcome::Fail) ++failures;
  std::printf("%-7s %-26s %9.1f ms  %s\n", tag, name.c_str(), ms, v.detail.c_str());
  std::fflush(stdout);
}

void skip(const std::string& name, const std::string& why) {
  std::printf("%-7s %-26s %9s     %s\n", "SKIPPED", name.c_str(), "-", why.c_str());
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- corpus ----------------------------------------------------------------

struct Corpus {
  Lexicon lexicon;
  ClassMatrix matrix;
  RoleVectorSet vectors;
};

std::optional<std::size_t> index_of(const RoleVocabulary& v, const char* name) {
  if (!v.contains(Role(name))) return std::nullopt;
  return v.index_of(Role(name));
}

Corpus load_corpus(const std::filesystem::path& dir) {
  Corpus c;
  c.lexicon = compress(load_class_directory(dir));
  c.matrix = class_matrix(c.lexicon, build_vocabulary(c.lexicon));
  c.vectors = expand_to_verbs(c.matrix);
  return c;
}

Verdict corpus_counts(const Corpus& c) {
  const auto& s = c.lexicon.source_stats;
  const auto uf = unique_frames(c.matrix);
  const std::size_t raw = s.raw_root + s.raw_sub;
  char buf[256];
  std::snprintf(buf, sizeof buf, "raw=%zu effective=%zu (%zu root + %zu sub) roles=%zu members=%zu frames=%zu", raw,
                c.lexicon.classes.size(), s.raw_root, s.retained_sub, c.matrix.cols(), c.lexicon.total_members,
                uf.count);
  const bool ok = raw == 498 && c.lexicon.classes.size() == 290 && s.raw_root == 277 && s.retained_sub == 13 &&
                  c.matrix.cols() == 30 && c.lexicon.total_members == 6394 && uf.count == 107;
  return {ok ? Outcome::Pass : Outcome::Fail, buf};
}

Verdict class_spot_checks(const Corpus& c) {
  auto frame_names = [](const EffectiveClass& k) {
    std::vector<std::string> out;
    for (const auto& r : k.frame) out.push_back(r.name());
    return out;
  };
  const auto* destroy = c.lexicon.find("destroy-44");
  const auto* brk = c.lexicon.find("break-45.1");
  if (!destroy || !brk) return fail("destroy-44 or break-45.1 missing");
  const std::vector<std::string> d_expect{"Agent", "Instrument", "Patient"};
  const std::vector<std::string> b_expect{"Agent", "Instrument", "Patient", "Result"};
  const bool ok = destroy->member_count == 31 && frame_names(*destroy) == d_expect && brk->member_count == 24 &&
                  frame_names(*brk) == b_expect;
  return {ok ? Outcome::Pass : Outcome::Fail,
          "destroy-44 members=" + std::to_string(destroy->member_count) +
              " break-45.1 members=" + std::to_string(brk->member_count)};
}

Verdict occurrence_spot_checks(const Corpus& c) {
  const auto om = occurrence_matrix(c.vectors);
  const auto& v = om.vocab;
  auto pct = [&](const char* r, const char* ctx) -> std::optional<double> {
    const auto a = index_of(v, r), b = index_of(v, ctx);
    if (!a || !b) return std::nullopt;
    return om.percent_at(*a, *b);
  };
  struct Expect {
    const char* dependent;
    const char* context;
    double value;
    double tol;
  };
  const Expect expects[] = {{"Co-Agent", "Agent", 100.0, 0.0},
                            {"Instrument", "Agent", 100.0, 0.0},
                            {"Material", "Agent", 100.0, 0.0},
                            {"Beneficiary", "Agent", 95.7, 0.1},
                            {"Agent", "Instrument", 20.6, 0.1}};
  bool ok = true;
  std::string detail;
  for (const auto& e : expects) {
    const auto p = pct(e.dependent, e.context);
    if (!p) return fail(std::string("role missing: ") + e.dependent + "/" + e.context);
    // 100.0 is checked on the exact counts, the rest on the displayed value
    const bool hit = e.tol == 0.0 ? *p == 100.0 : std::abs(*p - e.value) <= e.tol + 1e-9;
    ok = ok && hit;
    detail += std::string(e.dependent) + "|" + e.context + "=" + fmt("%.1f", *p) + " ";
  }
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

Verdict cluster_merge_frequency(const Corpus& c) {
  int hits = 0;
  std::map<std::string, int> seen;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto rm = pca_reduce(perturb(c.vectors, seed), 30);
    const auto report = cluster_sweep(rm, seed, KMeansOptions{10, 300});
    for (const auto& k : report.per_k) {
      if (k.k != 29) continue;
      for (const auto& cluster : report.named_clusters(k)) {
        if (cluster.size() != 2) continue;
        seen[cluster[0] + "+" + cluster[1]]++;
        hits += cluster == std::vector<std::string>{"Experiencer", "Stimulus"};
      }
    }
  }
  std::string top;
  for (const auto& [pair, n] : seen) top += pair + ":" + std::to_string(n) + " ";
  return {hits >= 14 ? Outcome::Pass : Outcome::Fail, std::to_string(hits) + "/20 Experiencer+Stimulus; " + top};
}

Verdict tsne_neighbour_frequency(const Corpus& c) {
  const std::pair<const char*, const char*> pairs[] = {
      {"Agent", "Theme"}, {"Experiencer", "Stimulus"}, {"Topic", "Recipient"}};
  int hits[3] = {0, 0, 0};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto pm = perturb(c.vectors, seed);
    TsneOptions opts;
    opts.perplexity = 5.0;
    const auto e = tsne(pm, tsne_seed(seed), opts);
    auto dist = [&](std::size_t a, std::size_t b) {
      return std::hypot(e.coords[a][0] - e.coords[b][0], e.coords[a][1] - e.coords[b][1]);
    };
    std::vector<double> all;
    for (std::size_t a = 0; a < e.coords.size(); ++a) {
      for (std::size_t b = a + 1; b < e.coords.size(); ++b) all.push_back(dist(a, b));
    }
    std::nth_element(all.begin(), all.begin() + all.size() / 2, all.end());
    const double median = all[all.size() / 2];
    for (int p = 0; p < 3; ++p) {
      const auto a = index_of(e.vocab, pairs[p].first), b = index_of(e.vocab, pairs[p].second);
      if (!a || !b) return fail(std::string("role missing: ") + pairs[p].first + "/" + pairs[p].second);
      hits[p] += dist(*a, *b) < median;
    }
  }
  std::string detail;
  bool ok = true;
  for (int p = 0; p < 3; ++p) {
    ok = ok && hits[p] >= 16;
    detail += std::string(pairs[p].first) + "-" + pairs[p].second + " " + std::to_string(hits[p]) + "/20 ";
  }
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

// ---- always runnable -------------------------------------------------------

Verdict oracle_equivalence() {
  int matched = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    vnroles::testing::TempDir dir;
    generate_fixture(vnroles::testing::random_fixture(seed), seed, dir.path());
    const auto o = oracle_occurrence(dir.path());
    const auto lex = compress(load_class_directory(dir.path()));
    const auto om = occurrence_matrix(expand_to_verbs(class_matrix(lex, build_vocabulary(lex))));
    const auto names = om.vocab.names();
    // the oracle also reports roles only present in empty classes; project onto the pipeline vocabulary
    bool same = true;
    for (std::size_t r = 0; r < names.size(); ++r) {
      const auto orow = std::find(o.roles.begin(), o.roles.end(), names[r]) - o.roles.begin();
      if (static_cast<std::size_t>(orow) == o.roles.size()) {
        same = false;
        break;
      }
      same = same && o.support[orow] == om.support[r];
      for (std::size_t c = 0; c < names.size(); ++c) {
        const auto ocol = std::find(o.roles.begin(), o.roles.end(), names[c]) - o.roles.begin();
        same = same && o.common[orow * o.roles.size() + ocol] == om.common_at(r, c);
      }
    }
    matched += same;
  }
  return {matched == 10 ? Outcome::Pass : Outcome::Fail, std::to_string(matched) + "/10 fixtures identical counts"};
}

DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (auto& x : m.data()) x = rng.normal();
  return m;
}

double sq(const DenseMatrix& m, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) s += (m(a, j) - m(b, j)) * (m(a, j) - m(b, j));
  return s;
}

// best inertia over every split of the points into two non-empty groups
double best_two_partition(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    if (mask & 1u) continue;  // each split once
    std::vector<std::size_t> assign(n);
    for (std::size_t i = 0; i < n; ++i) assign[i] = (mask >> i) & 1u;
    double total = 0.0;
    for (std::size_t g = 0; g < 2; ++g) {
      std::vector<double> mean(m.cols(), 0.0);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] != g) continue;
        ++count;
        for (std::size_t j = 0; j < m.cols(); ++j) mean[j] += m(i, j);
      }
      for (auto& x : mean) x /= static_cast<double>(count);
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] != g) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) total += (m(i, j) - mean[j]) * (m(i, j) - mean[j]);
      }
    }
    best = std::min(best, total);
  }
  return best;
}

Verdict numerical_properties() {
  Rng rng(99);
  double worst_var = 0.0, worst_dist = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 4 + rng.below(20), m = n + rng.below(20);
    const auto x = random_matrix(rng, n, m);
    const auto rm = pca_reduce(x, n);
    Eigen::MatrixXd e(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) e(i, j) = x(i, j);
    }
    const Eigen::MatrixXd centred = e.rowwise() - e.colwise().mean();
    const double total = centred.squaredNorm() / static_cast<double>(n - 1);
    const double kept = std::accumulate(rm.explained_variance.begin(), rm.explained_variance.end(), 0.0);
    worst_var = std::max(worst_var, std::abs(kept - total) / total);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double d0 = std::sqrt(sq(x, a, b)), d1 = std::sqrt(sq(rm.values, a, b));
        worst_dist = std::max(worst_dist, std::abs(d1 - d0) / d0);
      }
    }
  }

  int monotone = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + rng.below(30);
    const auto pts = random_matrix(rng, n, 1 + rng.below(6));
    const auto c = kmeans(pts, 2 + rng.below(n - 2), rng.next(), KMeansOptions{3, 300});
    bool ok = true;
    for (std::size_t i = 1; i < c.inertia_trace.size(); ++i) ok = ok && c.inertia_trace[i] <= c.inertia_trace[i - 1];
    monotone += ok;
  }

  int optimal = 0;
  for (int t = 0; t < 20; ++t) {
    const auto pts = random_matrix(rng, 8, 2);
    const auto c = kmeans(pts, 2, rng.next(), KMeansOptions{20, 300});
    optimal += std::abs(c.inertia - best_two_partition(pts)) <= 1e-9 * (1.0 + c.inertia);
  }

  int kl_down = 0;
  constexpr int kTsneFixtures = 5;
  for (int t = 0; t < kTsneFixtures; ++t) {
    const auto pts = random_matrix(rng, 20, 8);
    const auto e = tsne(pts, rng.next());
    kl_down += e.kl_at(1000) < e.kl_at(250);
  }

  const bool ok = worst_var <= 1e-8 && worst_dist <= 1e-6 && monotone == 100 && optimal == 20 &&
                  kl_down == kTsneFixtures;
  char buf[256];
  std::snprintf(buf, sizeof buf, "var rel %.1e, dist rel %.1e, monotone %d/100, 2-partition optimal %d/20, KL down %d/%d",
                worst_var, worst_dist, monotone, optimal, kl_down, kTsneFixtures);
  return {ok ? Outcome::Pass : Outcome::Fail, buf};
}

Verdict determinism() {
  vnroles::testing::TempDir dir;
  FixtureSpec spec = vnroles::testing::random_fixture(7);
  // enough roles for every stage to run
  spec.roles = {"R0", "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9"};
  spec.classes.push_back({"wide-1", spec.roles, 3, std::nullopt});
  generate_fixture(spec, 7, dir / "in");
  RunConfig config;
  config.input_dir = dir / "in";
  config.output_dir = dir / "out";
  config.perplexity = 2.0;
  const auto written = run_pipeline(config);
  std::map<std::filesystem::path, std::string> first;
  for (const auto& p : written) first[p] = read_file(p);
  run_pipeline(config);
  std::size_t identical = 0;
  for (const auto& [p, contents] : first) identical += read_file(p) == contents;
  const bool ok = identical == first.size() && first.count(dir / "out" / "tsne.csv") == 1;
  return {ok ? Outcome::Pass : Outcome::Fail,
          std::to_string(identical) + "/" + std::to_string(first.size()) + " files byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<std::filesystem::path> corpus_dir;
  if (const char* env = std::getenv("VNROLES_CORPUS"); env && *env) corpus_dir = env;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--corpus" && i + 1 < argc) {
      corpus_dir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--corpus <verbnet class dir>]\n", argv[0]);
      return 2;
    }
  }

  run("frame-combination-count", 1.0, [] {
    const auto v = frame_combination_count(30, 6);
    return Verdict{v == 768211 ? Outcome::Pass : Outcome::Fail, "FC(30,6)=" + std::to_string(v)};
  });

  const char* corpus_checks[] = {"corpus-counts", "class-spot-checks", "occurrence-spot-checks", "cluster-merge-frequency",
                                 "tsne-neighbour-frequency"};
  std::optional<Corpus> corpus;
  if (!corpus_dir) {
    for (const char* name : corpus_checks) skip(name, "no VerbNet corpus (use --corpus or VNROLES_CORPUS)");
  } else {
    run("corpus-counts", 10'000.0, [&] {
      corpus = load_corpus(*corpus_dir);
      return corpus_counts(*corpus);
    });
    if (!corpus) {
      for (std::size_t i = 1; i < std::size(corpus_checks); ++i) skip(corpus_checks[i], "corpus failed to load");
    } else {
      run("class-spot-checks", 1'000.0, [&] { return class_spot_checks(*corpus); });
      run("occurrence-spot-checks", 5'000.0, [&] { return occurrence_spot_checks(*corpus); });
      run("cluster-merge-frequency", 120'000.0, [&] { return cluster_merge_frequency(*corpus); });
      run("tsne-neighbour-frequency", 120'000.0, [&] { return tsne_neighbour_frequency(*corpus); });
    }
  }

  run("oracle-equivalence", 5'000.0, oracle_equivalence);
  run("numerical-properties", 60'000.0, numerical_properties);
  run("determinism", 30'000.0, determinism);

  return failures == 0 ? 0 : 1;
}
