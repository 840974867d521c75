#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

#include "vnroles/embedding.hpp"
#include "vnroles/error.hpp"
#include "vnroles/random.hpp"
#include "vnroles/simd/kernels.hpp"

namespace vnroles {

namespace {

struct Run {
  std::vector<std::size_t> assignment;
  DenseMatrix centroids;
  std::vector<double> trace;
  double inertia = 0.0;
};

std::size_t nearest(const DenseMatrix& points, std::size_t i, const DenseMatrix& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = simd::squared_distance(points.row(i), centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

DenseMatrix seed_plus_plus(const DenseMatrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  DenseMatrix centroids(k, points.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t pick = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
      if (total > 0.0) {
        const double target = rng.uniform01() * total;
        double running = 0.0;
        pick = n;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (d2[i] <= 0.0) continue;
          last_positive = i;
          running += d2[i];
          if (running > target) {
            pick = i;
            break;
          }
        }
        if (pick == n) pick = last_positive;
      } else {
        // every remaining point coincides with a centroid
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i) {
          if (!chosen[i]) free.push_back(i);
        }
        pick = free[rng.below(free.size())];
      }
    }
    chosen[pick] = true;
    std::copy_n(points.row(pick).begin(), points.cols(), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], simd::squared_distance(points.row(i), centroids.row(c)));
    }
  }
  return centroids;
}

void assign_all(const DenseMatrix& points, const DenseMatrix& centroids, std::vector<std::size_t>& assignment) {
  for (std::size_t i = 0; i < points.rows(); ++i) assignment[i] = nearest(points, i, centroids);
}

// Gives each empty cluster the point farthest from its own centroid, taken
// only from clusters that keep at least one other member.
void repair_empty(const DenseMatrix& points, DenseMatrix& centroids, std::vector<std::size_t>& assignment) {
  const std::size_t k = centroids.rows();
  std::vector<std::size_t> sizes(k, 0);
  for (auto a : assignment) ++sizes[a];
  for (std::size_t e = 0; e < k; ++e) {
    if (sizes[e] != 0) continue;
    std::size_t far = points.rows();
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (sizes[assignment[i]] < 2) continue;
      const double d = simd::squared_distance(points.row(i), centroids.row(assignment[i]));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    --sizes[assignment[far]];
    assignment[far] = e;
    sizes[e] = 1;
    std::copy_n(points.row(far).begin(), points.cols(), centroids.row(e).begin());
  }
}

DenseMatrix means_of(const DenseMatrix& points, const std::vector<std::size_t>& assignment, std::size_t k) {
  DenseMatrix centroids(k, points.cols());
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto c = centroids.row(assignment[i]);
    const auto p = points.row(i);
    for (std::size_t j = 0; j < p.size(); ++j) c[j] += p[j];
    ++sizes[assignment[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (auto& v : centroids.row(c)) v /= static_cast<double>(sizes[c]);
  }
  return centroids;
}

Run lloyd(const DenseMatrix& points, std::size_t k, Rng& rng, std::size_t max_iterations) {
  Run run;
  DenseMatrix centroids = seed_plus_plus(points, k, rng);
  run.assignment.assign(points.rows(), 0);
  assign_all(points, centroids, run.assignment);
  repair_empty(points, centroids, run.assignment);

  std::vector<std::size_t> next(points.rows());
  for (std::size_t it = 0; it < std::max<std::size_t>(max_iterations, 1); ++it) {
    centroids = means_of(points, run.assignment, k);
    run.trace.push_back(clustering_inertia(points, run.assignment, centroids));
    assign_all(points, centroids, next);
    repair_empty(points, centroids, next);
    if (next == run.assignment) break;
    run.assignment = next;
    if (it + 1 == max_iterations) {
      centroids = means_of(points, run.assignment, k);
      run.trace.push_back(clustering_inertia(points, run.assignment, centroids));
    }
  }
  run.centroids = std::move(centroids);
  run.inertia = run.trace.back();
  return run;
}

}  // namespace

double clustering_inertia(const DenseMatrix& points, std::span<const std::size_t> assignment,
                          const DenseMatrix& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    total += simd::squared_distance(points.row(i), centroids.row(assignment[i]));
  }
  return total;
}

Clustering kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  const std::size_t n = points.rows();
  if (k < 2 || k >= n) {
    throw Error(ErrorCode::BadK, "k must satisfy 2 <= k < " + std::to_string(n) + ", got " + std::to_string(k));
  }
  if (options.restarts == 0) throw Error(ErrorCode::Config, "k-means needs at least one restart");

  // canonical sample order: lexicographic by coordinates, then by index
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = points.row(a);
    const auto rb = points.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  DenseMatrix canonical(n, points.cols());
  for (std::size_t i = 0; i < n; ++i) std::copy_n(points.row(order[i]).begin(), points.cols(), canonical.row(i).begin());

  Clustering out;
  out.k = k;
  Run best;
  bool have_best = false;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Rng rng(mix_seed(seed, r));
    Run run = lloyd(canonical, k, rng, options.max_iterations);
    out.restart_inertias.push_back(run.inertia);
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      out.winning_restart = r;
      have_best = true;
    }
  }

  // back to input order, cluster ids renumbered by first appearance
  std::vector<std::size_t> relabel(k, k);
  std::size_t next_label = 0;
  out.assignment.assign(n, 0);
  std::vector<std::size_t> original(n);
  for (std::size_t i = 0; i < n; ++i) original[order[i]] = best.assignment[i];
  for (std::size_t i = 0; i < n; ++i) {
    auto& label = relabel[original[i]];
    if (label == k) label = next_label++;
    out.assignment[i] = label;
  }
  out.centroids = DenseMatrix(k, points.cols());
  for (std::size_t c = 0; c < k; ++c) {
    std::copy_n(best.centroids.row(c).begin(), points.cols(), out.centroids.row(relabel[c]).begin());
  }
  out.inertia = best.inertia;
  out.inertia_trace = std::move(best.trace);
  return out;
}

Clustering kmeans(const ReducedMatrix& rm, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  return kmeans(rm.values, k, seed, options);
}

std::vector<std::vector<std::string>> ClusterSweepReport::named_clusters(const Clustering& c) const {
  std::vector<std::vector<std::size_t>> groups(c.k);
  for (std::size_t i = 0; i < c.assignment.size(); ++i) groups[c.assignment[i]].push_back(i);
  std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  std::vector<std::vector<std::string>> out;
  for (const auto& g : groups) {
    auto& names = out.emplace_back();
    for (auto i : g) names.push_back(vocab[i].name());
  }
  return out;
}

ClusterSweepReport cluster_sweep(const ReducedMatrix& rm, std::uint64_t seed, const KMeansOptions& options) {
  const std::size_t n = rm.values.rows();
  if (n < 3) throw Error(ErrorCode::BadK, "cluster sweep needs at least three samples");
  ClusterSweepReport report;
  report.vocab = rm.vocab;
  report.effective_dims = rm.effective_dims();
  if (report.vocab.size() != n) {
    std::vector<Role> placeholder;
    for (std::size_t i = 0; i < n; ++i) placeholder.emplace_back("r" + std::to_string(i));
    report.vocab = RoleVocabulary(std::move(placeholder));
  }

  std::set<std::vector<std::string>> seen;
  for (std::size_t k = n - 1; k >= 2; --k) {
    auto& c = report.per_k.emplace_back(kmeans(rm.values, k, mix_seed(seed, 1000 + k), options));
    // multi-role clusters in order of their lowest role index
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t i = 0; i < n; ++i) groups[c.assignment[i]].push_back(i);
    std::sort(groups.begin(), groups.end());
    for (const auto& g : groups) {
      if (g.size() < 2) continue;
      std::vector<std::string> names;
      for (auto i : g) names.push_back(report.vocab[i].name());
      if (seen.insert(names).second) report.merge_events.push_back({k, std::move(names)});
    }
  }
  return report;
}

std::string clusters_to_json(const ClusterSweepReport& report) {
  nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
  for (const auto& c : report.per_k) {
    nlohmann::ordered_json entry;
    entry["k"] = c.k;
    entry["inertia"] = c.inertia;
    entry["clusters"] = report.named_clusters(c);
    sweep.push_back(std::move(entry));
  }
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& e : report.merge_events) {
    nlohmann::ordered_json entry;
    entry["k"] = e.k;
    entry["roles"] = e.roles;
    events.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc;
  doc["effective_dims"] = report.effective_dims;
  doc["sweep"] = std::move(sweep);
  doc["merge_events"] = std::move(events);
  return doc.dump() + "\n";
}

}  // namespace vnroles
