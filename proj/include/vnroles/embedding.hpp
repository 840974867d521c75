#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vnroles/frame_matrix.hpp"

namespace vnroles {

/// Row-major dense matrix of doubles. Rows are samples (roles) throughout.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Noise perturbation

/// Role vectors with every 0 replaced by uniform noise in (-1, 1); 1s kept.
struct PerturbedMatrix {
  RoleVocabulary vocab;
  DenseMatrix values;
  std::uint64_t seed = 0;
};

/// Deterministic in `seed`. Draws are consumed in row-major order over the
/// zero cells only, one draw per cell.
PerturbedMatrix perturb(const RoleVectorSet& rvs, std::uint64_t seed);

// ---------------------------------------------------------------------------
// PCA

struct ReducedMatrix {
  RoleVocabulary vocab;
  /// Scores, samples × effective_dims.
  DenseMatrix values;
  /// Per-component sample variance, non-increasing.
  std::vector<double> explained_variance;
  /// Unit principal directions, features × effective_dims.
  DenseMatrix loadings;
  std::vector<double> feature_means;
  std::size_t requested_dims = 0;

  std::size_t effective_dims() const noexcept { return values.cols(); }
};

/// Projects the samples (rows) onto their top principal directions. Features
/// are mean-centred across samples, so at most samples-1 components carry
/// variance and the effective dimension is min(dims, samples-1, features).
/// Each component's sign is fixed so its largest-magnitude score is positive.
/// Throws Error{DegenerateInput} for fewer than two samples, Error{DomainError} for dims == 0.
ReducedMatrix pca_reduce(const DenseMatrix& samples, std::size_t dims);
ReducedMatrix pca_reduce(const PerturbedMatrix& pm, std::size_t dims);

// ---------------------------------------------------------------------------
// k-means

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
};

struct Clustering {
  std::size_t k = 0;
  /// Cluster id per sample; ids are numbered by first appearance in sample order.
  std::vector<std::size_t> assignment;
  DenseMatrix centroids;
  double inertia = 0.0;
  /// Inertia of the winning run after each Lloyd update; non-increasing.
  std::vector<double> inertia_trace;
  std::size_t winning_restart = 0;
  std::vector<double> restart_inertias;
};

/// Lloyd iterations from k-means++ seeding, repeated `restarts` times; the
/// lowest inertia wins with ties going to the earlier restart. Clusters that
/// empty out are reseeded with the point farthest from its centroid. Samples
/// are processed in a canonical (lexicographic coordinate) order, so the
/// partition does not depend on input row order.
/// Throws Error{BadK} unless 2 ≤ k < samples.
Clustering kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});
Clustering kmeans(const ReducedMatrix& rm, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

/// Σ squared distance of each point to its assigned centroid.
double clustering_inertia(const DenseMatrix& points, std::span<const std::size_t> assignment,
                          const DenseMatrix& centroids);

struct MergeEvent {
  std::size_t k = 0;
  std::vector<std::string> roles;
};

struct ClusterSweepReport {
  RoleVocabulary vocab;
  std::size_t effective_dims = 0;
  /// One clustering per k, from samples-1 down to 2.
  std::vector<Clustering> per_k;
  std::vector<MergeEvent> merge_events;

  /// Clusters of `c` as role names: larger clusters first, then by lowest role index.
  std::vector<std::vector<std::string>> named_clusters(const Clustering& c) const;
};

ClusterSweepReport cluster_sweep(const ReducedMatrix& rm, std::uint64_t seed, const KMeansOptions& options = {});

std::string clusters_to_json(const ClusterSweepReport& report);

// ---------------------------------------------------------------------------
// t-SNE

struct TsneOptions {
  double perplexity = 5.0;
  std::size_t iterations = 1000;
  double learning_rate = 100.0;
  double exaggeration = 12.0;
  std::size_t stop_exaggeration_iter = 250;
  std::size_t momentum_switch_iter = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  double init_scale = 1e-4;
  /// KL divergence is recorded every this many iterations (and at the end).
  std::size_t kl_every = 50;
};

struct Embedding2D {
  RoleVocabulary vocab;
  std::vector<std::array<double, 2>> coords;
  std::uint64_t seed = 0;
  double perplexity = 0.0;
  double final_kl = 0.0;
  /// (iterations completed, KL divergence against the unexaggerated affinities)
  std::vector<std::pair<std::size_t, double>> kl_trace;

  /// KL recorded after exactly `iteration` updates; throws if not recorded.
  double kl_at(std::size_t iteration) const;
};

/// Exact t-SNE into two dimensions.
/// Throws Error{BadPerplexity} unless samples ≥ 4 and 0 < perplexity < (samples-1)/3.
Embedding2D tsne(const DenseMatrix& samples, std::uint64_t seed, const TsneOptions& options = {});
Embedding2D tsne(const PerturbedMatrix& pm, std::uint64_t seed, const TsneOptions& options = {});

/// Row-normalised Gaussian affinities p_{j|i} with per-row bandwidths matched
/// to `perplexity` by bisection. Exposed for testing.
DenseMatrix conditional_affinities(const DenseMatrix& squared_distances, double perplexity);

std::string embedding_to_csv(const Embedding2D& e);

}  // namespace vnroles
