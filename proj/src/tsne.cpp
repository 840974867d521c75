#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "vnroles/embedding.hpp"
#include "vnroles/error.hpp"
#include "vnroles/random.hpp"
#include "vnroles/simd/kernels.hpp"

namespace vnroles {

namespace {

constexpr double kEntropyTolerance = 1e-5;
constexpr int kMaxBisectionSteps = 50;
constexpr double kMinAffinity = 1e-12;
constexpr double kMinGain = 0.01;

DenseMatrix pairwise_squared(const DenseMatrix& x) {
  const std::size_t n = x.rows();
  DenseMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = simd::squared_distance(x.row(i), x.row(j));
    }
  }
  return d;
}

double kl_divergence(const DenseMatrix& p, const std::vector<std::array<double, 2>>& y) {
  const std::size_t n = y.size();
  double z = 0.0;
  DenseMatrix num(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = y[i][0] - y[j][0];
      const double dy = y[i][1] - y[j][1];
      num(i, j) = num(j, i) = 1.0 / (1.0 + dx * dx + dy * dy);
      z += 2.0 * num(i, j);
    }
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || p(i, j) <= 0.0) continue;
      const double q = std::max(num(i, j) / z, std::numeric_limits<double>::min());
      kl += p(i, j) * std::log(p(i, j) / q);
    }
  }
  return kl;
}

void center(std::vector<std::array<double, 2>>& y) {
  double mx = 0.0, my = 0.0;
  for (const auto& p : y) {
    mx += p[0];
    my += p[1];
  }
  mx /= static_cast<double>(y.size());
  my /= static_cast<double>(y.size());
  for (auto& p : y) {
    p[0] -= mx;
    p[1] -= my;
  }
}

}  // namespace

double Embedding2D::kl_at(std::size_t iteration) const {
  for (const auto& [it, kl] : kl_trace) {
    if (it == iteration) return kl;
  }
  throw Error(ErrorCode::DomainError, "no KL recorded at iteration " + std::to_string(iteration));
}

DenseMatrix conditional_affinities(const DenseMatrix& squared_distances, double perplexity) {
  const std::size_t n = squared_distances.rows();
  const double target = std::log(perplexity);
  DenseMatrix p(n, n);
  std::vector<double> shifted(n);

  for (std::size_t i = 0; i < n; ++i) {
    // shift by the nearest distance so exp() cannot underflow for the whole row
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) nearest = std::min(nearest, squared_distances(i, j));
    }
    for (std::size_t j = 0; j < n; ++j) shifted[j] = squared_distances(i, j) - nearest;

    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    auto row = p.row(i);
    for (int step = 0; step < kMaxBisectionSteps; ++step) {
      double sum = 0.0;
      double weighted = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = j == i ? 0.0 : std::exp(-beta * shifted[j]);
        sum += row[j];
        weighted += shifted[j] * row[j];
      }
      const double entropy = std::log(sum) + beta * weighted / sum;
      for (auto& v : row) v /= sum;
      const double diff = entropy - target;
      if (std::abs(diff) < kEntropyTolerance) break;
      if (diff > 0.0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
  }
  return p;
}

Embedding2D tsne(const DenseMatrix& samples, std::uint64_t seed, const TsneOptions& options) {
  const std::size_t n = samples.rows();
  if (n < 4) throw Error(ErrorCode::BadPerplexity, "t-SNE needs at least four samples");
  if (!(options.perplexity > 0.0) || !(options.perplexity < static_cast<double>(n - 1) / 3.0)) {
    throw Error(ErrorCode::BadPerplexity, "perplexity must lie in (0, (samples-1)/3) = (0, " +
                                              std::to_string(static_cast<double>(n - 1) / 3.0) + ")");
  }

  const DenseMatrix cond = conditional_affinities(pairwise_squared(samples), options.perplexity);
  DenseMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) p(i, j) = std::max((cond(i, j) + cond(j, i)) / (2.0 * static_cast<double>(n)), kMinAffinity);
    }
  }

  Embedding2D out;
  out.seed = seed;
  out.perplexity = options.perplexity;
  out.coords.resize(n);
  Rng rng(seed);
  for (auto& c : out.coords) {
    c[0] = rng.normal() * options.init_scale;
    c[1] = rng.normal() * options.init_scale;
  }

  std::vector<std::array<double, 2>> velocity(n, {0.0, 0.0});
  std::vector<std::array<double, 2>> gains(n, {1.0, 1.0});
  std::vector<std::array<double, 2>> grad(n);
  DenseMatrix num(n, n);

  auto& y = out.coords;
  for (std::size_t it = 0; it < options.iterations; ++it) {
    const double exaggeration = it < options.stop_exaggeration_iter ? options.exaggeration : 1.0;
    const double momentum = it < options.momentum_switch_iter ? options.initial_momentum : options.final_momentum;

    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = y[i][0] - y[j][0];
        const double dy = y[i][1] - y[j][1];
        num(i, j) = num(j, i) = 1.0 / (1.0 + dx * dx + dy * dy);
        z += 2.0 * num(i, j);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double force = (exaggeration * p(i, j) - num(i, j) / z) * num(i, j);
        gx += force * (y[i][0] - y[j][0]);
        gy += force * (y[i][1] - y[j][1]);
      }
      grad[i] = {4.0 * gx, 4.0 * gy};
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        auto& g = gains[i][d];
        g = (grad[i][d] > 0.0) != (velocity[i][d] > 0.0) ? g + 0.2 : g * 0.8;
        g = std::max(g, kMinGain);
        velocity[i][d] = momentum * velocity[i][d] - options.learning_rate * g * grad[i][d];
        y[i][d] += velocity[i][d];
      }
    }
    center(y);

    const std::size_t done = it + 1;
    if ((options.kl_every != 0 && done % options.kl_every == 0) || done == options.iterations) {
      out.kl_trace.emplace_back(done, kl_divergence(p, y));
    }
  }
  out.final_kl = out.kl_trace.empty() ? kl_divergence(p, y) : out.kl_trace.back().second;
  return out;
}

Embedding2D tsne(const PerturbedMatrix& pm, std::uint64_t seed, const TsneOptions& options) {
  Embedding2D out = tsne(pm.values, seed, options);
  out.vocab = pm.vocab;
  return out;
}

std::string embedding_to_csv(const Embedding2D& e) {
  std::string out = "role,x,y\n";
  char buf[64];
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    out += i < e.vocab.size() ? e.vocab[i].name() : "r" + std::to_string(i);
    for (double v : e.coords[i]) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out += ',';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

}  // namespace vnroles
