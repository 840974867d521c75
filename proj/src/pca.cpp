#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "vnroles/embedding.hpp"
#include "vnroles/error.hpp"

namespace vnroles {

namespace {
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
}

ReducedMatrix pca_reduce(const DenseMatrix& samples, std::size_t dims) {
  const auto n = static_cast<Eigen::Index>(samples.rows());
  const auto m = static_cast<Eigen::Index>(samples.cols());
  if (n < 2) throw Error(ErrorCode::DegenerateInput, "PCA needs at least two samples");
  if (m < 1) throw Error(ErrorCode::DegenerateInput, "PCA needs at least one feature");
  if (dims == 0) throw Error(ErrorCode::DomainError, "PCA target dimension must be positive");

  const Eigen::Map<const RowMajor> x(samples.data().data(), n, m);
  const Eigen::RowVectorXd means = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - means;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  const Eigen::VectorXd& s = svd.singularValues();

  const auto d = std::min<Eigen::Index>({static_cast<Eigen::Index>(dims), n - 1, s.size()});

  ReducedMatrix out;
  out.requested_dims = dims;
  out.values = DenseMatrix(samples.rows(), static_cast<std::size_t>(d));
  out.loadings = DenseMatrix(samples.cols(), static_cast<std::size_t>(d));
  out.feature_means.assign(means.data(), means.data() + m);
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index pivot = 0;
    u.col(j).cwiseAbs().maxCoeff(&pivot);
    const double sign = u(pivot, j) < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index i = 0; i < n; ++i) out.values(i, j) = sign * u(i, j) * s(j);
    for (Eigen::Index f = 0; f < m; ++f) out.loadings(f, j) = sign * v(f, j);
    out.explained_variance.push_back(s(j) * s(j) / static_cast<double>(n - 1));
  }
  return out;
}

ReducedMatrix pca_reduce(const PerturbedMatrix& pm, std::size_t dims) {
  ReducedMatrix out = pca_reduce(pm.values, dims);
  out.vocab = pm.vocab;
  return out;
}

}  // namespace vnroles
