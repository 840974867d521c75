#include "vnroles/simd/kernels.hpp"

namespace vnroles::simd::scalar {

std::size_t common_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (a[i] != 0) & (b[i] != 0);
  return count;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace vnroles::simd::scalar
