#include <atomic>
#include <cstdlib>
#include <string>

#include "vnroles/error.hpp"
#include "vnroles/simd/kernels.hpp"

namespace vnroles::simd {

namespace {

Isa initial_isa() {
  const char* env = std::getenv("VNROLES_ISA");
  if (env != nullptr && std::string_view(env) == "scalar") return Isa::Scalar;
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::LengthMismatch, "vector lengths " + std::to_string(a) + " and " + std::to_string(b));
  }
}

}  // namespace

std::string_view to_string(Isa isa) {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

Isa detected_isa() {
#if defined(VNROLES_HAVE_AVX2)
  static const bool has_avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (has_avx2) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
    throw Error(ErrorCode::Config, "AVX2 kernels requested but not supported on this CPU");
  }
  active().store(isa, std::memory_order_relaxed);
}

std::size_t common_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  require_same_length(a.size(), b.size());
#if defined(VNROLES_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::common_count(a.data(), b.data(), a.size());
#endif
  return scalar::common_count(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size());
#if defined(VNROLES_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::squared_distance(a.data(), b.data(), a.size());
#endif
  return scalar::squared_distance(a.data(), b.data(), a.size());
}

}  // namespace vnroles::simd
