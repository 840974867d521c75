#pragma once

// Inner-loop kernels shared by the occurrence and embedding stages. Each
// kernel has a portable scalar reference and, on x86-64, an AVX2 variant.
// The public entry points dispatch on the CPU once at first use; setting
// VNROLES_ISA=scalar in the environment pins the scalar path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace vnroles::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Best ISA the running CPU supports (ignores the environment override).
Isa detected_isa();
Isa active_isa();
/// Throws Error{Config} if the CPU cannot run `isa`.
void set_active_isa(Isa isa);

/// Number of positions where both byte vectors are non-zero. Inputs are 0/1 bytes.
std::size_t common_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Σ (a[i] - b[i])²
double squared_distance(std::span<const double> a, std::span<const double> b);

namespace scalar {
std::size_t common_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(VNROLES_HAVE_AVX2)
namespace avx2 {
std::size_t common_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

}  // namespace vnroles::simd
