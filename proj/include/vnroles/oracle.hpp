#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vnroles {

/// Brute-force occurrence counts for desk-scale corpora. Reads the class
/// files with a different XML reader than the pipeline, materialises each
/// verb slot as an explicit role set, and counts role pairs slot by slot.
struct OracleOccurrence {
  std::vector<std::string> roles;       // sorted
  std::vector<std::uint64_t> common;    // row-major |r ∧ c|
  std::vector<std::uint64_t> support;   // |r|
  std::size_t slots = 0;
};

constexpr std::size_t kOracleMaxRoles = 10;
constexpr std::size_t kOracleMaxSlots = 200;

/// Throws Error{ScaleExceeded} beyond kOracleMaxRoles roles or kOracleMaxSlots slots.
OracleOccurrence oracle_occurrence(const std::filesystem::path& class_dir);

std::string oracle_to_csv(const OracleOccurrence& o);

}  // namespace vnroles
