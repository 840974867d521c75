#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vnroles/frame_matrix.hpp"

namespace vnroles {

/// Conditional occurrence of roles over verb slots.
///
/// Row r, column c answers "of the verbs carrying role r, what percentage also
/// carry role c": percent(r, c) = 100 · |r ∧ c| / |r|. Counts are kept as
/// integers so the ratio can be compared exactly; `percent` is derived once.
/// A role with zero support has an all-zero row.
struct OccurrenceMatrix {
  RoleVocabulary vocab;
  std::vector<std::uint64_t> support;  // |r|
  std::vector<std::uint64_t> common;   // |r ∧ c|, row-major, symmetric
  std::vector<double> percent;         // row-major

  std::size_t size() const noexcept { return vocab.size(); }
  std::uint64_t common_at(std::size_t r, std::size_t c) const { return common[r * size() + c]; }
  double percent_at(std::size_t r, std::size_t c) const { return percent[r * size() + c]; }
};

struct DependencePair {
  std::string dependent;
  std::string context;
  double percent = 0.0;
  // exact ratio numerator / denominator behind `percent`
  std::uint64_t common = 0;
  std::uint64_t support = 0;
};

constexpr double kDefaultDependenceThreshold = 95.0;

/// val_common of two binary vectors. Throws Error{LengthMismatch}.
std::uint64_t common_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Throws Error{EmptyVocabulary}.
OccurrenceMatrix occurrence_matrix(const RoleVectorSet& rvs);

/// Same matrix computed at class level with member counts as weights; avoids
/// materialising verb slots.
OccurrenceMatrix occurrence_from_classes(const ClassMatrix& cm);

/// Off-diagonal cells with percent ≥ threshold, highest first, ties broken by
/// dependent then context name. Threshold must lie in (0, 100].
std::vector<DependencePair> dependence_pairs(const OccurrenceMatrix& om,
                                             double threshold = kDefaultDependenceThreshold);

/// `role,<roles…>` header; each row starts with its role name. Cells are the
/// exact ratio rounded half-up to one decimal.
std::string occurrence_to_csv(const OccurrenceMatrix& om);
std::string dependence_to_json(const std::vector<DependencePair>& pairs);

/// 100·num/den rounded half-up to one decimal ("0.0" when den is 0).
std::string format_percent(std::uint64_t num, std::uint64_t den);

/// Square percentage table from raw counts, shared by the pipeline and the
/// oracle so their files are comparable byte for byte.
std::string percent_table_csv(const std::vector<std::string>& roles,
                              std::span<const std::uint64_t> common,
                              std::span<const std::uint64_t> support);

}  // namespace vnroles
