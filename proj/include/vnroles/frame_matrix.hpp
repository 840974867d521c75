#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vnroles/ingest.hpp"

namespace vnroles {

/// Distinct roles of a lexicon in lexicographic order. Every downstream
/// matrix, file and plot uses this order.
class RoleVocabulary {
 public:
  RoleVocabulary() = default;
  explicit RoleVocabulary(std::vector<Role> roles);

  std::size_t size() const noexcept { return roles_.size(); }
  const std::vector<Role>& roles() const noexcept { return roles_; }
  const Role& operator[](std::size_t i) const { return roles_[i]; }

  /// Throws Error{UnknownRole}.
  std::size_t index_of(const Role& role) const;
  bool contains(const Role& role) const { return index_.contains(role); }

  std::vector<std::string> names() const;

  bool operator==(const RoleVocabulary& other) const { return roles_ == other.roles_; }

 private:
  std::vector<Role> roles_;
  std::map<Role, std::size_t> index_;
};

/// Binary class × role matrix, one byte per cell, row-major.
struct ClassMatrix {
  std::vector<std::string> class_ids;
  RoleVocabulary vocab;
  std::vector<std::uint8_t> bits;
  std::vector<std::size_t> member_counts;

  std::size_t rows() const noexcept { return class_ids.size(); }
  std::size_t cols() const noexcept { return vocab.size(); }
  std::uint8_t at(std::size_t row, std::size_t col) const { return bits[row * cols() + col]; }
  std::span<const std::uint8_t> row(std::size_t r) const { return {bits.data() + r * cols(), cols()}; }
  std::size_t total_members() const;

  bool operator==(const ClassMatrix&) const = default;
};

/// One binary vector per role over all verb slots (classes expanded by member count).
struct RoleVectorSet {
  RoleVocabulary vocab;
  std::vector<std::vector<std::uint8_t>> vectors;

  std::size_t length() const noexcept { return vectors.empty() ? 0 : vectors.front().size(); }
};

struct UniqueFrames {
  std::size_t count = 0;
  /// Each frame as sorted role names; frames ordered lexicographically.
  std::vector<std::vector<std::string>> frames;
  std::size_t max_frame_size = 0;
};

RoleVocabulary build_vocabulary(const Lexicon& lexicon);
ClassMatrix class_matrix(const Lexicon& lexicon, const RoleVocabulary& vocab);
RoleVectorSet expand_to_verbs(const ClassMatrix& cm);
UniqueFrames unique_frames(const ClassMatrix& cm);

/// Σ_{k=1..k_max} C(n, k), exact. Throws Error{DomainError} unless 1 ≤ k_max ≤ n ≤ 64.
std::uint64_t frame_combination_count(unsigned n, unsigned k_max);

/// `class_id,members,<roles…>` header then one 0/1 row per class.
std::string matrix_to_csv(const ClassMatrix& cm);
std::string frames_to_json(const UniqueFrames& frames, std::uint64_t possible_frame_count);

}  // namespace vnroles
