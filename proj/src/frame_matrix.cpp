#include "vnroles/frame_matrix.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "vnroles/error.hpp"

namespace vnroles {

RoleVocabulary::RoleVocabulary(std::vector<Role> roles) : roles_(std::move(roles)) {
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    if (!index_.emplace(roles_[i], i).second) {
      throw Error(ErrorCode::DomainError, "duplicate role " + roles_[i].name() + " in vocabulary");
    }
  }
}

std::size_t RoleVocabulary::index_of(const Role& role) const {
  const auto it = index_.find(role);
  if (it == index_.end()) throw Error(ErrorCode::UnknownRole, "role " + role.name() + " not in vocabulary");
  return it->second;
}

std::vector<std::string> RoleVocabulary::names() const {
  std::vector<std::string> out;
  out.reserve(roles_.size());
  for (const auto& r : roles_) out.push_back(r.name());
  return out;
}

std::size_t ClassMatrix::total_members() const {
  std::size_t total = 0;
  for (auto m : member_counts) total += m;
  return total;
}

RoleVocabulary build_vocabulary(const Lexicon& lexicon) {
  if (lexicon.classes.empty()) throw Error(ErrorCode::EmptyLexicon, "lexicon has no classes");
  RoleSet all;
  for (const auto& c : lexicon.classes) all.insert(c.frame.begin(), c.frame.end());
  return RoleVocabulary(std::vector<Role>(all.begin(), all.end()));
}

ClassMatrix class_matrix(const Lexicon& lexicon, const RoleVocabulary& vocab) {
  ClassMatrix cm;
  cm.vocab = vocab;
  cm.bits.assign(lexicon.classes.size() * vocab.size(), 0);
  for (std::size_t r = 0; r < lexicon.classes.size(); ++r) {
    const auto& c = lexicon.classes[r];
    if (c.frame.empty()) throw Error(ErrorCode::SchemaViolation, "class " + c.id + " has an empty frame");
    for (const auto& role : c.frame) cm.bits[r * vocab.size() + vocab.index_of(role)] = 1;
    cm.class_ids.push_back(c.id);
    cm.member_counts.push_back(c.member_count);
  }
  return cm;
}

RoleVectorSet expand_to_verbs(const ClassMatrix& cm) {
  const std::size_t length = cm.total_members();
  RoleVectorSet rvs;
  rvs.vocab = cm.vocab;
  rvs.vectors.assign(cm.cols(), std::vector<std::uint8_t>(length, 0));
  for (std::size_t j = 0; j < cm.cols(); ++j) {
    auto out = rvs.vectors[j].begin();
    for (std::size_t r = 0; r < cm.rows(); ++r) {
      out = std::fill_n(out, cm.member_counts[r], cm.at(r, j));
    }
  }
  return rvs;
}

UniqueFrames unique_frames(const ClassMatrix& cm) {
  std::set<std::vector<std::uint8_t>> patterns;
  for (std::size_t r = 0; r < cm.rows(); ++r) {
    const auto row = cm.row(r);
    patterns.emplace(row.begin(), row.end());
  }
  UniqueFrames out;
  out.count = patterns.size();
  for (const auto& p : patterns) {
    std::vector<std::string> frame;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j]) frame.push_back(cm.vocab[j].name());
    }
    out.max_frame_size = std::max(out.max_frame_size, frame.size());
    out.frames.push_back(std::move(frame));
  }
  std::sort(out.frames.begin(), out.frames.end());
  return out;
}

std::uint64_t frame_combination_count(unsigned n, unsigned k_max) {
  if (n == 0 || k_max == 0 || k_max > n || n > 64) {
    throw Error(ErrorCode::DomainError,
                "need 1 <= k_max <= n <= 64, got n=" + std::to_string(n) + " k_max=" + std::to_string(k_max));
  }
  // C(n,k) = C(n,k-1) * (n-k+1) / k; the 128-bit intermediate keeps n = 64 exact.
  unsigned __int128 binom = 1;
  unsigned __int128 total = 0;
  for (unsigned k = 1; k <= k_max; ++k) {
    binom = binom * (n - k + 1) / k;
    total += binom;
  }
  if (total > UINT64_MAX) throw Error(ErrorCode::DomainError, "frame combination count overflows 64 bits");
  return static_cast<std::uint64_t>(total);
}

std::string matrix_to_csv(const ClassMatrix& cm) {
  std::string out = "class_id,members";
  for (const auto& role : cm.vocab.roles()) out += "," + role.name();
  out += '\n';
  for (std::size_t r = 0; r < cm.rows(); ++r) {
    out += cm.class_ids[r];
    out += ',';
    out += std::to_string(cm.member_counts[r]);
    for (std::size_t j = 0; j < cm.cols(); ++j) {
      out += ',';
      out += cm.at(r, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

std::string frames_to_json(const UniqueFrames& frames, std::uint64_t possible_frame_count) {
  nlohmann::ordered_json doc;
  doc["unique_frame_count"] = frames.count;
  doc["possible_frame_count"] = possible_frame_count;
  doc["frames"] = frames.frames;
  return doc.dump() + "\n";
}

}  // namespace vnroles
