#include "vnroles/occurrence.hpp"

#include <algorithm>

#include <json.hpp>

#include "vnroles/error.hpp"
#include "vnroles/simd/kernels.hpp"

namespace vnroles {

namespace {

void fill_percent(OccurrenceMatrix& om) {
  const std::size_t n = om.size();
  om.percent.assign(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    if (om.support[r] == 0) continue;
    for (std::size_t c = 0; c < n; ++c) {
      om.percent[r * n + c] = 100.0 * static_cast<double>(om.common_at(r, c)) / static_cast<double>(om.support[r]);
    }
  }
}

}  // namespace

std::uint64_t common_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  return simd::common_count(a, b);
}

OccurrenceMatrix occurrence_matrix(const RoleVectorSet& rvs) {
  const std::size_t n = rvs.vocab.size();
  if (n == 0) throw Error(ErrorCode::EmptyVocabulary, "no roles to compare");
  OccurrenceMatrix om;
  om.vocab = rvs.vocab;
  om.common.assign(n * n, 0);
  om.support.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      const auto count = common_count(rvs.vectors[r], rvs.vectors[c]);
      om.common[r * n + c] = count;
      om.common[c * n + r] = count;
    }
    om.support[r] = om.common[r * n + r];
  }
  fill_percent(om);
  return om;
}

OccurrenceMatrix occurrence_from_classes(const ClassMatrix& cm) {
  const std::size_t n = cm.cols();
  if (n == 0) throw Error(ErrorCode::EmptyVocabulary, "no roles to compare");
  OccurrenceMatrix om;
  om.vocab = cm.vocab;
  om.common.assign(n * n, 0);
  om.support.assign(n, 0);
  for (std::size_t row = 0; row < cm.rows(); ++row) {
    const auto weight = cm.member_counts[row];
    for (std::size_t r = 0; r < n; ++r) {
      if (!cm.at(row, r)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (cm.at(row, c)) om.common[r * n + c] += weight;
      }
    }
  }
  for (std::size_t r = 0; r < n; ++r) om.support[r] = om.common[r * n + r];
  fill_percent(om);
  return om;
}

std::vector<DependencePair> dependence_pairs(const OccurrenceMatrix& om, double threshold) {
  if (!(threshold > 0.0 && threshold <= 100.0)) {
    throw Error(ErrorCode::DomainError, "threshold must lie in (0, 100]");
  }
  std::vector<DependencePair> out;
  const std::size_t n = om.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (om.support[r] == 0) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (r == c || om.percent_at(r, c) < threshold) continue;
      out.push_back({om.vocab[r].name(), om.vocab[c].name(), om.percent_at(r, c), om.common_at(r, c), om.support[r]});
    }
  }
  std::sort(out.begin(), out.end(), [](const DependencePair& a, const DependencePair& b) {
    // a.common/a.support vs b.common/b.support without rounding
    const unsigned __int128 lhs = static_cast<unsigned __int128>(a.common) * b.support;
    const unsigned __int128 rhs = static_cast<unsigned __int128>(b.common) * a.support;
    if (lhs != rhs) return lhs > rhs;
    if (a.dependent != b.dependent) return a.dependent < b.dependent;
    return a.context < b.context;
  });
  return out;
}

std::string format_percent(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return "0.0";
  // round(1000·num/den) half-up, in tenths of a percent
  const unsigned __int128 scaled = (static_cast<unsigned __int128>(2000) * num + den) / (2 * static_cast<unsigned __int128>(den));
  const auto tenths = static_cast<std::uint64_t>(scaled);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string percent_table_csv(const std::vector<std::string>& roles, std::span<const std::uint64_t> common,
                              std::span<const std::uint64_t> support) {
  const std::size_t n = roles.size();
  if (common.size() != n * n || support.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "occurrence table dimensions disagree with role list");
  }
  std::string out = "role";
  for (const auto& name : roles) out += "," + name;
  out += '\n';
  for (std::size_t r = 0; r < n; ++r) {
    out += roles[r];
    for (std::size_t c = 0; c < n; ++c) {
      out += ',';
      out += format_percent(common[r * n + c], support[r]);
    }
    out += '\n';
  }
  return out;
}

std::string occurrence_to_csv(const OccurrenceMatrix& om) {
  return percent_table_csv(om.vocab.names(), om.common, om.support);
}

std::string dependence_to_json(const std::vector<DependencePair>& pairs) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& p : pairs) {
    nlohmann::ordered_json entry;
    entry["dependent"] = p.dependent;
    entry["context"] = p.context;
    entry["percent"] = std::stod(format_percent(p.common, p.support));
    doc.push_back(std::move(entry));
  }
  return doc.dump() + "\n";
}

}  // namespace vnroles
