#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vnroles {

/// Thematic role label. Stored trimmed; comparison is exact and case-sensitive.
class Role {
 public:
  explicit Role(std::string_view name);

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const Role&, const Role&) = default;

 private:
  std::string name_;
};

using RoleSet = std::set<Role>;

struct VerbClassNode {
  std::string id;
  RoleSet declared_roles;
  std::vector<std::string> members;
  std::vector<VerbClassNode> children;

  bool operator==(const VerbClassNode&) const = default;
};

struct EffectiveClass {
  std::string id;
  RoleSet frame;
  std::size_t member_count = 0;

  bool operator==(const EffectiveClass&) const = default;
};

struct SourceStats {
  std::size_t raw_root = 0;
  std::size_t raw_sub = 0;
  std::size_t merged_sub = 0;
  std::size_t retained_sub = 0;

  bool operator==(const SourceStats&) const = default;
};

struct Lexicon {
  std::vector<EffectiveClass> classes;
  std::size_t total_members = 0;
  SourceStats source_stats;
  /// Non-fatal observations made while compressing (e.g. frames wider than six roles).
  std::vector<std::string> warnings;

  const EffectiveClass* find(std::string_view id) const;
};

/// Parses one VNCLASS document. Only role names, member names and the
/// subclass tree are read; everything else in the file is skipped.
/// Throws Error{MalformedXml} or Error{SchemaViolation}; the message names
/// the offending element path.
VerbClassNode parse_class_file(std::string_view xml_text);

/// inherited ∪ node.declared_roles
RoleSet effective_frame(const VerbClassNode& node, const RoleSet& inherited);

/// Depth-first compression: a subclass whose effective frame equals its
/// parent's is folded into the parent's effective class, otherwise it becomes
/// an effective class of its own. Output is in pre-order document order.
Lexicon compress(std::span<const VerbClassNode> roots);

/// Reads every `*.xml` file directly under `dir` in lexicographic filename
/// order. Parse errors are rethrown with the file name prepended.
std::vector<VerbClassNode> load_class_directory(const std::filesystem::path& dir);

/// `{"classes":[{"id":..,"frame":[..],"members":N}..],"stats":{..}}`
std::string lexicon_to_json(const Lexicon& lexicon);

}  // namespace vnroles
