#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vnroles {

struct FixtureClass {
  std::string id;
  /// Full (effective) frame of the class.
  std::vector<std::string> frame;
  std::size_t members = 0;
  /// Emit as a VNSUBCLASS of this earlier class; its frame must contain the parent's.
  std::optional<std::string> parent;

  bool operator==(const FixtureClass&) const = default;
};

/// Declarative description of a small synthetic lexicon.
struct FixtureSpec {
  std::vector<std::string> roles;
  std::vector<FixtureClass> classes;
  /// (dependent, context): every class carrying `dependent` must carry `context`.
  std::vector<std::pair<std::string, std::string>> planted_dependencies;

  bool operator==(const FixtureSpec&) const = default;
};

/// Throws Error{UnsatisfiableSpec} naming the first violated condition.
void validate_fixture(const FixtureSpec& spec);

FixtureSpec fixture_from_json(const std::string& json_text);
std::string fixture_to_json(const FixtureSpec& spec);

/// Writes one class file per root class into `dir` (created if needed).
/// Frames are taken verbatim from the spec; `seed` only drives member names.
/// Returns the written paths in load order.
std::vector<std::filesystem::path> generate_fixture(const FixtureSpec& spec, std::uint64_t seed,
                                                    const std::filesystem::path& dir);

}  // namespace vnroles
