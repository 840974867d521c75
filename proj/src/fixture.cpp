#include "vnroles/fixture.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "vnroles/error.hpp"
#include "vnroles/random.hpp"
#include "vnroles/report.hpp"

namespace vnroles {

namespace {

bool plain_token(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
}

[[noreturn]] void unsatisfiable(const std::string& why) { throw Error(ErrorCode::UnsatisfiableSpec, why); }

struct Tree {
  std::map<std::string, std::vector<std::size_t>> children;
  std::vector<std::size_t> roots;
};

Tree build_tree(const FixtureSpec& spec) {
  Tree t;
  for (std::size_t i = 0; i < spec.classes.size(); ++i) {
    const auto& c = spec.classes[i];
    if (c.parent) {
      t.children[*c.parent].push_back(i);
    } else {
      t.roots.push_back(i);
    }
  }
  return t;
}

std::string member_name(Rng& rng) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "v%08llx", static_cast<unsigned long long>(rng.next() & 0xffffffffULL));
  return buf;
}

void emit_class(const FixtureSpec& spec, const Tree& tree, std::size_t index, const std::set<std::string>& inherited,
                Rng& rng, int depth, std::string& out) {
  const auto& c = spec.classes[index];
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const char* tag = depth == 0 ? "VNCLASS" : "VNSUBCLASS";
  out += pad + "<" + tag + " ID=\"" + c.id + "\">\n";
  out += pad + "  <MEMBERS>\n";
  for (std::size_t m = 0; m < c.members; ++m) out += pad + "    <MEMBER name=\"" + member_name(rng) + "\"/>\n";
  out += pad + "  </MEMBERS>\n";
  out += pad + "  <THEMROLES>\n";
  std::set<std::string> frame(c.frame.begin(), c.frame.end());
  for (const auto& role : frame) {
    if (!inherited.contains(role)) out += pad + "    <THEMROLE type=\"" + role + "\"/>\n";
  }
  out += pad + "  </THEMROLES>\n";
  out += pad + "  <FRAMES/>\n";
  out += pad + "  <SUBCLASSES>\n";
  if (const auto it = tree.children.find(c.id); it != tree.children.end()) {
    for (auto child : it->second) emit_class(spec, tree, child, frame, rng, depth + 2, out);
  }
  out += pad + "  </SUBCLASSES>\n";
  out += pad + "</" + tag + ">\n";
}

}  // namespace

void validate_fixture(const FixtureSpec& spec) {
  if (spec.roles.empty()) unsatisfiable("no roles");
  if (spec.classes.empty()) unsatisfiable("no classes");
  const std::set<std::string> roles(spec.roles.begin(), spec.roles.end());
  if (roles.size() != spec.roles.size()) unsatisfiable("duplicate role names");
  for (const auto& r : spec.roles) {
    if (!plain_token(r)) unsatisfiable("role name '" + r + "' must be a plain token");
  }

  std::map<std::string, const FixtureClass*> by_id;
  for (const auto& c : spec.classes) {
    if (!plain_token(c.id)) unsatisfiable("class id '" + c.id + "' must be a plain token");
    if (c.frame.empty()) unsatisfiable("class " + c.id + " has an empty frame");
    for (const auto& r : c.frame) {
      if (!roles.contains(r)) unsatisfiable("class " + c.id + " uses undeclared role " + r);
    }
    if (c.parent) {
      const auto it = by_id.find(*c.parent);
      if (it == by_id.end()) unsatisfiable("class " + c.id + " names parent " + *c.parent + " before it is defined");
      const std::set<std::string> mine(c.frame.begin(), c.frame.end());
      for (const auto& r : it->second->frame) {
        if (!mine.contains(r)) unsatisfiable("class " + c.id + " drops inherited role " + r);
      }
    }
    if (!by_id.emplace(c.id, &c).second) unsatisfiable("duplicate class id " + c.id);
  }

  for (const auto& [dependent, context] : spec.planted_dependencies) {
    if (!roles.contains(dependent) || !roles.contains(context)) {
      unsatisfiable("dependency " + dependent + " -> " + context + " names an undeclared role");
    }
    bool realised = false;
    for (const auto& c : spec.classes) {
      const bool has_dep = std::find(c.frame.begin(), c.frame.end(), dependent) != c.frame.end();
      const bool has_ctx = std::find(c.frame.begin(), c.frame.end(), context) != c.frame.end();
      if (has_dep && !has_ctx) unsatisfiable("class " + c.id + " carries " + dependent + " without " + context);
      realised = realised || (has_dep && c.members > 0);
    }
    if (!realised) unsatisfiable("dependent role " + dependent + " occurs in no populated class");
  }
}

FixtureSpec fixture_from_json(const std::string& json_text) {
  FixtureSpec spec;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    spec.roles = doc.at("roles").get<std::vector<std::string>>();
    std::size_t i = 0;
    for (const auto& c : doc.at("classes")) {
      FixtureClass fc;
      ++i;
      fc.id = c.contains("id") ? c.at("id").get<std::string>() : "fixture-" + std::to_string(i);
      fc.frame = c.at("frame").get<std::vector<std::string>>();
      fc.members = c.at("members").get<std::size_t>();
      if (c.contains("parent")) fc.parent = c.at("parent").get<std::string>();
      spec.classes.push_back(std::move(fc));
    }
    if (doc.contains("planted_dependencies")) {
      for (const auto& d : doc.at("planted_dependencies")) {
        spec.planted_dependencies.emplace_back(d.at(0).get<std::string>(), d.at(1).get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("fixture spec: ") + e.what());
  }
  return spec;
}

std::string fixture_to_json(const FixtureSpec& spec) {
  nlohmann::ordered_json doc;
  doc["roles"] = spec.roles;
  auto& classes = doc["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : spec.classes) {
    nlohmann::ordered_json entry;
    entry["id"] = c.id;
    entry["frame"] = c.frame;
    entry["members"] = c.members;
    if (c.parent) entry["parent"] = *c.parent;
    classes.push_back(std::move(entry));
  }
  auto& deps = doc["planted_dependencies"] = nlohmann::ordered_json::array();
  for (const auto& [d, c] : spec.planted_dependencies) deps.push_back({d, c});
  return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> generate_fixture(const FixtureSpec& spec, std::uint64_t seed,
                                                    const std::filesystem::path& dir) {
  validate_fixture(spec);
  std::filesystem::create_directories(dir);
  const Tree tree = build_tree(spec);
  Rng rng(seed);
  std::vector<std::filesystem::path> written;
  for (std::size_t n = 0; n < tree.roots.size(); ++n) {
    const auto& root = spec.classes[tree.roots[n]];
    std::string xml = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    emit_class(spec, tree, tree.roots[n], {}, rng, 0, xml);
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%04zu_", n);
    const auto path = dir / (prefix + root.id + ".xml");
    write_file_atomic(path, xml);
    written.push_back(path);
  }
  return written;
}

}  // namespace vnroles
