#include "vnroles/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "vnroles/error.hpp"
#include "vnroles/occurrence.hpp"

namespace vnroles {

namespace {

namespace pt = boost::property_tree;

using Slot = std::set<std::string>;

void collect(const pt::ptree& node, std::set<std::string> frame, std::vector<Slot>& slots) {
  if (const auto roles = node.get_child_optional("THEMROLES")) {
    for (const auto& [tag, role] : *roles) {
      if (tag != "THEMROLE") continue;
      frame.insert(boost::algorithm::trim_copy(role.get<std::string>("<xmlattr>.type")));
    }
  }
  if (const auto members = node.get_child_optional("MEMBERS")) {
    for (const auto& [tag, member] : *members) {
      if (tag == "MEMBER") slots.push_back(frame);
    }
  }
  if (const auto subs = node.get_child_optional("SUBCLASSES")) {
    for (const auto& [tag, sub] : *subs) {
      if (tag == "VNSUBCLASS") collect(sub, frame, slots);
    }
  }
}

}  // namespace

OracleOccurrence oracle_occurrence(const std::filesystem::path& class_dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(class_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<Slot> slots;
  std::set<std::string> role_names;
  for (const auto& file : files) {
    pt::ptree doc;
    try {
      std::ifstream in(file);
      pt::read_xml(in, doc);
      const pt::ptree& root = doc.get_child("VNCLASS");
      collect(root, {}, slots);
      // roles of zero-member classes still belong to the vocabulary
      std::vector<const pt::ptree*> stack{&root};
      while (!stack.empty()) {
        const auto* node = stack.back();
        stack.pop_back();
        if (const auto roles = node->get_child_optional("THEMROLES")) {
          for (const auto& [tag, role] : *roles) {
            if (tag == "THEMROLE") role_names.insert(boost::algorithm::trim_copy(role.get<std::string>("<xmlattr>.type")));
          }
        }
        if (const auto subs = node->get_child_optional("SUBCLASSES")) {
          for (const auto& [tag, sub] : *subs) {
            if (tag == "VNSUBCLASS") stack.push_back(&sub);
          }
        }
      }
    } catch (const pt::ptree_error& e) {
      throw Error(ErrorCode::MalformedXml, file.filename().string() + ": " + e.what());
    }
    if (role_names.size() > kOracleMaxRoles || slots.size() > kOracleMaxSlots) {
      throw Error(ErrorCode::ScaleExceeded, "oracle is limited to " + std::to_string(kOracleMaxRoles) + " roles and " +
                                                std::to_string(kOracleMaxSlots) + " verb slots");
    }
  }

  OracleOccurrence out;
  out.roles.assign(role_names.begin(), role_names.end());
  out.slots = slots.size();
  const std::size_t n = out.roles.size();
  out.common.assign(n * n, 0);
  out.support.assign(n, 0);
  for (const auto& slot : slots) {
    for (std::size_t r = 0; r < n; ++r) {
      if (!slot.contains(out.roles[r])) continue;
      ++out.support[r];
      for (std::size_t c = 0; c < n; ++c) {
        if (slot.contains(out.roles[c])) ++out.common[r * n + c];
      }
    }
  }
  return out;
}

std::string oracle_to_csv(const OracleOccurrence& o) {
  return percent_table_csv(o.roles, o.common, o.support);
}

}  // namespace vnroles
