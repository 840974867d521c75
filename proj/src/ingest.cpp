#include "vnroles/ingest.hpp"

#include <expat.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "vnroles/error.hpp"

namespace vnroles {

namespace {

constexpr std::size_t kMaxObservedFrameSize = 6;

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

const char* find_attribute(const XML_Char** attrs, std::string_view key) {
  for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
    if (key == attrs[i]) return attrs[i + 1];
  }
  return nullptr;
}

class ClassFileReader {
 public:
  ClassFileReader() : parser_(XML_ParserCreate("UTF-8"), &XML_ParserFree) {
    XML_SetUserData(parser_.get(), this);
    XML_SetElementHandler(parser_.get(), &ClassFileReader::on_start, &ClassFileReader::on_end);
  }

  VerbClassNode read(std::span<const char> bytes) {
    const auto status = XML_Parse(parser_.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE);
    if (failure_) throw Error(failure_->first, failure_->second);
    if (status != XML_STATUS_OK) {
      std::ostringstream msg;
      msg << XML_ErrorString(XML_GetErrorCode(parser_.get())) << " at line "
          << XML_GetCurrentLineNumber(parser_.get()) << " column "
          << XML_GetCurrentColumnNumber(parser_.get());
      if (!path_.empty()) msg << " (in " << path_string() << ")";
      throw Error(ErrorCode::MalformedXml, msg.str());
    }
    if (!root_) throw Error(ErrorCode::SchemaViolation, "document has no VNCLASS element");
    return std::move(*root_);
  }

 private:
  static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<ClassFileReader*>(self)->start(name, attrs);
  }
  static void on_end(void* self, const XML_Char* name) {
    static_cast<ClassFileReader*>(self)->end(name);
  }

  std::string path_string() const {
    std::string out;
    for (const auto& part : path_) {
      if (!out.empty()) out += '/';
      out += part;
    }
    return out;
  }

  void fail(ErrorCode code, const std::string& what) {
    if (failure_) return;
    failure_.emplace(code, what + " at " + path_string());
    XML_StopParser(parser_.get(), XML_FALSE);
  }

  std::string_view parent_element() const {
    return element_names_.size() >= 2 ? std::string_view(element_names_[element_names_.size() - 2])
                                       : std::string_view();
  }

  void start(std::string_view name, const XML_Char** attrs) {
    if (failure_) return;
    element_names_.emplace_back(name);
    path_.emplace_back(name);

    if (element_names_.size() == 1 && name != "VNCLASS") {
      fail(ErrorCode::SchemaViolation, "root element must be VNCLASS, found " + std::string(name));
      return;
    }

    if (name == "VNCLASS" || name == "VNSUBCLASS") {
      open_class(name, attrs);
    } else if (name == "THEMROLE" && parent_element() == "THEMROLES" && !nodes_.empty()) {
      const char* type = find_attribute(attrs, "type");
      const std::string_view label = type ? trim(type) : std::string_view();
      if (label.empty()) {
        fail(ErrorCode::SchemaViolation, "THEMROLE without type");
        return;
      }
      nodes_.back()->declared_roles.emplace(label);
    } else if (name == "MEMBER" && parent_element() == "MEMBERS" && !nodes_.empty()) {
      const char* member = find_attribute(attrs, "name");
      const std::string_view lemma = member ? trim(member) : std::string_view();
      if (lemma.empty()) {
        fail(ErrorCode::SchemaViolation, "MEMBER without name");
        return;
      }
      nodes_.back()->members.emplace_back(lemma);
    }
  }

  void open_class(std::string_view name, const XML_Char** attrs) {
    const char* raw_id = find_attribute(attrs, "ID");
    if (raw_id == nullptr) raw_id = find_attribute(attrs, "id");
    const std::string_view id = raw_id ? trim(raw_id) : std::string_view();
    if (id.empty()) {
      fail(ErrorCode::SchemaViolation, std::string(name) + " without id");
      return;
    }
    path_.back() += "(" + std::string(id) + ")";

    if (name == "VNCLASS") {
      if (root_) {
        fail(ErrorCode::SchemaViolation, "nested VNCLASS");
        return;
      }
      root_.emplace();
      root_->id = id;
      nodes_.push_back(&*root_);
    } else {
      if (nodes_.empty() || parent_element() != "SUBCLASSES") {
        fail(ErrorCode::SchemaViolation, "VNSUBCLASS outside SUBCLASSES");
        return;
      }
      auto& child = nodes_.back()->children.emplace_back();
      child.id = id;
      nodes_.push_back(&child);
    }
    if (!ids_.emplace(id).second) fail(ErrorCode::SchemaViolation, "duplicate class id " + std::string(id));
  }

  void end(std::string_view name) {
    if (failure_) return;
    if ((name == "VNCLASS" || name == "VNSUBCLASS") && !nodes_.empty()) nodes_.pop_back();
    element_names_.pop_back();
    path_.pop_back();
  }

  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser_;
  std::optional<VerbClassNode> root_;
  // Ancestors never reallocate while a descendant is open, so these stay valid.
  std::vector<VerbClassNode*> nodes_;
  std::vector<std::string> element_names_;
  std::vector<std::string> path_;
  std::unordered_set<std::string> ids_;
  std::optional<std::pair<ErrorCode, std::string>> failure_;
};

struct Compressor {
  Lexicon lexicon;
  std::unordered_set<std::string> seen;

  void visit(const VerbClassNode& node, const RoleSet& parent_frame, std::size_t owner, bool is_root) {
    if (!seen.insert(node.id).second) {
      throw Error(ErrorCode::CycleDetected, "class " + node.id + " reached twice; hierarchy is not a tree");
    }
    RoleSet frame = effective_frame(node, parent_frame);
    if (is_root) {
      if (frame.empty()) throw Error(ErrorCode::SchemaViolation, "class " + node.id + " declares no roles");
      ++lexicon.source_stats.raw_root;
      owner = push(node, frame);
    } else {
      ++lexicon.source_stats.raw_sub;
      if (frame == parent_frame) {
        ++lexicon.source_stats.merged_sub;
        lexicon.classes[owner].member_count += node.members.size();
      } else {
        ++lexicon.source_stats.retained_sub;
        owner = push(node, frame);
      }
    }
    lexicon.total_members += node.members.size();
    for (const auto& child : node.children) visit(child, frame, owner, false);
  }

  std::size_t push(const VerbClassNode& node, const RoleSet& frame) {
    if (frame.size() > kMaxObservedFrameSize) {
      lexicon.warnings.push_back("class " + node.id + " has " + std::to_string(frame.size()) + " roles");
    }
    lexicon.classes.push_back(EffectiveClass{node.id, frame, node.members.size()});
    return lexicon.classes.size() - 1;
  }
};

}  // namespace

Role::Role(std::string_view name) : name_(trim(name)) {
  if (name_.empty()) throw Error(ErrorCode::SchemaViolation, "empty role label");
}

const EffectiveClass* Lexicon::find(std::string_view id) const {
  const auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) { return c.id == id; });
  return it == classes.end() ? nullptr : &*it;
}

VerbClassNode parse_class_file(std::string_view xml_text) {
  ClassFileReader reader;
  return reader.read(std::span<const char>(xml_text.data(), xml_text.size()));
}

RoleSet effective_frame(const VerbClassNode& node, const RoleSet& inherited) {
  RoleSet frame = inherited;
  frame.insert(node.declared_roles.begin(), node.declared_roles.end());
  return frame;
}

Lexicon compress(std::span<const VerbClassNode> roots) {
  Compressor c;
  for (const auto& root : roots) c.visit(root, {}, 0, true);
  return std::move(c.lexicon);
}

std::vector<VerbClassNode> load_class_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Config, "not a directory: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<VerbClassNode> roots;
  roots.reserve(files.size());
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + file.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
      roots.push_back(parse_class_file(std::string_view(bytes)));
    } catch (const Error& e) {
      throw Error(e.code(), file.filename().string() + ": " + e.what());
    }
  }
  return roots;
}

std::string lexicon_to_json(const Lexicon& lexicon) {
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (const auto& c : lexicon.classes) {
    nlohmann::ordered_json frame = nlohmann::ordered_json::array();
    for (const auto& role : c.frame) frame.push_back(role.name());
    nlohmann::ordered_json entry;
    entry["id"] = c.id;
    entry["frame"] = std::move(frame);
    entry["members"] = c.member_count;
    classes.push_back(std::move(entry));
  }
  const auto& s = lexicon.source_stats;
  nlohmann::ordered_json stats;
  stats["raw_root"] = s.raw_root;
  stats["raw_sub"] = s.raw_sub;
  stats["merged_sub"] = s.merged_sub;
  stats["retained_sub"] = s.retained_sub;
  stats["classes"] = lexicon.classes.size();
  stats["total_members"] = lexicon.total_members;

  nlohmann::ordered_json doc;
  doc["classes"] = std::move(classes);
  doc["stats"] = std::move(stats);
  return doc.dump() + "\n";
}

}  // namespace vnroles
