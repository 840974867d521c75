#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vnroles/embedding.hpp"

namespace vnroles {

/// Labelled scatter plot of a 2-D embedding on a fixed 800×600 viewBox.
/// Labels sit to the right of their point; a label that would overlap an
/// earlier one (in role order) is pushed down one line at a time.
std::string embedding_to_svg(const Embedding2D& e);

/// Writes `contents` to `path` through a sibling temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace vnroles
