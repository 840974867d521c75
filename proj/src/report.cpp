#include "vnroles/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "vnroles/error.hpp"

namespace vnroles {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 40.0;
constexpr double kLabelRoom = 110.0;  // right-hand space kept free for labels
constexpr double kLineHeight = 14.0;
constexpr double kCharWidth = 7.0;

struct Box {
  double x0, y0, x1, y1;
  bool overlaps(const Box& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string embedding_to_svg(const Embedding2D& e) {
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& c : e.coords) {
    min_x = std::min(min_x, c[0]);
    max_x = std::max(max_x, c[0]);
    min_y = std::min(min_y, c[1]);
    max_y = std::max(max_y, c[1]);
  }
  const double span_x = max_x > min_x ? max_x - min_x : 1.0;
  const double span_y = max_y > min_y ? max_y - min_y : 1.0;
  const double plot_w = kWidth - 2 * kMargin - kLabelRoom;
  const double plot_h = kHeight - 2 * kMargin;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";

  std::vector<Box> placed;
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    const double px = kMargin + (e.coords[i][0] - min_x) / span_x * plot_w;
    // SVG y grows downwards
    const double py = kMargin + (max_y - e.coords[i][1]) / span_y * plot_h;
    const std::string label = i < e.vocab.size() ? e.vocab[i].name() : "r" + std::to_string(i);

    Box box{px + 6.0, py - 10.0, px + 6.0 + kCharWidth * static_cast<double>(label.size()), py + 4.0};
    while (std::any_of(placed.begin(), placed.end(), [&](const Box& b) { return b.overlaps(box); })) {
      box.y0 += kLineHeight;
      box.y1 += kLineHeight;
    }
    placed.push_back(box);

    out += "<circle cx=\"" + fmt2(px) + "\" cy=\"" + fmt2(py) + "\" r=\"4\" fill=\"steelblue\"/>\n";
    out += "<text x=\"" + fmt2(box.x0) + "\" y=\"" + fmt2(box.y1 - 2.0) + "\">" + escape(label) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace vnroles
