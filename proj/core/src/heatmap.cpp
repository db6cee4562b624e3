#include "infzsl/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "infzsl/error.hpp"
#include "infzsl/io.hpp"

namespace infzsl {
namespace {

struct Rgb {
  double r, g, b;
};

// Viridis-like three-stop ramp; t=0 and t=1 hit the end colors exactly.
Rgb color_at(double t) {
  static constexpr Rgb low{0x44, 0x01, 0x54};
  static constexpr Rgb mid{0x21, 0x91, 0x8c};
  static constexpr Rgb high{0xfd, 0xe7, 0x25};
  auto lerp = [](const Rgb& a, const Rgb& b, double u) {
    return Rgb{a.r + (b.r - a.r) * u, a.g + (b.g - a.g) * u, a.b + (b.b - a.b) * u};
  };
  if (t <= 0.5) return lerp(low, mid, t * 2.0);
  return lerp(mid, high, (t - 0.5) * 2.0);
}

std::string hex_color(const Rgb& c) {
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", static_cast<int>(std::lround(c.r)),
                static_cast<int>(std::lround(c.g)), static_cast<int>(std::lround(c.b)));
  return buffer;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void export_heatmap(const SemanticEmbedding& s, const std::vector<double>& column_importance,
                    const std::filesystem::path& path) {
  if (s.rows() == 0 || s.cols() == 0) raise(errc::invalid_argument, "embedding matrix is empty");
  if (static_cast<int>(column_importance.size()) != s.cols())
    raise(errc::shape_mismatch, "importance entries (" + std::to_string(column_importance.size()) +
                                    ") do not match columns (" + std::to_string(s.cols()) + ")");

  // Most transferable-and-discriminative concepts first (left).
  std::vector<int> order(column_importance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return column_importance[static_cast<std::size_t>(a)] >
           column_importance[static_cast<std::size_t>(b)];
  });

  const double lo = s.values.minCoeff();
  const double hi = s.values.maxCoeff();
  const double range = hi - lo;

  constexpr int cell = 22;
  std::size_t name_chars = 0;
  for (const std::string& name : s.class_names) name_chars = std::max(name_chars, name.size());
  std::size_t label_chars = 0;
  for (const std::string& label : s.column_labels) label_chars = std::max(label_chars, label.size());
  const int left = 12 + static_cast<int>(name_chars) * 7;
  const int top = 16 + static_cast<int>(static_cast<double>(label_chars) * 5.0);
  const int width = left + s.cols() * cell + 8;
  const int height = top + s.rows() * cell + 8;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (int j = 0; j < s.cols(); ++j) {
    int col = order[static_cast<std::size_t>(j)];
    int x = left + j * cell;
    svg << "<text x=\"" << x + cell / 2 << "\" y=\"" << top - 6 << "\" font-size=\"10\" "
        << "font-family=\"sans-serif\" text-anchor=\"start\" transform=\"rotate(-55 "
        << x + cell / 2 << ' ' << top - 6 << ")\">"
        << escape_xml(s.column_labels[static_cast<std::size_t>(col)]) << "</text>\n";
    for (int y = 0; y < s.rows(); ++y) {
      double value = s.values(y, col);
      double t = range > 0.0 ? (value - lo) / range : 0.5;
      svg << "<rect x=\"" << x << "\" y=\"" << top + y * cell << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << hex_color(color_at(t))
          << "\" stroke=\"white\" stroke-width=\"0.5\"><title>"
          << escape_xml(s.class_names[static_cast<std::size_t>(y)]) << " / "
          << escape_xml(s.column_labels[static_cast<std::size_t>(col)]) << " = "
          << format_double(value) << "</title></rect>\n";
    }
  }
  for (int y = 0; y < s.rows(); ++y) {
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + y * cell + cell / 2 + 4
        << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">"
        << escape_xml(s.class_names[static_cast<std::size_t>(y)]) << "</text>\n";
  }
  svg << "</svg>\n";

  write_text_file(path, svg.str());
}

}  // namespace infzsl
