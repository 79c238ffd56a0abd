#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cellsom/file_util.hpp"
#include "cellsom/viz.hpp"

namespace cellsom {

namespace {

constexpr double kRadius = 12.0;
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kMargin = 20.0;
constexpr double kLegendHeight = 40.0;

// Categorical palette for cell ids (1-based).
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

std::string palette(std::size_t cell) {
  if (cell == 0) return "#ffffff";
  return kPalette[(cell - 1) % std::size(kPalette)];
}

struct HexLayout {
  std::size_t rows, cols;
  double width() const { return 2 * kMargin + (static_cast<double>(cols) + 0.5) * kSqrt3 * kRadius; }
  double height() const { return 2 * kMargin + (1.5 * static_cast<double>(rows) + 0.5) * kRadius; }
  double cx(std::size_t r, std::size_t c) const {
    return kMargin + kSqrt3 * kRadius * (static_cast<double>(c) + 0.5 + (r % 2 ? 0.5 : 0.0));
  }
  double cy(std::size_t r) const { return kMargin + kRadius + 1.5 * kRadius * static_cast<double>(r); }
  std::string points(std::size_t r, std::size_t c) const {
    std::string s;
    for (int k = 0; k < 6; ++k) {
      double a = (60.0 * k - 90.0) * 3.14159265358979323846 / 180.0;
      if (k) s += ' ';
      s += num(cx(r, c) + kRadius * std::cos(a)) + "," + num(cy(r) + kRadius * std::sin(a));
    }
    return s;
  }
};

std::string header(double w, double h, const std::string& title) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n<title>" + escape(title) + "</title>\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"#f8f8f8\"/>\n";
}

std::string legend(double y, double min, double max) {
  std::string s = "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"10\">\n";
  s += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(y) + "\" width=\"12\" height=\"12\" fill=\"" +
       gray_fill(min, min, max) + "\" stroke=\"#000\"/>\n";
  s += "<text x=\"" + num(kMargin + 16) + "\" y=\"" + num(y + 10) + "\">min " + fmt_value(min) + "</text>\n";
  s += "<rect x=\"" + num(kMargin + 90) + "\" y=\"" + num(y) + "\" width=\"12\" height=\"12\" fill=\"" +
       gray_fill(max, min, max) + "\" stroke=\"#000\"/>\n";
  s += "<text x=\"" + num(kMargin + 106) + "\" y=\"" + num(y + 10) + "\">max " + fmt_value(max) + "</text>\n";
  return s + "</g>\n";
}

std::string gray_hex_svg(std::size_t rows, std::size_t cols, const std::vector<double>& values,
                         const std::string& title) {
  HexLayout lay{rows, cols};
  double min = *std::min_element(values.begin(), values.end());
  double max = *std::max_element(values.begin(), values.end());
  std::string s = header(lay.width(), lay.height() + kLegendHeight, title);
  s += "<g class=\"hexes\" stroke=\"#999\" stroke-width=\"0.5\">\n";
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      s += "<polygon points=\"" + lay.points(r, c) + "\" fill=\"" + gray_fill(values[r * cols + c], min, max) +
           "\"/>\n";
  s += "</g>\n" + legend(lay.height() + 10, min, max) + "</svg>\n";
  return s;
}

}  // namespace

std::string gray_fill(double value, double min, double max) {
  int g = 128;
  if (max - min > 1e-15) {
    double t = std::clamp((value - min) / (max - min), 0.0, 1.0);
    g = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", g, g, g);
  return buf;
}

std::string umatrix_svg(const UMatrix& u) { return gray_hex_svg(u.rows(), u.cols(), u.values, "U-matrix"); }

std::string component_plane_svg(const ComponentPlane& plane, const std::string& title) {
  return gray_hex_svg(plane.rows, plane.cols, plane.values, title);
}

std::string hits_svg(const HitHistogram& h, std::span<const std::size_t> unit_cluster) {
  HexLayout lay{h.rows, h.cols};
  std::string s = header(lay.width(), lay.height(), "hits");
  s += "<g class=\"hexes\" font-family=\"sans-serif\" font-size=\"6\" text-anchor=\"middle\">\n";
  for (std::size_t r = 0; r < h.rows; ++r)
    for (std::size_t c = 0; c < h.cols; ++c) {
      std::size_t u = r * h.cols + c;
      if (h.hits[u] == 0) {
        s += "<polygon points=\"" + lay.points(r, c) + "\" fill=\"none\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
        continue;
      }
      std::string fill = unit_cluster.empty() ? "#d0d0d0" : palette(unit_cluster[u]);
      s += "<polygon points=\"" + lay.points(r, c) + "\" fill=\"" + fill + "\" stroke=\"#333\" stroke-width=\"0.8\"/>\n";
      std::string label = std::to_string(h.hits[u]) + ":";
      for (std::size_t i = 0; i < h.labels[u].size(); ++i) label += (i ? "," : "") + h.labels[u][i];
      s += "<text x=\"" + num(lay.cx(r, c)) + "\" y=\"" + num(lay.cy(r) + 2) + "\">" + escape(label) + "</text>\n";
    }
  return s + "</g>\n</svg>\n";
}

std::string projection_svg(const Projection& p, std::span<const std::size_t> part_cluster) {
  constexpr double size = 400.0;
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  auto grow = [&](const std::array<double, 2>& q) {
    lo_x = std::min(lo_x, q[0]);
    hi_x = std::max(hi_x, q[0]);
    lo_y = std::min(lo_y, q[1]);
    hi_y = std::max(hi_y, q[1]);
  };
  for (const auto& q : p.unit_points) grow(q);
  for (const auto& q : p.part_points) grow(q);
  double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  auto sx = [&](double x) { return kMargin + (x - lo_x) / span * size; };
  auto sy = [&](double y) { return kMargin + size - (y - lo_y) / span * size; };

  std::string s = header(size + 2 * kMargin, size + 2 * kMargin, "principal component projection");
  s += "<g class=\"lattice\" stroke=\"#888\" stroke-width=\"0.6\">\n";
  for (auto [a, b] : p.unit_edges)
    s += "<line x1=\"" + num(sx(p.unit_points[a][0])) + "\" y1=\"" + num(sy(p.unit_points[a][1])) + "\" x2=\"" +
         num(sx(p.unit_points[b][0])) + "\" y2=\"" + num(sy(p.unit_points[b][1])) + "\"/>\n";
  s += "</g>\n<g class=\"units\" fill=\"#444\">\n";
  for (const auto& q : p.unit_points)
    s += "<circle cx=\"" + num(sx(q[0])) + "\" cy=\"" + num(sy(q[1])) + "\" r=\"1.5\"/>\n";
  s += "</g>\n<g class=\"parts\" font-family=\"sans-serif\" font-size=\"9\">\n";
  for (std::size_t i = 0; i < p.part_points.size(); ++i) {
    const auto& q = p.part_points[i];
    std::string fill = part_cluster.empty() ? "#d62728" : palette(part_cluster[i]);
    s += "<circle cx=\"" + num(sx(q[0])) + "\" cy=\"" + num(sy(q[1])) + "\" r=\"4\" fill=\"" + fill +
         "\" stroke=\"#000\" stroke-width=\"0.5\"/>\n";
    s += "<text x=\"" + num(sx(q[0]) + 5) + "\" y=\"" + num(sy(q[1]) - 5) + "\">" + escape(p.part_labels[i]) +
         "</text>\n";
  }
  return s + "</g>\n</svg>\n";
}

void export_svg(const UMatrix& u, const std::filesystem::path& path) { write_file_atomic(path, umatrix_svg(u)); }

void export_svg(const ComponentPlane& plane, const std::filesystem::path& path, const std::string& title) {
  write_file_atomic(path, component_plane_svg(plane, title));
}

void export_svg(const HitHistogram& h, const std::filesystem::path& path, std::span<const std::size_t> unit_cluster) {
  write_file_atomic(path, hits_svg(h, unit_cluster));
}

void export_svg(const Projection& p, const std::filesystem::path& path, std::span<const std::size_t> part_cluster) {
  write_file_atomic(path, projection_svg(p, part_cluster));
}

}  // namespace cellsom
