#include "vaxinfer/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace vaxinfer::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 48.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

}  // namespace

std::string density_svg(const exact::EfficacyPosterior& post,
                        const model::MomentSummary& summary,
                        const std::string& title) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double y_max =
      1.05 * std::max(1e-12, *std::max_element(post.density.begin(), post.density.end()));

  const auto x_px = [&](double x) { return kLeft + x * plot_w; };
  const auto y_px = [&](double y) { return kTop + plot_h * (1.0 - y / y_max); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\">\n";
  out << "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(title) << "</text>\n";

  // Axes and x ticks every 0.1.
  out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\""
      << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(kTop + plot_h)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
      << fmt(kLeft) << "\" y2=\"" << fmt(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double x = 0.1 * i;
    out << "<line x1=\"" << fmt(x_px(x)) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\""
        << fmt(x_px(x)) << "\" y2=\"" << fmt(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    char label[16];
    std::snprintf(label, sizeof label, "%.1f", x);
    out << "<text x=\"" << fmt(x_px(x)) << "\" y=\"" << fmt(kTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << label << "</text>\n";
  }
  out << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 8)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
         "efficacy</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < post.grid.size(); ++i) {
    if (i) out << ' ';
    out << fmt(x_px(post.grid[i])) << ',' << fmt(y_px(post.density[i]));
  }
  out << "\"/>\n";

  // Mean solid, mode dashed.
  out << "<line x1=\"" << fmt(x_px(summary.mean)) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
      << fmt(x_px(summary.mean)) << "\" y2=\"" << fmt(kTop + plot_h)
      << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
  out << "<line x1=\"" << fmt(x_px(summary.mode)) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
      << fmt(x_px(summary.mode)) << "\" y2=\"" << fmt(kTop + plot_h)
      << "\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";

  out << "</svg>\n";
  return out.str();
}

}  // namespace vaxinfer::svg
