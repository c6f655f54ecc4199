#include "ctrent/cli/svg_plot.hpp"

#include <algorithm>
#include <cstdio>

namespace ctrent::cli {

namespace {

constexpr double kWidth = 520.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 60.0;
constexpr double kTop = 30.0;
constexpr double kSide = 440.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Unit-square data coordinates to pixels; y grows upward in data space.
double px(double x) { return kLeft + std::clamp(x, 0.0, 1.0) * kSide; }
double py(double y) { return kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * kSide; }

}  // namespace

std::string render_entropy_scatter(std::span<const EntropyAssessment> assessments,
                                   std::string_view title) {
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" fill=\"#ffffff\"/>\n";
  svg += "  <text x=\"" + num(kLeft + kSide / 2) +
         "\" y=\"20.00\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
         xml_escape(title) + "</text>\n";

  svg += "  <g class=\"grid\" stroke=\"#d9d9d9\" stroke-width=\"1\">\n";
  for (int i = 1; i < 4; ++i) {
    const double t = i / 4.0;
    svg += "    <line x1=\"" + num(px(t)) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(px(t)) +
           "\" y2=\"" + num(py(1)) + "\"/>\n";
    svg += "    <line x1=\"" + num(px(0)) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(px(1)) +
           "\" y2=\"" + num(py(t)) + "\"/>\n";
  }
  svg += "  </g>\n";
  svg += "  <rect class=\"frame\" x=\"" + num(px(0)) + "\" y=\"" + num(py(1)) + "\" width=\"" +
         num(kSide) + "\" height=\"" + num(kSide) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  svg += "  <line class=\"diagonal\" x1=\"" + num(px(0)) + "\" y1=\"" + num(py(0)) + "\" x2=\"" +
         num(px(1)) + "\" y2=\"" + num(py(1)) +
         "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n";

  svg += "  <g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    svg += "    <text x=\"" + num(px(t)) + "\" y=\"" + num(py(0) + 16) +
           "\" text-anchor=\"middle\">" + num(t) + "</text>\n";
    svg += "    <text x=\"" + num(px(0) - 6) + "\" y=\"" + num(py(t) + 4) +
           "\" text-anchor=\"end\">" + num(t) + "</text>\n";
  }
  svg += "  </g>\n";
  svg += "  <text x=\"" + num(kLeft + kSide / 2) + "\" y=\"" + num(kHeight - 8) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
         "H1 per bit</text>\n";
  svg += "  <text x=\"16.00\" y=\"" + num(kTop + kSide / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16.00 " + num(kTop + kSide / 2) + ")\">Hinf per bit</text>\n";

  svg += "  <g class=\"points\" fill=\"#1f77b4\" fill-opacity=\"0.7\">\n";
  for (const auto& a : assessments) {
    char coords[96];
    std::snprintf(coords, sizeof(coords), "%.4f, %.4f", a.h1_per_bit, a.hinf_per_bit);
    svg += "    <circle cx=\"" + num(px(a.h1_per_bit)) + "\" cy=\"" + num(py(a.hinf_per_bit)) +
           "\" r=\"3\"><title>" + xml_escape(a.counter_id) + " (" + coords +
           ")</title></circle>\n";
  }
  svg += "  </g>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace ctrent::cli
