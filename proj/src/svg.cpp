#include "rcxi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rcxi::svg {

namespace {

constexpr double kWidth = 640, kHeight = 480, kMargin = 56;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axes {
  double x0, x1, y0, y1;

  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

Axes padded(double x0, double x1, double y0, double y1) {
  auto widen = [](double& lo, double& hi) {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  };
  widen(x0, x1);
  widen(y0, y1);
  return {x0, x1, y0, y1};
}

std::string frame(const Axes& a, const std::string& title, const std::string& x_label, const std::string& y_label) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                  num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" + num(kWidth - 2 * kMargin) +
       "\" height=\"" + num(kHeight - 2 * kMargin) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kMargin / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" + escape(title) + "</text>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(x_label) + "</text>\n";
  s += "<text x=\"14\" y=\"" + num(kHeight / 2) + "\" transform=\"rotate(-90 14 " + num(kHeight / 2) +
       ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(y_label) + "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = a.x0 + (a.x1 - a.x0) * i / 4.0, fy = a.y0 + (a.y1 - a.y0) * i / 4.0;
    s += "<text x=\"" + num(a.px(fx)) + "\" y=\"" + num(kHeight - kMargin + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + label(fx) + "</text>\n";
    s += "<text x=\"" + num(kMargin - 4) + "\" y=\"" + num(a.py(fy) + 3) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + label(fy) + "</text>\n";
  }
  return s;
}

std::size_t stride_for(std::size_t n) { return std::max<std::size_t>(1, (n + kMaxPlotPoints - 1) / kMaxPlotPoints); }

}  // namespace

std::string trajectory_plot(const Matrix& points, const std::vector<std::vector<double>>& centroids,
                            const std::string& title) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  const std::size_t stride = stride_for(points.rows());
  for (std::size_t i = 0; i < points.rows(); i += stride) {
    x0 = std::min(x0, points(i, 0));
    x1 = std::max(x1, points(i, 0));
    y0 = std::min(y0, points(i, 1));
    y1 = std::max(y1, points(i, 1));
  }
  for (const auto& c : centroids) {
    x0 = std::min(x0, c[0]);
    x1 = std::max(x1, c[0]);
    y0 = std::min(y0, c[1]);
    y1 = std::max(y1, c[1]);
  }
  if (points.rows() == 0) x0 = x1 = y0 = y1 = 0.0;
  const Axes a = padded(x0, x1, y0, y1);
  std::string s = frame(a, title, "PC1", "PC2");
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.6\" stroke-opacity=\"0.7\" points=\"";
  for (std::size_t i = 0; i < points.rows(); i += stride) s += num(a.px(points(i, 0))) + "," + num(a.py(points(i, 1))) + " ";
  s += "\"/>\n";
  for (const auto& c : centroids)
    s += "<circle cx=\"" + num(a.px(c[0])) + "\" cy=\"" + num(a.py(c[1])) +
         "\" r=\"6\" fill=\"#d62728\" stroke=\"black\"/>\n";
  s += "</svg>\n";
  return s;
}

std::string series_plot(std::span<const double> values, std::optional<double> reference, const std::string& title,
                        const std::string& y_label, const std::string& reference_label) {
  double y0 = 0.0, y1 = 0.0;
  for (double v : values) y1 = std::max(y1, v);
  if (reference) y1 = std::max(y1, *reference);
  const double n = static_cast<double>(values.size());
  const Axes a = padded(0.0, std::max(1.0, n - 1), y0, y1);
  std::string s = frame(a, title, "step n", y_label);
  const std::size_t stride = stride_for(values.size());
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.8\" points=\"";
  for (std::size_t i = 0; i < values.size(); i += stride)
    s += num(a.px(static_cast<double>(i))) + "," + num(a.py(values[i])) + " ";
  s += "\"/>\n";
  if (reference) {
    s += "<line x1=\"" + num(a.px(a.x0)) + "\" y1=\"" + num(a.py(*reference)) + "\" x2=\"" + num(a.px(a.x1)) +
         "\" y2=\"" + num(a.py(*reference)) + "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
    s += "<text x=\"" + num(kWidth - kMargin - 4) + "\" y=\"" + num(a.py(*reference) - 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#d62728\">" +
         escape(reference_label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace rcxi::svg
