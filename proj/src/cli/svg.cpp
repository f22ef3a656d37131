#include "jacobi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace jacobi::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
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

}  // namespace

std::string Plot::render(int width, int height) const {
  const double left = 70, right = 20, top = 36, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (!std::isfinite(p.y) || (log_y && p.y <= 0.0)) continue;
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, ty(p.y));
      ymax = std::max(ymax, ty(p.y));
    }
  }
  for (const auto& l : lines) {
    if (log_y && l.y <= 0.0) continue;
    ymin = std::min(ymin, ty(l.y));
    ymax = std::max(ymax, ty(l.y));
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };
  auto sy_raw = [&](double t) { return top + (1.0 - (t - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";

  for (const auto& b : bands) {
    const double y0 = sy(std::max(b.y0, log_y ? 1e-300 : b.y0)), y1 = sy(b.y1);
    os << "<rect x=\"" << num(left) << "\" y=\"" << num(std::min(y0, y1)) << "\" width=\"" << num(pw) << "\" height=\""
       << num(std::abs(y1 - y0)) << "\" fill=\"#cccccc\" fill-opacity=\"0.4\"/>\n";
    os << "<text x=\"" << num(left + 4) << "\" y=\"" << num(std::min(y0, y1) - 3) << "\" fill=\"#555555\">" << escape(b.label) << "</text>\n";
  }

  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(top + ph) << "\"/>\n";
  os << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\"" << num(top + ph) << "\"/>\n";
  os << "</g>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double tv = ymin + (ymax - ymin) * i / 5.0;
    os << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(sx(xv)) << "\" y2=\"" << num(top + ph + 4)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    os << "<line x1=\"" << num(left - 4) << "\" y1=\"" << num(sy_raw(tv)) << "\" x2=\"" << num(left) << "\" y2=\"" << num(sy_raw(tv))
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy_raw(tv) + 4) << "\" text-anchor=\"end\">"
       << tick_label(log_y ? std::pow(10.0, tv) : tv) << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 12.0) << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

  for (const auto& l : lines) {
    if (log_y && l.y <= 0.0) continue;
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(l.y)) << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(sy(l.y))
       << "\" stroke=\"" << l.color << "\" stroke-dasharray=\"6,4\"/>\n";
    os << "<text x=\"" << num(left + pw - 4) << "\" y=\"" << num(sy(l.y) - 4) << "\" text-anchor=\"end\" fill=\"" << l.color << "\">"
       << escape(l.label) << "</text>\n";
  }

  for (const auto& s : series) {
    std::ostringstream pts;
    for (const auto& p : s.points) {
      if (!std::isfinite(p.y) || (log_y && p.y <= 0.0)) continue;
      pts << num(sx(p.x)) << ',' << num(sy(p.y)) << ' ';
      if (s.markers) {
        os << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
      }
    }
    if (s.line) os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace jacobi::svg
