// Copyright 2026 The Intent MPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "intent_mpc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace intent_mpc::plot {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr char kOwnColor[] = "#1f4fd1";
constexpr char kIntruderColor[] = "#d12a1f";
constexpr char kTargetColor[] = "#2e9e3e";
constexpr char kGuideColor[] = "#777777";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad(double fraction, double minimum_span) {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    double span = hi - lo;
    if (span < minimum_span) {
      const double mid = 0.5 * (lo + hi);
      lo = mid - 0.5 * minimum_span;
      hi = mid + 0.5 * minimum_span;
      span = minimum_span;
    }
    lo -= fraction * span;
    hi += fraction * span;
  }
};

std::vector<double> ticks(const Range& r) {
  const double raw = (r.hi - r.lo) / 6.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  double step = magnitude;
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * magnitude;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-9 * step ? 0.0 : v);
  }
  return out;
}

struct Line {
  std::string color;
  double width = 1.5;
  double opacity = 1.0;
  bool dashed = false;
};

class Panel {
 public:
  Panel(double left, double top, double width, double height, Range x, Range y)
      : left_(left), top_(top), width_(width), height_(height), x_(x), y_(y) {}

  double px(double x) const { return left_ + (x - x_.lo) / (x_.hi - x_.lo) * width_; }
  double py(double y) const { return top_ + (y_.hi - y) / (y_.hi - y_.lo) * height_; }
  double scale_x() const { return width_ / (x_.hi - x_.lo); }

  void frame(std::string& out, std::string_view title, std::string_view x_label,
             std::string_view y_label) const {
    out += "<rect x=\"" + fmt(left_) + "\" y=\"" + fmt(top_) + "\" width=\"" + fmt(width_) +
           "\" height=\"" + fmt(height_) + "\" fill=\"none\" stroke=\"#000000\"/>\n";
    for (const double t : ticks(x_)) {
      const std::string x = fmt(px(t));
      out += "<line x1=\"" + x + "\" y1=\"" + fmt(top_ + height_) + "\" x2=\"" + x + "\" y2=\"" +
             fmt(top_ + height_ + 5) + "\" stroke=\"#000000\"/>\n";
      out += "<text x=\"" + x + "\" y=\"" + fmt(top_ + height_ + 18) +
             "\" text-anchor=\"middle\">" + label(t) + "</text>\n";
    }
    for (const double t : ticks(y_)) {
      const std::string y = fmt(py(t));
      out += "<line x1=\"" + fmt(left_ - 5) + "\" y1=\"" + y + "\" x2=\"" + fmt(left_) +
             "\" y2=\"" + y + "\" stroke=\"#000000\"/>\n";
      out += "<text x=\"" + fmt(left_ - 8) + "\" y=\"" + fmt(py(t) + 4) +
             "\" text-anchor=\"end\">" + label(t) + "</text>\n";
    }
    out += "<text x=\"" + fmt(left_ + width_ / 2) + "\" y=\"" + fmt(top_ - 8) +
           "\" text-anchor=\"middle\" font-weight=\"bold\">" + std::string(title) + "</text>\n";
    out += "<text x=\"" + fmt(left_ + width_ / 2) + "\" y=\"" + fmt(top_ + height_ + 36) +
           "\" text-anchor=\"middle\">" + std::string(x_label) + "</text>\n";
    const std::string cx = fmt(left_ - 52);
    const std::string cy = fmt(top_ + height_ / 2);
    out += "<text x=\"" + cx + "\" y=\"" + cy + "\" text-anchor=\"middle\" transform=\"rotate(-90 " +
           cx + " " + cy + ")\">" + std::string(y_label) + "</text>\n";
  }

  void polyline(std::string& out, std::span<const double> xs, std::span<const double> ys,
                const Line& style) const {
    if (xs.empty()) return;
    out += "<polyline fill=\"none\" stroke=\"" + style.color + "\" stroke-width=\"" +
           fmt(style.width) + "\"";
    if (style.opacity < 1.0) out += " stroke-opacity=\"" + fmt(style.opacity) + "\"";
    if (style.dashed) out += " stroke-dasharray=\"6 4\"";
    out += " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) out += ' ';
      out += fmt(px(xs[i])) + "," + fmt(py(ys[i]));
    }
    out += "\"/>\n";
  }

  void hline(std::string& out, double y, const Line& style) const {
    const std::vector<double> xs{x_.lo, x_.hi};
    const std::vector<double> ys{y, y};
    polyline(out, xs, ys, style);
  }

 private:
  double left_, top_, width_, height_;
  Range x_, y_;
};

std::string open_svg(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

std::string close_svg() { return "</svg>\n"; }

void legend(std::string& out, double x, double y,
            std::initializer_list<std::pair<std::string_view, std::string_view>> items) {
  for (const auto& [color, text] : items) {
    out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x + 20) + "\" y2=\"" +
           fmt(y) + "\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(x + 26) + "\" y=\"" + fmt(y + 4) + "\">" + std::string(text) +
           "</text>\n";
    y += 16;
  }
}

struct Columns {
  std::vector<double> t, own_x, own_y, intr_x, intr_y, separation;
  std::vector<double> input_t, v, u;
};

Columns columns(const sim::SimTrace& trace) {
  Columns c;
  for (const sim::StepRecord& r : trace.records) {
    c.t.push_back(static_cast<double>(r.t) * trace.dt);
    c.own_x.push_back(r.own.x);
    c.own_y.push_back(r.own.y);
    c.intr_x.push_back(r.intruder.x);
    c.intr_y.push_back(r.intruder.y);
    c.separation.push_back(r.separation);
    if (r.status) {
      c.input_t.push_back(static_cast<double>(r.t) * trace.dt);
      c.v.push_back(r.input.speed);
      c.u.push_back(r.input.angular_rate);
    }
  }
  return c;
}

// Equal-aspect map panel covering every trajectory plus the target disc.
Panel map_panel(std::span<const sim::SimTrace* const> traces, const sim::ScenarioSpec& spec) {
  Range x, y;
  for (const sim::SimTrace* trace : traces) {
    for (const sim::StepRecord& r : trace->records) {
      x.add(r.own.x);
      y.add(r.own.y);
      x.add(r.intruder.x);
      y.add(r.intruder.y);
    }
  }
  x.add(spec.own_target.x - spec.target_radius);
  x.add(spec.own_target.x + spec.target_radius);
  y.add(spec.own_target.y - spec.target_radius);
  y.add(spec.own_target.y + spec.target_radius);
  x.pad(0.05, 1.0);
  y.pad(0.05, 1.0);
  const double left = 80, top = 40, width = kWidth - 110, height = kHeight - 100;
  const double scale = std::min(width / (x.hi - x.lo), height / (y.hi - y.lo));
  const double cx = 0.5 * (x.lo + x.hi);
  const double cy = 0.5 * (y.lo + y.hi);
  x = {cx - 0.5 * width / scale, cx + 0.5 * width / scale};
  y = {cy - 0.5 * height / scale, cy + 0.5 * height / scale};
  return Panel(left, top, width, height, x, y);
}

void circle(std::string& out, const Panel& p, double x, double y, double r, std::string_view fill,
            std::string_view stroke, bool dashed) {
  out += "<circle cx=\"" + fmt(p.px(x)) + "\" cy=\"" + fmt(p.py(y)) + "\" r=\"" +
         fmt(r * p.scale_x()) + "\" fill=\"" + std::string(fill) + "\"";
  if (fill != "none") out += " fill-opacity=\"0.35\"";
  out += " stroke=\"" + std::string(stroke) + "\"";
  if (dashed) out += " stroke-dasharray=\"6 4\"";
  out += "/>\n";
}

void target_disc(std::string& out, const Panel& p, const sim::ScenarioSpec& spec) {
  circle(out, p, spec.own_target.x, spec.own_target.y, spec.target_radius, kTargetColor,
         kTargetColor, false);
}

Panel time_panel(double top, double height, const Range& t, const Range& y) {
  return Panel(80, top, kWidth - 110, height, t, y);
}

Range time_range(std::span<const sim::SimTrace* const> traces) {
  Range t;
  t.add(0.0);
  for (const sim::SimTrace* trace : traces) {
    if (!trace->records.empty()) t.add(static_cast<double>(trace->records.back().t) * trace->dt);
  }
  t.pad(0.0, 1.0);
  return t;
}

std::string distance_plot(std::span<const sim::SimTrace* const> traces, const sim::SimTrace* nominal,
                          double rho) {
  Range y;
  y.add(0.0);
  y.add(rho);
  std::vector<const sim::SimTrace*> all(traces.begin(), traces.end());
  if (nominal != nullptr) all.push_back(nominal);
  for (const sim::SimTrace* trace : all) {
    for (const sim::StepRecord& r : trace->records) y.add(r.separation);
  }
  y.pad(0.03, 1.0);
  y.lo = 0.0;
  const Panel p = time_panel(40, kHeight - 100, time_range(all), y);
  std::string out = open_svg(kWidth, kHeight);
  p.frame(out, "Ownship-intruder separation", "time [s]", "distance [m]");
  const bool overlay = nominal != nullptr;
  for (const sim::SimTrace* trace : traces) {
    const Columns c = columns(*trace);
    p.polyline(out, c.t, c.separation,
               overlay ? Line{kOwnColor, 0.8, 0.6, false} : Line{kOwnColor, 1.8, 1.0, false});
  }
  if (nominal != nullptr) {
    const Columns c = columns(*nominal);
    p.polyline(out, c.t, c.separation, Line{"#000000", 1.8, 1.0, false});
  }
  p.hline(out, rho, Line{kIntruderColor, 1.2, 1.0, true});
  if (overlay) {
    legend(out, kWidth - 200, 60, {{kOwnColor, "disturbed runs"}, {"#000000", "nominal"},
                                   {kIntruderColor, "rho"}});
  } else {
    legend(out, kWidth - 200, 60, {{kOwnColor, "separation"}, {kIntruderColor, "rho"}});
  }
  out += close_svg();
  return out;
}

std::string controls_plot(std::span<const sim::SimTrace* const> traces, const sim::SimTrace* nominal,
                          const ControlBounds& bounds) {
  std::vector<const sim::SimTrace*> all(traces.begin(), traces.end());
  if (nominal != nullptr) all.push_back(nominal);
  const Range t = time_range(all);
  Range v, u;
  v.add(bounds.v_min);
  v.add(bounds.v_max);
  u.add(bounds.u_min);
  u.add(bounds.u_max);
  for (const sim::SimTrace* trace : all) {
    for (const sim::StepRecord& r : trace->records) {
      if (!r.status) continue;
      v.add(r.input.speed);
      u.add(r.input.angular_rate);
    }
  }
  v.pad(0.1, 1e-3);
  u.pad(0.1, 1e-3);
  const double panel_height = (kHeight - 130) / 2;
  const Panel pv = time_panel(40, panel_height, t, v);
  const Panel pu = time_panel(40 + panel_height + 50, panel_height, t, u);

  std::string out = open_svg(kWidth, kHeight);
  pv.frame(out, "Ownship speed", "", "v [m/s]");
  pu.frame(out, "Ownship angular rate", "time [s]", "u [rad/s]");
  const bool overlay = nominal != nullptr;
  const Line run_style = overlay ? Line{kOwnColor, 0.8, 0.6, false} : Line{kOwnColor, 1.6, 1.0, false};
  for (const sim::SimTrace* trace : traces) {
    const Columns c = columns(*trace);
    pv.polyline(out, c.input_t, c.v, run_style);
    pu.polyline(out, c.input_t, c.u, run_style);
  }
  if (nominal != nullptr) {
    const Columns c = columns(*nominal);
    pv.polyline(out, c.input_t, c.v, Line{"#000000", 1.6, 1.0, false});
    pu.polyline(out, c.input_t, c.u, Line{"#000000", 1.6, 1.0, false});
  }
  const Line bound_style{kGuideColor, 1.0, 1.0, true};
  pv.hline(out, bounds.v_min, bound_style);
  pv.hline(out, bounds.v_max, bound_style);
  pu.hline(out, bounds.u_min, bound_style);
  pu.hline(out, bounds.u_max, bound_style);
  out += close_svg();
  return out;
}

}  // namespace

std::string trajectory_svg(const sim::SimTrace& trace, const sim::ScenarioSpec& spec) {
  const sim::SimTrace* traces[] = {&trace};
  const Panel p = map_panel(traces, spec);
  std::string out = open_svg(kWidth, kHeight);
  p.frame(out, "Trajectories", "x [m]", "y [m]");
  target_disc(out, p, spec);
  const Columns c = columns(trace);
  p.polyline(out, c.intr_x, c.intr_y, Line{kIntruderColor, 1.8, 1.0, false});
  p.polyline(out, c.own_x, c.own_y, Line{kOwnColor, 1.8, 1.0, false});
  if (!trace.records.empty()) {
    const sim::Summary s = sim::metrics(trace);
    for (const sim::StepRecord& r : trace.records) {
      if (r.t != s.min_separation_time) continue;
      circle(out, p, r.intruder.x, r.intruder.y, spec.rho, "none", kIntruderColor, true);
      circle(out, p, r.own.x, r.own.y, 4.0 / p.scale_x(), kOwnColor, kOwnColor, false);
      circle(out, p, r.intruder.x, r.intruder.y, 4.0 / p.scale_x(), kIntruderColor,
             kIntruderColor, false);
      break;
    }
  }
  legend(out, 100, 60, {{kOwnColor, "ownship"}, {kIntruderColor, "intruder"},
                        {kTargetColor, "target"}});
  out += close_svg();
  return out;
}

std::string distance_svg(const sim::SimTrace& trace, double rho) {
  const sim::SimTrace* traces[] = {&trace};
  return distance_plot(traces, nullptr, rho);
}

std::string controls_svg(const sim::SimTrace& trace, const ControlBounds& bounds) {
  const sim::SimTrace* traces[] = {&trace};
  return controls_plot(traces, nullptr, bounds);
}

std::string overlay_trajectory_svg(const sim::MonteCarloReport& report,
                                   const sim::ScenarioSpec& spec) {
  std::vector<const sim::SimTrace*> traces;
  for (const sim::MonteCarloRun& run : report.runs) traces.push_back(&run.trace);
  traces.push_back(&report.nominal.trace);
  const Panel p = map_panel(traces, spec);
  traces.pop_back();

  std::string out = open_svg(kWidth, kHeight);
  p.frame(out, "Monte-Carlo trajectories", "x [m]", "y [m]");
  target_disc(out, p, spec);
  for (const sim::SimTrace* trace : traces) {
    const Columns c = columns(*trace);
    p.polyline(out, c.intr_x, c.intr_y, Line{kIntruderColor, 0.8, 0.6, false});
    p.polyline(out, c.own_x, c.own_y, Line{kOwnColor, 0.8, 0.6, false});
  }
  const Columns n = columns(report.nominal.trace);
  p.polyline(out, n.intr_x, n.intr_y, Line{"#000000", 1.4, 1.0, true});
  p.polyline(out, n.own_x, n.own_y, Line{"#000000", 1.4, 1.0, false});
  legend(out, 100, 60, {{kOwnColor, "ownship runs"}, {kIntruderColor, "intruder runs"},
                        {"#000000", "nominal"}, {kTargetColor, "target"}});
  out += close_svg();
  return out;
}

std::string overlay_distance_svg(const sim::MonteCarloReport& report, double rho) {
  std::vector<const sim::SimTrace*> traces;
  for (const sim::MonteCarloRun& run : report.runs) traces.push_back(&run.trace);
  return distance_plot(traces, &report.nominal.trace, rho);
}

std::string overlay_controls_svg(const sim::MonteCarloReport& report, const ControlBounds& bounds) {
  std::vector<const sim::SimTrace*> traces;
  for (const sim::MonteCarloRun& run : report.runs) traces.push_back(&run.trace);
  return controls_plot(traces, &report.nominal.trace, bounds);
}

}  // namespace intent_mpc::plot
