#include "cbflab/portrait.hpp"

#include <cmath>
#include <cstdio>

#include "cbflab/filter.hpp"

namespace cbflab {

namespace {

// Fixed 9-significant-digit formatting keeps the artifacts byte-stable.
std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct Mapper {
  Window w;
  double width, height;
  double sx(double x) const { return (x - w.x_min) / (w.x_max - w.x_min) * width; }
  double sy(double y) const { return (w.y_max - y) / (w.y_max - w.y_min) * height; }
};

const char* kind_class(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Saddle: return "eq-saddle";
    case EquilibriumKind::AsymptoticallyStable: return "eq-stable";
    case EquilibriumKind::Degenerate: return "eq-degenerate";
    case EquilibriumKind::Unstable: return "eq-unstable";
  }
  return "eq-unknown";
}

const char* kind_color(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Saddle: return "#c0392b";
    case EquilibriumKind::AsymptoticallyStable: return "#1e8449";
    case EquilibriumKind::Degenerate: return "#d68910";
    case EquilibriumKind::Unstable: return "#8e44ad";
  }
  return "#000000";
}

}  // namespace

PortraitSpec default_portrait_spec(const Scenario& scenario) {
  const Obstacle& obs = scenario.obstacle();
  const double reach = obs.center().norm() + 2.5 * obs.reference_radius();
  const double w = std::max(2.0, 1.25 * reach);
  PortraitSpec spec;
  spec.window = {-w, w, -w, w};
  spec.grid = 40;
  const double ring = 0.92 * w;
  for (int i = 0; i < 12; ++i) {
    const double th = 6.283185307179586 * i / 12;
    const Vector2d x0(ring * std::cos(th), ring * std::sin(th));
    if (obs.h(x0) >= 0.0) spec.trajectories.push_back(x0);
  }
  return spec;
}

PortraitResult render_portrait(const Scenario& scenario, const PortraitSpec& spec) {
  const Obstacle& obs = scenario.obstacle();
  const Window& w = spec.window;
  if (!(w.x_min < w.x_max && w.y_min < w.y_max))
    throw Error(ErrorCode::PreconditionViolated, "window must be non-empty");

  // The window must see the whole story: obstacle and origin.
  const double ref = obs.reference_radius();
  const bool origin_in = (0.0 > w.x_min && 0.0 < w.x_max && 0.0 > w.y_min && 0.0 < w.y_max);
  const Vector2d c = obs.center();
  const bool obstacle_in = (c.x() - ref >= w.x_min && c.x() + ref <= w.x_max &&
                            c.y() - ref >= w.y_min && c.y() + ref <= w.y_max);
  if (!origin_in || !obstacle_in)
    throw Error(ErrorCode::WindowExcludesObstacle, "window must contain the obstacle and the origin");

  PortraitResult out;
  out.reports = analyze_equilibria(scenario).reports;

  const int n = std::max(2, spec.grid);
  const double dx = (w.x_max - w.x_min) / (n - 1);
  const double dy = (w.y_max - w.y_min) / (n - 1);

  // Field CSV: same evaluation path as the simulator.
  std::string csv = "x1,x2,F1,F2\n";
  std::vector<std::array<double, 4>> glyphs;  // x, y, F1, F2
  double max_mag = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Vector2d x(w.x_min + ix * dx, w.y_min + iy * dy);
      Vector2d f = Vector2d::Zero();
      bool ok = true;
      try {
        f = closed_loop_field(scenario, x);
      } catch (const Error&) {
        ok = false;  // degenerate gradient inside the obstacle
      }
      csv += fmt9(x.x()) + "," + fmt9(x.y()) + "," + fmt9(f.x()) + "," + fmt9(f.y()) + "\n";
      if (ok) {
        glyphs.push_back({x.x(), x.y(), f.x(), f.y()});
        max_mag = std::max(max_mag, f.norm());
      }
    }
  }
  out.field_csv = std::move(csv);

  Mapper map{w, 760.0, 760.0 * (w.y_max - w.y_min) / (w.x_max - w.x_min)};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt9(map.width) + "\" height=\"" +
         fmt9(map.height) + "\" viewBox=\"0 0 " + fmt9(map.width) + " " + fmt9(map.height) + "\">\n";
  svg += "<rect width=\"" + fmt9(map.width) + "\" height=\"" + fmt9(map.height) +
         "\" fill=\"#ffffff\"/>\n";

  // Normalized field glyphs; magnitude encoded by opacity.
  const double glyph_len = 0.38 * std::min(dx, dy);
  svg += "<g stroke=\"#3b6ea5\" stroke-width=\"1\">\n";
  for (const auto& g : glyphs) {
    const double mag = std::hypot(g[2], g[3]);
    if (mag <= 0.0 || max_mag <= 0.0) continue;
    const double ux = g[2] / mag, uy = g[3] / mag;
    const double opacity = 0.25 + 0.75 * (mag / max_mag);
    const double x0 = g[0] - 0.5 * glyph_len * ux, y0 = g[1] - 0.5 * glyph_len * uy;
    const double x1 = g[0] + 0.5 * glyph_len * ux, y1 = g[1] + 0.5 * glyph_len * uy;
    svg += "<line x1=\"" + fmt9(map.sx(x0)) + "\" y1=\"" + fmt9(map.sy(y0)) + "\" x2=\"" +
           fmt9(map.sx(x1)) + "\" y2=\"" + fmt9(map.sy(y1)) + "\" stroke-opacity=\"" +
           fmt9(opacity) + "\"/>\n";
    svg += "<circle cx=\"" + fmt9(map.sx(x1)) + "\" cy=\"" + fmt9(map.sy(y1)) + "\" r=\"1.4\" fill=\"#3b6ea5\" fill-opacity=\"" +
           fmt9(opacity) + "\"/>\n";
  }
  svg += "</g>\n";

  // Obstacle outline.
  const double px_per_x = map.width / (w.x_max - w.x_min);
  const double px_per_y = map.height / (w.y_max - w.y_min);
  if (obs.is_circle()) {
    svg += "<ellipse class=\"obstacle\" cx=\"" + fmt9(map.sx(c.x())) + "\" cy=\"" +
           fmt9(map.sy(c.y())) + "\" rx=\"" + fmt9(obs.radius() * px_per_x) + "\" ry=\"" +
           fmt9(obs.radius() * px_per_y) +
           "\" fill=\"#dddddd\" stroke=\"#555555\" stroke-width=\"1.5\"/>\n";
  } else {
    const EigenPair2 pe = eigen2(obs.shape());
    const double a1 = 1.0 / std::sqrt(pe.lambda1.real());  // larger semi-axis
    const double a2 = 1.0 / std::sqrt(pe.lambda2.real());
    const double ang = std::atan2(pe.v1.y(), pe.v1.x()) * 180.0 / 3.14159265358979323846;
    svg += "<ellipse class=\"obstacle\" cx=\"0\" cy=\"0\" rx=\"" + fmt9(a1 * px_per_x) +
           "\" ry=\"" + fmt9(a2 * px_per_y) +
           "\" fill=\"#dddddd\" stroke=\"#555555\" stroke-width=\"1.5\" transform=\"translate(" +
           fmt9(map.sx(c.x())) + " " + fmt9(map.sy(c.y())) + ") rotate(" + fmt9(-ang) + ")\"/>\n";
  }

  // Trajectories.
  svg += "<g fill=\"none\" stroke=\"#222222\" stroke-width=\"1.2\">\n";
  for (const Vector2d& x0 : spec.trajectories) {
    if (obs.h(x0) < 0.0) continue;
    IntegratorConfig cfg = spec.integrator;
    Trajectory traj = integrate(scenario, x0, cfg, {});
    const size_t stride = std::max<size_t>(1, traj.samples.size() / 1500);
    std::string pts;
    for (size_t i = 0; i < traj.samples.size(); i += stride) {
      const Vector2d& x = traj.samples[i].x;
      if (x.x() < w.x_min || x.x() > w.x_max || x.y() < w.y_min || x.y() > w.y_max) continue;
      pts += fmt9(map.sx(x.x())) + "," + fmt9(map.sy(x.y())) + " ";
    }
    if (!pts.empty()) svg += "<polyline points=\"" + pts + "\"/>\n";
  }
  svg += "</g>\n";

  // Equilibrium markers, colored by stability kind.
  for (const auto& rep : out.reports) {
    const double cx = map.sx(rep.location.x());
    const double cy = map.sy(rep.location.y());
    svg += std::string("<g class=\"") + kind_class(rep.kind) + "\" fill=\"" +
           kind_color(rep.kind) + "\">";
    if (rep.kind == EquilibriumKind::Saddle) {
      svg += "<path d=\"M " + fmt9(cx) + " " + fmt9(cy - 6.0) + " L " + fmt9(cx + 6.0) + " " +
             fmt9(cy) + " L " + fmt9(cx) + " " + fmt9(cy + 6.0) + " L " + fmt9(cx - 6.0) + " " +
             fmt9(cy) + " Z\"/>";
    } else if (rep.kind == EquilibriumKind::AsymptoticallyStable) {
      svg += "<circle cx=\"" + fmt9(cx) + "\" cy=\"" + fmt9(cy) + "\" r=\"5.5\"/>";
    } else {
      svg += "<rect x=\"" + fmt9(cx - 5.0) + "\" y=\"" + fmt9(cy - 5.0) +
             "\" width=\"10\" height=\"10\"/>";
    }
    svg += "</g>\n";
  }

  // Origin marker.
  svg += "<g class=\"origin\" stroke=\"#000000\" stroke-width=\"2\">";
  svg += "<line x1=\"" + fmt9(map.sx(0.0) - 6.0) + "\" y1=\"" + fmt9(map.sy(0.0)) + "\" x2=\"" +
         fmt9(map.sx(0.0) + 6.0) + "\" y2=\"" + fmt9(map.sy(0.0)) + "\"/>";
  svg += "<line x1=\"" + fmt9(map.sx(0.0)) + "\" y1=\"" + fmt9(map.sy(0.0) - 6.0) + "\" x2=\"" +
         fmt9(map.sx(0.0)) + "\" y2=\"" + fmt9(map.sy(0.0) + 6.0) + "\"/>";
  svg += "</g>\n</svg>\n";

  out.svg = std::move(svg);
  return out;
}

}  // namespace cbflab
