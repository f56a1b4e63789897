#include "ceqopt/report.hpp"

#include <json.hpp>

namespace ceqopt {

namespace {

using nlohmann::json;

json point_json(const Point& p) {
  json a = json::array();
  for (double v : p) a.push_back(v);
  return a;
}

json axis_json(const AxisData& ad, const std::vector<std::string>& vars) {
  json j;
  j["axis"] = vars[static_cast<std::size_t>(ad.axis)];
  j["det_s"] = ad.det_s;
  j["valid"] = ad.valid;
  j["f_prime"] = ad.f_prime ? json(*ad.f_prime) : json(nullptr);
  j["f_second"] = ad.f_second ? json(*ad.f_second) : json(nullptr);
  return j;
}

json stationary_json(const StationaryPoint& sp, const std::vector<std::string>& vars) {
  json j;
  j["point"] = point_json(sp.point);
  j["f"] = sp.f_value;
  j["residuals"] = sp.residuals;
  j["residual_norm"] = sp.residual_norm;
  j["label"] = label_name(sp.label);
  json axes = json::array();
  for (const AxisData& ad : sp.axes) axes.push_back(axis_json(ad, vars));
  j["axes"] = axes;
  j["notes"] = sp.notes;
  return j;
}

json lagrange_json(const LagrangePoint& lp) {
  json j;
  j["point"] = point_json(lp.point);
  j["multipliers"] = lp.multipliers;
  j["residual_norm"] = lp.residual_norm;
  return j;
}

const char* bound_kind_name(AxisBoundKind k) {
  switch (k) {
    case AxisBoundKind::Bounded: return "bounded";
    case AxisBoundKind::Unbounded: return "unbounded";
    case AxisBoundKind::DegenerateAxis: return "degenerate";
  }
  return "?";
}

}  // namespace

std::string emit_report_json(const RunReport& r) {
  json j;

  json problem;
  problem["variables"] = r.variables;
  problem["objective"] = r.objective_text;
  json cons = json::array();
  for (const auto& [text, value] : r.constraint_texts) {
    json c;
    c["expression"] = text;
    c["value"] = value;
    cons.push_back(c);
  }
  problem["constraints"] = cons;
  j["problem"] = problem;

  json config;
  json box = json::array();
  for (const auto& iv : r.config.box) box.push_back(json::array({iv[0], iv[1]}));
  config["box"] = box;
  config["grid_per_axis"] = r.config.grid_per_axis;
  config["extra_random_starts"] = r.config.extra_random_starts;
  config["rng_seed"] = r.config.rng_seed;
  config["newton_max_iter"] = r.config.newton_max_iter;
  config["residual_tol"] = r.config.residual_tol;
  config["step_tol"] = r.config.step_tol;
  config["dedupe_tol"] = r.config.dedupe_tol;
  config["backtrack_factor"] = r.config.backtrack_factor;
  config["min_step_multiplier"] = r.config.min_step_multiplier;
  config["command"] = r.command;
  config["axis"] = r.axis_name ? json(*r.axis_name) : json(nullptr);
  config["at"] = r.at ? point_json(*r.at) : json(nullptr);
  config["order"] = r.order ? json(*r.order) : json(nullptr);
  j["config"] = config;

  json sp = json::array();
  for (const StationaryPoint& s : r.stationary_points)
    sp.push_back(stationary_json(s, r.variables));
  j["stationary_points"] = sp;

  if (r.boundaries) {
    json b;
    json axes = json::array();
    for (const BoundaryAxisResult& ar : r.boundaries->axes) {
      json a;
      a["axis"] = r.variables[static_cast<std::size_t>(ar.axis)];
      a["status"] = bound_kind_name(ar.kind);
      json pts = json::array();
      for (const BoundaryPoint& bp : ar.points) {
        json q;
        q["point"] = point_json(bp.point);
        q["residual_norm"] = bp.residual_norm;
        pts.push_back(q);
      }
      a["points"] = pts;
      axes.push_back(a);
    }
    b["axes"] = axes;
    b["distinct_point_count"] = r.distinct_boundary_points;
    j["boundaries"] = b;
  } else {
    j["boundaries"] = nullptr;
  }

  json ty = json::array();
  for (const TaylorSeries& ts : r.taylor) {
    json t;
    t["axis"] = r.variables[static_cast<std::size_t>(ts.axis)];
    t["center"] = point_json(ts.center);
    t["order"] = ts.order;
    t["coefficients"] = ts.coefficients;
    t["singular_parametrization"] = ts.singular_parametrization;
    t["warnings"] = ts.warnings;
    ty.push_back(t);
  }
  j["taylor"] = ty;

  if (r.cross_validation || !r.lagrange_points.empty()) {
    json cv;
    json lag = json::array();
    for (const LagrangePoint& lp : r.lagrange_points) lag.push_back(lagrange_json(lp));
    cv["lagrange_points"] = lag;
    if (r.cross_validation) {
      json matched = json::array();
      for (const auto& m : r.cross_validation->matched) {
        json mm;
        mm["det_index"] = m.det_index;
        mm["lagrange_index"] = m.lagrange_index;
        mm["distance"] = m.distance;
        matched.push_back(mm);
      }
      cv["matched"] = matched;
      cv["det_only"] = r.cross_validation->det_only;
      cv["det_only_multiplier_residuals"] = r.cross_validation->det_only_multiplier_residuals;
      cv["lagrange_only"] = r.cross_validation->lagrange_only;
      cv["fully_matched"] = r.cross_validation->fully_matched();
    }
    j["cross_validation"] = cv;
  } else {
    j["cross_validation"] = nullptr;
  }

  j["diagnostics"] = r.diagnostics;
  j["timing_ms"] = r.timing_ms ? json(*r.timing_ms) : json(nullptr);

  return j.dump(2);
}

std::string emit_report_csv(const RunReport& r) {
  std::string out;
  auto add_point = [&](const Point& p) {
    for (double v : p) out += format_double(v) + ",";
  };

  if (r.command == "boundaries" && r.boundaries) {
    out += "axis,";
    for (const std::string& v : r.variables) out += v + ",";
    out += "residual_norm\n";
    for (const BoundaryAxisResult& ar : r.boundaries->axes) {
      if (ar.kind != AxisBoundKind::Bounded) {
        out += r.variables[static_cast<std::size_t>(ar.axis)] + "," +
               bound_kind_name(ar.kind) + "\n";
        continue;
      }
      for (const BoundaryPoint& bp : ar.points) {
        out += r.variables[static_cast<std::size_t>(ar.axis)] + ",";
        add_point(bp.point);
        out += format_double(bp.residual_norm) + "\n";
      }
    }
    return out;
  }

  if (r.command == "taylor") {
    out += "order,coefficient\n";
    for (const TaylorSeries& ts : r.taylor)
      for (std::size_t m = 0; m < ts.coefficients.size(); ++m)
        out += std::to_string(m) + "," + format_double(ts.coefficients[m]) + "\n";
    return out;
  }

  if (r.command == "lagrange") {
    for (const std::string& v : r.variables) out += v + ",";
    out += "residual_norm";
    for (std::size_t k = 0; k + 1 < r.variables.size(); ++k)
      out += ",lambda" + std::to_string(k + 1);
    out += "\n";
    for (const LagrangePoint& lp : r.lagrange_points) {
      add_point(lp.point);
      out += format_double(lp.residual_norm);
      for (double m : lp.multipliers) out += "," + format_double(m);
      out += "\n";
    }
    return out;
  }

  // solve / compare: the stationary-point table
  for (const std::string& v : r.variables) out += v + ",";
  out += "f,label,residual_norm\n";
  for (const StationaryPoint& sp : r.stationary_points) {
    add_point(sp.point);
    out += format_double(sp.f_value) + ",";
    out += std::string(label_name(sp.label)) + ",";
    out += format_double(sp.residual_norm) + "\n";
  }
  return out;
}

}  // namespace ceqopt
