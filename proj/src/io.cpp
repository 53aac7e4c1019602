#include "cbflab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cbflab {

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

json num(double v) { return round12(v); }

json vec_json(const Vector2d& v) { return json::array({num(v.x()), num(v.y())}); }

json mat_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

namespace {

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, std::string(what) + " must be finite");
  return v;
}

MatrixXd parse_matrix(const json& j, int rows, int min_cols, int max_cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw Error(ErrorCode::ParseError, std::string(what) + " must be a row-major nested array");
  int cols = -1;
  for (const auto& row : j) {
    if (!row.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " rows must be arrays");
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols)
      throw Error(ErrorCode::ParseError, std::string(what) + " rows have inconsistent lengths");
  }
  if (cols < min_cols || cols > max_cols)
    throw Error(ErrorCode::BadDimensions, std::string(what) + " has an unsupported column count");
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = finite_number(j[i][c], what);
  return m;
}

Vector2d parse_vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::ParseError, std::string(what) + " must have two entries");
  return {finite_number(j[0], what), finite_number(j[1], what)};
}

}  // namespace

ScenarioData parse_scenario_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "scenario must be a JSON object");
  for (const char* key : {"A", "B", "K", "obstacle", "alpha0"})
    if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing key ") + key);

  ScenarioData data;
  const MatrixXd a = parse_matrix(j["A"], 2, 2, 2, "A");
  data.system.A = a;
  data.system.B = parse_matrix(j["B"], 2, 1, 2, "B");
  const int m = data.system.input_dim();
  MatrixXd k = parse_matrix(j["K"], m, 2, 2, "K");
  data.system.K = k;

  const json& obs = j["obstacle"];
  if (obs.contains("circle")) {
    const json& c = obs["circle"];
    data.obstacle = Obstacle::circle(parse_vec2(c.at("center"), "circle center"),
                                     finite_number(c.at("radius"), "circle radius"));
  } else if (obs.contains("ellipse")) {
    const json& e = obs["ellipse"];
    data.obstacle = Obstacle::ellipse(parse_vec2(e.at("center"), "ellipse center"),
                                      parse_matrix(e.at("P"), 2, 2, 2, "ellipse P"));
  } else {
    throw Error(ErrorCode::ParseError, "obstacle must hold a circle or an ellipse");
  }

  data.config.alpha0 = finite_number(j["alpha0"], "alpha0");
  return data;
}

ScenarioData load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario_json(j);
}

json scenario_to_json(const ScenarioData& data) {
  json j;
  j["A"] = mat_json(data.system.A);
  j["B"] = mat_json(data.system.B);
  j["K"] = mat_json(data.system.K);
  if (data.obstacle.is_circle()) {
    j["obstacle"] = {{"circle", {{"center", vec_json(data.obstacle.center())},
                                 {"radius", num(data.obstacle.radius())}}}};
  } else {
    j["obstacle"] = {{"ellipse", {{"center", vec_json(data.obstacle.center())},
                                  {"P", mat_json(data.obstacle.shape())}}}};
  }
  j["alpha0"] = num(data.config.alpha0);
  return j;
}

json report_to_json(const EquilibriumReport& report) {
  json j;
  j["location"] = vec_json(report.location);
  j["indicator"] = num(report.indicator);
  j["jacobian"] = mat_json(report.jacobian);
  j["eigenvalues"] = json::array({json::array({num(report.eigenvalues[0].real()),
                                               num(report.eigenvalues[0].imag())}),
                                  json::array({num(report.eigenvalues[1].real()),
                                               num(report.eigenvalues[1].imag())})});
  j["kind"] = equilibrium_kind_name(report.kind);
  json prov;
  prov["path"] = provenance_path_name(report.provenance.path);
  if (report.provenance.path == Provenance::Path::EigenvectorTableRow &&
      report.provenance.table_row > 0)
    prov["table_row"] = report.provenance.table_row;
  j["provenance"] = prov;
  return j;
}

json diagnosis_to_json(const CaseDiagnosis& diagnosis) {
  json j;
  j["actuation"] = (diagnosis.actuation == CaseDiagnosis::Actuation::Underactuated)
                       ? "Underactuated"
                       : "FullyActuated";
  j["xc_eigenvector"] = diagnosis.xc_eigenvector;
  if (diagnosis.table_row) j["table_row"] = *diagnosis.table_row;
  if (diagnosis.condition12) j["condition12"] = condition_tag_name(*diagnosis.condition12);
  json roots = json::array();
  for (double d : diagnosis.delta_roots) roots.push_back(num(d));
  j["delta_roots"] = roots;
  json pot = json::array();
  for (const auto& p : diagnosis.potential)
    pot.push_back({{"location", vec_json(p.location)}, {"indicator", num(p.indicator)}});
  j["potential"] = pot;
  j["outside_paper_tables"] = diagnosis.outside_paper_tables;
  if (diagnosis.dual_path_checked) j["dual_path_agree"] = diagnosis.dual_path_agree;
  return j;
}

json assumption_report_to_json(const AssumptionReport& report) {
  json j;
  j["origin_interior"] = report.origin_interior;
  j["stabilizable"] = report.stabilizable;
  j["fully_actuated"] = report.fully_actuated;
  json feas;
  feas["holds"] = report.feasibility;
  feas["check"] = report.fully_actuated ? "trivial (invertible B)" : "sufficient-condition check";
  if (report.witness) {
    feas["T1"] = num(report.witness->t1);
    feas["T2"] = num(report.witness->t2);
    feas["T3"] = num(report.witness->t3);
  }
  j["feasibility"] = feas;
  if (report.derived_conditions) {
    j["derived_conditions"] = {{"gamma_beta_positive", report.derived_conditions->gamma_beta_positive},
                               {"discriminant_positive", report.derived_conditions->discriminant_positive},
                               {"gxc_nonzero", report.derived_conditions->gxc_nonzero}};
  }
  j["all_hold"] = report.all_hold();
  return j;
}

json basin_to_json(const BasinStatistics& stats) {
  json j;
  j["n"] = stats.n;
  j["to_origin"] = stats.to_origin;
  j["to_equilibrium"] = stats.to_equilibrium;
  j["undetermined"] = stats.undetermined;
  j["min_h"] = num(stats.min_h);
  return j;
}

json verdict_to_json(const Verdict& verdict) {
  json j;
  j["kind"] = verdict_kind_name(verdict.kind);
  if (verdict.kind == VerdictKind::ConvergedToEquilibrium)
    j["equilibrium_index"] = verdict.equilibrium_index;
  return j;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t,x1,x2,h,eta\n";
  char buf[200];
  for (const auto& s : trajectory.samples) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g\n", s.t, s.x.x(), s.x.y(), s.h,
                  s.eta);
    out += buf;
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write file: " + path);
  out << content;
}

}  // namespace cbflab
