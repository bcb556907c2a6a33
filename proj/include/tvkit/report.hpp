#pragma once

// JSON and CSV rendering for results. Reals are rounded to 12 significant
// digits before serialization so repeated runs produce identical bytes.

#include <tvkit/besov.hpp>
#include <tvkit/bounds.hpp>
#include <tvkit/tv.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

namespace tvkit {

using Json = nlohmann::ordered_json;

/// 12 significant digits; non-finite values become the strings "inf", "-inf", "nan".
inline Json json_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return std::strtod(detail::format_real(v).c_str(), nullptr);
}

inline Json json_reals(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_real(x));
  return a;
}

inline std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return detail::format_real(v);
}

inline Json to_json(const TVResult& r) {
  return Json{{"value", json_real(r.value)}, {"method", to_string(r.method)}, {"error_estimate", json_real(r.error_estimate)}};
}

inline Json to_json(const BesovEstimate& e) {
  return Json{{"alpha", json_real(e.alpha)},
              {"constant_C", json_real(e.constant_C)},
              {"kind", e.kind == EstimateKind::certified ? "certified" : "fitted"},
              {"residual", json_real(e.residual)},
              {"alpha_std_error", json_real(e.alpha_std_error)},
              {"points", e.points}};
}

inline Json to_json(const PowerFit& f) {
  return Json{{"slope", json_real(f.slope)},
              {"slope_std_error", json_real(f.slope_std_error)},
              {"intercept", json_real(f.intercept)},
              {"residual", json_real(f.residual)},
              {"points", f.points}};
}

inline Json to_json(const BoundReport& r) {
  return Json{{"alpha", json_real(r.alpha)},
              {"C_f", json_real(r.C_f)},
              {"C_g", json_real(r.C_g)},
              {"abs_moment", json_real(r.abs_moment)},
              {"sigma_opt", json_real(r.sigma_opt)},
              {"sigma_min", json_real(r.sigma_min)},
              {"constant_C", json_real(r.constant_C)},
              {"l1", json_real(r.l1)},
              {"raw_bound", json_real(r.raw_bound)},
              {"clamped_bound", json_real(r.clamped_bound)},
              {"delta1_bound", json_real(r.delta1_bound)},
              {"delta2_bound", json_real(r.delta2_bound)},
              {"delta3_bound", json_real(r.delta3_bound)},
              {"min_sum_bound", json_real(r.min_sum_bound)},
              {"degenerate", r.degenerate}};
}

inline Json to_json(const PieceConstant& p) {
  return Json{{"a", json_real(p.a)}, {"b", json_real(p.b)}, {"A", json_real(p.A)},    {"L", json_real(p.L)},
              {"C_f", json_real(p.C_f)}, {"m", p.m},        {"K", json_real(p.K)},    {"term", json_real(p.term)},
              {"tail", p.tail}};
}

inline Json to_json(const PartitionCertificate& c) {
  Json pieces = Json::array();
  for (const auto& p : c.pieces) pieces.push_back(to_json(p));
  return Json{{"breakpoints", json_reals(c.breakpoints)},
              {"C1", json_real(c.C1)},
              {"C2", json_real(c.C2)},
              {"C3", json_real(c.C3)},
              {"truncation_bound", json_real(c.truncation_bound)},
              {"right_segments", c.right_segments},
              {"left_segments", c.left_segments},
              {"alpha", json_real(c.alpha)},
              {"m_max", c.m_max},
              {"C_total", json_real(c.C_total)},
              {"C_all_u", json_real(c.C_all_u())},
              {"pieces", pieces}};
}

inline Json to_json(const VandermondeCheck& v) {
  return Json{{"n", v.n},
              {"W", v.W.str()},
              {"Delta", v.Delta.str()},
              {"dense_determinant", v.dense_determinant.str()},
              {"nonzero", v.nonzero},
              {"agrees", v.agrees}};
}

/// Header plus rows of already formatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Comma separated, LF line endings.
inline void write_csv(std::ostream& os, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

/// Two whitespace separated columns, '#' comment header.
inline void write_plot_data(std::ostream& os, const std::string& comment, const std::vector<double>& x,
                            const std::vector<double>& y) {
  os << "# " << comment << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) os << csv_real(x[i]) << ' ' << csv_real(y[i]) << '\n';
}

inline Table curve_table(const ModulusCurve& c) {
  Table t{{"u", "delta", "error_estimate"}, {}};
  for (std::size_t i = 0; i < c.u_grid.size(); ++i)
    t.add({csv_real(c.u_grid[i]), csv_real(c.delta_values[i]), csv_real(c.error_estimates[i])});
  return t;
}

inline Json to_json(const ModulusCurve& c) {
  return Json{{"map", c.map_description},
              {"model", c.model_description},
              {"mass", json_real(c.mass)},
              {"u", json_reals(c.u_grid)},
              {"delta", json_reals(c.delta_values)},
              {"error_estimate", json_reals(c.error_estimates)}};
}

}  // namespace tvkit
