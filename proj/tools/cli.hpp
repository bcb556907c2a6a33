#pragma once

// tvkit command line: argument handling, the commands and experiment suites,
// and the run directory layout <out>/<command>-<timestamp>/.

#include <tvkit/tvkit.hpp>

#include <CLI11.hpp>

#include <boost/version.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace tvkit::cli {

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::string suite;
  std::string f, g, poly, trig;
  std::string density = "gauss";
  std::string u;
  std::string t;
  std::vector<double> at;
  std::string deltas = "1e-4:1e-1:10";
  double tol = kDefaultTol;
  double tail_tol = 1e-8;
  std::int64_t mc_samples = 0;
  int bins = 0;
  std::uint64_t seed = 1;
  std::string out = "runs";
  std::string format = "both";
  int m = 2;
  int d = 1;
  int n = 8;
  std::optional<double> cf, cg, alpha;
};

struct Grid {
  double lo = 0.0, hi = 0.0;
  int points = 0;
};

/// "lo:hi:points"
inline Grid parse_grid(const std::string& text, const std::string& flag) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) throw input_error(flag + " expects lo:hi:points, got '" + text + "'");
  Grid g{detail::parse_real(parts[0]), detail::parse_real(parts[1]), 0};
  const double p = detail::parse_real(parts[2]);
  if (p < 1 || p > 100000 || p != std::floor(p)) throw input_error(flag + ": bad point count '" + parts[2] + "'");
  g.points = static_cast<int>(p);
  if (!(g.lo <= g.hi)) throw input_error(flag + ": lo must not exceed hi in '" + text + "'");
  return g;
}

inline std::vector<double> linear_points(const Grid& g) {
  std::vector<double> v;
  for (int i = 0; i < g.points; ++i) v.push_back(g.points == 1 ? g.lo : g.lo + (g.hi - g.lo) * i / (g.points - 1));
  return v;
}

inline std::vector<double> geometric_points(const Grid& g, const std::string& flag) {
  if (!(g.lo > 0.0)) throw input_error(flag + ": lo must be > 0 for a geometric grid");
  return geometric_grid(g.lo, g.hi, g.points);
}

using Map = std::variant<Polynomial, TrigPolynomial>;

inline Map parse_map(const std::string& text) {
  if (text.find("cos") != std::string::npos || text.find("sin") != std::string::npos) return parse_trig_polynomial(text);
  return parse_polynomial(text);
}

inline Map single_map(const RunConfig& c) {
  if (!c.trig.empty()) return parse_trig_polynomial(c.trig);
  if (!c.poly.empty()) return parse_map(c.poly);
  if (!c.f.empty()) return parse_map(c.f);
  throw input_error("missing map: give --poly or --trig");
}

inline Polynomial require_polynomial(const std::string& text, const std::string& flag) {
  if (text.empty()) throw input_error("missing " + flag);
  const Map m = parse_map(text);
  if (!std::holds_alternative<Polynomial>(m)) throw unsupported_error(flag + " must be an algebraic polynomial here");
  return std::get<Polynomial>(m);
}

inline std::string describe(const Map& m) {
  return std::visit([](const auto& f) { return to_string(f); }, m);
}

/// Everything a command produces before it is written to disk.
struct Output {
  Json result = Json::object();
  Table table;
  std::string plot_comment;
  std::vector<double> plot_x, plot_y;
  std::string summary;
};

inline MonteCarloOptions mc_options(const RunConfig& c) {
  MonteCarloOptions o;
  o.n_samples = c.mc_samples;
  o.n_bins = c.bins;
  o.seed = c.seed;
  return o;
}

inline Json config_json(const RunConfig& c) {
  Json j{{"command", c.command}};
  if (!c.suite.empty()) j["suite"] = c.suite;
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  put("f", c.f);
  put("g", c.g);
  put("poly", c.poly);
  put("trig", c.trig);
  put("density", c.density);
  put("u", c.u);
  put("t", c.t);
  if (!c.at.empty()) j["at"] = json_reals(c.at);
  j["deltas"] = c.deltas;
  j["tol"] = json_real(c.tol);
  j["tail_tol"] = json_real(c.tail_tol);
  j["mc_samples"] = c.mc_samples;
  j["bins"] = c.bins;
  j["seed"] = c.seed;
  j["m"] = c.m;
  j["d"] = c.d;
  j["n"] = c.n;
  if (c.cf) j["cf"] = json_real(*c.cf);
  if (c.cg) j["cg"] = json_real(*c.cg);
  if (c.alpha) j["alpha"] = json_real(*c.alpha);
  j["format"] = c.format;
  return j;
}

// ---------------------------------------------------------------------------
// commands

template <UnivariateMap F>
Output pushforward_output(const F& f, const DensityModel& model, const RunConfig& c) {
  Output o;
  if (!c.at.empty()) {
    // Pointwise evaluation; a critical value is a numeric failure.
    o.table = {{"t", "density"}, {}};
    Json values = Json::array();
    for (double t : c.at) {
      const double q = pushforward_density(f, model, t);
      o.table.add({csv_real(t), csv_real(q)});
      values.push_back(json_real(q));
      o.plot_x.push_back(t);
      o.plot_y.push_back(q);
    }
    o.result = Json{{"map", to_string(f)}, {"model", model.describe()}, {"t", json_reals(c.at)}, {"density", values}};
    o.plot_comment = "t density";
    o.summary = "evaluated " + std::to_string(c.at.size()) + " points";
    return o;
  }
  const PushforwardDensity<F> q(f, model);
  const Interval range = q.value_range();
  const Grid grid = c.t.empty() ? Grid{range.lo, range.hi, 201} : parse_grid(c.t, "--t");
  const auto ts = linear_points(grid);
  const TVResult mass = tv_terms({q.as_term()}, c.tol);
  o.table = {{"t", "density"}, {}};
  for (double t : ts) {
    const double v = q.value(t);
    o.table.add({csv_real(t), csv_real(v)});
    o.plot_x.push_back(t);
    o.plot_y.push_back(v);
  }
  o.result = Json{{"map", to_string(f)},
                  {"model", model.describe()},
                  {"value_range", json_reals({range.lo, range.hi})},
                  {"critical_values", json_reals(q.critical_values())},
                  {"pieces", q.pieces().size()},
                  {"source_mass", json_real(q.total_mass())},
                  {"integrated_mass", json_real(mass.value)},
                  {"integration_error", json_real(mass.error_estimate)},
                  {"tail_mass", json_real(q.tail_mass())}};
  o.plot_comment = "t density";
  o.summary = "integrated mass " + detail::format_real(mass.value);
  return o;
}

inline Output cmd_pushforward(const RunConfig& c) {
  const DensityModel model = parse_density(c.density);
  return std::visit([&](const auto& f) { return pushforward_output(f, model, c); }, single_map(c));
}

inline Output cmd_tv(const RunConfig& c) {
  if (c.f.empty() || c.g.empty()) throw input_error("tv needs --f and --g");
  const DensityModel model = parse_density(c.density);
  const Map mf = parse_map(c.f), mg = parse_map(c.g);
  return std::visit(
      [&](const auto& f, const auto& g) {
        using FF = std::decay_t<decltype(f)>;
        using GG = std::decay_t<decltype(g)>;
        Output o;
        const PushforwardDensity<FF> qf(f, model);
        const PushforwardDensity<GG> qg(g, model);
        const TVResult quad = tv_quadrature(qf, qg, c.tol);
        o.result["f"] = to_string(f);
        o.result["g"] = to_string(g);
        o.result["model"] = model.describe();
        o.result["quadrature"] = to_json(quad);
        o.table = {{"method", "value", "error_estimate"}, {}};
        o.table.add({to_string(quad.method), csv_real(quad.value), csv_real(quad.error_estimate)});
        o.summary = "tv " + detail::format_real(quad.value);
        if (c.mc_samples > 0) {
          const TVResult mc = tv_monte_carlo(f, model, g, model, mc_options(c));
          o.result["monte_carlo"] = to_json(mc);
          o.result["agree_within_3_errors"] =
              std::abs(mc.value - quad.value) <= 3.0 * (mc.error_estimate + quad.error_estimate);
          o.table.add({to_string(mc.method), csv_real(mc.value), csv_real(mc.error_estimate)});
          o.summary += ", monte carlo " + detail::format_real(mc.value);
        }
        const Interval rf = qf.value_range(), rg = qg.value_range();
        const auto ts = linear_points({std::min(rf.lo, rg.lo), std::max(rf.hi, rg.hi), 401});
        for (double t : ts) {
          o.plot_x.push_back(t);
          o.plot_y.push_back(qf.value(t) - qg.value(t));
        }
        o.plot_comment = "t q_f(t)-q_g(t)";
        return o;
      },
      mf, mg);
}

inline Json fit_or_note(const ModulusCurve& curve, Interval window) {
  try {
    return to_json(fit_smoothness(curve, window));
  } catch (const input_error& e) {
    return Json{{"note", e.what()}};
  }
}

inline Output curve_output(const ModulusCurve& curve) {
  Output o;
  o.table = curve_table(curve);
  o.plot_x = curve.u_grid;
  o.plot_y = curve.delta_values;
  o.plot_comment = "u delta(u)";
  o.result["curve"] = to_json(curve);
  o.result["fit"] = fit_or_note(curve, {curve.u_grid.front(), curve.u_grid.back()});
  if (o.result["fit"].contains("alpha"))
    o.summary = "fitted alpha " + o.result["fit"]["alpha"].dump() + ", C " + o.result["fit"]["constant_C"].dump();
  else
    o.summary = "no fit: " + o.result["fit"]["note"].get<std::string>();
  return o;
}

inline Output cmd_modulus(const RunConfig& c) {
  const DensityModel model = parse_density(c.density);
  const auto grid = geometric_points(parse_grid(c.u.empty() ? "1e-4:1e-1:20" : c.u, "--u"), "--u");
  const ModulusCurve curve =
      std::visit([&](const auto& f) { return modulus_curve(f, model, grid, c.tol); }, single_map(c));
  return curve_output(curve);
}

inline Output cmd_certify(const RunConfig& c) {
  const Polynomial f = require_polynomial(!c.poly.empty() ? c.poly : c.f, "--poly");
  const DensityModel model = parse_density(c.density);
  const PartitionCertificate cert = certified_modulus_constant(f, model, c.tail_tol);
  Output o;
  o.result = Json{{"map", to_string(f)}, {"model", model.describe()}, {"certificate", to_json(cert)}};
  o.table = {{"a", "b", "A", "L", "C_f", "m", "K", "term", "tail"}, {}};
  for (const auto& p : cert.pieces) {
    o.table.add({csv_real(p.a), csv_real(p.b), csv_real(p.A), csv_real(p.L), csv_real(p.C_f), std::to_string(p.m),
                 csv_real(p.K), csv_real(p.term), p.tail ? "1" : "0"});
    o.plot_x.push_back(0.5 * (p.a + p.b));
    o.plot_y.push_back(p.term);
  }
  o.plot_comment = "piece_midpoint term";
  o.summary = "alpha " + detail::format_real(cert.alpha) + ", C " + detail::format_real(cert.C_total);
  return o;
}

inline Json audit_json(const Theorem1Audit& a) {
  Json j{{"bound", to_json(a.bound)},
         {"measured",
          {{"tv", to_json(a.tv)},
           {"delta1", to_json(a.delta1)},
           {"delta2", to_json(a.delta2)},
           {"delta3", json_real(a.delta3)},
           {"sum", json_real(a.diagnostic_sum)},
           {"link_tolerance", json_real(a.link_tolerance)}}},
         {"checks",
          {{"tv_below_sum", a.tv_below_sum}, {"sum_below_bound", a.sum_below_bound}, {"mc_agrees", a.mc_agrees}}}};
  if (!a.cert_f.breakpoints.empty() || a.cert_f.C_total > 0.0) {
    auto brief = [](const PartitionCertificate& p) {
      return Json{{"alpha", json_real(p.alpha)}, {"C_total", json_real(p.C_total)}, {"C_all_u", json_real(p.C_all_u())}};
    };
    j["certificates"] = {{"f", brief(a.cert_f)}, {"g", brief(a.cert_g)}};
  }
  if (a.mc) j["monte_carlo"] = to_json(*a.mc);
  return j;
}

inline AuditOptions audit_options(const RunConfig& c) {
  AuditOptions o;
  o.tol = std::max(c.tol, 1e-12);
  o.tail_tol = c.tail_tol;
  o.mc = mc_options(c);
  const int given = int(c.cf.has_value()) + int(c.cg.has_value()) + int(c.alpha.has_value());
  if (given == 3) o.constants = AuditOptions::Constants{*c.cf, *c.cg, *c.alpha};
  else if (given != 0) throw input_error("--cf, --cg and --alpha must be given together");
  return o;
}

inline Output cmd_bound(const RunConfig& c) {
  const Polynomial f = require_polynomial(c.f, "--f"), g = require_polynomial(c.g, "--g");
  const DensityModel model = parse_density(c.density);
  const Theorem1Audit a = theorem1_audit(f, g, model, audit_options(c));
  Output o;
  o.result = Json{{"f", to_string(f)}, {"g", to_string(g)}, {"model", model.describe()}};
  const Json audit = audit_json(a);
  for (const auto& [k, v] : audit.items()) o.result[k] = v;
  o.table = {{"quantity", "value"}, {}};
  for (const auto& [k, v] : o.result["bound"].items()) o.table.add({k, v.is_number() ? csv_real(v.get<double>()) : v.dump()});
  o.table.add({"tv", csv_real(a.tv.value)});
  o.table.add({"delta1", csv_real(a.delta1.value)});
  o.table.add({"delta2", csv_real(a.delta2.value)});
  o.table.add({"delta3", csv_real(a.delta3)});
  if (!a.bound.degenerate) {
    for (double s : geometric_grid(a.bound.sigma_opt / 10.0, a.bound.sigma_opt * 10.0, 41)) {
      double d1, d2, d3;
      o.plot_x.push_back(s);
      o.plot_y.push_back(detail::term_bounds(a.bound.C_f, a.bound.C_g, a.bound.alpha, a.bound.abs_moment, a.bound.l1, s,
                                             &d1, &d2, &d3));
    }
  }
  o.plot_comment = "sigma delta1_bound+delta2_bound+delta3_bound";
  o.summary = "l1 " + detail::format_real(a.bound.l1) + ", tv " + detail::format_real(a.tv.value) + ", bound " +
              detail::format_real(a.bound.clamped_bound);
  return o;
}

// ---------------------------------------------------------------------------
// experiment suites

inline Json rate_json(const RateStudy& s) {
  return Json{{"perturbation", to_string(s.perturbation)},
              {"fit_delta", to_json(s.fit_delta)},
              {"fit_l1", to_json(s.fit_l1)},
              {"lower", json_real(s.lower)},
              {"upper", json_real(s.upper)},
              {"within", s.within()}};
}

inline Output suite_gauss_poly(const RunConfig& c) {
  const DensityModel model = parse_density(c.density);
  const auto deltas = geometric_points(parse_grid(c.deltas, "--deltas"), "--deltas");
  const std::vector<Perturbation> kinds{Perturbation::all_coefficients, Perturbation::linear, Perturbation::constant};
  std::vector<RateStudy> studies;
  for (auto p : kinds) studies.push_back(gauss_poly_rates(c.m, deltas, p, model, c.tol));
  Output o;
  o.table = {{"delta", "l1", "tv_all_coefficients", "error", "tv_linear", "tv_constant"}, {}};
  if (c.mc_samples > 0) {
    o.table.header.push_back("tv_mc");
    o.table.header.push_back("mc_error");
  }
  bool mc_ok = true;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const auto& r = studies[0].rows[i];
    std::vector<std::string> row{csv_real(r.delta), csv_real(r.l1), csv_real(r.tv.value), csv_real(r.tv.error_estimate),
                                 csv_real(studies[1].rows[i].tv.value), csv_real(studies[2].rows[i].tv.value)};
    if (c.mc_samples > 0) {
      const Polynomial f = perturbed_power(c.m, 0.0, kinds[0]), g = perturbed_power(c.m, r.delta, kinds[0]);
      const TVResult mc = tv_monte_carlo(f, model, g, model, mc_options(c));
      mc_ok = mc_ok && std::abs(mc.value - r.tv.value) <= 3.0 * (mc.error_estimate + r.tv.error_estimate);
      row.push_back(csv_real(mc.value));
      row.push_back(csv_real(mc.error_estimate));
    }
    o.table.add(row);
    o.plot_x.push_back(r.delta);
    o.plot_y.push_back(r.tv.value);
  }
  Json rates = Json::array();
  for (const auto& s : studies) rates.push_back(rate_json(s));
  o.result = Json{{"m", c.m}, {"model", model.describe()}, {"primary", rate_json(studies[0])}, {"studies", rates}};
  if (c.mc_samples > 0) o.result["mc_agrees"] = mc_ok;
  o.plot_comment = "delta tv";
  o.summary = "slope " + detail::format_real(studies[0].fit_delta.slope) + (studies[0].within() ? " (within" : " (outside") +
              " [" + detail::format_real(studies[0].lower) + ", " + detail::format_real(studies[0].upper) + "])";
  return o;
}

inline Output suite_trig_poly(const RunConfig& c) {
  const TrigPolynomial f = parse_trig_polynomial(c.trig.empty() ? "cos=0,1,0;sin=0,0,0.5" : c.trig);
  const auto grid = geometric_points(parse_grid(c.u.empty() ? "1e-4:1e-2:12" : c.u, "--u"), "--u");
  const ModulusCurve curve = trig_modulus_experiment(f, grid, c.tol);
  Output o = curve_output(curve);
  const PushforwardDensity<TrigPolynomial> q(f, DensityModel::standard_gaussian());
  int order = 1;
  for (const auto& s : q.singularities()) order = std::max(order, s.order);
  const int n = f.degree();
  o.result["degree"] = n;
  o.result["kappa"] = order - 1;
  o.result["kappa_bound"] = 2 * n - 1;
  o.result["exponent_floor"] = json_real(1.0 / (2 * n));
  if (o.result["fit"].contains("alpha"))
    o.result["above_floor"] = o.result["fit"]["alpha"].get<double>() >= 1.0 / (2 * n) - 0.05;
  return o;
}

inline Output suite_radial(const RunConfig& c) {
  const auto grid = geometric_points(parse_grid(c.u.empty() ? "1e-4:1e-2:12" : c.u, "--u"), "--u");
  const ModulusCurve curve = radial_modulus_curve(c.d, c.m, grid, c.tol);
  Output o = curve_output(curve);
  const double expected = std::min(1.0, static_cast<double>(c.d) / c.m);
  o.result["d"] = c.d;
  o.result["m"] = c.m;
  o.result["expected_alpha"] = json_real(expected);
  if (o.result["fit"].contains("alpha"))
    o.result["within_0.1"] = std::abs(o.result["fit"]["alpha"].get<double>() - expected) <= 0.1;
  if (c.mc_samples > 0) {
    const double u = grid.back();
    const Sampler a = radial_sampler(c.d, c.m), b = radial_sampler(c.d, c.m, u);
    const TVResult mc = tv_histogram_mc(a, b, auto_range(a, b, c.seed), mc_options(c));
    o.result["monte_carlo"] = {{"u", json_real(u)},
                               {"tv", to_json(mc)},
                               {"agrees", std::abs(mc.value - curve.delta_values.back()) <=
                                              3.0 * (mc.error_estimate + curve.error_estimates.back())}};
  }
  return o;
}

inline Output suite_theorem1_audit(const RunConfig& c) {
  const DensityModel model = parse_density(c.density);
  std::vector<std::pair<Polynomial, Polynomial>> pairs;
  std::vector<double> deltas;
  if (!c.f.empty() || !c.g.empty()) {
    pairs.emplace_back(require_polynomial(c.f, "--f"), require_polynomial(c.g, "--g"));
    deltas.push_back(0.0);
  } else {
    deltas = geometric_points(parse_grid(c.deltas, "--deltas"), "--deltas");
    for (double d : deltas) pairs.emplace_back(perturbed_power(c.m, 0.0, Perturbation::constant),
                                               perturbed_power(c.m, d, Perturbation::constant));
  }
  const AuditOptions opt = audit_options(c);
  Output o;
  o.table = {{"delta", "l1", "tv", "delta1", "delta2", "delta3", "sum", "bound", "slack", "holds"}, {}};
  Json rows = Json::array();
  bool all = true;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Theorem1Audit a = theorem1_audit(pairs[i].first, pairs[i].second, model, opt);
    all = all && a.holds();
    o.table.add({csv_real(deltas[i]), csv_real(a.bound.l1), csv_real(a.tv.value), csv_real(a.delta1.value),
                 csv_real(a.delta2.value), csv_real(a.delta3), csv_real(a.diagnostic_sum),
                 csv_real(a.bound.clamped_bound), csv_real(a.bound.clamped_bound - a.tv.value), a.holds() ? "1" : "0"});
    Json r = audit_json(a);
    r["f"] = to_string(pairs[i].first);
    r["g"] = to_string(pairs[i].second);
    rows.push_back(r);
    o.plot_x.push_back(a.bound.l1);
    o.plot_y.push_back(a.tv.value);
  }
  o.result = Json{{"model", model.describe()}, {"all_hold", all}, {"rows", rows}};
  o.plot_comment = "l1 tv";
  o.summary = std::string(all ? "every link holds" : "a link FAILED") + " over " + std::to_string(pairs.size()) + " cases";
  return o;
}

inline Output suite_vandermonde(const RunConfig& c) {
  Output o;
  o.table = {{"n", "W", "Delta", "dense_determinant", "nonzero", "agrees"}, {}};
  Json rows = Json::array();
  bool ok = true;
  for (int n = 1; n <= c.n; ++n) {
    const VandermondeCheck v = vandermonde_system_check(n);
    ok = ok && v.nonzero && v.agrees;
    rows.push_back(to_json(v));
    o.table.add({std::to_string(n), v.W.str(), v.Delta.str(), v.dense_determinant.str(), v.nonzero ? "1" : "0",
                 v.agrees ? "1" : "0"});
    o.plot_x.push_back(n);
    o.plot_y.push_back(static_cast<double>(boost::multiprecision::msb(v.Delta) + 1) * std::log10(2.0));
  }
  o.result = Json{{"all_nonzero_and_agree", ok}, {"rows", rows}};
  o.plot_comment = "n approx_log10_Delta";
  o.summary = ok ? "all determinants nonzero and agree" : "determinant check FAILED";
  return o;
}

// ---------------------------------------------------------------------------
// output

inline std::string utc_stamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

inline fs::path make_run_dir(const std::string& out, const std::string& name, const std::string& stamp) {
  const fs::path base = fs::path(out) / (name + "-" + stamp);
  fs::path p = base;
  for (int k = 2; fs::exists(p); ++k) p = base.string() + "-" + std::to_string(k);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw input_error("cannot create output directory '" + p.string() + "': " + ec.message());
  return p;
}

inline void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
  if (!os) throw input_error("cannot write '" + p.string() + "'");
}

inline Output dispatch(const RunConfig& c) {
  if (c.command == "pushforward") return cmd_pushforward(c);
  if (c.command == "tv") return cmd_tv(c);
  if (c.command == "modulus") return cmd_modulus(c);
  if (c.command == "certify") return cmd_certify(c);
  if (c.command == "bound") return cmd_bound(c);
  if (c.suite == "gauss-poly") return suite_gauss_poly(c);
  if (c.suite == "trig-poly") return suite_trig_poly(c);
  if (c.suite == "radial") return suite_radial(c);
  if (c.suite == "theorem1-audit") return suite_theorem1_audit(c);
  if (c.suite == "vandermonde") return suite_vandermonde(c);
  throw input_error("unknown command");
}

inline void add_common(CLI::App* s, RunConfig& c) {
  s->add_option("--density", c.density, "gauss | gauss:m,s | lebesgue:a,b | restrict:a,b:<density>");
  s->add_option("--tol", c.tol, "absolute quadrature tolerance")->check(CLI::PositiveNumber);
  s->add_option("--mc-samples", c.mc_samples, "Monte Carlo samples per law (0 = off)")->check(CLI::NonNegativeNumber);
  s->add_option("--bins", c.bins, "histogram bins (0 = automatic)")->check(CLI::NonNegativeNumber);
  s->add_option("--seed", c.seed, "random seed");
  s->add_option("--out", c.out, "output root directory");
  s->add_option("--format", c.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
}

/// Returns the process exit code: 0 success, 2 input error, 3 numeric failure.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"Total variation distances between laws of polynomial images of random variables", "tvkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* pf = app.add_subcommand("pushforward", "density of the law of f(X)");
  pf->add_option("--poly,--f", c.poly, "coefficients c0,c1,... (ascending)");
  pf->add_option("--trig", c.trig, "cos=a0,a1,...;sin=b0,b1,...");
  pf->add_option("--t", c.t, "evaluation grid lo:hi:points (linear)");
  pf->add_option("--at", c.at, "evaluate at these points only")->delimiter(',');

  auto* tv = app.add_subcommand("tv", "total variation between the laws of f(X) and g(X)");
  tv->add_option("--f", c.f, "first map")->required();
  tv->add_option("--g", c.g, "second map")->required();

  auto* mod = app.add_subcommand("modulus", "shift modulus curve delta(u)");
  mod->add_option("--poly,--f", c.poly, "coefficients c0,c1,...");
  mod->add_option("--trig", c.trig, "cos=...;sin=...");
  mod->add_option("--u", c.u, "shift grid lo:hi:points (geometric)");

  auto* cert = app.add_subcommand("certify", "certified modulus constant for a Gaussian source");
  cert->add_option("--poly,--f", c.poly, "coefficients c0,c1,...")->required();
  cert->add_option("--tail-tol", c.tail_tol, "tail series stopping tolerance")->check(CLI::PositiveNumber);

  auto* bd = app.add_subcommand("bound", "smoothing bound with its measured ingredients");
  bd->add_option("--f", c.f, "first polynomial")->required();
  bd->add_option("--g", c.g, "second polynomial")->required();
  bd->add_option("--cf", c.cf, "modulus constant for f (skips certification)");
  bd->add_option("--cg", c.cg, "modulus constant for g");
  bd->add_option("--alpha", c.alpha, "common modulus exponent");
  bd->add_option("--tail-tol", c.tail_tol, "tail series stopping tolerance")->check(CLI::PositiveNumber);

  auto* ex = app.add_subcommand("experiment", "named experiment suites");
  ex->add_option("suite", c.suite, "gauss-poly | trig-poly | radial | theorem1-audit | vandermonde")
      ->required()
      ->check(CLI::IsMember({"gauss-poly", "trig-poly", "radial", "theorem1-audit", "vandermonde"}));
  ex->add_option("--m", c.m, "polynomial degree / radial power")->check(CLI::Range(1, 12));
  ex->add_option("--d", c.d, "dimension (radial)")->check(CLI::Range(1, 50));
  ex->add_option("--n", c.n, "largest n (vandermonde)")->check(CLI::Range(1, 12));
  ex->add_option("--deltas", c.deltas, "perturbation grid lo:hi:points (geometric)");
  ex->add_option("--u", c.u, "shift grid lo:hi:points (geometric)");
  ex->add_option("--trig", c.trig, "cos=...;sin=...");
  ex->add_option("--f", c.f, "first polynomial (theorem1-audit)");
  ex->add_option("--g", c.g, "second polynomial (theorem1-audit)");
  ex->add_option("--tail-tol", c.tail_tol, "tail series stopping tolerance")->check(CLI::PositiveNumber);

  for (auto* s : {pf, tv, mod, cert, bd, ex}) add_common(s, c);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const auto started = std::chrono::system_clock::now();
    const Output o = dispatch(c);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json report{{"tool", "tvkit"},
                {"version", kVersion},
                {"provenance",
                 {{"cli11", CLI11_VERSION},
                  {"nlohmann_json",
                   std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                  {"boost", BOOST_LIB_VERSION}}},
                {"config", config_json(c)},
                {"result", o.result}};
    const std::string name = c.command == "experiment" ? "experiment-" + c.suite : c.command;
    const std::string stamp = utc_stamp(started);
    const fs::path dir = make_run_dir(c.out, name, stamp);
    if (c.format != "csv") write_file(dir / "report.json", report.dump(2) + "\n");
    if (c.format != "json") {
      std::ostringstream csv;
      write_csv(csv, o.table);
      write_file(dir / "curve.csv", csv.str());
    }
    std::ostringstream plot;
    write_plot_data(plot, o.plot_comment, o.plot_x, o.plot_y);
    write_file(dir / "plot.dat", plot.str());
    const Json timing{{"started_utc", stamp}, {"wall_clock_seconds", json_real(seconds)}};
    write_file(dir / "timing.json", timing.dump(2) + "\n");
    out << dir.string() << '\n' << name << ": " << o.summary << '\n';
    return 0;
  } catch (const input_error& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const numeric_error& e) {
    err << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const Json::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace tvkit::cli
