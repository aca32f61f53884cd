#pragma once

// Command-line front end: flag and job-file parsing, catalog dispatch and
// table / JSON / CSV emission. run() is the whole program; main() only
// forwards argv and the standard streams.
//
// Exit codes:
//   0  success (and, for checks, the check passed)
//   1  a check ran and failed
//   2  invalid input: flags, job file, potential parameters, branch choice
//   3  numerical non-convergence (eigensolver or quadrature)
//   4  no known pseudo-Hermiticity shift for the potential

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pseudospec/pseudospec.hpp"

namespace pseudospec::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalid = 2, kNotConverged = 3, kNoShift = 4 };

using Json = nlohmann::ordered_json;

/// One invocation, merged from the job file and the flags (flags win).
struct Request {
  std::optional<std::string> command;
  std::optional<std::string> potential;
  ParamMap params;
  std::optional<double> x_min, x_max;
  std::optional<std::size_t> points;
  std::optional<std::string> order;
  std::optional<double> tol;
  std::optional<std::string> format;
  std::optional<std::string> plot;
  std::optional<std::size_t> plot_state;
  std::optional<std::string> method;
  std::optional<std::size_t> levels;
  std::optional<double> theta_override;
  std::optional<std::string> pairing;
  std::optional<std::size_t> states;
  std::optional<std::size_t> m, n;
  std::optional<double> c;
  std::optional<std::size_t> refinements;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------- formatting

inline std::string fmt_g(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

// nlohmann's own dump prints the shortest round-trip form; output here is
// pinned to 17 significant digits. Non-finite numbers become null.
inline void write_json(std::ostream& os, const Json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json_string(it.key()) << ": ";
        write_json(os, it.value(), indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent + 2);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? fmt_g(v, 17) : "null");
      return;
    }
    case Json::value_t::string: os << json_string(j.get<std::string>()); return;
    default: os << j.dump(); return;
  }
}

inline Json complex_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

/// A table: columns, rows and trailing key/value lines (the latter only in
/// table format). Cells are numbers, integers, text or empty.
struct Table {
  using Cell = std::variant<std::monostate, double, long long, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;

  static std::string render(const Cell& c, int digits) {
    if (const auto* d = std::get_if<double>(&c)) return fmt_g(*d, digits);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return digits == 17 ? "" : "-";
  }

  void print_table(std::ostream& os) const {
    std::vector<std::size_t> width(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) width[k] = columns[k].size();
    for (const auto& r : rows)
      for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], render(r[k], 12).size());
    auto line = [&](auto&& cell) {
      for (std::size_t k = 0; k < columns.size(); ++k) {
        const std::string s = cell(k);
        os << (k ? "  " : "") << std::string(width[k] - s.size(), ' ') << s;
      }
      os << "\n";
    };
    if (!columns.empty()) {
      line([&](std::size_t k) { return columns[k]; });
      for (const auto& r : rows) line([&](std::size_t k) { return render(r[k], 12); });
    }
    for (const auto& [key, value] : summary) os << key << ": " << render(value, 12) << "\n";
  }

  void print_csv(std::ostream& os) const {
    for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << render(r[k], 17);
      os << "\n";
    }
  }
};

struct Output {
  Json inputs = Json::object();
  Json results = Json::object();
  Json diagnostics = Json::object();
  Table table;
  int exit_code = kOk;
};

// ---------------------------------------------------------------- job files

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError("job file: '" + where + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw InputError("job file: unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T get_as(const Json& obj, const char* key, const std::string& where) {
  try {
    if constexpr (std::is_same_v<T, std::size_t>) {
      const auto& v = obj.at(key);
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw InputError("job file: '" + where + "." + key + "' must be a non-negative integer");
      return v.get<std::size_t>();
    } else {
      return obj.at(key).get<T>();
    }
  } catch (const nlohmann::json::exception&) {
    throw InputError("job file: '" + where + "." + key + "' has the wrong type");
  }
}

template <class T>
void take(const Json& obj, const char* key, const std::string& where, std::optional<T>& into) {
  if (obj.contains(key)) into = get_as<T>(obj, key, where);
}

}  // namespace detail

inline Request load_job(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open job file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("job file '" + path + "' is not valid JSON: " + e.what());
  }
  using detail::take;
  detail::reject_unknown(doc, "job", {"command", "potential", "discretization", "tolerances", "output", "options"});
  Request r;
  take(doc, "command", "job", r.command);
  if (doc.contains("potential")) {
    const Json& p = doc["potential"];
    if (!p.is_object()) throw InputError("job file: 'potential' must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (it.key() == "name") {
        r.potential = detail::get_as<std::string>(p, "name", "potential");
      } else if (it.value().is_number()) {
        r.params[it.key()] = it.value().get<double>();
      } else {
        throw InputError("job file: potential parameter '" + it.key() + "' must be a number");
      }
    }
  }
  if (doc.contains("discretization")) {
    const Json& d = doc["discretization"];
    detail::reject_unknown(d, "discretization", {"x_min", "x_max", "points", "order"});
    take(d, "x_min", "discretization", r.x_min);
    take(d, "x_max", "discretization", r.x_max);
    take(d, "points", "discretization", r.points);
    take(d, "order", "discretization", r.order);
  }
  if (doc.contains("tolerances")) {
    detail::reject_unknown(doc["tolerances"], "tolerances", {"tol"});
    take(doc["tolerances"], "tol", "tolerances", r.tol);
  }
  if (doc.contains("output")) {
    const Json& o = doc["output"];
    detail::reject_unknown(o, "output", {"format", "plot", "plot_state"});
    take(o, "format", "output", r.format);
    take(o, "plot", "output", r.plot);
    take(o, "plot_state", "output", r.plot_state);
  }
  if (doc.contains("options")) {
    const Json& o = doc["options"];
    detail::reject_unknown(o, "options", {"method", "levels", "theta_override", "pairing", "states", "m", "n", "c", "refinements"});
    take(o, "method", "options", r.method);
    take(o, "levels", "options", r.levels);
    take(o, "theta_override", "options", r.theta_override);
    take(o, "pairing", "options", r.pairing);
    take(o, "states", "options", r.states);
    take(o, "m", "options", r.m);
    take(o, "n", "options", r.n);
    take(o, "c", "options", r.c);
    take(o, "refinements", "options", r.refinements);
  }
  return r;
}

/// Fields set in `flags` replace those of `job`; potential parameters merge key by key.
inline Request merge(Request job, const Request& flags) {
  auto over = [](auto& into, const auto& from) {
    if (from) into = from;
  };
  over(job.command, flags.command);
  over(job.potential, flags.potential);
  for (const auto& [k, v] : flags.params) job.params[k] = v;
  over(job.x_min, flags.x_min);
  over(job.x_max, flags.x_max);
  over(job.points, flags.points);
  over(job.order, flags.order);
  over(job.tol, flags.tol);
  over(job.format, flags.format);
  over(job.plot, flags.plot);
  over(job.plot_state, flags.plot_state);
  over(job.method, flags.method);
  over(job.levels, flags.levels);
  over(job.theta_override, flags.theta_override);
  over(job.pairing, flags.pairing);
  over(job.states, flags.states);
  over(job.m, flags.m);
  over(job.n, flags.n);
  over(job.c, flags.c);
  over(job.refinements, flags.refinements);
  return job;
}

// ---------------------------------------------------------------- commands

namespace detail {

inline PotentialSpec make_potential(const Request& r) {
  if (!r.potential) throw InputError("no potential given (--potential or potential.name)");
  return from_name(*r.potential, r.params);
}

inline Json potential_json(const Request& r) {
  Json p = Json::object();
  p["name"] = r.potential.value_or("");
  for (const auto& [k, v] : r.params) p[k] = v;
  return p;
}

inline FdOrder parse_order(const std::string& s) {
  if (s == "fd2") return FdOrder::FD2;
  if (s == "fd4") return FdOrder::FD4;
  throw InputError("order must be fd2 or fd4, got '" + s + "'");
}

inline Discretization make_disc(const Request& r, const PotentialSpec& spec) {
  Discretization d = default_discretization(spec);
  if (r.x_min) d.x_min = *r.x_min;
  if (r.x_max) d.x_max = *r.x_max;
  if (r.points) d.n_points = *r.points;
  if (r.order) d.order = parse_order(*r.order);
  d.validate();
  return d;
}

inline Json disc_json(const Discretization& d) {
  return Json{{"x_min", d.x_min}, {"x_max", d.x_max}, {"points", d.n_points}, {"order", to_string(d.order)}};
}

inline std::vector<BoundState> closed_form_states(const PotentialSpec& spec, std::size_t n_max) {
  auto states = exact_spectrum(spec, n_max);
  if (!states) throw InputError(spec.name() + " has no closed-form spectrum");
  return *states;
}

// Plot data: x, Re V, Im V, Re Psi, Im Psi.
inline void write_plot(const std::string& path, const PotentialSpec& spec, const Discretization& disc,
                       const std::optional<std::vector<BoundState>>& exact, const SpectrumResult* grid,
                       std::size_t state) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write plot file '" + path + "'");
  f << "x,ReV,ImV,RePsi,ImPsi\n";
  auto row = [&](double x, cplx psi) {
    const cplx v = evaluate(spec, x);
    f << fmt_g(x, 17) << "," << fmt_g(v.real(), 17) << "," << fmt_g(v.imag(), 17) << "," << fmt_g(psi.real(), 17)
      << "," << fmt_g(psi.imag(), 17) << "\n";
  };
  if (exact && state < exact->size()) {
    for (double x : linspace({disc.x_min, disc.x_max}, 401)) row(x, eigenfunction_value((*exact)[state], x));
    return;
  }
  if (grid && state < grid->level_vectors.size()) {
    const auto& v = grid->level_vectors[state];
    for (std::size_t j = 0; j < disc.n_points; ++j) row(disc.point(j), v[j]);
    return;
  }
  throw InputError("plot: state " + std::to_string(state) + " is not available");
}

}  // namespace detail

inline Output cmd_spectrum(const Request& r) {
  const PotentialSpec spec = detail::make_potential(r);
  const std::string method = r.method.value_or("both");
  if (method != "exact" && method != "grid" && method != "both")
    throw InputError("--method must be exact, grid or both");
  const bool want_exact = method != "grid";
  const bool want_grid = method != "exact";

  std::optional<std::vector<BoundState>> exact;
  if (want_exact) {
    const std::size_t n_max = r.levels ? std::max<std::size_t>(*r.levels, 1) - 1 : 5;
    exact = exact_spectrum(spec, n_max);
    if (!exact && method == "exact") throw InputError(spec.name() + " has no closed-form spectrum");
  }
  std::size_t k = r.levels.value_or(exact ? exact->size() : 5);
  if (exact && exact->size() > k) exact->resize(k);

  Output out;
  const Discretization disc = detail::make_disc(r, spec);
  std::optional<SpectrumResult> grid;
  if (want_grid) {
    grid = solve_spectrum(spec, disc, k);
  }
  out.inputs["potential"] = detail::potential_json(r);
  out.inputs["method"] = method;
  out.inputs["levels"] = k;
  if (want_grid) out.inputs["discretization"] = detail::disc_json(disc);

  out.table.columns = {"n", "E_exact", "E_grid", "|dE|", "|Im E_grid|"};
  Json rows = Json::array();
  double max_rel = 0.0;
  double max_imag = 0.0;
  const std::vector<cplx> found = grid ? grid->level_energies() : std::vector<cplx>{};
  const std::size_t count = std::max(exact ? exact->size() : 0, found.size());
  for (std::size_t i = 0; i < count; ++i) {
    Json row;
    row["n"] = i;
    std::vector<Table::Cell> cells{static_cast<long long>(i)};
    std::optional<cplx> e, g;
    if (exact && i < exact->size()) e = (*exact)[i].energy;
    if (i < found.size()) g = found[i];
    row["exact"] = e ? complex_json(*e) : Json(nullptr);
    row["grid"] = g ? complex_json(*g) : Json(nullptr);
    cells.push_back(e ? Table::Cell{e->real()} : Table::Cell{});
    cells.push_back(g ? Table::Cell{g->real()} : Table::Cell{});
    if (e && g) {
      const double d = std::abs(*e - *g);
      row["abs_diff"] = d;
      max_rel = std::max(max_rel, d / std::max(1.0, std::abs(*e)));
      cells.push_back(d);
    } else {
      row["abs_diff"] = nullptr;
      cells.push_back(Table::Cell{});
    }
    if (g) {
      row["imag_grid"] = std::abs(g->imag());
      max_imag = std::max(max_imag, std::abs(g->imag()));
      cells.push_back(std::abs(g->imag()));
    } else {
      row["imag_grid"] = nullptr;
      cells.push_back(Table::Cell{});
    }
    rows.push_back(row);
    out.table.rows.push_back(cells);
  }
  out.results["levels"] = rows;
  if (exact && grid) {
    out.results["max_rel_diff"] = max_rel;
    out.table.summary.emplace_back("max |dE|/max(1,|E|)", max_rel);
  }
  if (grid) {
    out.results["max_imag_grid"] = max_imag;
    double worst = 0.0;
    for (double v : grid->residual_norms) worst = std::max(worst, v);
    std::size_t bound = 0;
    for (bool b : grid->bound_flags) bound += b ? 1 : 0;
    out.diagnostics["max_residual"] = worst;
    out.diagnostics["bound_eigenpairs"] = bound;
    out.diagnostics["grid_levels_found"] = found.size();
    out.table.summary.emplace_back("max |Im E_grid|", max_imag);
    out.table.summary.emplace_back("max eigenpair residual", worst);
  }
  if (r.plot) {
    detail::write_plot(*r.plot, spec, disc, exact, grid ? &*grid : nullptr, r.plot_state.value_or(0));
    out.diagnostics["plot"] = *r.plot;
  }
  return out;
}

inline Output cmd_check_pseudo(const Request& r) {
  const PotentialSpec spec = detail::make_potential(r);
  const double theta = r.theta_override ? *r.theta_override : pseudo_shift_angle(spec).theta;
  const double tol = r.tol.value_or(1e-10);
  Interval range = natural_domain(spec);
  if (r.x_min) range.lo = *r.x_min;
  if (r.x_max) range.hi = *r.x_max;
  if (!(range.lo < range.hi)) throw InputError("check-pseudo needs x_min < x_max");
  const std::size_t points = r.points.value_or(2001);
  if (points < 2) throw InputError("check-pseudo needs at least 2 grid points");
  const auto grid = linspace(range, points);
  const PseudoHermVerdict v = check_pseudo_hermitian(spec, theta, grid, tol);

  Output out;
  out.inputs["potential"] = detail::potential_json(r);
  out.inputs["theta_override"] = r.theta_override ? Json(*r.theta_override) : Json(nullptr);
  out.inputs["grid"] = Json{{"x_min", range.lo}, {"x_max", range.hi}, {"points", points}};
  out.inputs["tol"] = tol;
  out.results["theta"] = v.theta_used;
  out.results["max_residual"] = v.max_residual;
  out.results["relative_residual"] = v.relative_residual();
  out.results["passed"] = v.passed;
  out.diagnostics["scale"] = v.scale;
  out.diagnostics["pt_symmetric"] = is_pt_symmetric(spec);
  out.table.columns = {"theta", "max_residual", "relative", "tolerance", "result"};
  out.table.rows.push_back({v.theta_used, v.max_residual, v.relative_residual(), tol,
                            std::string(v.passed ? "pass" : "fail")});
  out.exit_code = v.passed ? kOk : kCheckFailed;
  return out;
}

inline Output cmd_orthogonality(const Request& r) {
  constexpr double kOffDiagonalBound = 1e-8;
  const PotentialSpec spec = detail::make_potential(r);
  const std::string name = r.pairing.value_or("eta");
  Pairing pairing = Pairing::EtaBilinear;
  if (name == "pt") pairing = Pairing::PTBilinear;
  else if (name == "plain") pairing = Pairing::PlainBilinear;
  else if (name != "eta") throw InputError("--pairing must be eta, pt or plain");

  const std::size_t requested = r.states.value_or(4);
  auto states = detail::closed_form_states(spec, requested == 0 ? 0 : requested - 1);
  if (r.states && states.size() > *r.states) states.resize(*r.states);
  const double tol = r.tol.value_or(1e-12);
  const OrthogonalityReport rep = orthogonality_matrix(spec, states, pairing, GramRoute::Auto, tol);

  // eta and plain orthogonality always hold; pt only for PT-symmetric members
  const bool asserted = pairing != Pairing::PTBilinear || is_pt_symmetric(spec);
  const bool passed = rep.off_diag_max_rel <= kOffDiagonalBound;

  Output out;
  out.inputs["potential"] = detail::potential_json(r);
  out.inputs["pairing"] = name;
  out.inputs["states"] = states.size();
  out.inputs["tol"] = tol;
  Json gram = Json::array();
  for (const auto& row : rep.gram) {
    Json jr = Json::array();
    for (cplx v : row) jr.push_back(complex_json(v));
    gram.push_back(jr);
  }
  out.results["gram"] = gram;
  out.results["off_diag_max_rel"] = rep.off_diag_max_rel;
  out.results["asserted"] = asserted;
  out.results["passed"] = asserted ? Json(passed) : Json(nullptr);
  if (pairing == Pairing::EtaBilinear) out.diagnostics["theta"] = rep.theta;
  double worst = 0.0;
  for (const auto& row : rep.error_estimates)
    for (double e : row) worst = std::max(worst, e);
  out.diagnostics["max_error_estimate"] = worst;
  out.diagnostics["min_diagonal"] = rep.min_diagonal();

  out.table.columns = {"m", "n", "Re", "Im"};
  for (std::size_t i = 0; i < rep.gram.size(); ++i)
    for (std::size_t j = 0; j < rep.gram.size(); ++j)
      out.table.rows.push_back({static_cast<long long>(states[i].n), static_cast<long long>(states[j].n),
                                rep.gram[i][j].real(), rep.gram[i][j].imag()});
  out.table.summary.emplace_back("off_diag_max_rel", rep.off_diag_max_rel);
  out.table.summary.emplace_back("result", std::string(!asserted ? "not asserted" : passed ? "pass" : "fail"));
  out.exit_code = asserted && !passed ? kCheckFailed : kOk;
  return out;
}

inline Output cmd_laguerre_integral(const Request& r) {
  if (!r.m || !r.n || !r.c) throw InputError("laguerre-integral needs --m, --n and --c");
  const double tol = r.tol.value_or(1e-13);
  const IntegralResult q = laguerre_overlap_quadrature(*r.m, *r.n, *r.c, tol);
  const IntegralResult e = laguerre_overlap_exact(*r.m, *r.n, *r.c);
  Output out;
  out.inputs["m"] = *r.m;
  out.inputs["n"] = *r.n;
  out.inputs["c"] = *r.c;
  out.inputs["tol"] = tol;
  auto result_json = [](const IntegralResult& x) {
    return Json{{"value", complex_json(x.value)},
                {"abs_error_estimate", x.abs_error_estimate},
                {"evaluations", x.evaluations}};
  };
  out.results["quadrature"] = result_json(q);
  out.results["gamma_expansion"] = result_json(e);
  out.results["abs_diff"] = std::abs(q.value - e.value);
  out.diagnostics["condition"] = e.condition;
  out.diagnostics["trusted"] = e.trusted;
  out.table.columns = {"method", "value", "abs_error_estimate", "evaluations"};
  out.table.rows.push_back({std::string(to_string(q.method)), q.value.real(), q.abs_error_estimate,
                            static_cast<long long>(q.evaluations)});
  out.table.rows.push_back({std::string(to_string(e.method)), e.value.real(), e.abs_error_estimate,
                            static_cast<long long>(e.evaluations)});
  out.table.summary.emplace_back("abs_diff", std::abs(q.value - e.value));
  out.table.summary.emplace_back("condition", e.condition);
  out.table.summary.emplace_back("trusted", std::string(e.trusted ? "yes" : "no"));
  return out;
}

inline Output cmd_converge(const Request& r) {
  const PotentialSpec spec = detail::make_potential(r);
  Discretization base = default_discretization(spec);
  base.n_points = 100;
  if (r.x_min) base.x_min = *r.x_min;
  if (r.x_max) base.x_max = *r.x_max;
  if (r.points) base.n_points = *r.points;
  if (r.order) base.order = detail::parse_order(*r.order);
  base.validate();
  const std::size_t refinements = r.refinements.value_or(3);
  const std::size_t levels = r.levels.value_or(1);
  const ConvergenceTable t = convergence_study(spec, base, refinements, levels);

  Output out;
  out.inputs["potential"] = detail::potential_json(r);
  out.inputs["discretization"] = detail::disc_json(base);
  out.inputs["refinements"] = refinements;
  out.inputs["levels"] = levels;
  Json exact = Json::array();
  for (cplx e : t.exact) exact.push_back(complex_json(e));
  out.results["exact"] = exact;
  Json rows = Json::array();
  out.table.columns = {"points", "h"};
  for (std::size_t i = 0; i < t.exact.size(); ++i) {
    const std::string s = std::to_string(i);
    out.table.columns.insert(out.table.columns.end(), {"err" + s, "ratio" + s, "order" + s});
  }
  out.table.columns.push_back("plateau");
  bool any_plateau = false;
  for (const auto& row : t.rows) {
    Json jr{{"points", row.n_points}, {"h", row.h}, {"errors", row.errors}, {"ratios", row.ratios},
            {"orders", row.orders}, {"plateau", row.plateau}};
    rows.push_back(jr);
    std::vector<Table::Cell> cells{static_cast<long long>(row.n_points), row.h};
    for (std::size_t i = 0; i < row.errors.size(); ++i) {
      cells.push_back(row.errors[i]);
      cells.push_back(row.ratios.empty() ? Table::Cell{} : Table::Cell{row.ratios[i]});
      cells.push_back(row.orders.empty() ? Table::Cell{} : Table::Cell{row.orders[i]});
    }
    cells.push_back(std::string(row.plateau ? "yes" : "no"));
    out.table.rows.push_back(cells);
    any_plateau = any_plateau || row.plateau;
  }
  out.results["rows"] = rows;
  out.diagnostics["plateau_detected"] = any_plateau;
  if (any_plateau) out.table.summary.emplace_back("note", std::string("error plateau: truncation-dominated"));
  return out;
}

// ---------------------------------------------------------------- driver

namespace detail {

inline void add_potential_flags(CLI::App* sub, Request& f) {
  sub->add_option_function<std::string>("--potential", [&f](const std::string& v) { f.potential = v; },
                                        "catalog name: morse-complex, morse-general, ho-shifted, eckart-shifted, khare-mandal");
  for (const char* key : {"A", "B", "C", "V1", "V1i", "V2", "V2i", "alpha", "beta", "gamma", "zeta", "M", "kappa"}) {
    const std::string k = key;
    sub->add_option_function<double>("--" + k, [&f, k](const double& v) { f.params[k] = v; }, "potential parameter " + k);
  }
}

inline void add_grid_flags(CLI::App* sub, Request& f) {
  sub->add_option_function<double>("--x-min", [&f](const double& v) { f.x_min = v; }, "left end of the grid");
  sub->add_option_function<double>("--x-max", [&f](const double& v) { f.x_max = v; }, "right end of the grid");
  sub->add_option_function<std::size_t>("--points", [&f](const std::size_t& v) { f.points = v; }, "number of grid points");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-Hermiticity checks, spectra and orthogonality for complex 1-D potentials"};
  app.name("pseudospec");
  app.require_subcommand(0, 1);
  Request flags;
  std::optional<std::string> job_path;
  app.add_option_function<std::string>("--job", [&](const std::string& v) { job_path = v; }, "JSON job file");
  app.add_option_function<std::string>("--format", [&](const std::string& v) { flags.format = v; }, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option_function<double>("--tol", [&](const double& v) { flags.tol = v; }, "tolerance (meaning per command)");

  auto* spectrum = app.add_subcommand("spectrum", "closed-form and grid eigenvalues");
  detail::add_potential_flags(spectrum, flags);
  detail::add_grid_flags(spectrum, flags);
  spectrum->add_option_function<std::string>("--method", [&](const std::string& v) { flags.method = v; }, "exact, grid or both")
      ->check(CLI::IsMember({"exact", "grid", "both"}));
  spectrum->add_option_function<std::size_t>("--levels", [&](const std::size_t& v) { flags.levels = v; }, "number of levels");
  spectrum->add_option_function<std::string>("--order", [&](const std::string& v) { flags.order = v; }, "fd2 or fd4");
  spectrum->add_option_function<std::string>("--plot", [&](const std::string& v) { flags.plot = v; }, "write x,ReV,ImV,RePsi,ImPsi CSV");
  spectrum->add_option_function<std::size_t>("--plot-state", [&](const std::size_t& v) { flags.plot_state = v; }, "state index for --plot");

  auto* check = app.add_subcommand("check-pseudo", "V(x + i theta) = conj V(x) on a grid");
  detail::add_potential_flags(check, flags);
  detail::add_grid_flags(check, flags);
  check->add_option_function<double>("--theta-override", [&](const double& v) { flags.theta_override = v; }, "use this theta");

  auto* ortho = app.add_subcommand("orthogonality", "Gram matrix of closed-form eigenstates");
  detail::add_potential_flags(ortho, flags);
  ortho->add_option_function<std::string>("--pairing", [&](const std::string& v) { flags.pairing = v; }, "eta, pt or plain")
      ->check(CLI::IsMember({"eta", "pt", "plain"}));
  ortho->add_option_function<std::size_t>("--states", [&](const std::size_t& v) { flags.states = v; }, "number of states");

  auto* lag = app.add_subcommand("laguerre-integral", "the Laguerre overlap integral by two methods");
  lag->add_option_function<std::size_t>("--m", [&](const std::size_t& v) { flags.m = v; }, "first index");
  lag->add_option_function<std::size_t>("--n", [&](const std::size_t& v) { flags.n = v; }, "second index");
  lag->add_option_function<double>("--c", [&](const double& v) { flags.c = v; }, "parameter c");

  auto* conv = app.add_subcommand("converge", "grid refinement study against the closed form");
  detail::add_potential_flags(conv, flags);
  detail::add_grid_flags(conv, flags);
  conv->add_option_function<std::string>("--order", [&](const std::string& v) { flags.order = v; }, "fd2 or fd4");
  conv->add_option_function<std::size_t>("--refinements", [&](const std::size_t& v) { flags.refinements = v; }, "number of halvings");
  conv->add_option_function<std::size_t>("--levels", [&](const std::size_t& v) { flags.levels = v; }, "levels compared");

  for (auto* sub : {spectrum, check, ortho, lag, conv}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  for (auto* sub : app.get_subcommands()) flags.command = sub->get_name();

  Request req;
  Output result;
  try {
    Request job = job_path ? load_job(*job_path) : Request{};
    if (job.command && flags.command && *job.command != *flags.command)
      throw InputError("job file is for '" + *job.command + "' but the command line says '" + *flags.command + "'");
    req = merge(job, flags);
    if (!req.command) throw InputError("no command given");
    const std::string format = req.format.value_or("table");
    if (format != "table" && format != "json" && format != "csv") throw InputError("format must be table, json or csv");
    if (req.tol && !(*req.tol > 0.0)) throw InputError("--tol must be positive");

    const std::string& c = *req.command;
    if (c == "spectrum") result = cmd_spectrum(req);
    else if (c == "check-pseudo") result = cmd_check_pseudo(req);
    else if (c == "orthogonality") result = cmd_orthogonality(req);
    else if (c == "laguerre-integral") result = cmd_laguerre_integral(req);
    else if (c == "converge") result = cmd_converge(req);
    else throw InputError("unknown command '" + c + "'");
  } catch (const NoKnownShiftError& e) {
    err << "error: " << e.what() << "\n";
    return kNoShift;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const Error& e) {  // InputError, DomainError, BranchError, OverflowError
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  const std::string format = req.format.value_or("table");
  if (format == "json") {
    Json doc;
    doc["command"] = *req.command;
    doc["inputs"] = result.inputs;
    doc["results"] = result.results;
    doc["diagnostics"] = result.diagnostics;
    write_json(out, doc);
    out << "\n";
  } else if (format == "csv") {
    result.table.print_csv(out);
  } else {
    out << *req.command << "\n";
    result.table.print_table(out);
  }
  return result.exit_code;
}

}  // namespace pseudospec::cli
