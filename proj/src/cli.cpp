#include "radex/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "radex/errors.hpp"
#include "radex/exact1d.hpp"
#include "radex/func_model.hpp"
#include "radex/genderiv.hpp"
#include "radex/optimize.hpp"
#include "radex/regularity.hpp"
#include "radex/weaksub.hpp"

#ifndef RADEX_VERSION
#define RADEX_VERSION "0.0.0"
#endif

namespace radex::cli {
namespace {

using nlohmann::ordered_json;
using json = ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json jnum(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return std::stod(format_number(v, false));
}
json jnum(ExtendedReal v) { return jnum(v.raw()); }

json jvec(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(jnum(x));
  return a;
}

std::string joined(std::span<const double> xs, bool csv) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ';';
    s += format_number(xs[i], csv);
  }
  return s;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

// a:b:step, inclusive of b up to rounding.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_list(item, "--grid").front());
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0])
    throw UsageError("--grid must be a:b:step with a <= b and step > 0");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long k = 0; k <= n; ++k) {
    double v = parts[0] + static_cast<double>(k) * parts[2];
    if (std::abs(v) < 1e-12 * parts[2]) v = 0.0;
    out.push_back(v);
  }
  return out;
}

struct Options {
  std::string fn, expr, at, dir, dirs, grid, kinds = "radial", format = "csv", output;
  std::size_t dim = 0;
  // Schedule overrides.
  std::optional<double> t_min, t_max, tol, threshold;
  std::optional<int> ppd, refine_rounds;
  std::optional<std::size_t> m;
  std::string ladder;
  // weaksub
  double eps = 0.5;
  std::string norm = "l2", v, radial = "numeric";
  std::optional<double> c;
  bool certificate = false;
  // minimize
  std::optional<double> descent_tol, line_t_max;
  std::optional<int> max_iters;
};

struct Selected {
  std::string name;
  FunctionOracle oracle;
};

Selected select_function(const Options& o) {
  if (o.fn.empty() == o.expr.empty()) throw UsageError("give exactly one of --fn or --expr");
  if (!o.fn.empty()) return {o.fn, get_function(o.fn)};
  if (o.dim == 0) throw UsageError("--expr needs --dim");
  return {"expr", register_expression("expr", o.expr, o.dim)};
}

SamplingSchedule schedule_from(const Options& o) {
  SamplingSchedule s;
  if (o.t_min) s.t_min = *o.t_min;
  if (o.t_max) s.t_max = *o.t_max;
  if (o.tol) s.tol = *o.tol;
  if (o.threshold) s.divergence_threshold = *o.threshold;
  if (o.ppd) s.points_per_decade = *o.ppd;
  if (o.refine_rounds) s.refine_rounds = *o.refine_rounds;
  if (o.m) s.perturbations_per_shell = *o.m;
  if (!o.ladder.empty()) s.shrink_ladder = parse_list(o.ladder, "--ladder");
  s.validate();
  return s;
}

json schedule_json(const SamplingSchedule& s) {
  return json{{"t_min", jnum(s.t_min)},
              {"t_max", jnum(s.t_max)},
              {"points_per_decade", s.points_per_decade},
              {"shrink_ladder", jvec(s.shrink_ladder)},
              {"perturbations_per_shell", s.perturbations_per_shell},
              {"refine_rounds", s.refine_rounds},
              {"tol", jnum(s.tol)},
              {"divergence_threshold", jnum(s.divergence_threshold)},
              {"inner_t_ratio", jnum(s.inner_t_ratio)}};
}

std::set<DerivativeKind> parse_kinds(const std::string& text) {
  std::set<DerivativeKind> out;
  if (text == "all")
    return {DerivativeKind::Directional, DerivativeKind::Clarke, DerivativeKind::Subderivative,
            DerivativeKind::RadialEpi};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(parse_kind(item));
  if (out.empty()) throw UsageError("no derivative kinds given");
  return out;
}

Point parse_point(const std::string& text, std::size_t dim) {
  if (text.empty()) throw UsageError("--at is required");
  Point p(parse_list(text, "--at"));
  require_dim(dim, p.dim());
  return p;
}

std::vector<Direction> parse_directions(const Options& o, std::size_t dim) {
  std::vector<Direction> out;
  if (!o.grid.empty()) {
    if (dim != 1) throw UsageError("--grid applies to 1D functions; use --dirs");
    for (double h : parse_grid(o.grid)) out.push_back(Direction{h});
  }
  if (!o.dirs.empty()) {
    std::stringstream ss(o.dirs);
    std::string item;
    while (std::getline(ss, item, ';')) out.emplace_back(parse_list(item, "--dirs"));
  }
  if (!o.dir.empty()) out.emplace_back(parse_list(o.dir, "--dir"));
  for (const auto& h : out) require_dim(dim, h.dim());
  return out;
}

// --- output ---------------------------------------------------------------

void csv_flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      csv_flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      csv_flatten(j[i], prefix + "." + std::to_string(i), os);
  } else if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    os << prefix << ',' << (s == "inf" ? "INF" : s == "-inf" ? "-INF" : s) << '\n';
  } else if (j.is_number_float()) {
    os << prefix << ',' << format_number(j.get<double>(), true) << '\n';
  } else if (j.is_null()) {
    os << prefix << ",\n";
  } else {
    os << prefix << ',' << j.dump() << '\n';
  }
}

struct Emitter {
  const Options& o;
  std::ostream& out;

  void emit(const std::string& command, const json& config, const json& results,
            const SamplingSchedule& s, const std::function<void(std::ostream&)>& csv) {
    std::ostringstream buf;
    if (o.format == "json") {
      json doc{{"config", config},
               {"results", results.is_array() ? results : json::array({results})},
               {"provenance", {{"version", RADEX_VERSION}, {"command", command},
                               {"schedule", schedule_json(s)}}}};
      buf << doc.dump(2) << '\n';
    } else {
      csv(buf);
    }
    if (o.output.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(o.output, std::ios::binary);
      if (!f) throw UsageError("cannot open output file " + o.output);
      f << buf.str();
    }
  }
};

json config_json(const Options& o, const std::string& command, const Selected& sel) {
  json c{{"command", command}, {"function", sel.name}, {"dimension", sel.oracle.dimension()}};
  if (!o.expr.empty()) c["expression"] = o.expr;
  if (!o.at.empty()) c["at"] = o.at;
  return c;
}

const char* kSweepHeader = "function,xbar,h,kind,value,status,evals\n";

json estimate_row(const std::string& fn, const Point& x, const SweepRow& r) {
  json row{{"function", fn},
           {"xbar", jvec(x.span())},
           {"h", jvec(r.h.span())},
           {"kind", to_string(r.kind)}};
  if (r.estimate) {
    row["value"] = jnum(r.estimate->value);
    row["status"] = to_string(r.estimate->status);
    row["evals"] = r.estimate->evaluations_used;
  } else {
    row["value"] = nullptr;
    row["status"] = "Error";
    row["evals"] = 0;
    row["error"] = r.error;
  }
  return row;
}

void sweep_csv(std::ostream& os, const std::string& fn, const Point& x, const SweepTable& t) {
  os << kSweepHeader;
  for (const auto& r : t.rows) {
    os << fn << ',' << joined(x.span(), true) << ',' << joined(r.h.span(), true) << ','
       << to_string(r.kind) << ',';
    if (r.estimate)
      os << format_number(r.estimate->value.raw(), true) << ',' << to_string(r.estimate->status)
         << ',' << r.estimate->evaluations_used;
    else
      os << ",Error,0";
    os << '\n';
  }
}

// --- commands -------------------------------------------------------------

void cmd_list(const Options& o, std::ostream& out) {
  json arr = json::array();
  for (const auto& info : builtin_function_info())
    arr.push_back({{"name", info.name}, {"dimension", 1}, {"source", info.source},
                   {"description", info.description}});
  if (o.format == "json") {
    json doc{{"config", {{"command", "list-functions"}}},
             {"results", arr},
             {"provenance", {{"version", RADEX_VERSION}, {"command", "list-functions"},
                             {"schedule", schedule_json(SamplingSchedule{})}}}};
    out << doc.dump(2) << '\n';
    return;
  }
  out << "name,dimension,source\n";
  for (const auto& info : builtin_function_info())
    out << info.name << ",1,\"" << info.source << "\"\n";
}

// Returns false when some row raised instead of producing an estimate.
bool cmd_sweep(const Options& o, std::ostream& out, std::ostream& err, const std::string& command) {
  const Selected sel = select_function(o);
  const SamplingSchedule s = schedule_from(o);
  const Point x = parse_point(o.at, sel.oracle.dimension());
  std::vector<Direction> dirs = parse_directions(o, sel.oracle.dimension());
  if (dirs.empty()) {
    if (command == "derive") throw UsageError("derive needs --dir");
    dirs = default_direction_grid(sel.oracle.dimension());
  }
  const auto kinds = parse_kinds(o.kinds);
  const SweepTable table = derivative_sweep(sel.oracle, x, dirs, kinds, s);
  json results = json::array();
  for (const auto& r : table.rows) results.push_back(estimate_row(sel.name, x, r));
  json config = config_json(o, command, sel);
  json kinds_json = json::array();
  for (auto k : kinds) kinds_json.push_back(to_string(k));
  config["kinds"] = kinds_json;
  Emitter{o, out}.emit(command, config, results, s,
                       [&](std::ostream& os) { sweep_csv(os, sel.name, x, table); });
  bool ok = true;
  for (const auto& r : table.rows) {
    if (r.estimate) continue;
    err << "error: " << to_string(r.kind) << " at h = " << joined(r.h.span(), false) << ": "
        << r.error << '\n';
    ok = false;
  }
  return ok;
}

json verdict_json(const MembershipVerdict& v) {
  json j{{"holds", v.holds}, {"margin", jnum(v.margin)}, {"sample_size", v.sample_size}};
  j["witness"] = v.witness ? jvec(v.witness->span()) : json(nullptr);
  return j;
}

void cmd_weaksub(const Options& o, std::ostream& out) {
  const Selected sel = select_function(o);
  const SamplingSchedule s = schedule_from(o);
  const std::size_t n = sel.oracle.dimension();
  const Point x = parse_point(o.at, n);
  json results;
  if (o.certificate) {
    results["certificate"] = verdict_json(global_min_certificate(sel.oracle, x));
  } else {
    WeakSubgradient w;
    if (!o.v.empty() || o.c) {
      if (o.v.empty() || !o.c) throw UsageError("verification needs both --v and --c");
      w.v = parse_list(o.v, "--v");
      require_dim(n, w.v.size());
      w.c = *o.c;
      w.norm_kind = o.norm == "l1" ? NormKind::L1 : NormKind::L2;
    } else {
      const auto dirs = parse_directions(o, n);
      if (dirs.size() != 1) throw UsageError("construction needs exactly one --dir");
      RadialFn fr;
      if (o.radial == "exact") {
        if (!sel.oracle.exact_form()) throw UsageError("function has no exact piecewise form");
        fr = exact_radial(*sel.oracle.exact_form(), x[0]);
      } else if (o.radial == "numeric") {
        fr = numeric_radial(sel.oracle, x, s);
      } else {
        throw UsageError("--radial must be exact or numeric");
      }
      if (o.norm != "l1" && o.norm != "l2") throw UsageError("--norm must be l1 or l2");
      w = o.norm == "l1" ? construct_l1(x, dirs.front(), o.eps, fr)
                         : construct_l2(x, dirs.front(), o.eps, fr);
      results["direction"] = jvec(w.direction);
      results["fr_value"] = jnum(w.fr_value);
      results["epsilon"] = jnum(w.epsilon);
    }
    results["v"] = jvec(w.v);
    results["c"] = jnum(w.c);
    results["norm"] = w.norm_kind == NormKind::L1 ? "l1" : "l2";
    results["provenance"] = w.provenance == Provenance::ConstructedL2   ? "ConstructedL2"
                            : w.provenance == Provenance::ConstructedL1 ? "ConstructedL1"
                                                                        : "UserSupplied";
    results["membership"] = verdict_json(verify_membership(sel.oracle, x, w));
  }
  Emitter{o, out}.emit("weaksub", config_json(o, "weaksub", sel), results, s,
                       [&](std::ostream& os) {
                         os << "key,value\n";
                         csv_flatten(results, "", os);
                       });
}

json cell_json(const DerivativeEstimate& e) {
  return json{{"value", jnum(e.value)}, {"status", to_string(e.status)},
              {"evals", e.evaluations_used}};
}

void cmd_regularity(const Options& o, std::ostream& out) {
  const Selected sel = select_function(o);
  const SamplingSchedule s = schedule_from(o);
  const Point x = parse_point(o.at, sel.oracle.dimension());
  const auto dirs = parse_directions(o, sel.oracle.dimension());
  const RegularityReport rep = classify_regularity(sel.oracle, x, s, dirs);
  json records = json::array();
  for (const auto& r : rep.chain.records) {
    json flags = json::array();
    for (auto f : r.equal) flags.push_back(to_string(f));
    records.push_back({{"h", jvec(r.h.span())},
                       {"radial", cell_json(r.radial)},
                       {"subderivative", cell_json(r.subder)},
                       {"directional", cell_json(r.directional)},
                       {"clarke", cell_json(r.clarke)},
                       {"equal", flags},
                       {"ordering_ok", r.ordering_ok}});
  }
  json flags = json::array();
  for (auto f : rep.chain.equality_flags) flags.push_back(to_string(f));
  json verdicts = json::array();
  for (const auto& v : rep.verdicts) {
    json j{{"kind", to_string(v.kind)}, {"holds", v.holds}, {"worst_slack", jnum(v.worst_slack)},
           {"excluded_directions", v.excluded_directions}, {"sample_size", v.sample_size}};
    j["witness"] = v.witness ? jvec(v.witness->span()) : json(nullptr);
    verdicts.push_back(j);
  }
  json unavailable = json::array();
  for (const auto& [k, why] : rep.unavailable)
    unavailable.push_back({{"kind", to_string(k)}, {"reason", why}});
  json results{{"records", records},   {"ordering_ok", rep.chain.ordering_ok},
               {"equality_flags", flags}, {"conditions", verdicts},
               {"unavailable", unavailable}, {"consistent", rep.consistent}};
  Emitter{o, out}.emit("regularity", config_json(o, "regularity", sel), results, s,
                       [&](std::ostream& os) {
                         os << "key,value\n";
                         csv_flatten(results, "", os);
                       });
}

void cmd_minimize(const Options& o, std::ostream& out) {
  const Selected sel = select_function(o);
  DescentParams p;
  p.schedule = schedule_from(o);
  if (o.descent_tol) p.descent_tol = *o.descent_tol;
  if (o.line_t_max) p.t_max = *o.line_t_max;
  if (o.max_iters) p.max_iters = *o.max_iters;
  const Point x0 = parse_point(o.at, sel.oracle.dimension());
  const DescentTrace tr = radial_descent(sel.oracle, x0, p);
  json its = json::array();
  for (const auto& it : tr.iterates) {
    json j{{"x", jvec(it.x.span())}, {"fx", jnum(it.fx)}};
    if (it.h) {
      j["h"] = jvec(it.h->span());
      j["t"] = jnum(it.t);
      j["fr"] = jnum(it.fr);
    }
    its.push_back(j);
  }
  json results{{"status", to_string(tr.status)}, {"steps", tr.steps()}, {"iterates", its},
               {"evaluations", tr.evaluations}, {"note", tr.note}};
  Emitter{o, out}.emit("minimize", config_json(o, "minimize", sel), results, p.schedule,
                       [&](std::ostream& os) {
                         os << "key,value\n";
                         csv_flatten(results, "", os);
                       });
}

void add_function_options(CLI::App* app, Options& o) {
  app->add_option("--fn", o.fn, "registry function name (see list-functions)");
  app->add_option("--expr", o.expr, "expression in x1..xn");
  app->add_option("--dim", o.dim, "dimension for --expr");
  app->add_option("--at", o.at, "base point, comma separated");
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--output", o.output, "write to this file instead of stdout");
}

void add_schedule_options(CLI::App* app, Options& o) {
  app->add_option("--t-min", o.t_min, "smallest grid step");
  app->add_option("--t-max", o.t_max, "largest grid step");
  app->add_option("--ppd", o.ppd, "grid points per decade");
  app->add_option("--ladder", o.ladder, "shrink ladder radii, comma separated");
  app->add_option("--perturbations", o.m, "perturbations per shell");
  app->add_option("--refine-rounds", o.refine_rounds, "refinement rounds");
  app->add_option("--tol", o.tol, "tolerance");
  app->add_option("--divergence", o.threshold, "divergence threshold");
}

}  // namespace

std::string format_number(double v, bool csv) {
  if (std::isinf(v)) return csv ? (v > 0 ? "INF" : "-INF") : (v > 0 ? "inf" : "-inf");
  if (std::isnan(v)) return csv ? "NAN" : "nan";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"radex: generalized derivatives, weak subgradients and radial descent"};
  app.set_version_flag("--version", std::string(RADEX_VERSION));
  app.require_subcommand(1);
  Options o;

  auto* list = app.add_subcommand("list-functions", "list the built-in functions");
  list->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* derive = app.add_subcommand("derive", "estimate derivatives in one direction");
  add_function_options(derive, o);
  add_schedule_options(derive, o);
  derive->add_option("--dir", o.dir, "direction, comma separated");
  derive->add_option("--kind,--kinds", o.kinds, "radial, clarke, subderivative, directional, all");

  auto* sweep = app.add_subcommand("sweep", "estimate derivatives over many directions");
  add_function_options(sweep, o);
  add_schedule_options(sweep, o);
  sweep->add_option("--kinds,--kind", o.kinds, "comma separated kinds or all");
  sweep->add_option("--grid", o.grid, "1D direction grid a:b:step");
  sweep->add_option("--dirs", o.dirs, "directions separated by ';'");

  auto* weak = app.add_subcommand("weaksub", "construct and verify weak subgradients");
  add_function_options(weak, o);
  add_schedule_options(weak, o);
  weak->add_option("--dir", o.dir, "direction for the construction");
  weak->add_option("--eps", o.eps, "epsilon > 0");
  weak->add_option("--norm", o.norm, "l2 or l1");
  weak->add_option("--radial", o.radial, "numeric or exact (1D piecewise functions)");
  weak->add_option("--v", o.v, "verify this v instead of constructing");
  weak->add_option("--c", o.c, "c for --v");
  weak->add_flag("--certificate", o.certificate, "check (0,0), the global-minimum certificate");

  auto* reg = app.add_subcommand("regularity", "derivative chain and support conditions");
  add_function_options(reg, o);
  add_schedule_options(reg, o);
  reg->add_option("--dirs", o.dirs, "directions separated by ';'");

  auto* mini = app.add_subcommand("minimize", "radial-epiderivative global descent");
  add_function_options(mini, o);
  add_schedule_options(mini, o);
  mini->add_option("--descent-tol", o.descent_tol, "negativity threshold for descent");
  mini->add_option("--line-t-max", o.line_t_max, "line search bound");
  mini->add_option("--max-iters", o.max_iters, "outer iteration limit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list->parsed()) cmd_list(o, out);
    else if (derive->parsed()) return cmd_sweep(o, out, err, "derive") ? kExitOk : kExitFault;
    else if (sweep->parsed()) return cmd_sweep(o, out, err, "sweep") ? kExitOk : kExitFault;
    else if (weak->parsed()) cmd_weaksub(o, out);
    else if (reg->parsed()) cmd_regularity(o, out);
    else if (mini->parsed()) cmd_minimize(o, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownFunction& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionMismatch& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFault;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace radex::cli
