// Command-line front end: path generation, QV pipeline, strategy replays,
// change-of-variable checks and the verification suite.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathwise/ito.hpp"
#include "pathwise/partitions.hpp"
#include "pathwise/path.hpp"
#include "pathwise/path_io.hpp"
#include "pathwise/qv.hpp"
#include "pathwise/trading.hpp"
#include "pathwise/verify.hpp"

using nlohmann::json;
using namespace pathwise;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "kind:key=val,key=val" or "kind:value" for one-parameter kinds.
struct SpecString {
  std::string kind;
  std::string bare;
  std::map<std::string, std::string> kv;
};

SpecString parse_spec(const std::string& s) {
  SpecString out;
  auto colon = s.find(':');
  out.kind = s.substr(0, colon);
  if (colon == std::string::npos) return out;
  std::string rest = s.substr(colon + 1);
  if (rest.find('=') == std::string::npos) {
    out.bare = rest;
    return out;
  }
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw UsageError("bad spec item '" + item + "'");
    out.kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double num(const SpecString& s, const std::string& key, double fallback,
           bool required = false) {
  auto it = s.kv.find(key);
  if (it == s.kv.end()) {
    if (required) throw UsageError("spec is missing '" + key + "'");
    return fallback;
  }
  return std::stod(it->second);
}

CadlagPath generate(const std::string& spec_str, double horizon,
                    std::uint64_t seed_override, bool has_seed) {
  SpecString s = parse_spec(spec_str);
  if (s.kind == "constant")
    return make_constant(s.bare.empty() ? num(s, "value", 0.0) : std::stod(s.bare),
                         horizon);
  if (s.kind == "single-jump")
    return make_single_jump(num(s, "t", 0.5), num(s, "from", 0.0),
                            num(s, "to", 1.0), horizon);
  if (s.kind == "square-wave")
    return make_square_wave(num(s, "period", 0.0, true), num(s, "low", 0.0),
                            num(s, "high", 1.0), horizon);
  if (s.kind == "random-walk") {
    RandomWalkSpec w;
    w.steps = static_cast<long long>(num(s, "N", 1024));
    w.step_size = num(s, "delta", std::exp2(-6));
    w.jump_rate = num(s, "jump_rate", 0.0);
    w.jump_bound = num(s, "jump_bound", 0.0);
    w.seed = has_seed ? seed_override
                      : static_cast<std::uint64_t>(num(s, "seed", 1));
    w.start = num(s, "start", 0.0);
    w.horizon = horizon;
    return make_random_walk(w);
  }
  throw UsageError("unknown generator kind '" + s.kind + "'");
}

JumpBound parse_psi(const std::string& spec_str) {
  SpecString s = parse_spec(spec_str);
  if (s.kind == "constant")
    return JumpBound::constant(s.bare.empty() ? num(s, "c", 1.0)
                                              : std::stod(s.bare));
  if (s.kind == "affine")
    return JumpBound::affine(s.bare.empty() ? num(s, "c", 1.0)
                                            : std::stod(s.bare));
  throw UsageError("unknown psi kind '" + s.kind + "'");
}

void emit(const json& doc, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream os(out_file);
  if (!os) throw std::runtime_error("cannot open " + out_file + " for writing");
  os << doc.dump(2) << '\n';
}

void emit_text(const std::string& text, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_file);
  if (!os) throw std::runtime_error("cannot open " + out_file + " for writing");
  os << text;
}

json curve_points(const QVCurve& c) {
  json arr = json::array();
  for (double t : c.stops()) arr.push_back({t, c(t)});
  return arr;
}

json trajectory_report(const char* name, const CapitalTrajectory& traj) {
  json doc;
  doc["strategy"] = name;
  doc["initial_capital"] = traj.initial_capital();
  doc["final_capital"] = traj.final_capital();
  doc["min_capital"] = traj.min_over_events();
  return doc;
}

std::string trajectory_csv(const CapitalTrajectory& traj) {
  std::ostringstream os;
  os << "t,capital,position\n";
  char buf[128];
  for (double t : traj.event_times()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, traj(t),
                  traj.position_at(t));
    os << buf;
  }
  return os.str();
}

int cmd_qv(const std::string& in, int nmax, double tol,
           const std::string& out, const std::string& format) {
  CadlagPath path = read_path(in);
  LadderSequence seq = build_ladder_sequence(path, nmax);
  QVLimit lim = qv_limit(path, seq, tol);
  if (format == "csv") {
    std::ostringstream os;
    char buf[80];
    os << "t,A\n";
    for (double t : lim.limit.stops()) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, lim.limit(t));
      os << buf;
    }
    emit_text(os.str(), out);
    return 0;
  }
  json doc;
  doc["n_max"] = nmax;
  doc["converged"] = lim.converged;
  doc["tol"] = lim.tol;
  auto& levels = doc["levels"] = json::array();
  for (int n = 0; n < nmax; ++n)
    levels.push_back({{"n", n},
                      {"distance_to_next", lim.distances[static_cast<std::size_t>(n)]},
                      {"stop_count", seq.at(n).stops.size()}});
  doc["limit"] = {{"curve", curve_points(lim.limit)}};
  JumpIdentityReport jr = jump_identity_check(path, lim.limit);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ut(0.0, path.horizon());
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 50; ++i) {
    double a = ut(rng), b = ut(rng);
    if (a > b) std::swap(a, b);
    if (a < b) pairs.emplace_back(a, b);
  }
  doc["diagnostics"] = {
      {"jump_identity", jr.max_residual},
      {"uncovered_jumps", jr.uncovered_jump_times.size()},
      {"norvaisa", norvaisa_check(path, lim.limit, pairs)},
      {"nested", seq.nested}};
  emit(doc, out);
  return 0;
}

int cmd_covar(const std::vector<std::string>& ins, int nmax,
              const std::string& out) {
  if (ins.size() < 2) throw UsageError("covar needs at least two --in files");
  std::vector<CadlagPath> paths;
  for (const auto& f : ins) paths.push_back(read_path(f));
  CovariationSet cov = covariation(paths, nmax);
  double T = paths.front().horizon();
  json doc;
  doc["n_max"] = nmax;
  doc["dim"] = cov.dim();
  doc["merged_stop_count"] = cov.merged_stops().size();
  auto& mat = doc["covariation_at_T"] = json::array();
  for (std::size_t m = 0; m < cov.dim(); ++m) {
    json row = json::array();
    for (std::size_t l = 0; l < cov.dim(); ++l) row.push_back(cov.cov(m, l, T));
    mat.push_back(row);
  }
  emit(doc, out);
  return 0;
}

int cmd_strategy(const std::string& kind, const std::string& in, double a,
                 double b, int L, double c, int n, double h, double stop_t,
                 const std::string& psi_spec, double clong, double cshort,
                 const std::string& out, const std::string& format) {
  CadlagPath path = read_path(in);
  if (kind == "doob") {
    DoobResult res = doob_strategy(path, a, b, L, c);
    if (format == "csv") {
      emit_text(trajectory_csv(res.trajectory), out);
      return 0;
    }
    json doc = trajectory_report("doob", res.trajectory);
    doc["params"] = {{"a", a}, {"b", b}, {"L", L}, {"c", c}};
    doc["sigma"] = std::isfinite(res.sigma) ? json(res.sigma) : json("never");
    doc["min_capital"] = res.min_capital;
    doc["guarantee_residual_min"] = res.guarantee_residual_min;
    doc["violations"] = json::array();
    emit(doc, out);
    return res.guarantee_residual_min >= -1e-12 ? 0 : 1;
  }
  if (kind == "qv-diff") {
    LadderSequence seq = build_ladder_sequence(path, n);
    CapitalTrajectory traj = qv_diff_strategy(path, seq, n);
    if (format == "csv") {
      emit_text(trajectory_csv(traj), out);
      return 0;
    }
    json doc = trajectory_report("qv-diff", traj);
    doc["params"] = {{"n", n}};
    doc["violations"] = json::array();
    emit(doc, out);
    return 0;
  }
  if (kind == "kolmogorov") {
    LadderSequence seq = build_ladder_sequence(path, n);
    KolmogorovResult res = kolmogorov_process(path, seq, n, c);
    if (format == "csv") {
      emit_text(trajectory_csv(res.trajectory), out);
      return 0;
    }
    json doc = trajectory_report("kolmogorov", res.trajectory);
    doc["params"] = {{"n", n}, {"c", c}};
    doc["sigma_n"] =
        std::isfinite(res.sigma_n) ? json(res.sigma_n) : json("never");
    doc["min_capital"] = res.min_capital;
    doc["max_increment"] = res.max_increment;
    doc["increment_bound"] = res.increment_bound;
    doc["replay_residual"] = res.replay_residual;
    doc["violations"] = json::array();
    emit(doc, out);
    return res.min_capital >= -1e-12 ? 0 : 1;
  }
  if (kind == "stricker") {
    StrickerResult res = stricker_strategy(path, n, L, c);
    json doc;
    doc["strategy"] = "stricker";
    doc["params"] = {{"n", n}, {"L", L}, {"c", c}};
    doc["initial_capital"] = res.initial_capital;
    doc["final_capital"] = res.portfolio(path.horizon());
    doc["component_count"] = res.portfolio.size();
    doc["guarantee_residual_min"] = res.guarantee_residual_min;
    doc["violations"] = json::array();
    emit(doc, out);
    return res.guarantee_residual_min >= -1e-12 ? 0 : 1;
  }
  if (kind == "corollary") {
    CorollaryResult res = corollary_portfolio(path, L, c, std::max(1, n - 4), n);
    json doc;
    doc["strategy"] = "corollary";
    doc["params"] = {{"L", L}, {"c", c}, {"n_hi", n}};
    doc["initial_capital"] = res.initial_capital;
    doc["final_capital"] = res.final_capital;
    auto& lv = doc["levels"] = json::array();
    for (const auto& level : res.levels)
      lv.push_back({{"n", level.n},
                    {"crossings_before_sigma", level.crossings_before_sigma},
                    {"bound", level.bound},
                    {"bound_holds", level.bound_holds}});
    emit(doc, out);
    return 0;
  }
  if (kind == "margin") {
    RealizedStrategy s;
    s.stops = {stop_t};
    s.positions = {h};
    CapitalTrajectory traj = run_capital(path, s, std::abs(h) * path(stop_t) + 1);
    MarginParams params{clong, cshort};
    MarginReport rep = margin_check(path, traj, params, parse_psi(psi_spec));
    json doc = trajectory_report("margin", traj);
    doc["params"] = {{"h", h},
                     {"stop", stop_t},
                     {"c_long", clong},
                     {"c_short", cshort},
                     {"psi", psi_spec}};
    doc["compliant"] = rep.compliant;
    auto& viol = doc["violations"] = json::array();
    for (const auto& v : rep.violations)
      viol.push_back({{"t", v.time}, {"shortfall", v.shortfall}});
    emit(doc, out);
    return rep.compliant ? 0 : 1;
  }
  throw UsageError("unknown strategy kind '" + kind + "'");
}

int cmd_ito(const std::string& in, int nmax, const std::string& fn_name,
            const std::string& out) {
  CadlagPath path = read_path(in);
  LadderSequence seq = build_ladder_sequence(path, nmax);
  SmoothFunction fn;
  if (fn_name == "quadratic")
    fn = {[](double x) { return x * x; }, [](double x) { return 2 * x; },
          [](double) { return 2.0; }};
  else if (fn_name == "sin")
    fn = {[](double x) { return std::sin(x); },
          [](double x) { return std::cos(x); },
          [](double x) { return -std::sin(x); }};
  else if (fn_name == "exp")
    fn = {[](double x) { return std::exp(x); },
          [](double x) { return std::exp(x); },
          [](double x) { return std::exp(x); }};
  else
    throw UsageError("unknown function '" + fn_name + "'");

  ItoResidualReport ito = ito_residual(path, seq, nmax, fn);
  SmoothFunction ident{[](double x) { return x; }, [](double) { return 1.0; },
                       [](double) { return 0.0; }};
  SmoothFunction one{[](double) { return 1.0; }, [](double) { return 0.0; },
                     [](double) { return 0.0; }};
  IntegralCurve integral = follmer_integral(path, seq, nmax, fn);

  json doc;
  doc["n_max"] = nmax;
  doc["function"] = fn_name;
  json curve = json::array();
  for (double t : integral.stops()) curve.push_back({t, integral(t)});
  doc["integral_curve"] = curve;
  doc["residuals"] = {
      {"ito", ito.sup_residual},
      {"qv_of_function", qv_of_function(path, seq, ident).sup_residual},
      {"qv_of_integral", qv_of_integral(path, seq, one).sup_residual}};
  doc["terms_at_T"] = {{"integral", ito.integral_term_at_T},
                       {"qv", ito.qv_term_at_T},
                       {"jumps", ito.jump_term_at_T}};
  emit(doc, out);
  return 0;
}

int cmd_verify(const std::string& out) {
  std::vector<CriterionResult> results = run_acceptance();
  bool all_pass = true;
  json doc;
  auto& arr = doc["criteria"] = json::array();
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("[%s] %2d %-42s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
  }
  doc["pass"] = all_pass;
  std::printf("%s\n", all_pass ? "all criteria passed" : "FAILURES present");
  if (!out.empty()) emit(doc, out);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pathwise quadratic variation toolkit"};
  app.require_subcommand(1);

  std::string in, out, format = "json", spec, psi_spec = "constant:1";
  std::vector<std::string> ins;
  std::string kind, fn_name = "quadratic", suite = "all", seeds;
  int nmax = 8, L = 2, n = 4;
  double tol = -1, a = 0, b = 1, c = 1, T = 1, clong = 0.5, cshort = 0.5;
  double h = 1, stop_t = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;

  auto* gen = app.add_subcommand("gen", "generate a path file");
  gen->add_option("--spec", spec, "generator spec, e.g. random-walk:N=4096,delta=0.015625,seed=7")->required();
  gen->add_option("--out", out, "output path file")->required();
  gen->add_option("--T", T, "horizon");
  gen->add_option("--seed", seed, "seed override");
  gen->add_option("--format", format, "json|csv (csv is the default for non-.json outputs)");

  auto* qv = app.add_subcommand("qv", "ladder + quadratic variation report");
  qv->add_option("--in", in)->required();
  qv->add_option("--out", out);
  qv->add_option("--nmax", nmax);
  qv->add_option("--tol", tol);
  qv->add_option("--format", format);

  auto* covar = app.add_subcommand("covar", "covariation matrix report");
  covar->add_option("--in", ins)->required();
  covar->add_option("--out", out);
  covar->add_option("--nmax", nmax);

  auto* strat = app.add_subcommand("strategy", "strategy replay report");
  strat->set_help_flag("--help", "print help");  // frees -h/--h for position size
  strat->add_option("kind", kind, "doob|qv-diff|kolmogorov|stricker|corollary|margin")->required();
  strat->add_option("--in", in)->required();
  strat->add_option("--out", out);
  strat->add_option("--a", a);
  strat->add_option("--b", b);
  strat->add_option("--L", L);
  strat->add_option("--c", c);
  strat->add_option("--n", n);
  strat->add_option("--h", h, "position size (margin kind)");
  strat->add_option("--stop", stop_t, "entry time (margin kind)");
  strat->add_option("--psi", psi_spec);
  strat->add_option("--clong", clong);
  strat->add_option("--cshort", cshort);
  strat->add_option("--format", format);

  auto* ito = app.add_subcommand("ito", "change-of-variable report");
  ito->add_option("--in", in)->required();
  ito->add_option("--out", out);
  ito->add_option("--nmax", nmax);
  ito->add_option("--fn", fn_name, "quadratic|sin|exp");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--out", out, "also write a JSON summary");
  verify->add_option("--suite", suite);
  verify->add_option("--seeds", seeds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      has_seed = gen->count("--seed") > 0;
      CadlagPath path = generate(spec, T, seed, has_seed);
      write_path(path, out);
      return 0;
    }
    if (*qv) return cmd_qv(in, nmax, tol, out, format);
    if (*covar) return cmd_covar(ins, nmax, out);
    if (*strat)
      return cmd_strategy(kind, in, a, b, L, c, n, h, stop_t, psi_spec, clong,
                          cshort, out, format);
    if (*ito) return cmd_ito(in, nmax, fn_name, out);
    if (*verify) return cmd_verify(out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
