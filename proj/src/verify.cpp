#include "pathwise/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "pathwise/ito.hpp"
#include "pathwise/partitions.hpp"
#include "pathwise/path.hpp"
#include "pathwise/qv.hpp"
#include "pathwise/trading.hpp"

namespace pathwise {

unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("PATHWISE_QV_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < hw)
      hw = static_cast<unsigned>(cap);
  }
  return hw;
}

namespace {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// The reference corpus: seeded lattice walks with occasional larger jumps,
// all in the sample space for c = 1 (steps 2^-6, jumps <= 1/4).
CadlagPath standard_walk(std::uint64_t seed) {
  RandomWalkSpec spec;
  spec.steps = 1 << 12;
  spec.step_size = std::exp2(-6);
  spec.jump_rate = 0.05;
  spec.jump_bound = 0.25;
  spec.seed = seed;
  spec.horizon = 1.0;
  return make_random_walk(spec);
}

struct WalkData {
  std::shared_ptr<const CadlagPath> path;
  LadderSequence seq;
  QVLimit lim;

  explicit WalkData(std::uint64_t seed)
      : path(std::make_shared<CadlagPath>(standard_walk(seed))),
        seq(build_ladder_sequence(*path, 10)),
        lim(qv_limit(*path, seq)) {}
};

struct Check {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      note = why;
    }
  }
};

// ---- criterion 1: brute-force definitional oracle ----

double brute_force_qv(const CadlagPath& w, const std::vector<double>& pi,
                      double t) {
  double sum = 0;
  for (std::size_t k = 1; k < pi.size(); ++k) {
    double d = w(std::min(pi[k], t)) - w(std::min(pi[k - 1], t));
    sum += d * d;
  }
  double tail = w(t) - w(std::min(pi.back(), t));
  return sum + tail * tail;
}

Check criterion_oracle() {
  Check c;
  double worst = 0;
  for (int p = 0; p < 50 && c.ok; ++p) {
    std::mt19937_64 rng(9000 + static_cast<std::uint64_t>(p));
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    std::uniform_real_distribution<double> uv(-2.0, 2.0);
    std::uniform_int_distribution<int> nb(1, 99);
    std::vector<double> ts{0.0}, vs{uv(rng)};
    int extra = nb(rng);
    for (int i = 0; i < extra; ++i) ts.push_back(ut(rng));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    while (vs.size() < ts.size()) vs.push_back(uv(rng));
    CadlagPath path(1.0, PathMode::step, ts, vs);

    std::vector<double> pi{0.0};
    std::uniform_int_distribution<int> np(1, 12);
    int m = np(rng);
    for (int i = 0; i < m; ++i) pi.push_back(ut(rng));
    std::sort(pi.begin(), pi.end());
    pi.erase(std::unique(pi.begin(), pi.end()), pi.end());

    QVCurve qv = qv_approx(path, Partition(pi));
    for (int q = 0; q < 1000; ++q) {
      double t = ut(rng);
      double diff = std::abs(qv(t) - brute_force_qv(path, pi, t));
      worst = std::max(worst, diff);
      if (diff > 1e-12) {
        c.require(false, "oracle mismatch " + fmt(diff) + " on path " +
                             std::to_string(p));
        break;
      }
    }
  }
  if (c.ok) c.note = "max |qv - oracle| = " + fmt(worst);
  return c;
}

// ---- criterion 2: limit curve shape + jump identity ----

Check criterion_limit_shape(const std::vector<WalkData>& walks) {
  Check c;
  double worst_jump = 0;
  for (std::size_t i = 0; i < walks.size() && c.ok; ++i) {
    const auto& wd = walks[i];
    c.require(wd.lim.converged, "limit not converged on seed " +
                                    std::to_string(i + 1));
    const QVCurve& A = wd.lim.limit;
    double last = 0;
    bool first = true;
    for (double t : A.event_times()) {
      double v = A(t);
      if (!first) {
        double lv = A.left_value(t);
        c.require(lv >= last - 1e-12 && v >= lv - 1e-12,
                  "limit decreases at t=" + fmt(t));
      }
      last = v;
      first = false;
    }
    JumpIdentityReport jr = jump_identity_check(*wd.path, A);
    c.require(jr.uncovered_jump_times.empty(), "uncovered jump on seed " +
                                                   std::to_string(i + 1));
    worst_jump = std::max(worst_jump, jr.max_residual);
    c.require(jr.max_residual <= 1e-9,
              "jump identity residual " + fmt(jr.max_residual));
  }
  if (c.ok) c.note = "max jump residual = " + fmt(worst_jump);
  return c;
}

// ---- criterion 3: level-distance diagnostic ----

Check criterion_convergence(const std::vector<WalkData>& walks) {
  Check c;
  double worst_final = 0;
  for (std::size_t i = 0; i < walks.size() && c.ok; ++i) {
    const auto& d = walks[i].lim.distances;
    c.require(d.size() == 10, "expected 10 level distances");
    if (!c.ok) break;
    for (double x : d) c.require(std::isfinite(x), "non-finite distance");
    c.require(d[9] <= d[5], "rho grew between n=5 and n=9 on seed " +
                                std::to_string(i + 1));
    c.require(d[9] <= std::exp2(-5),
              "final distance " + fmt(d[9]) + " too large");
    worst_final = std::max(worst_final, d[9]);
  }
  if (c.ok) c.note = "max final distance = " + fmt(worst_final);
  return c;
}

// ---- criterion 4: replay identity for A^n - A^{n-1} ----

Check criterion_replay(const std::vector<WalkData>& walks) {
  Check c;
  double worst = 0;
  for (std::size_t i = 0; i < 10 && c.ok; ++i) {
    const auto& wd = walks[i];
    for (int n = 4; n <= 10 && c.ok; ++n) {
      QVCurve fine = qv_approx(wd.path, wd.seq.at(n).partition().times, n);
      QVCurve coarse =
          qv_approx(wd.path, wd.seq.at(n - 1).partition().times, n - 1);
      CapitalTrajectory traj = qv_diff_strategy(*wd.path, wd.seq, n);
      for (double t : fine.event_times()) {
        double diff = std::abs(traj(t) - (fine(t) - coarse(t)));
        worst = std::max(worst, diff);
        if (diff > 1e-10) {
          c.require(false, "replay residual " + fmt(diff) + " at n=" +
                               std::to_string(n));
          break;
        }
      }
    }
  }
  if (c.ok) c.note = "max replay residual = " + fmt(worst);
  return c;
}

// ---- criterion 5: upcrossing inequality replay ----

Check criterion_doob() {
  Check c;
  double worst = 0;
  std::vector<std::string> fails;
  parallel_for(50, [&](std::size_t p) {
    RandomWalkSpec spec;
    spec.steps = 512;
    spec.step_size = std::exp2(-5);
    spec.jump_rate = 0.1;
    spec.jump_bound = 0.25;
    spec.seed = 1000 + p;
    CadlagPath path = make_random_walk(spec);
    std::mt19937_64 rng(7000 + p);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    std::string bad;
    double local_worst = 0;
    for (int q = 0; q < 20; ++q) {
      double a = ur(rng), b = ur(rng);
      if (a > b) std::swap(a, b);
      if (b - a < 0.01) b = a + 0.01;
      DoobResult res = doob_strategy(path, a, b, 2, 0.25);
      local_worst =
          std::min(local_worst, std::min(res.guarantee_residual_min,
                                         res.min_capital));
      if (res.guarantee_residual_min < -1e-12 || res.min_capital < -1e-12)
        bad = "violation on path " + std::to_string(p) + " (a=" + fmt(a) +
              ", b=" + fmt(b) + ")";
    }
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    worst = std::min(worst, local_worst);
    if (!bad.empty()) fails.push_back(bad);
  });
  c.require(fails.empty(), fails.empty() ? "" : fails.front());
  if (c.ok) c.note = "min slack over 1000 configs = " + fmt(worst);
  return c;
}

// ---- criterion 6: scaled-difference supermartingale replay ----

Check criterion_kolmogorov(const std::vector<WalkData>& walks) {
  Check c;
  double worst_cap = 0, worst_inc = 0;
  for (std::size_t i = 0; i < 10 && c.ok; ++i) {
    for (int n = 4; n <= 8 && c.ok; ++n) {
      KolmogorovResult res = kolmogorov_process(*walks[i].path, walks[i].seq,
                                                n, 1.0);
      worst_cap = std::min(worst_cap, res.min_capital);
      worst_inc = std::max(worst_inc, res.max_increment - res.increment_bound);
      c.require(res.min_capital >= -1e-12,
                "capital " + fmt(res.min_capital) + " at n=" +
                    std::to_string(n));
      c.require(res.max_increment <= res.increment_bound + 1e-12,
                "increment " + fmt(res.max_increment) + " exceeds bound at n=" +
                    std::to_string(n));
    }
  }
  if (c.ok)
    c.note = "min capital = " + fmt(worst_cap) +
             ", max increment slack = " + fmt(-worst_inc);
  return c;
}

// ---- criterion 7: averaged upcrossing portfolio ----

Check criterion_stricker(const std::vector<WalkData>& walks) {
  Check c;
  double worst = 0;
  for (std::size_t i = 0; i < 10 && c.ok; ++i) {
    for (int n = 2; n <= 4 && c.ok; ++n) {
      StrickerResult res = stricker_strategy(*walks[i].path, n, 2, 1.0);
      c.require(res.initial_capital <= std::exp2(2) + 1.0,
                "initial capital " + fmt(res.initial_capital) + " too large");
      worst = std::min(worst, res.guarantee_residual_min);
      c.require(res.guarantee_residual_min >= -1e-12,
                "guarantee residual " + fmt(res.guarantee_residual_min) +
                    " at n=" + std::to_string(n));
    }
  }
  if (c.ok) c.note = "min guarantee slack = " + fmt(worst);
  return c;
}

// ---- criterion 8: crossing-bound witness ----

Check criterion_crossing_witness(const std::vector<WalkData>& walks) {
  Check c;
  CadlagPath wave =
      make_square_wave(std::exp2(-12), -std::exp2(-4), std::exp2(-4), 1.0);
  CorollaryResult res = corollary_portfolio(wave, 2, 1.0, 4, 8);
  const CorollaryLevel& l4 = res.levels.front();
  c.require(l4.n == 4, "unexpected level ordering");
  c.require(!l4.bound_holds, "square wave did not break the n=4 bound (" +
                                 std::to_string(l4.crossings_before_sigma) +
                                 " crossings)");
  c.require(res.final_capital > res.initial_capital,
            "portfolio did not gain on the square wave");
  for (std::size_t i = 0; i < walks.size() && c.ok; ++i) {
    const CadlagPath& path = *walks[i].path;
    double sigma = sigma_L(path, 2);
    for (int n = 4; n <= 8 && c.ok; ++n) {
      CrossingTimes ct = grid_crossing_times(path, std::exp2(-n));
      long long count;
      if (sigma <= path.horizon())
        count = std::lower_bound(ct.up.begin(), ct.up.end(), sigma) -
                ct.up.begin();
      else
        count = static_cast<long long>(ct.up.size());
      c.require(static_cast<double>(count) <=
                    static_cast<double>(n) * n * std::exp2(2 * n),
                "walk " + std::to_string(i + 1) + " broke the n=" +
                    std::to_string(n) + " bound");
    }
  }
  if (c.ok)
    c.note = "wave crossings = " + std::to_string(l4.crossings_before_sigma) +
             " > 4096; portfolio gain = " +
             fmt(res.final_capital - res.initial_capital);
  return c;
}

// ---- criterion 9: polarization identities ----

Check criterion_polarization(const std::vector<WalkData>& walks) {
  Check c;
  const CadlagPath& w = *walks[0].path;
  CadlagPath neg = scale(w, -1.0);
  CadlagPath zero = make_constant(0.0, w.horizon());

  LadderSequence seq8 = build_ladder_sequence(w, 8);
  QVLimit lim = qv_limit(w, seq8);

  struct Case {
    const CadlagPath* second;
    double sign;  // expected cov = sign * [w]
    const char* tag;
  };
  std::vector<Case> cases{{&w, 1.0, "(w,w)"},
                          {&neg, -1.0, "(w,-w)"},
                          {&zero, 0.0, "(w,0)"}};
  double worst = 0, worst_exact = 0;
  for (const auto& cs : cases) {
    CovariationSet cov = covariation({w, *cs.second}, 8);
    for (double t : cov.event_times()) {
      double got = cov.cov(0, 1, t);
      double want = cs.sign * lim.limit(t);
      worst = std::max(worst, std::abs(got - want));
      worst_exact = std::max(worst_exact, std::abs(got - cov.cov(1, 0, t)));
      double d0 = std::abs(cov.cov(0, 0, t) - cov.component(0)(t));
      double d1 = std::abs(cov.cov(1, 1, t) - cov.component(1)(t));
      worst_exact = std::max({worst_exact, d0, d1});
    }
    c.require(worst <= 1e-9, std::string("covariation residual ") +
                                 fmt(worst) + " on " + cs.tag);
    c.require(worst_exact <= 1e-12,
              std::string("symmetry/diagonal residual on ") + cs.tag);
    if (!c.ok) break;
  }
  if (c.ok)
    c.note = "max identity residual = " + fmt(worst) +
             ", symmetry/diagonal = " + fmt(worst_exact);
  return c;
}

// ---- criterion 10: increment and partial-sum equivalence ----

Check criterion_equivalence(const std::vector<WalkData>& walks) {
  Check c;
  double worst_ratio = 0;
  for (std::size_t i = 0; i < walks.size() && c.ok; ++i) {
    const auto& wd = walks[i];
    double rho = wd.lim.distances.back();
    double osc = osc_over_partition(*wd.path, wd.seq.at(10).partition());
    // The bound degenerates to 0 on lattice walks whose breakpoints are all
    // stops; the absolute floor absorbs accumulated rounding there.
    double bound = 10 * rho + 10 * osc * osc + 1e-12;

    std::mt19937_64 rng(4000 + i);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    std::vector<std::pair<double, double>> pairs;
    while (pairs.size() < 200) {
      double s = ut(rng), t = ut(rng);
      if (s > t) std::swap(s, t);
      if (s == t) continue;
      pairs.emplace_back(s, t);
    }
    double nr = norvaisa_check(*wd.path, wd.lim.limit, pairs);
    c.require(nr <= bound, "increment residual " + fmt(nr) + " > bound " +
                               fmt(bound) + " on seed " + std::to_string(i + 1));

    std::uniform_int_distribution<int> uk(0, (1 << 12) - 2);
    std::vector<double> pts;
    for (int q = 0; q < 100; ++q)
      pts.push_back((uk(rng) + 0.5) / static_cast<double>(1 << 12));
    FollmerReport fr = follmer_check(*wd.path, wd.lim.limit, pts);
    c.require(fr.max_residual <= bound,
              "partial-sum residual " + fmt(fr.max_residual) + " > bound " +
                  fmt(bound));
    c.require(fr.decomposition_decrease <= 1e-12,
              "continuous part decreases by " + fmt(fr.decomposition_decrease));
    worst_ratio = std::max(worst_ratio, std::max(nr, fr.max_residual) / bound);
  }
  if (c.ok) c.note = "max residual/bound = " + fmt(worst_ratio);
  return c;
}

// ---- criterion 11: change-of-variable residuals ----

Check criterion_ito(const std::vector<WalkData>& walks) {
  Check c;
  double worst_quad = 0;
  for (std::size_t i = 0; i < 10 && c.ok; ++i) {
    std::mt19937_64 rng(5000 + i);
    std::uniform_real_distribution<double> uc(-2.0, 2.0);
    double qa = uc(rng), qb = uc(rng), qc = uc(rng);
    SmoothFunction F{[=](double x) { return qa * x * x + qb * x + qc; },
                     [=](double x) { return 2 * qa * x + qb; },
                     [=](double) { return 2 * qa; }};
    ItoResidualReport rep = ito_residual(*walks[i].path, walks[i].seq, 10, F);
    worst_quad = std::max(worst_quad, rep.sup_residual);
    c.require(rep.sup_residual <= 1e-9,
              "quadratic residual " + fmt(rep.sup_residual));
  }
  // Dyadic-valued step paths whose breakpoints the ladder covers.
  std::vector<CadlagPath> hand{
      CadlagPath(1.0, PathMode::step, {0, 0.25, 0.5, 0.75},
                 {0.0, 0.5, -0.25, 1.0}),
      CadlagPath(1.0, PathMode::step, {0, 0.125, 0.375, 0.625, 0.875},
                 {1.0, 0.75, 1.5, 0.5, 0.625}),
      CadlagPath(2.0, PathMode::step, {0, 1.0}, {0.0, 1.0})};
  SmoothFunction sq{[](double x) { return x * x; },
                    [](double x) { return 2 * x; }, [](double) { return 2.0; }};
  for (const auto& hp : hand) {
    if (!c.ok) break;
    LadderSequence seq = build_ladder_sequence(hp, 10);
    ItoResidualReport rep = ito_residual(hp, seq, 10, sq);
    worst_quad = std::max(worst_quad, rep.sup_residual);
    c.require(rep.sup_residual <= 1e-9,
              "hand-path quadratic residual " + fmt(rep.sup_residual));
  }
  SmoothFunction sine{[](double x) { return std::sin(x); },
                      [](double x) { return std::cos(x); },
                      [](double x) { return -std::sin(x); }};
  int improved = 0;
  for (const auto& wd : walks) {
    double r5 = ito_residual(*wd.path, wd.seq, 5, sine).sup_residual;
    double r10 = ito_residual(*wd.path, wd.seq, 10, sine).sup_residual;
    if (r10 <= r5) ++improved;
  }
  c.require(improved >= 18, "sine residual improved on only " +
                                std::to_string(improved) + "/20 paths");
  if (c.ok)
    c.note = "max quadratic residual = " + fmt(worst_quad) +
             ", sine improved on " + std::to_string(improved) + "/20";
  return c;
}

// ---- criterion 12: derived-curve QV cross-checks ----

Check criterion_cross_checks(const std::vector<WalkData>& walks) {
  Check c;
  const CadlagPath& w = *walks[2].path;
  LadderSequence seq8 = build_ladder_sequence(w, 8);
  SmoothFunction ident{[](double x) { return x; }, [](double) { return 1.0; },
                       [](double) { return 0.0; }};
  SmoothFunction twox{[](double x) { return 2 * x; }, [](double) { return 2.0; },
                      [](double) { return 0.0; }};
  SmoothFunction one{[](double) { return 1.0; }, [](double) { return 0.0; },
                     [](double) { return 0.0; }};
  double worst = 0;
  worst = std::max(worst, qv_of_function(w, seq8, ident).sup_residual);
  worst = std::max(worst, qv_of_function(w, seq8, twox).sup_residual);
  worst = std::max(worst, qv_of_integral(w, seq8, one).sup_residual);
  c.require(worst <= 1e-9, "derived QV residual " + fmt(worst));

  RandomWalkSpec spec;
  spec.steps = 256;
  spec.step_size = std::exp2(-6);
  spec.seed = 5;
  spec.start = 0.5;
  CadlagPath geo =
      transform(make_random_walk(spec), [](double x) { return std::exp(x); });
  LadderSequence gseq = build_ladder_sequence(geo, 8);
  LogCalculusReport rep = log_calculus(geo, gseq);
  worst = std::max(worst, rep.log_qv_residual);
  worst = std::max(worst, rep.stoch_log_qv_residual);
  c.require(rep.log_qv_residual <= 1e-9,
            "log QV residual " + fmt(rep.log_qv_residual));
  c.require(rep.stoch_log_qv_residual <= 1e-9,
            "stochastic-log QV residual " + fmt(rep.stoch_log_qv_residual));
  if (c.ok) c.note = "max residual = " + fmt(worst);
  return c;
}

// ---- criterion 13: margin arithmetic ----

Check criterion_margin() {
  Check c;
  std::mt19937_64 rng(6000);
  std::uniform_real_distribution<double> uu(0.0, 10.0);
  std::uniform_real_distribution<double> ucs(0.01, 2.0);
  std::uniform_real_distribution<double> uc(0.05, 3.0);
  for (int q = 0; q < 1000 && c.ok; ++q) {
    double u = uu(rng), cs = ucs(rng);
    JumpBound psi = [&]() {
      switch (q % 3) {
        case 0:
          return JumpBound::constant(uc(rng));
        case 1:
          return JumpBound::affine(uc(rng));
        default: {
          double v0 = uc(rng);
          return JumpBound::tabulated({0.0, 3.0, 6.0},
                                      {v0, v0 + uc(rng), v0 + 3.0});
        }
      }
    }();
    double direct = std::max(1.0, (1 + cs) * psi(u) + cs * u);
    if (psi_prime(u, psi, cs) != direct) {
      c.require(false, "psi' mismatch at u=" + fmt(u));
    }
  }

  // Boundary-tight short position on a step path that is flat after the entry.
  CadlagPath path(1.0, PathMode::step, {0, 0.25, 0.5}, {1.0, 1.2, 1.0});
  MarginParams params;  // c_long = c_short = 0.5
  JumpBound psi = JumpBound::constant(0.5);
  double w = path(0.5);
  double sup_before = 1.2;
  double rise = (1 + params.c_short) * (w + psi(sup_before)) - w;
  double alpha = 1.0;
  double h_star = -alpha / rise;

  auto run_short = [&](double h) {
    RealizedStrategy s;
    s.stops = {0.5};
    s.positions = {h};
    return margin_check(path, run_capital(path, s, alpha), params, psi);
  };
  c.require(run_short(h_star).compliant, "boundary-tight short rejected");
  c.require(!run_short(1.01 * h_star).compliant, "oversized short accepted");
  if (c.ok) c.note = "1000 psi' triples exact; tight short h* = " + fmt(h_star);
  return c;
}

// ---- criterion 14: prefix invariance ----

Check criterion_causality() {
  Check c;
  struct Named {
    const char* name;
    StrategyRule rule;
  };
  std::vector<Named> rules;
  rules.push_back({"buy_and_hold", buy_and_hold_rule()});
  rules.push_back({"doob", doob_rule(-0.25, 0.25, 2, 1.0)});
  rules.push_back({"qv_diff", qv_diff_rule(4)});
  rules.push_back({"kolmogorov", kolmogorov_rule(4, 1.0)});
  rules.push_back({"stricker_component", stricker_component_rule(0, 3, 2, 1.0)});
  StrategyRule lookahead = [](const CadlagPath& p) {
    RealizedStrategy s;
    s.stops = {0.0};
    s.positions = {p(p.horizon())};
    return s;
  };

  std::vector<CadlagPath> paths;
  for (int i = 0; i < 20; ++i) {
    RandomWalkSpec spec;
    spec.steps = 256;
    spec.step_size = std::exp2(-5);
    spec.jump_rate = 0.1;
    spec.jump_bound = 0.25;
    spec.seed = 300 + static_cast<std::uint64_t>(i);
    paths.push_back(make_random_walk(spec));
  }
  const std::vector<double> cuts{0.2, 0.35, 0.5, 0.65, 0.8};

  for (const auto& named : rules) {
    if (!c.ok) break;
    std::uint64_t seed = 8000;
    for (const auto& p : paths) {
      for (double cut : cuts) {
        if (!causality_check(named.rule, p, cut, seed++)) {
          c.require(false, std::string(named.name) + " failed at cut " +
                               fmt(cut));
          break;
        }
      }
      if (!c.ok) break;
    }
  }
  int flagged = 0;
  std::uint64_t seed = 8800;
  for (const auto& p : paths)
    for (double cut : cuts)
      if (!causality_check(lookahead, p, cut, seed++)) ++flagged;
  c.require(flagged >= 90, "look-ahead control flagged only " +
                               std::to_string(flagged) + "/100");
  if (c.ok)
    c.note = "5 rules x 100 triples invariant; look-ahead flagged " +
             std::to_string(flagged) + "/100";
  return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
  using clock = std::chrono::steady_clock;

  std::vector<std::unique_ptr<WalkData>> storage(20);
  parallel_for(20, [&](std::size_t i) {
    storage[i] = std::make_unique<WalkData>(i + 1);
  });
  std::vector<WalkData> walks;
  walks.reserve(20);
  for (auto& p : storage) walks.push_back(std::move(*p));
  storage.clear();

  struct Spec {
    int id;
    const char* name;
    std::function<Check()> fn;
  };
  std::vector<Spec> specs{
      {1, "definitional oracle equivalence", [&] { return criterion_oracle(); }},
      {2, "limit curve shape and jump identity",
       [&] { return criterion_limit_shape(walks); }},
      {3, "level-distance convergence diagnostic",
       [&] { return criterion_convergence(walks); }},
      {4, "capital replay of the level difference",
       [&] { return criterion_replay(walks); }},
      {5, "upcrossing inequality replay", [&] { return criterion_doob(); }},
      {6, "scaled-difference process bounds",
       [&] { return criterion_kolmogorov(walks); }},
      {7, "averaged upcrossing portfolio",
       [&] { return criterion_stricker(walks); }},
      {8, "crossing-bound witness and walk bounds",
       [&] { return criterion_crossing_witness(walks); }},
      {9, "polarization identities",
       [&] { return criterion_polarization(walks); }},
      {10, "increment and partial-sum equivalence",
       [&] { return criterion_equivalence(walks); }},
      {11, "change-of-variable residuals", [&] { return criterion_ito(walks); }},
      {12, "derived-curve QV cross-checks",
       [&] { return criterion_cross_checks(walks); }},
      {13, "margin arithmetic", [&] { return criterion_margin(); }},
      {14, "strategy prefix invariance", [&] { return criterion_causality(); }},
  };

  std::vector<CriterionResult> out;
  for (const auto& spec : specs) {
    CriterionResult r;
    r.id = spec.id;
    r.name = spec.name;
    auto t0 = clock::now();
    try {
      Check c = spec.fn();
      r.pass = c.ok;
      r.detail = c.note;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pathwise
