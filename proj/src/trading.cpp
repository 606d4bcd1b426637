#include "pathwise/trading.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pathwise {

namespace {

double sq(double x) { return x * x; }

void validate_strategy(const RealizedStrategy& s) {
  if (s.stops.size() != s.positions.size())
    throw std::invalid_argument("stops/positions length mismatch");
  for (std::size_t i = 0; i < s.stops.size(); ++i) {
    if (!std::isfinite(s.stops[i]) || !std::isfinite(s.positions[i]))
      throw std::invalid_argument("stops and positions must be finite");
    if (std::abs(s.positions[i]) > s.position_bound)
      throw std::invalid_argument("position exceeds the declared bound");
    if (i > 0 && s.stops[i] < s.stops[i - 1])
      throw std::invalid_argument("stop times must be nondecreasing");
  }
}

}  // namespace

CapitalTrajectory::CapitalTrajectory(std::shared_ptr<const CadlagPath> path,
                                     RealizedStrategy strategy, double alpha)
    : path_(std::move(path)), strategy_(std::move(strategy)), alpha_(alpha) {
  validate_strategy(strategy_);
  prefix_.reserve(strategy_.stops.size());
  double acc = alpha_;
  for (std::size_t i = 0; i < strategy_.stops.size(); ++i) {
    if (strategy_.stops[i] > path_->horizon())
      throw std::invalid_argument("stop beyond horizon");
    if (i > 0)
      acc += strategy_.positions[i - 1] *
             ((*path_)(strategy_.stops[i]) - (*path_)(strategy_.stops[i - 1]));
    prefix_.push_back(acc);
  }
}

double CapitalTrajectory::operator()(double t) const {
  const auto& st = strategy_.stops;
  auto it = std::upper_bound(st.begin(), st.end(), t);
  if (it == st.begin()) return alpha_;
  std::size_t j = static_cast<std::size_t>(it - st.begin()) - 1;
  return prefix_[j] + strategy_.positions[j] * ((*path_)(t) - (*path_)(st[j]));
}

double CapitalTrajectory::left_value(double t) const {
  const auto& st = strategy_.stops;
  auto it = std::lower_bound(st.begin(), st.end(), t);
  if (it == st.begin()) return alpha_;
  std::size_t j = static_cast<std::size_t>(it - st.begin()) - 1;
  return prefix_[j] +
         strategy_.positions[j] * (path_->left_limit(t) - (*path_)(st[j]));
}

double CapitalTrajectory::position_at(double t) const {
  const auto& st = strategy_.stops;
  auto it = std::upper_bound(st.begin(), st.end(), t);
  if (it == st.begin()) return 0;
  return strategy_.positions[static_cast<std::size_t>(it - st.begin()) - 1];
}

std::vector<double> CapitalTrajectory::event_times() const {
  std::vector<double> ev;
  ev.insert(ev.end(), strategy_.stops.begin(), strategy_.stops.end());
  ev.insert(ev.end(), path_->times().begin(), path_->times().end());
  ev.push_back(path_->horizon());
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  return ev;
}

double CapitalTrajectory::min_over_events() const {
  double m = alpha_;
  for (double t : event_times()) {
    m = std::min(m, (*this)(t));
    if (t > 0) m = std::min(m, left_value(t));
  }
  return m;
}

CapitalTrajectory run_capital(const CadlagPath& path,
                              const RealizedStrategy& strategy, double alpha) {
  return CapitalTrajectory(std::make_shared<CadlagPath>(path), strategy, alpha);
}

std::vector<double> run_capital_multi(
    const std::vector<CadlagPath>& paths, const std::vector<double>& stops,
    const std::vector<std::vector<double>>& positions, double alpha,
    const std::vector<double>& query_times) {
  if (stops.size() != positions.size())
    throw std::invalid_argument("stops/positions length mismatch");
  std::vector<double> out;
  out.reserve(query_times.size());
  for (double t : query_times) {
    double k = alpha;
    for (std::size_t i = 0; i < stops.size(); ++i) {
      double t0 = std::min(stops[i], t);
      double t1 = std::min(i + 1 < stops.size() ? stops[i + 1] : t, t);
      if (t1 <= t0) continue;
      for (std::size_t m = 0; m < paths.size(); ++m)
        k += positions[i].at(m) * (paths[m](t1) - paths[m](t0));
    }
    out.push_back(k);
  }
  return out;
}

void PortfolioTrajectory::add_component(double weight,
                                        CapitalTrajectory trajectory) {
  components_.emplace_back(weight, std::move(trajectory));
}

double PortfolioTrajectory::operator()(double t) const {
  double v = 0;
  for (const auto& [w, c] : components_) v += w * c(t);
  return v;
}

double PortfolioTrajectory::initial_capital() const {
  double v = 0;
  for (const auto& [w, c] : components_) v += w * c.initial_capital();
  return v;
}

namespace {

// Positions replaying A^n - A^{n-1}; shared by the strategy and its causal
// rule form.
RealizedStrategy qv_diff_realize(const CadlagPath& path,
                                 const LadderSequence& seq, int n) {
  if (n < 1) throw std::domain_error("qv_diff needs n >= 1");
  const auto& fine = seq.at(n).stops;
  const auto& coarse = seq.at(n - 1).stops;
  RealizedStrategy s;
  s.stops.reserve(fine.size());
  s.positions.reserve(fine.size());
  for (double tau : fine) {
    auto it = std::upper_bound(coarse.begin(), coarse.end(), tau);
    double tau_coarse = *(it - 1);
    s.stops.push_back(tau);
    s.positions.push_back(-2.0 * (path(tau) - path(tau_coarse)));
  }
  return s;
}

RealizedStrategy doob_realize(const CadlagPath& path, double a, double b,
                              int L) {
  double sigma = sigma_L(path, L);
  RealizedStrategy s;
  double from = 0;
  // Alternating hits at the same instant cannot happen (a < b), so each scan
  // can start non-strictly at the previous stop.
  for (int i = 0;; ++i) {
    double tau = i % 2 == 0 ? first_time_le(path, a, from)
                            : first_time_ge(path, b, from);
    if (tau >= sigma) {
      // Covers tau = never with sigma finite: trading halts at sigma_L.
      if (sigma <= path.horizon()) {
        s.stops.push_back(sigma);
        s.positions.push_back(0);
      }
      break;
    }
    if (tau == kNever) break;
    s.stops.push_back(tau);
    s.positions.push_back(i % 2 == 0 ? 1.0 : 0.0);
    from = tau;
  }
  return s;
}

void check_doob_inputs(const CadlagPath& path, double a, double b, int L,
                       double c) {
  double lvl = std::exp2(L);
  // Closed endpoints are allowed: the boundary cells of the Stricker average
  // touch -2^L and 2^L, and the capital bounds still hold there because any
  // hit of the boundary also triggers sigma_L.
  if (!(a < b) || !(a >= -lvl) || !(b <= lvl))
    throw std::domain_error("(a,b) must be a nonempty subinterval of [-2^L,2^L]");
  if (!(c > 0)) throw std::domain_error("c must be positive");
  if (!in_sample_space(path, JumpBound::constant(c)).member)
    throw std::domain_error("path violates the jump bound");
}

}  // namespace

CapitalTrajectory qv_diff_strategy(const CadlagPath& path,
                                   const LadderSequence& seq, int n) {
  return run_capital(path, qv_diff_realize(path, seq, n), 0.0);
}

KolmogorovResult kolmogorov_process(const CadlagPath& path,
                                    const LadderSequence& seq, int n,
                                    double c) {
  if (n < 1) throw std::domain_error("kolmogorov needs n >= 1");
  if (!in_sample_space(path, JumpBound::constant(c)).member)
    throw std::domain_error("path violates the jump bound");
  auto shared = std::make_shared<CadlagPath>(path);
  QVCurve a_fine = qv_approx(shared, seq.at(n).partition().times, n);
  QVCurve a_coarse = qv_approx(shared, seq.at(n - 1).partition().times, n - 1);
  auto S = [&](double t) { return a_fine(t) - a_coarse(t); };

  const std::vector<double> taus = seq.at(n).partition().times;
  const auto& coarse = seq.at(n - 1).stops;
  std::vector<double> s_at(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) s_at[k] = S(taus[k]);

  double budget = std::pow(static_cast<double>(n), 4) * std::exp2(-2 * n);
  double alpha = std::exp2(-2 * n + 8) * c * c + budget;

  // Stop index K: first stop where the running sum of squared S-increments
  // exceeds the budget.
  double running = 0;
  std::size_t K = taus.size();
  double sigma_n = kNever;
  for (std::size_t k = 1; k < taus.size(); ++k) {
    running += sq(s_at[k] - s_at[k - 1]);
    if (running > budget) {
      K = k;
      sigma_n = taus[k];
      break;
    }
  }

  RealizedStrategy strat;
  for (std::size_t k = 0; k < taus.size() && k <= K; ++k) {
    if (k == K) {
      strat.stops.push_back(taus[k]);
      strat.positions.push_back(0);
      break;
    }
    auto it = std::upper_bound(coarse.begin(), coarse.end(), taus[k]);
    double tau_coarse = *(it - 1);
    strat.stops.push_back(taus[k]);
    strat.positions.push_back(-4.0 * s_at[k] * (path(taus[k]) - path(tau_coarse)));
  }

  KolmogorovResult res{run_capital(path, strat, alpha), sigma_n, 0, 0,
                       std::exp2(-n + 4) * c, 0};

  // Direct-formula check and diagnostics on the merged event grid.
  std::vector<double> s_prefix(taus.size());
  double acc = 0;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (k > 0) acc += sq(s_at[k] - s_at[k - 1]);
    s_prefix[k] = acc;
  }
  auto direct_u = [&](double t) {
    auto it = std::upper_bound(taus.begin(), taus.end(), t);
    std::size_t j = static_cast<std::size_t>(it - taus.begin()) - 1;
    double st = S(t);
    return alpha + sq(st) - (s_prefix[j] + sq(st - s_at[j]));
  };

  double min_u = alpha, max_inc = 0, replay = 0;
  for (double t : res.trajectory.event_times()) {
    double stopped_t = std::min(t, sigma_n);
    double u_replay = res.trajectory(t);
    double u_direct = direct_u(stopped_t);
    replay = std::max(replay, std::abs(u_replay - u_direct));
    min_u = std::min(min_u, u_replay);
    if (t <= sigma_n) {
      auto it = std::upper_bound(taus.begin(), taus.end(), t);
      std::size_t j = static_cast<std::size_t>(it - taus.begin()) - 1;
      max_inc = std::max(max_inc, std::abs(S(t) - s_at[j]));
    }
  }
  res.min_capital = min_u;
  res.max_increment = max_inc;
  res.replay_residual = replay;
  return res;
}

DoobResult doob_strategy(const CadlagPath& path, double a, double b, int L,
                         double c) {
  check_doob_inputs(path, a, b, L, c);
  double sigma = sigma_L(path, L);
  double alpha = a + std::exp2(L) + c;
  CapitalTrajectory traj =
      run_capital(path, doob_realize(path, a, b, L), alpha);

  DoobResult res{traj, sigma, 0, alpha};
  CrossingTimes ct = crossing_times(path, a, b);
  double worst = alpha, min_cap = alpha;
  for (double t : traj.event_times()) {
    if (t > sigma) break;
    double v = traj(t);
    long long m = static_cast<long long>(
        std::upper_bound(ct.up.begin(), ct.up.end(), t) - ct.up.begin());
    worst = std::min(worst, v - (b - a) * static_cast<double>(m));
    min_cap = std::min(min_cap, v);
    if (t > 0) min_cap = std::min(min_cap, traj.left_value(t));
  }
  if (sigma <= path.horizon()) {
    double v = traj(sigma);
    min_cap = std::min(min_cap, v);
  }
  res.guarantee_residual_min = worst;
  res.min_capital = min_cap;
  return res;
}

StrickerResult stricker_strategy(const CadlagPath& path, int n, int L, double c,
                                 std::size_t component_cap) {
  if (n < 0 || L < 0) throw std::domain_error("n, L must be nonnegative");
  check_doob_inputs(path, -std::exp2(L), std::exp2(L), L, c);
  long long K = 1LL << (L + n);
  std::size_t count = static_cast<std::size_t>(2 * K);
  if (count > component_cap)
    throw std::length_error("stricker component count exceeds the cap");
  StrickerResult res;
  double weight = std::exp2(-L - n - 1);
  double lvl = std::exp2(L);
  auto shared = std::make_shared<CadlagPath>(path);
  for (long long k = -K; k < K; ++k) {
    double a = dyadic_value(k, n);
    RealizedStrategy s = doob_realize(path, a, dyadic_value(k + 1, n), L);
    res.portfolio.add_component(
        weight, CapitalTrajectory(shared, std::move(s), a + lvl + c));
  }
  res.initial_capital = res.portfolio.initial_capital();
  res.sigma = sigma_L(path, L);
  double h = dyadic_value(1, n);
  CrossingTimes ct = grid_crossing_times(path, h);
  double bound = std::exp2(-2 * n - L - 1);
  double worst = res.initial_capital;
  std::vector<double> ev;
  ev.insert(ev.end(), path.times().begin(), path.times().end());
  ev.push_back(path.horizon());
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  for (double t : ev) {
    if (t > res.sigma) break;
    long long m = static_cast<long long>(
        std::lower_bound(ct.up.begin(), ct.up.end(), t) - ct.up.begin());
    worst = std::min(worst, res.portfolio(t) - bound * static_cast<double>(m));
  }
  res.guarantee_residual_min = worst;
  return res;
}

CorollaryResult corollary_portfolio(const CadlagPath& path, int L, double c,
                                    int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw std::domain_error("bad level range");
  check_doob_inputs(path, -std::exp2(L), std::exp2(L), L, c);
  CorollaryResult res;
  double sigma = sigma_L(path, L);
  double lvl = std::exp2(L);
  auto shared = std::make_shared<CadlagPath>(path);
  PortfolioTrajectory total;
  for (int n = n_lo; n <= n_hi; ++n) {
    long long K = 1LL << (L + n);
    double w = std::exp2(-L - n - 1) / (static_cast<double>(n) * n);
    for (long long k = -K; k < K; ++k) {
      double a = dyadic_value(k, n);
      RealizedStrategy s = doob_realize(path, a, dyadic_value(k + 1, n), L);
      total.add_component(w, CapitalTrajectory(shared, std::move(s), a + lvl + c));
    }
    CorollaryLevel level;
    level.n = n;
    double h = dyadic_value(1, n);
    CrossingTimes ct = grid_crossing_times(path, h);
    if (sigma <= path.horizon())
      level.crossings_before_sigma = static_cast<long long>(
          std::lower_bound(ct.up.begin(), ct.up.end(), sigma) - ct.up.begin());
    else
      level.crossings_before_sigma = static_cast<long long>(ct.up.size());
    level.bound = static_cast<double>(n) * n * std::exp2(2 * n);
    level.bound_holds =
        static_cast<double>(level.crossings_before_sigma) <= level.bound;
    res.levels.push_back(level);
  }
  res.initial_capital = total.initial_capital();
  res.final_capital = total(path.horizon());
  return res;
}

double psi_prime(double u, const JumpBound& psi, double c_short) {
  if (u < 0) throw std::domain_error("u must be nonnegative");
  return std::max(1.0, (1 + c_short) * psi(u) + c_short * u);
}

MarginReport margin_check(const CadlagPath& path,
                          const CapitalTrajectory& trajectory,
                          const MarginParams& params, const JumpBound& psi) {
  if (path.min_value() < 0)
    throw std::domain_error("margin_check requires a nonnegative path");
  if (!(params.c_long > 0) || params.c_long > 1 || !(params.c_short > 0))
    throw std::domain_error("bad margin parameters");
  MarginReport rep;
  // Running sup of the path strictly before each breakpoint.
  const auto& ts = path.times();
  const auto& vs = path.values();
  std::vector<double> presup(ts.size());
  double m = vs[0];
  for (std::size_t i = 0; i < ts.size(); ++i) {
    presup[i] = i == 0 ? vs[0] : m;
    m = std::max(m, vs[i]);
  }
  auto sup_before = [&](double t) {
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    std::size_t i = static_cast<std::size_t>(it - ts.begin());
    if (i < ts.size() && ts[i] == t) return presup[i];
    return i == 0 ? vs[0] : std::max(presup[i - 1], vs[i - 1]);
  };
  constexpr double tol = 1e-12;
  for (double t : trajectory.event_times()) {
    double h = trajectory.position_at(t);
    if (h == 0) continue;
    double k = trajectory(t);
    double w = path(t);
    double stressed;
    if (h > 0) {
      stressed = k - h * params.c_long * w;
    } else {
      double rise = (1 + params.c_short) * (w + psi(sup_before(t))) - w;
      stressed = k + h * rise;
    }
    if (stressed < -tol) {
      rep.compliant = false;
      rep.violations.push_back({t, -stressed});
    }
  }
  return rep;
}

StrategyRule buy_and_hold_rule() {
  return [](const CadlagPath&) {
    RealizedStrategy s;
    s.stops = {0.0};
    s.positions = {1.0};
    return s;
  };
}

StrategyRule doob_rule(double a, double b, int L, double c) {
  (void)c;
  return [a, b, L](const CadlagPath& path) {
    return doob_realize(path, a, b, L);
  };
}

StrategyRule qv_diff_rule(int n) {
  return [n](const CadlagPath& path) {
    LadderSequence seq = build_ladder_sequence(path, n);
    return qv_diff_realize(path, seq, n);
  };
}

StrategyRule kolmogorov_rule(int n, double c) {
  return [n, c](const CadlagPath& path) {
    LadderSequence seq = build_ladder_sequence(path, n);
    // Rebuild the realized positions without the membership gate so that
    // arbitrary tail mutations stay comparable.
    double big_c = std::max(c, 2 * (path.max_value() - path.min_value()) + 1);
    return kolmogorov_process(path, seq, n, big_c).trajectory.strategy();
  };
}

StrategyRule stricker_component_rule(long long k, int n, int L, double c) {
  (void)c;
  return [k, n, L](const CadlagPath& path) {
    return doob_realize(path, dyadic_value(k, n), dyadic_value(k + 1, n), L);
  };
}

bool causality_check(const StrategyRule& rule, const CadlagPath& path,
                     double t_cut, std::uint64_t seed) {
  if (!(t_cut > 0) || !(t_cut < path.horizon()))
    throw std::domain_error("t_cut must lie in (0,T)");
  std::mt19937_64 rng(seed);
  double span = path.max_value() - path.min_value() + 1.0;
  std::uniform_real_distribution<double> bump(-0.2 * span, 0.2 * span);
  std::vector<double> ts = path.times(), vs = path.values();
  bool mutated = false;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] > t_cut) {
      vs[i] += bump(rng);
      mutated = true;
    }
  if (!mutated) {
    double t_new = 0.5 * (t_cut + path.horizon());
    auto it = std::upper_bound(ts.begin(), ts.end(), t_new);
    std::size_t i = static_cast<std::size_t>(it - ts.begin());
    ts.insert(ts.begin() + static_cast<std::ptrdiff_t>(i), t_new);
    vs.insert(vs.begin() + static_cast<std::ptrdiff_t>(i),
              vs[i - 1] + bump(rng));
  }
  CadlagPath mutant(path.horizon(), path.mode(), std::move(ts), std::move(vs));
  RealizedStrategy s1 = rule(path);
  RealizedStrategy s2 = rule(mutant);
  auto prefix_len = [&](const RealizedStrategy& s) {
    return static_cast<std::size_t>(
        std::upper_bound(s.stops.begin(), s.stops.end(), t_cut) -
        s.stops.begin());
  };
  std::size_t n1 = prefix_len(s1), n2 = prefix_len(s2);
  if (n1 != n2) return false;
  for (std::size_t i = 0; i < n1; ++i)
    if (s1.stops[i] != s2.stops[i] || s1.positions[i] != s2.positions[i])
      return false;
  return true;
}

}  // namespace pathwise
