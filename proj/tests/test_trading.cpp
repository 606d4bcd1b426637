#include <stdexcept>
#include <cmath>

#include <doctest.h>

#include "pathwise/qv.hpp"
#include "pathwise/trading.hpp"

using namespace pathwise;

namespace {

CadlagPath step(std::vector<double> ts, std::vector<double> vs, double T = 1.0) {
  return CadlagPath(T, PathMode::step, std::move(ts), std::move(vs));
}

CadlagPath walk(std::uint64_t seed, long long steps = 256,
                double delta = std::exp2(-5)) {
  RandomWalkSpec spec;
  spec.steps = steps;
  spec.step_size = delta;
  spec.seed = seed;
  return make_random_walk(spec);
}

}  // namespace

TEST_CASE("capital evaluator basics") {
  CadlagPath p = step({0, 1.0 / 3, 2.0 / 3}, {0, 1, 0});

  RealizedStrategy idle;
  idle.stops = {0.0};
  idle.positions = {0.0};
  CHECK(run_capital(p, idle, 2.5)(1.0) == 2.5);

  RealizedStrategy hold;
  hold.stops = {0.0};
  hold.positions = {1.0};
  CapitalTrajectory k = run_capital(p, hold, 1.0);
  for (double t : {0.0, 0.2, 0.5, 1.0}) CHECK(k(t) == 1.0 + p(t) - p(0.0));

  RealizedStrategy flip;
  flip.stops = {0.0, 1.0 / 3};
  flip.positions = {1.0, -1.0};
  CHECK(run_capital(p, flip, 0.0)(1.0) == 2.0);
}

TEST_CASE("strategy validation") {
  CadlagPath p = step({0, 0.5}, {0, 1});
  RealizedStrategy bad;
  bad.stops = {0.0};
  bad.positions = {1e12};  // above the declared bound
  CHECK_THROWS_AS(run_capital(p, bad, 0.0), std::invalid_argument);

  RealizedStrategy decreasing;
  decreasing.stops = {0.5, 0.25};
  decreasing.positions = {1.0, 1.0};
  CHECK_THROWS_AS(run_capital(p, decreasing, 0.0), std::invalid_argument);
}

TEST_CASE("capital is additive in strategies over shared stops") {
  CadlagPath w = walk(12);
  RealizedStrategy s1, s2, both;
  s1.stops = s2.stops = both.stops = {0.0, 0.25, 0.5};
  s1.positions = {1.0, -0.5, 2.0};
  s2.positions = {0.5, 0.25, -1.0};
  both.positions = {1.5, -0.25, 1.0};
  CapitalTrajectory k1 = run_capital(w, s1, 1.0);
  CapitalTrajectory k2 = run_capital(w, s2, 2.0);
  CapitalTrajectory kb = run_capital(w, both, 3.0);
  for (double t : {0.1, 0.3, 0.6, 1.0})
    CHECK(std::abs(k1(t) + k2(t) - kb(t)) <= 1e-12);
}

TEST_CASE("multidimensional capital uses the dot product") {
  CadlagPath x = step({0, 0.5}, {0, 1});
  CadlagPath y = step({0, 0.5}, {0, 2});
  std::vector<double> caps = run_capital_multi(
      {x, y}, {0.0}, {{2.0, -1.0}}, 1.0, {0.25, 0.5, 1.0});
  CHECK(caps[0] == 1.0);
  CHECK(caps[1] == 1.0 + 2.0 * 1 - 1.0 * 2);
  CHECK(caps[2] == caps[1]);
}

TEST_CASE("level-difference replay") {
  CadlagPath c = make_constant(0.7);
  LadderSequence cseq = build_ladder_sequence(c, 4);
  CapitalTrajectory flat = qv_diff_strategy(c, cseq, 3);
  CHECK(flat(1.0) == 0.0);

  CadlagPath w = walk(7);
  LadderSequence seq = build_ladder_sequence(w, 6);
  CapitalTrajectory traj = qv_diff_strategy(w, seq, 6);
  auto shared = std::make_shared<CadlagPath>(w);
  QVCurve fine = qv_approx(shared, seq.at(6).partition().times, 6);
  QVCurve coarse = qv_approx(shared, seq.at(5).partition().times, 5);
  double worst = 0;
  for (double t : fine.event_times())
    worst = std::max(worst, std::abs(traj(t) - (fine(t) - coarse(t))));
  CHECK(worst <= 1e-10);

  CHECK_THROWS_AS(qv_diff_strategy(w, seq, 0), std::domain_error);
}

TEST_CASE("scaled-difference process on trivial paths") {
  CadlagPath c = make_constant(0.7);
  LadderSequence seq = build_ladder_sequence(c, 5);
  KolmogorovResult res = kolmogorov_process(c, seq, 3, 1.0);
  double alpha = std::exp2(-2 * 3 + 8) + std::pow(3.0, 4) * std::exp2(-6);
  CHECK(res.trajectory(1.0) == alpha);
  CHECK(res.sigma_n == kNever);
  CHECK(res.max_increment == 0.0);
  CHECK(res.min_capital == alpha);
}

TEST_CASE("scaled-difference bounds on a walk") {
  CadlagPath w = walk(7, 512, std::exp2(-6));
  LadderSequence seq = build_ladder_sequence(w, 7);
  KolmogorovResult res = kolmogorov_process(w, seq, 6, 1.0);
  CHECK(res.min_capital >= -1e-12);
  CHECK(res.max_increment <= res.increment_bound + 1e-12);
  CHECK(res.replay_residual <= 1e-10);
  CHECK_THROWS_AS(kolmogorov_process(w, seq, 6, std::exp2(-10)),
                  std::domain_error);  // walk violates the tiny jump bound
}

TEST_CASE("alternating interval strategy, hand replay") {
  CadlagPath p = step({0, 0.25, 0.5, 0.75}, {0, 1, 0, 1});
  DoobResult res = doob_strategy(p, 0, 1, 1, 1.0);
  CHECK(res.trajectory.initial_capital() == 0.0 + 2.0 + 1.0);
  CHECK(res.trajectory(1.0) == 5.0);  // two completed gains of 1 each
  CHECK(res.guarantee_residual_min >= 0.0);
  CHECK(res.min_capital >= 0.0);
  CHECK(res.sigma == kNever);

  CadlagPath above = make_constant(0.5);
  DoobResult flat = doob_strategy(above, 0, 1, 1, 1.0);
  CHECK(flat.trajectory(1.0) == flat.trajectory.initial_capital());

  CHECK_THROWS_AS(doob_strategy(p, 1, 0, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS(doob_strategy(p, -5, 5, 1, 1.0), std::domain_error);
}

TEST_CASE("alternating strategy stops at the exit time") {
  CadlagPath dive = step({0, 0.25, 0.5, 0.75}, {0, 0.5, -2, 0.8});
  DoobResult res = doob_strategy(dive, 0.25, 0.75, 1, 3.0);
  CHECK(res.sigma == 0.5);
  CHECK(res.min_capital >= -1e-12);
  CHECK(res.guarantee_residual_min >= -1e-12);
  // Frozen after the exit.
  CHECK(res.trajectory(0.75) == res.trajectory(0.5));
  CHECK(res.trajectory(1.0) == res.trajectory(0.5));
}

TEST_CASE("averaged upcrossing portfolio") {
  CadlagPath c = make_constant(0.3);
  StrickerResult flat = stricker_strategy(c, 2, 1, 1.0);
  CHECK(flat.portfolio(1.0) == flat.initial_capital);

  CadlagPath p = step({0, 0.25, 0.5, 0.75}, {0, 1, 0, 1});
  StrickerResult res = stricker_strategy(p, 0, 1, 1.0);
  CHECK(res.initial_capital <= 2.0 + 1.0);
  CHECK(res.guarantee_residual_min >= -1e-12);
  // M_T(w,1) = 2, guarantee floor 2^-3 * 2.
  CHECK(res.portfolio(1.0) >= 0.25 - 1e-12);

  CHECK_THROWS_AS(stricker_strategy(p, 14, 2, 1.0), std::length_error);
}

TEST_CASE("crossing-bound portfolio on a walk") {
  CadlagPath w = walk(7);
  CorollaryResult res = corollary_portfolio(w, 2, 1.0, 4, 6);
  for (const auto& level : res.levels) CHECK(level.bound_holds);
  CHECK(res.levels.size() == 3);
  CHECK(std::isfinite(res.final_capital));
}

TEST_CASE("margin transform") {
  CHECK(psi_prime(3.0, JumpBound::affine(1.0), 0.5) == 6.0);
  CHECK(psi_prime(0.0, JumpBound::constant(0.5), 0.5) == 1.0);
  CHECK(psi_prime(0.2, JumpBound::constant(1.0), 0.5) == 1.6);
  CHECK_THROWS_AS(psi_prime(-1.0, JumpBound::constant(1.0), 0.5),
                  std::domain_error);
  // Monotone in u for monotone psi.
  double prev = 0;
  for (double u = 0; u <= 5.0; u += 0.25) {
    double v = psi_prime(u, JumpBound::affine(2.0), 0.5);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("margin compliance") {
  CadlagPath p = step({0, 0.25, 0.5}, {1.0, 1.2, 0.9});
  JumpBound psi = JumpBound::constant(0.5);

  RealizedStrategy cash;
  cash.stops = {0.0};
  cash.positions = {0.0};
  CHECK(margin_check(p, run_capital(p, cash, 1.0), MarginParams{}, psi)
            .compliant);

  // Long position fully backed by the stock value: boundary case at
  // c_long = 1.
  RealizedStrategy hold;
  hold.stops = {0.0};
  hold.positions = {1.0};
  CapitalTrajectory k = run_capital(p, hold, p(0.0));
  CHECK(margin_check(p, k, MarginParams{1.0, 0.5}, psi).compliant);

  // Oversized long against a tiny capital base fails.
  RealizedStrategy big;
  big.stops = {0.0};
  big.positions = {10.0};
  MarginReport bad =
      margin_check(p, run_capital(p, big, 0.5), MarginParams{}, psi);
  CHECK(!bad.compliant);
  CHECK(!bad.violations.empty());

  CadlagPath negp = step({0, 0.5}, {1.0, -0.5});
  CHECK_THROWS_AS(margin_check(negp, run_capital(negp, cash, 1.0),
                               MarginParams{}, psi),
                  std::domain_error);
}

TEST_CASE("prefix invariance of shipped rules") {
  CadlagPath w = walk(5);
  CHECK(causality_check(buy_and_hold_rule(), w, 0.5, 42));
  CHECK(causality_check(doob_rule(-0.25, 0.25, 2, 1.0), w, 0.4, 43));
  CHECK(causality_check(qv_diff_rule(3), w, 0.6, 44));

  StrategyRule lookahead = [](const CadlagPath& p) {
    RealizedStrategy s;
    s.stops = {0.0};
    s.positions = {p(p.horizon())};
    return s;
  };
  CHECK(!causality_check(lookahead, w, 0.5, 45));
  CHECK_THROWS_AS(causality_check(buy_and_hold_rule(), w, 0.0, 46),
                  std::domain_error);
}
