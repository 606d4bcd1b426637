#include <stdexcept>
#include <cmath>

#include <doctest.h>

#include "pathwise/ito.hpp"

using namespace pathwise;

namespace {

CadlagPath step(std::vector<double> ts, std::vector<double> vs, double T = 1.0) {
  return CadlagPath(T, PathMode::step, std::move(ts), std::move(vs));
}

CadlagPath walk(std::uint64_t seed, long long steps = 256) {
  RandomWalkSpec spec;
  spec.steps = steps;
  spec.step_size = std::exp2(-5);
  spec.seed = seed;
  return make_random_walk(spec);
}

const SmoothFunction kIdentity{[](double x) { return x; },
                               [](double) { return 1.0; },
                               [](double) { return 0.0; }};
const SmoothFunction kOne{[](double) { return 1.0; }, [](double) { return 0.0; },
                          [](double) { return 0.0; }};
const SmoothFunction kSquare{[](double x) { return x * x; },
                             [](double x) { return 2 * x; },
                             [](double) { return 2.0; }};

}  // namespace

TEST_CASE("derivative handles are validated") {
  SmoothFunction sine{[](double x) { return std::sin(x); },
                      [](double x) { return std::cos(x); },
                      [](double x) { return -std::sin(x); }};
  CHECK_NOTHROW(validate_derivatives(sine, {0.0, 0.5, -1.2}, true));

  SmoothFunction wrong{[](double x) { return std::sin(x); },
                       [](double x) { return std::cos(x) + 0.1; },
                       [](double x) { return -std::sin(x); }};
  CHECK_THROWS_AS(validate_derivatives(wrong, {0.3}), std::domain_error);
}

TEST_CASE("integral of a constant weight telescopes") {
  CadlagPath w = walk(3);
  LadderSequence seq = build_ladder_sequence(w, 6);
  for (int n : {2, 4, 6}) {
    IntegralCurve curve = follmer_integral(w, seq, n, kOne);
    for (double t : {0.0, 0.3, 0.75, 1.0})
      CHECK(std::abs(curve(t) - (w(t) - w(0.0))) <= 1e-12);
  }

  CadlagPath c = make_constant(3.0);
  LadderSequence cseq = build_ladder_sequence(c, 4);
  CHECK(follmer_integral(c, cseq, 4, kIdentity)(1.0) == 0.0);
}

TEST_CASE("integral hand value on a two-move step path") {
  CadlagPath p = step({0, 1.0 / 3, 2.0 / 3}, {0, 1, 0});
  LadderSequence seq = build_ladder_sequence(p, 2);
  IntegralCurve curve = follmer_integral(p, seq, 2, kIdentity);
  CHECK(curve(1.0) == -1.0);  // 0*1 + 1*(-1)
  CHECK(curve(0.5) == 0.0);
}

TEST_CASE("change-of-variable residuals") {
  CadlagPath p = step({0, 0.25, 0.5, 0.75}, {0.0, 0.5, -0.25, 1.0});
  LadderSequence seq = build_ladder_sequence(p, 6);

  CHECK(ito_residual(p, seq, 6, kIdentity).sup_residual <= 1e-12);
  CHECK(ito_residual(p, seq, 6, kSquare).sup_residual <= 1e-10);

  SmoothFunction no_second{[](double x) { return x * x; },
                           [](double x) { return 2 * x; }, nullptr};
  CHECK_THROWS_AS(ito_residual(p, seq, 6, no_second), std::domain_error);

  CadlagPath w = walk(7);
  LadderSequence wseq = build_ladder_sequence(w, 7);
  CHECK(ito_residual(w, wseq, 7, kSquare).sup_residual <= 1e-10);
}

TEST_CASE("uncovered jumps make the continuous part fail loudly") {
  CadlagPath tiny = step({0, 0.5}, {0, std::exp2(-8)});
  LadderSequence seq = build_ladder_sequence(tiny, 3);
  CHECK_THROWS_AS(ito_residual(tiny, seq, 3, kSquare), std::domain_error);
}

TEST_CASE("qv of a transformed path") {
  CadlagPath w = walk(9);
  LadderSequence seq = build_ladder_sequence(w, 6);
  CHECK(qv_of_function(w, seq, kIdentity).sup_residual <= 1e-10);

  SmoothFunction twox{[](double x) { return 2 * x; }, [](double) { return 2.0; },
                      [](double) { return 0.0; }};
  CHECK(qv_of_function(w, seq, twox).sup_residual <= 1e-10);

  SmoothFunction konst{[](double) { return 5.0; }, [](double) { return 0.0; },
                       [](double) { return 0.0; }};
  QvFormulaReport rep = qv_of_function(w, seq, konst);
  CHECK(rep.sup_residual == 0.0);
  CHECK(rep.lhs.back() == 0.0);
}

TEST_CASE("qv of the integral curve") {
  CadlagPath w = walk(9);
  LadderSequence seq = build_ladder_sequence(w, 6);
  CHECK(qv_of_integral(w, seq, kOne).sup_residual <= 1e-10);

  SmoothFunction zero{[](double) { return 0.0; }, [](double) { return 0.0; },
                      [](double) { return 0.0; }};
  CHECK(qv_of_integral(w, seq, zero).sup_residual == 0.0);

  CadlagPath two_jumps = step({0, 0.25, 0.75}, {1.0, 1.5, 0.75});
  LadderSequence tseq = build_ladder_sequence(two_jumps, 4);
  CHECK(qv_of_integral(two_jumps, tseq, kIdentity).sup_residual <= 1e-10);
}

TEST_CASE("logarithm calculus") {
  CadlagPath c = make_constant(2.5);
  LadderSequence cseq = build_ladder_sequence(c, 4);
  LogCalculusReport creport = log_calculus(c, cseq);
  CHECK(creport.log_qv.back() == 0.0);
  CHECK(creport.stoch_log_qv.back() == 0.0);

  // Single multiplicative jump 1 -> 2.
  CadlagPath j = step({0, 0.5}, {1.0, 2.0});
  LadderSequence jseq = build_ladder_sequence(j, 4);
  LogCalculusReport rep = log_calculus(j, jseq);
  double l2 = std::log(2.0);
  CHECK(std::abs(rep.log_qv.back() - l2 * l2) <= 1e-12);
  CHECK(std::abs(rep.stoch_log_qv.back() - 1.0) <= 1e-12);
  CHECK(rep.log_qv_residual <= 1e-12);
  CHECK(rep.stoch_log_qv_residual <= 1e-12);

  // Geometric walk cross-check.
  CadlagPath geo = transform(walk(5, 128), [](double x) { return std::exp(x); });
  LadderSequence gseq = build_ladder_sequence(geo, 7);
  LogCalculusReport grep = log_calculus(geo, gseq);
  CHECK(grep.log_qv_residual <= 1e-9);
  CHECK(grep.stoch_log_qv_residual <= 1e-9);

  CadlagPath bad = step({0, 0.5}, {1.0, -1.0});
  LadderSequence bseq = build_ladder_sequence(bad, 3);
  CHECK_THROWS_AS(log_calculus(bad, bseq), std::domain_error);
}
