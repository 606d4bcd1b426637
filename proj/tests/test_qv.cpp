#include <stdexcept>
#include <cmath>
#include <memory>

#include <doctest.h>

#include "pathwise/partitions.hpp"
#include "pathwise/qv.hpp"

using namespace pathwise;

namespace {

CadlagPath step(std::vector<double> ts, std::vector<double> vs, double T = 1.0) {
  return CadlagPath(T, PathMode::step, std::move(ts), std::move(vs));
}

CadlagPath small_walk(std::uint64_t seed, long long steps = 128) {
  RandomWalkSpec spec;
  spec.steps = steps;
  spec.step_size = std::exp2(-5);
  spec.seed = seed;
  return make_random_walk(spec);
}

}  // namespace

TEST_CASE("qv approximant basics") {
  QVCurve zero = qv_approx(make_constant(4.0), Partition({0.0, 0.5}));
  CHECK(zero(0.0) == 0.0);
  CHECK(zero(1.0) == 0.0);

  CadlagPath j = make_single_jump(0.5, 0, 1);
  QVCurve a = qv_approx(j, Partition({0.0, 0.5}));
  CHECK(a(0.49) == 0.0);
  CHECK(a(0.5) == 1.0);
  CHECK(a(1.0) == 1.0);

  CadlagPath p = step({0, 1.0 / 3, 2.0 / 3}, {0, 1, 0});
  QVCurve b = qv_approx(p, Partition({0.0, 1.0 / 3, 2.0 / 3}));
  CHECK(b(1.0) == 2.0);
  CHECK(b(0.0) == 0.0);
}

TEST_CASE("between partition points the live term moves the curve") {
  CadlagPath p = step({0, 0.4}, {0, 3});
  QVCurve a = qv_approx(p, Partition({0.0}));  // single-cell partition
  CHECK(a(0.3) == 0.0);
  CHECK(a(0.4) == 9.0);  // (w(t) - w(0))^2 live
  CHECK(a.left_value(0.4) == 0.0);
}

TEST_CASE("qv limit on a constant path") {
  CadlagPath c = make_constant(1.5);
  LadderSequence seq = build_ladder_sequence(c, 6);
  QVLimit lim = qv_limit(c, seq);
  CHECK(lim.converged);
  for (double d : lim.distances) CHECK(d == 0.0);
  CHECK(lim.limit(1.0) == 0.0);
}

TEST_CASE("grid-valued path gives identical levels above its resolution") {
  // Values on the 2^-2 grid: levels n >= 2 share every stop, distances vanish.
  CadlagPath p = step({0, 0.2, 0.5, 0.8}, {0, 0.75, 0.25, 1.0});
  LadderSequence seq = build_ladder_sequence(p, 8);
  QVLimit lim = qv_limit(p, seq);
  CHECK(lim.converged);
  for (std::size_t n = 2; n < lim.distances.size(); ++n)
    CHECK(lim.distances[n] == 0.0);
}

TEST_CASE("jump identity on covered jumps") {
  CadlagPath j = make_single_jump(0.5, 0, 1);
  LadderSequence seq = build_ladder_sequence(j, 3);
  QVLimit lim = qv_limit(j, seq);
  JumpIdentityReport rep = jump_identity_check(j, lim.limit);
  CHECK(rep.uncovered_jump_times.empty());
  CHECK(rep.max_residual == 0.0);
}

TEST_CASE("uncovered jumps are reported, not folded into the residual") {
  CadlagPath tiny = step({0, 0.5}, {0, std::exp2(-8)});
  LadderSequence seq = build_ladder_sequence(tiny, 3);
  QVLimit lim = qv_limit(tiny, seq);
  JumpIdentityReport rep = jump_identity_check(tiny, lim.limit);
  REQUIRE(rep.uncovered_jump_times.size() == 1);
  CHECK(rep.uncovered_jump_times[0] == 0.5);
}

TEST_CASE("qv distance between levels is exact on merged events") {
  CadlagPath p = step({0, 0.5}, {0, 3});
  auto shared = std::make_shared<CadlagPath>(p);
  QVCurve coarse = qv_approx(shared, {0.0}, 0);
  QVCurve fine = qv_approx(shared, {0.0, 0.5}, 1);
  // Both reach 9 at t >= 0.5 and are 0 before; distance 0.
  CHECK(qv_distance(coarse, fine) == 0.0);

  QVCurve late = qv_approx(shared, {0.0, 0.75}, 1);
  CHECK(qv_distance(fine, late) == 0.0);  // live term matches the settled one
}

TEST_CASE("covariation identities") {
  CadlagPath w = small_walk(9);
  CadlagPath neg = scale(w, -1.0);
  CadlagPath zero = make_constant(0.0);

  CovariationSet with_zero = covariation({w, zero}, 6);
  CovariationSet with_self = covariation({w, w}, 6);
  CovariationSet with_neg = covariation({w, neg}, 6);
  for (double t : {0.1, 0.3, 0.55, 0.8, 1.0}) {
    CHECK(with_zero.cov(0, 1, t) == 0.0);
    CHECK(std::abs(with_self.cov(0, 1, t) - with_self.component(0)(t)) <=
          1e-12);
    CHECK(std::abs(with_neg.cov(0, 1, t) + with_neg.component(0)(t)) <= 1e-12);
    // Symmetry and diagonal.
    CHECK(with_neg.cov(0, 1, t) == with_neg.cov(1, 0, t));
    CHECK(std::abs(with_neg.cov(0, 0, t) - with_neg.component(0)(t)) <= 1e-12);
  }
}

TEST_CASE("polarization inversion on two distinct walks") {
  CadlagPath x = small_walk(21);
  CadlagPath y = small_walk(22);
  CovariationSet cov = covariation({x, y}, 6);
  QVCurve sum_qv = cov.pair_sum(0, 1);
  for (double t : {0.2, 0.5, 0.9, 1.0}) {
    double rebuilt = cov.component(0)(t) + 2 * cov.cov(0, 1, t) +
                     cov.component(1)(t);
    CHECK(std::abs(rebuilt - sum_qv(t)) <= 1e-12);
  }
}

TEST_CASE("restricted-sum residuals") {
  CadlagPath c = make_constant(2.0);
  LadderSequence cseq = build_ladder_sequence(c, 4);
  QVLimit clim = qv_limit(c, cseq);
  CHECK(norvaisa_check(c, clim.limit, {{0.1, 0.9}}) == 0.0);

  CadlagPath p = step({0, 1.0 / 3, 2.0 / 3}, {0, 1, 0});
  LadderSequence seq = build_ladder_sequence(p, 2);
  QVLimit lim = qv_limit(p, seq);
  CHECK(norvaisa_check(p, lim.limit, {{0.0, 1.0}}) == 0.0);
  CHECK(norvaisa_check(p, lim.limit, {{0.4, 1.0}}) == 0.0);
  CHECK_THROWS_AS(norvaisa_check(p, lim.limit, {{0.9, 0.4}}),
                  std::domain_error);
}

TEST_CASE("partial-sum residuals at continuity points") {
  CadlagPath c = make_constant(2.0);
  LadderSequence cseq = build_ladder_sequence(c, 4);
  FollmerReport crep = follmer_check(c, qv_limit(c, cseq).limit, {0.3, 0.7});
  CHECK(crep.max_residual == 0.0);
  CHECK(crep.decomposition_decrease <= 0.0);

  CadlagPath j = make_single_jump(0.5, 0, 1);
  LadderSequence seq = build_ladder_sequence(j, 3);
  QVLimit lim = qv_limit(j, seq);
  FollmerReport rep = follmer_check(j, lim.limit, {0.25, 0.75});
  CHECK(rep.max_residual == 0.0);
  CHECK(rep.decomposition_decrease <= 1e-12);
  CHECK_THROWS_AS(follmer_check(j, lim.limit, {0.5}), std::domain_error);
}

TEST_CASE("qv starts at zero for every input") {
  for (std::uint64_t s : {1ull, 2ull, 3ull}) {
    CadlagPath w = small_walk(s, 64);
    QVCurve a = qv_approx(w, Partition({0.0, 0.25, 0.5}));
    CHECK(a(0.0) == 0.0);
  }
}
