#include <stdexcept>
#include <cmath>
#include <random>

#include <doctest.h>

#include "pathwise/path.hpp"

using namespace pathwise;

namespace {

CadlagPath step(std::vector<double> ts, std::vector<double> vs, double T = 1.0) {
  return CadlagPath(T, PathMode::step, std::move(ts), std::move(vs));
}

CadlagPath linear(std::vector<double> ts, std::vector<double> vs,
                  double T = 1.0) {
  return CadlagPath(T, PathMode::linear, std::move(ts), std::move(vs));
}

}  // namespace

TEST_CASE("construction rejects bad breakpoint lists") {
  CHECK_THROWS_AS(step({0.5}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(step({0, 0.5, 0.5}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(step({0, 1.5}, {1, 2}), std::invalid_argument);
}

TEST_CASE("evaluation is right-continuous") {
  CadlagPath p = step({0, 0.5}, {1, 2});
  CHECK(p(0.25) == 1.0);
  CHECK(p(0.5) == 2.0);
  CHECK(p(1.0) == 2.0);
  CHECK_THROWS_AS(p(1.5), std::domain_error);

  CadlagPath l = linear({0, 1.0}, {0, 2});
  CHECK(l(0.25) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("left limits and jumps") {
  CadlagPath p = step({0, 0.5}, {1, 2});
  CHECK(p.left_limit(0.5) == 1.0);
  CHECK(p.jump(0.5) == 1.0);
  CHECK(p.jump(0.3) == 0.0);
  CHECK_THROWS_AS(p.left_limit(0.0), std::domain_error);

  CadlagPath q = step({0, 0.3}, {0, -2});
  CHECK(q.jump(0.3) == -2.0);

  CadlagPath l = linear({0, 1.0}, {0, 2});
  CHECK(l.jump(0.5) == 0.0);
}

TEST_CASE("eval = left_limit + jump identically") {
  CadlagPath p = step({0, 0.2, 0.4, 0.7}, {1, -0.5, 3, 0.25});
  for (double t : {0.1, 0.2, 0.4, 0.55, 0.7, 1.0})
    CHECK(p(t) == p.left_limit(t) + p.jump(t));
}

TEST_CASE("oscillation over intervals") {
  CHECK(oscillation(make_constant(5.0), 0.1, 0.9) == 0.0);
  CadlagPath p = step({0, 1.0 / 3, 2.0 / 3}, {0, 3, 1});
  CHECK(oscillation(p, 0.0, 1.0, true, false) == 3.0);
  CadlagPath l = linear({0, 1.0}, {0, 1});
  CHECK(oscillation(l, 0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-15));
  // Empty interval convention.
  CHECK(oscillation(p, 0.5, 0.5, false, false) == 0.0);
}

TEST_CASE("upcrossing and downcrossing counts") {
  CadlagPath c = make_constant(0.0);
  CHECK(upcrossings(c, -1, 1, 1.0).upcrossings == 0);
  CHECK(upcrossings(c, -1, 1, 1.0).downcrossings == 0);

  CadlagPath p = step({0, 0.25, 0.5, 0.75}, {0, 1, 0, 1});
  CrossingCount cc = upcrossings(p, 0, 1, 1.0);
  CHECK(cc.upcrossings == 2);
  CHECK(cc.downcrossings == 1);
  CHECK_THROWS_AS(upcrossings(p, 1, 0, 1.0), std::domain_error);

  CadlagPath l = linear({0, 1.0}, {0, 1});
  CHECK(upcrossings(l, 0.2, 0.8, 1.0).upcrossings == 1);

  // Strict-before variant drops the crossing completing exactly at t.
  CHECK(upcrossings_strict_before(p, 0, 1, 0.25).upcrossings == 0);
  CHECK(upcrossings(p, 0, 1, 0.25).upcrossings == 1);
}

TEST_CASE("grid crossings agree with the per-cell oracle") {
  CadlagPath l = linear({0, 1.0}, {0, 1});
  CHECK(grid_crossings(l, 0.25, 1.0).upcrossings == 4);

  RandomWalkSpec spec;
  spec.steps = 200;
  spec.step_size = std::exp2(-4);
  spec.seed = 11;
  CadlagPath w = make_random_walk(spec);
  double h = std::exp2(-3);
  CrossingCount total = grid_crossings(w, h, 1.0);
  long long up = 0, down = 0;
  long long k_lo = grid_floor_index(w.min_value(), 3) - 1;
  long long k_hi = grid_ceil_index(w.max_value(), 3) + 1;
  for (long long k = k_lo; k <= k_hi; ++k) {
    CrossingCount cc =
        upcrossings(w, dyadic_value(k, 3), dyadic_value(k + 1, 3), 1.0);
    up += cc.upcrossings;
    down += cc.downcrossings;
  }
  CHECK(total.upcrossings == up);
  CHECK(total.downcrossings == down);
}

TEST_CASE("sample space membership") {
  CHECK(in_sample_space(linear({0, 1.0}, {0, 5}), JumpBound::constant(0.01))
            .member);

  CadlagPath j = make_single_jump(0.5, 0, 1);
  CHECK(in_sample_space(j, JumpBound::constant(1.0)).member);
  SampleSpaceReport bad = in_sample_space(j, JumpBound::constant(0.5));
  CHECK(!bad.member);
  CHECK(bad.first_violation.has_value());
  CHECK(*bad.first_violation == 0.5);

  // Affine bound: running sup before the jump is 2, |jump| = 2 <= (1 v 1)*2.
  CadlagPath g = step({0, 0.5}, {2, 4});
  CHECK(in_sample_space(g, JumpBound::affine(1.0)).member);
}

TEST_CASE("membership is monotone in the bound") {
  RandomWalkSpec spec;
  spec.steps = 100;
  spec.step_size = 0.125;
  spec.jump_rate = 0.2;
  spec.jump_bound = 0.5;
  spec.seed = 3;
  CadlagPath w = make_random_walk(spec);
  REQUIRE(in_sample_space(w, JumpBound::constant(0.5)).member);
  CHECK(in_sample_space(w, JumpBound::constant(0.75)).member);
  CHECK(in_sample_space(w, JumpBound::constant(2.0)).member);
}

TEST_CASE("uniform distance") {
  CadlagPath a = step({0, 0.5}, {0, 1});
  CHECK(sup_distance(a, a) == 0.0);
  CHECK(sup_distance(make_constant(0.0), make_constant(3.0)) == 3.0);
  CHECK(sup_distance(a, step({0, 0.5}, {0, 2})) == 1.0);
  CHECK_THROWS_AS(sup_distance(a, make_constant(0.0, 2.0)), std::domain_error);
}

TEST_CASE("uniform distance is a metric on random triples") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uv(-2, 2);
  for (int rep = 0; rep < 20; ++rep) {
    auto rnd = [&] {
      return step({0, 0.25, 0.5, 0.75}, {uv(rng), uv(rng), uv(rng), uv(rng)});
    };
    CadlagPath x = rnd(), y = rnd(), z = rnd();
    double dxy = sup_distance(x, y);
    CHECK(dxy == sup_distance(y, x));
    CHECK(dxy <= sup_distance(x, z) + sup_distance(z, y) + 1e-15);
  }
}

TEST_CASE("first exit time sigma_L") {
  CHECK(sigma_L(make_constant(1.0), 1) == kNever);
  CHECK(sigma_L(step({0, 0.4}, {0, 2}), 1) == 0.4);
  CHECK(sigma_L(linear({0, 1.0}, {0, 4}), 1) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("first passage helpers") {
  CadlagPath p = step({0, 0.25, 0.5}, {0, 1, -1});
  CHECK(first_time_ge(p, 1.0, 0.0) == 0.25);
  CHECK(first_time_le(p, -0.5, 0.0) == 0.5);
  CHECK(first_time_ge(p, 5.0, 0.0) == kNever);
}

TEST_CASE("generators") {
  CHECK(make_constant(1.0)(0.77) == 1.0);
  CHECK(make_single_jump(0.5, 0, 1).jump(0.5) == 1.0);

  CadlagPath sqw = make_square_wave(0.5, -1, 1, 1.0);
  CHECK(sqw(0.0) == -1.0);
  CHECK(sqw(0.25) == 1.0);
  CHECK(sqw(0.5) == -1.0);

  RandomWalkSpec spec;
  spec.steps = 1000;
  spec.step_size = std::exp2(-6);
  spec.seed = 7;
  CadlagPath w = make_random_walk(spec);
  CHECK(in_sample_space(w, JumpBound::constant(std::exp2(-6))).member);
  CHECK(w.horizon() == 1.0);
  // Determinism per seed.
  CadlagPath w2 = make_random_walk(spec);
  CHECK(sup_distance(w, w2) == 0.0);
}

TEST_CASE("dyadic grid helpers are exact") {
  CHECK(dyadic_value(3, 2) == 0.75);
  CHECK(dyadic_value(-5, 3) == -0.625);
  CHECK(grid_floor_index(0.75, 2) == 3);
  CHECK(grid_floor_index(0.74, 2) == 2);
  CHECK(grid_ceil_index(0.76, 2) == 4);
}
