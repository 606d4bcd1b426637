#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace pathwise {

// Sentinel for "never": compares greater than every finite time, and inf of an
// empty set of times is this value.
inline constexpr double kNever = std::numeric_limits<double>::infinity();

enum class PathMode { step, linear };

// Finitely represented path on [0,T].  In step mode the value is constant on
// [t_i, t_{i+1}) and on [t_last, T] (right-continuous with left limits); in
// linear mode the path is continuous piecewise-linear through the breakpoints
// and constant after the last one.
class CadlagPath {
public:
  CadlagPath(double horizon, PathMode mode, std::vector<double> times,
             std::vector<double> values);

  double horizon() const { return horizon_; }
  PathMode mode() const { return mode_; }
  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

  // Right-continuous evaluation; t must lie in [0,T].
  double operator()(double t) const;
  // lim_{s↑t} of the path; t must lie in (0,T].
  double left_limit(double t) const;
  // operator()(t) - left_limit(t); identically zero in linear mode.
  double jump(double t) const;

  // Index of the last breakpoint with time <= t.
  std::size_t segment_index(double t) const;

  double min_value() const;
  double max_value() const;
  // Breakpoint times with a nonzero jump (always empty in linear mode).
  std::vector<double> jump_times() const;

private:
  double horizon_;
  PathMode mode_;
  std::vector<double> times_;
  std::vector<double> values_;
};

// Jump-size bound psi for the sample space: |dω(t)| <= psi(sup_{s<t}|ω(s)|).
// psi is nondecreasing.  Kinds: constant c > 0; tabulated step lookup with
// positive values; affine u -> (c∨1)·u.
class JumpBound {
public:
  static JumpBound constant(double c);
  static JumpBound affine(double c);
  static JumpBound tabulated(std::vector<double> thresholds,
                             std::vector<double> values);

  double operator()(double u) const;

private:
  enum class Kind { constant, affine, tabulated };
  JumpBound(Kind k, double c) : kind_(k), c_(c) {}
  Kind kind_;
  double c_ = 0;
  std::vector<double> thresholds_;
  std::vector<double> values_;
};

struct CrossingCount {
  long long upcrossings = 0;
  long long downcrossings = 0;
  double at_time = 0;
  std::optional<double> grid_step;
};

// All times in [0,T] at which an upcrossing (resp. downcrossing) of (a,b)
// completes: the path reached <= a and then comes back to >= b (conversely for
// downcrossings).  Sorted ascending.
struct CrossingTimes {
  std::vector<double> up;
  std::vector<double> down;
};

CrossingTimes crossing_times(const CadlagPath& path, double a, double b);

// Counts over [0,t] (closed).
CrossingCount upcrossings(const CadlagPath& path, double a, double b, double t);
// Counts over [0,t): crossings completed strictly before t.
CrossingCount upcrossings_strict_before(const CadlagPath& path, double a,
                                        double b, double t);

// Sum over all grid cells (kh,(k+1)h) meeting the path's range.
CrossingCount grid_crossings(const CadlagPath& path, double h, double t);
CrossingCount grid_crossings_strict_before(const CadlagPath& path, double h,
                                           double t);
// Merged, sorted completion times over all cells of the h-grid.
CrossingTimes grid_crossing_times(const CadlagPath& path, double h);

// sup - inf of the path over the interval with endpoints a <= b; closedness
// flags select whether the endpoints belong to the interval.  Empty interval
// gives 0 by convention.
double oscillation(const CadlagPath& path, double a, double b,
                   bool closed_left = true, bool closed_right = true);

struct SampleSpaceReport {
  bool member = true;
  std::optional<double> first_violation;
};

SampleSpaceReport in_sample_space(const CadlagPath& path,
                                  const JumpBound& bound);

// Uniform distance sup_t |p1(t) - p2(t)|, exact over the merged breakpoint set
// (values and left limits both checked).
double sup_distance(const CadlagPath& p1, const CadlagPath& p2);

// First time |ω(t)| >= 2^L, or kNever.
double sigma_L(const CadlagPath& path, int L);

// First t in [from,T] with ω(t) >= level (resp. <= level); when strict_after
// is set only times t > from qualify.  kNever if none.
double first_time_ge(const CadlagPath& path, double level, double from,
                     bool strict_after = false);
double first_time_le(const CadlagPath& path, double level, double from,
                     bool strict_after = false);

// Pointwise combinations (matching modes and horizons required; linear paths
// must share breakpoint times for add).
CadlagPath add(const CadlagPath& p1, const CadlagPath& p2);
CadlagPath scale(const CadlagPath& p, double factor);
CadlagPath transform(const CadlagPath& p,
                     const std::function<double(double)>& f);

// Generators.  All deterministic; random_walk is in Ω_c for any c >= max of
// step size and jump bound by construction.
CadlagPath make_constant(double value, double horizon = 1.0);
CadlagPath make_single_jump(double t0, double v0, double v1,
                            double horizon = 1.0);
CadlagPath make_square_wave(double period, double low, double high,
                            double horizon = 1.0);

struct RandomWalkSpec {
  long long steps = 0;
  double step_size = 0;
  double jump_rate = 0;   // probability a step is replaced by a larger jump
  double jump_bound = 0;  // jumps are lattice multiples of step_size, <= this
  std::uint64_t seed = 0;
  double horizon = 1.0;
  double start = 0;
};

CadlagPath make_random_walk(const RandomWalkSpec& spec);

// Exact dyadic grid helpers (valid for n <= 40, |k| < 2^50).
double dyadic_value(long long k, int n);
long long grid_floor_index(double x, int n);
long long grid_ceil_index(double x, int n);

}  // namespace pathwise
