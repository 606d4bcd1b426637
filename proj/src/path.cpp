#include "pathwise/path.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pathwise {

CadlagPath::CadlagPath(double horizon, PathMode mode, std::vector<double> times,
                       std::vector<double> values)
    : horizon_(horizon), mode_(mode), times_(std::move(times)),
      values_(std::move(values)) {
  if (!(horizon_ > 0) || !std::isfinite(horizon_))
    throw std::invalid_argument("horizon must be positive and finite");
  if (times_.empty() || times_.size() != values_.size())
    throw std::invalid_argument("breakpoint lists empty or mismatched");
  if (times_.front() != 0.0)
    throw std::invalid_argument("first breakpoint time must be 0");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]))
      throw std::invalid_argument("breakpoints must be finite");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw std::invalid_argument("breakpoint times must strictly increase");
  }
  if (times_.back() > horizon_)
    throw std::invalid_argument("breakpoint time beyond horizon");
}

std::size_t CadlagPath::segment_index(double t) const {
  if (t < 0 || t > horizon_)
    throw std::domain_error("time outside [0,T]");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double CadlagPath::operator()(double t) const {
  std::size_t i = segment_index(t);
  if (mode_ == PathMode::step || i + 1 == times_.size())
    return values_[i];
  double t0 = times_[i], t1 = times_[i + 1];
  double w = (t - t0) / (t1 - t0);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double CadlagPath::left_limit(double t) const {
  if (!(t > 0) || t > horizon_)
    throw std::domain_error("left limit defined on (0,T] only");
  if (mode_ == PathMode::linear)
    return (*this)(t);
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  // Last breakpoint strictly before t carries the value on [t_i, t).
  std::size_t i = static_cast<std::size_t>(it - times_.begin());
  return values_[i - 1];
}

double CadlagPath::jump(double t) const { return (*this)(t) - left_limit(t); }

double CadlagPath::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double CadlagPath::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

std::vector<double> CadlagPath::jump_times() const {
  std::vector<double> out;
  if (mode_ == PathMode::linear) return out;
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (values_[i] != values_[i - 1]) out.push_back(times_[i]);
  return out;
}

JumpBound JumpBound::constant(double c) {
  if (!(c > 0)) throw std::invalid_argument("constant jump bound must be > 0");
  return JumpBound(Kind::constant, c);
}

JumpBound JumpBound::affine(double c) {
  if (!(c > 0)) throw std::invalid_argument("affine coefficient must be > 0");
  return JumpBound(Kind::affine, c);
}

JumpBound JumpBound::tabulated(std::vector<double> thresholds,
                               std::vector<double> values) {
  if (thresholds.empty() || thresholds.size() != values.size())
    throw std::invalid_argument("tabulated bound: bad table");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(values[i] > 0))
      throw std::invalid_argument("tabulated bound values must be > 0");
    if (i > 0 && (thresholds[i] <= thresholds[i - 1] ||
                  values[i] < values[i - 1]))
      throw std::invalid_argument("tabulated bound must be nondecreasing");
  }
  JumpBound b(Kind::tabulated, 0);
  b.thresholds_ = std::move(thresholds);
  b.values_ = std::move(values);
  return b;
}

double JumpBound::operator()(double u) const {
  switch (kind_) {
    case Kind::constant: return c_;
    case Kind::affine: return std::max(c_, 1.0) * u;
    case Kind::tabulated: {
      // Step lookup: value of the last threshold <= u, clamped at the ends.
      auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), u);
      if (it == thresholds_.begin()) return values_.front();
      return values_[static_cast<std::size_t>(it - thresholds_.begin()) - 1];
    }
  }
  return 0;  // unreachable
}

namespace {

// Exact time at which a linear segment [t0,t1], v0 -> v1 first reaches level.
double segment_hit_time(double t0, double t1, double v0, double v1,
                        double level) {
  return t0 + (level - v0) / (v1 - v0) * (t1 - t0);
}

}  // namespace

CrossingTimes crossing_times(const CadlagPath& path, double a, double b) {
  if (!(a < b)) throw std::domain_error("crossing interval requires a < b");
  CrossingTimes out;
  const auto& ts = path.times();
  const auto& vs = path.values();
  bool up_armed = false, down_armed = false;
  if (path.mode() == PathMode::step) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double v = vs[i];
      if (up_armed && v >= b) {
        out.up.push_back(ts[i]);
        up_armed = false;
      }
      if (down_armed && v <= a) {
        out.down.push_back(ts[i]);
        down_armed = false;
      }
      if (v <= a) up_armed = true;
      if (v >= b) down_armed = true;
    }
    return out;
  }
  // Linear mode: walk segments; within a monotone segment each machine can
  // fire at most once, at the exact crossing time.
  double pv = vs[0];
  if (pv <= a) up_armed = true;
  if (pv >= b) down_armed = true;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double t0 = ts[i - 1], t1 = ts[i], v0 = vs[i - 1], v1 = vs[i];
    if (v1 > v0) {  // rising: may complete an upcrossing
      if (up_armed && v1 >= b) {
        out.up.push_back(v0 >= b ? t0 : segment_hit_time(t0, t1, v0, v1, b));
        up_armed = false;
      }
    } else if (v1 < v0) {  // falling: may complete a downcrossing
      if (down_armed && v1 <= a) {
        out.down.push_back(v0 <= a ? t0 : segment_hit_time(t0, t1, v0, v1, a));
        down_armed = false;
      }
    }
    if (v1 <= a) up_armed = true;
    if (v1 >= b) down_armed = true;
  }
  return out;
}

namespace {

CrossingCount count_up_to(const CrossingTimes& ct, double t, bool strict) {
  CrossingCount c;
  c.at_time = t;
  auto count = [&](const std::vector<double>& xs) {
    auto it = strict ? std::lower_bound(xs.begin(), xs.end(), t)
                     : std::upper_bound(xs.begin(), xs.end(), t);
    return static_cast<long long>(it - xs.begin());
  };
  c.upcrossings = count(ct.up);
  c.downcrossings = count(ct.down);
  return c;
}

}  // namespace

CrossingCount upcrossings(const CadlagPath& path, double a, double b,
                          double t) {
  if (t < 0 || t > path.horizon()) throw std::domain_error("time outside [0,T]");
  return count_up_to(crossing_times(path, a, b), t, false);
}

CrossingCount upcrossings_strict_before(const CadlagPath& path, double a,
                                        double b, double t) {
  if (t < 0 || t > path.horizon()) throw std::domain_error("time outside [0,T]");
  return count_up_to(crossing_times(path, a, b), t, true);
}

CrossingTimes grid_crossing_times(const CadlagPath& path, double h) {
  if (!(h > 0)) throw std::domain_error("grid step must be positive");
  CrossingTimes all;
  double lo = path.min_value(), hi = path.max_value();
  long long kmin = static_cast<long long>(std::floor(lo / h)) - 1;
  long long kmax = static_cast<long long>(std::ceil(hi / h)) + 1;
  for (long long k = kmin; k <= kmax; ++k) {
    double a = static_cast<double>(k) * h, b = static_cast<double>(k + 1) * h;
    if (!(lo <= a && hi >= b)) continue;  // cell cannot be fully crossed
    CrossingTimes ct = crossing_times(path, a, b);
    all.up.insert(all.up.end(), ct.up.begin(), ct.up.end());
    all.down.insert(all.down.end(), ct.down.begin(), ct.down.end());
  }
  std::sort(all.up.begin(), all.up.end());
  std::sort(all.down.begin(), all.down.end());
  return all;
}

CrossingCount grid_crossings(const CadlagPath& path, double h, double t) {
  if (t < 0 || t > path.horizon()) throw std::domain_error("time outside [0,T]");
  CrossingCount c = count_up_to(grid_crossing_times(path, h), t, false);
  c.grid_step = h;
  return c;
}

CrossingCount grid_crossings_strict_before(const CadlagPath& path, double h,
                                           double t) {
  if (t < 0 || t > path.horizon()) throw std::domain_error("time outside [0,T]");
  CrossingCount c = count_up_to(grid_crossing_times(path, h), t, true);
  c.grid_step = h;
  return c;
}

double oscillation(const CadlagPath& path, double a, double b, bool closed_left,
                   bool closed_right) {
  if (a > b || (a == b && !(closed_left && closed_right))) return 0.0;
  if (a < 0 || b > path.horizon()) throw std::domain_error("interval outside [0,T]");
  double lo, hi;
  if (path.mode() == PathMode::step) {
    // Values attained on the interval: the value just after a (attained on a
    // right-neighborhood whether or not a itself is included), interior
    // breakpoint values, and the value at b if the right end is closed.
    if (a == b) return 0.0;
    lo = hi = path(a);
    const auto& ts = path.times();
    const auto& vs = path.values();
    auto it = std::upper_bound(ts.begin(), ts.end(), a);
    for (std::size_t i = static_cast<std::size_t>(it - ts.begin());
         i < ts.size() && ts[i] < b; ++i) {
      lo = std::min(lo, vs[i]);
      hi = std::max(hi, vs[i]);
    }
    if (closed_right) {
      double vb = path(b);
      lo = std::min(lo, vb);
      hi = std::max(hi, vb);
    }
  } else {
    // Continuous: closedness does not affect sup - inf.
    lo = hi = path(a);
    double vb = path(b);
    lo = std::min(lo, vb);
    hi = std::max(hi, vb);
    const auto& ts = path.times();
    const auto& vs = path.values();
    auto it = std::upper_bound(ts.begin(), ts.end(), a);
    for (std::size_t i = static_cast<std::size_t>(it - ts.begin());
         i < ts.size() && ts[i] < b; ++i) {
      lo = std::min(lo, vs[i]);
      hi = std::max(hi, vs[i]);
    }
  }
  return hi - lo;
}

SampleSpaceReport in_sample_space(const CadlagPath& path,
                                  const JumpBound& bound) {
  SampleSpaceReport rep;
  if (path.mode() == PathMode::linear) return rep;
  const auto& ts = path.times();
  const auto& vs = path.values();
  double running_sup = std::abs(vs[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double delta = std::abs(vs[i] - vs[i - 1]);
    if (delta > bound(running_sup)) {
      rep.member = false;
      rep.first_violation = ts[i];
      return rep;
    }
    running_sup = std::max(running_sup, std::abs(vs[i]));
  }
  return rep;
}

double sup_distance(const CadlagPath& p1, const CadlagPath& p2) {
  if (p1.horizon() != p2.horizon())
    throw std::domain_error("sup_distance requires equal horizons");
  std::vector<double> grid;
  grid.reserve(p1.size() + p2.size() + 1);
  grid.insert(grid.end(), p1.times().begin(), p1.times().end());
  grid.insert(grid.end(), p2.times().begin(), p2.times().end());
  grid.push_back(p1.horizon());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double d = 0;
  for (double t : grid) {
    d = std::max(d, std::abs(p1(t) - p2(t)));
    if (t > 0) d = std::max(d, std::abs(p1.left_limit(t) - p2.left_limit(t)));
  }
  return d;
}

double first_time_ge(const CadlagPath& path, double level, double from,
                     bool strict_after) {
  const auto& ts = path.times();
  const auto& vs = path.values();
  if (!strict_after && path(from) >= level) return from;
  if (path.mode() == PathMode::step) {
    auto it = std::upper_bound(ts.begin(), ts.end(), from);
    for (std::size_t i = static_cast<std::size_t>(it - ts.begin());
         i < ts.size(); ++i)
      if (vs[i] >= level) return ts[i];
    return kNever;
  }
  double t0 = from, v0 = path(from);
  std::size_t i = path.segment_index(from) + 1;
  for (; i < ts.size(); ++i) {
    double t1 = ts[i], v1 = vs[i];
    if (v1 >= level) {
      if (v0 >= level) return t0;  // only reachable with strict_after at from
      return segment_hit_time(t0, t1, v0, v1, level);
    }
    t0 = t1;
    v0 = v1;
  }
  return kNever;
}

double first_time_le(const CadlagPath& path, double level, double from,
                     bool strict_after) {
  const auto& ts = path.times();
  const auto& vs = path.values();
  if (!strict_after && path(from) <= level) return from;
  if (path.mode() == PathMode::step) {
    auto it = std::upper_bound(ts.begin(), ts.end(), from);
    for (std::size_t i = static_cast<std::size_t>(it - ts.begin());
         i < ts.size(); ++i)
      if (vs[i] <= level) return ts[i];
    return kNever;
  }
  double t0 = from, v0 = path(from);
  std::size_t i = path.segment_index(from) + 1;
  for (; i < ts.size(); ++i) {
    double t1 = ts[i], v1 = vs[i];
    if (v1 <= level) {
      if (v0 <= level) return t0;
      return segment_hit_time(t0, t1, v0, v1, level);
    }
    t0 = t1;
    v0 = v1;
  }
  return kNever;
}

double sigma_L(const CadlagPath& path, int L) {
  if (L < 0) throw std::domain_error("L must be nonnegative");
  double lvl = std::ldexp(1.0, L);
  double t_hi = first_time_ge(path, lvl, 0.0);
  double t_lo = first_time_le(path, -lvl, 0.0);
  return std::min(t_hi, t_lo);
}

CadlagPath add(const CadlagPath& p1, const CadlagPath& p2) {
  if (p1.horizon() != p2.horizon() || p1.mode() != p2.mode())
    throw std::domain_error("add requires matching horizon and mode");
  std::vector<double> grid;
  grid.insert(grid.end(), p1.times().begin(), p1.times().end());
  grid.insert(grid.end(), p2.times().begin(), p2.times().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (p1.mode() == PathMode::linear && p1.times() != p2.times())
    throw std::domain_error("add of linear paths requires equal breakpoints");
  std::vector<double> vals;
  vals.reserve(grid.size());
  for (double t : grid) vals.push_back(p1(t) + p2(t));
  return CadlagPath(p1.horizon(), p1.mode(), std::move(grid), std::move(vals));
}

CadlagPath scale(const CadlagPath& p, double factor) {
  std::vector<double> vals = p.values();
  for (double& v : vals) v *= factor;
  return CadlagPath(p.horizon(), p.mode(), p.times(), std::move(vals));
}

CadlagPath transform(const CadlagPath& p,
                     const std::function<double(double)>& f) {
  std::vector<double> vals = p.values();
  for (double& v : vals) v = f(v);
  return CadlagPath(p.horizon(), p.mode(), p.times(), std::move(vals));
}

CadlagPath make_constant(double value, double horizon) {
  return CadlagPath(horizon, PathMode::step, {0.0}, {value});
}

CadlagPath make_single_jump(double t0, double v0, double v1, double horizon) {
  if (!(t0 > 0) || !(t0 <= horizon))
    throw std::invalid_argument("jump time must lie in (0,T]");
  return CadlagPath(horizon, PathMode::step, {0.0, t0}, {v0, v1});
}

CadlagPath make_square_wave(double period, double low, double high,
                            double horizon) {
  if (!(period > 0)) throw std::invalid_argument("period must be positive");
  std::vector<double> ts, vs;
  double half = period / 2;
  long long k = 0;
  for (double t = 0; t < horizon; t = half * static_cast<double>(++k)) {
    ts.push_back(t);
    vs.push_back(k % 2 == 0 ? low : high);
  }
  return CadlagPath(horizon, PathMode::step, std::move(ts), std::move(vs));
}

CadlagPath make_random_walk(const RandomWalkSpec& spec) {
  if (spec.steps <= 0 || !(spec.step_size > 0))
    throw std::invalid_argument("random walk needs steps > 0 and step > 0");
  if (spec.jump_rate < 0 || spec.jump_rate > 1)
    throw std::invalid_argument("jump rate must lie in [0,1]");
  if (spec.jump_rate > 0 && spec.jump_bound < spec.step_size)
    throw std::invalid_argument("jump bound must be >= step size");
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution is_jump(spec.jump_rate);
  // Jumps are lattice multiples of the step size so the walk stays
  // grid-reachable; their size never exceeds the declared bound.
  long long max_mult =
      std::max<long long>(1, static_cast<long long>(std::floor(
                                 spec.jump_bound / spec.step_size)));
  std::uniform_int_distribution<long long> mult(1, max_mult);
  std::vector<double> ts, vs;
  ts.reserve(static_cast<std::size_t>(spec.steps) + 1);
  vs.reserve(static_cast<std::size_t>(spec.steps) + 1);
  double v = spec.start;
  ts.push_back(0.0);
  vs.push_back(v);
  for (long long i = 1; i <= spec.steps; ++i) {
    double m = static_cast<double>(spec.jump_rate > 0 && is_jump(rng)
                                       ? mult(rng)
                                       : 1);
    v += (coin(rng) ? 1.0 : -1.0) * m * spec.step_size;
    ts.push_back(spec.horizon * static_cast<double>(i) /
                 static_cast<double>(spec.steps));
    vs.push_back(v);
  }
  // The last breakpoint lands exactly at the horizon; pull it back onto T to
  // dodge accumulated division error.
  ts.back() = spec.horizon;
  return CadlagPath(spec.horizon, PathMode::step, std::move(ts), std::move(vs));
}

double dyadic_value(long long k, int n) {
  return std::ldexp(static_cast<double>(k), -n);
}

long long grid_floor_index(double x, int n) {
  return static_cast<long long>(std::floor(std::ldexp(x, n)));
}

long long grid_ceil_index(double x, int n) {
  return static_cast<long long>(std::ceil(std::ldexp(x, n)));
}

}  // namespace pathwise
