#include "pathwise/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathwise {

Partition::Partition(std::vector<double> ts) : times(std::move(ts)) {
  if (times.empty() || times.front() != 0.0)
    throw std::invalid_argument("partition must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("partition times must strictly increase");
}

double mesh(const Partition& partition, double horizon) {
  double m = 0, prev = 0;
  for (double t : partition.times) {
    double c = std::min(t, horizon);
    m = std::max(m, c - prev);
    prev = c;
  }
  return std::max(m, horizon - prev);
}

double osc_over_partition(const CadlagPath& path, const Partition& partition) {
  double T = path.horizon();
  double m = 0;
  const auto& ts = partition.times;
  for (std::size_t k = 1; k <= ts.size(); ++k) {
    double a = std::min(ts[k - 1], T);
    double b = k < ts.size() ? std::min(ts[k], T) : T;
    if (b > a) m = std::max(m, oscillation(path, a, b, true, false));
  }
  return m;
}

Partition Ladder::partition() const {
  std::vector<double> ts = stops;
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return Partition(std::move(ts));
}

namespace {

// Grid point of D^n in the closed hull of [lo,hi], excluding the previous
// anchor, nearest to target; ties go to the smaller point.  Returns false when
// the hull holds no admissible point.
bool pick_anchor(double lo, double hi, long long excluded, double target, int n,
                 long long& out) {
  long long kmin = grid_ceil_index(lo, n);
  long long kmax = grid_floor_index(hi, n);
  if (kmin > kmax) return false;
  if (kmin == kmax && kmin == excluded) return false;
  long long kf = grid_floor_index(target, n);
  bool found = false;
  double best = 0;
  auto consider = [&](long long k) {
    if (k < kmin || k > kmax || k == excluded) return;
    double d = std::abs(dyadic_value(k, n) - target);
    if (!found || d < best || (d == best && k < out)) {
      found = true;
      best = d;
      out = k;
    }
  };
  for (long long k = kf - 2; k <= kf + 2; ++k) consider(k);
  consider(kmin);
  consider(kmax);
  return found;
}

}  // namespace

Ladder build_ladder(const CadlagPath& path, int n) {
  if (n < 0 || n > 40)
    throw std::domain_error("level outside the exact-grid range [0,40]");
  Ladder ladder;
  ladder.level = n;
  const auto& ts = path.times();
  const auto& vs = path.values();
  double w0 = vs[0];
  long long anchor = static_cast<long long>(std::floor(w0))
                     << n;  // integer floor expressed as a level-n grid index
  ladder.stops.push_back(0.0);
  ladder.anchors.push_back(dyadic_value(anchor, n));
  double w_prev = w0;
  // A start lying on the level's grid away from its integer floor triggers an
  // immediate re-anchor at time 0.
  if (std::ldexp(w0, n) == std::floor(std::ldexp(w0, n))) {
    long long k0 = grid_floor_index(w0, n);
    if (k0 != anchor) {
      ladder.stops.push_back(0.0);
      ladder.anchors.push_back(dyadic_value(k0, n));
      anchor = k0;
    }
  }

  if (path.mode() == PathMode::step) {
    for (std::size_t i = 1; i < ts.size(); ++i) {
      double v = vs[i];
      double lo = std::min(w_prev, v), hi = std::max(w_prev, v);
      long long k = 0;
      if (!pick_anchor(lo, hi, anchor, v, n, k)) continue;
      ladder.stops.push_back(ts[i]);
      ladder.anchors.push_back(dyadic_value(k, n));
      anchor = k;
      w_prev = v;
    }
    return ladder;
  }

  // Linear mode: after any stop the path sits exactly on its anchor (or at the
  // off-grid start), so the next stop is the first exact crossing of the
  // nearest admissible grid value above or below.
  auto targets = [&](double w, long long excl, double& up, double& down) {
    long long ku = grid_ceil_index(w, n);
    if (dyadic_value(ku, n) == w) ++ku;  // sitting on the (excluded) anchor
    if (ku == excl) ++ku;
    long long kd = grid_floor_index(w, n);
    if (dyadic_value(kd, n) == w) --kd;
    if (kd == excl) --kd;
    up = dyadic_value(ku, n);
    down = dyadic_value(kd, n);
  };
  double t_prev = 0;
  while (true) {
    double up, down;
    targets(w_prev, anchor, up, down);
    double v0 = w_prev, t0 = t_prev;
    std::size_t i = path.segment_index(t_prev) + 1;
    double hit_t = kNever, hit_v = 0;
    for (; i < ts.size(); ++i) {
      double t1 = ts[i], v1 = vs[i];
      if (v1 > v0 && v1 >= up) {
        hit_t = v0 >= up ? t0 : t0 + (up - v0) / (v1 - v0) * (t1 - t0);
        hit_v = up;
        break;
      }
      if (v1 < v0 && v1 <= down) {
        hit_t = v0 <= down ? t0 : t0 + (down - v0) / (v1 - v0) * (t1 - t0);
        hit_v = down;
        break;
      }
      t0 = t1;
      v0 = v1;
    }
    if (hit_t == kNever) break;
    if (hit_t <= t_prev && ladder.stops.size() > 1) hit_t = t_prev;
    ladder.stops.push_back(hit_t);
    ladder.anchors.push_back(hit_v);
    anchor = grid_floor_index(hit_v, n);
    w_prev = hit_v;
    t_prev = hit_t;
  }
  return ladder;
}

LadderSequence build_ladder_sequence(const CadlagPath& path, int n_max) {
  if (n_max < 0 || n_max > 40)
    throw std::domain_error("n_max outside the exact-grid range [0,40]");
  LadderSequence seq;
  seq.levels.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) seq.levels.push_back(build_ladder(path, n));
  for (int n = 0; n < n_max; ++n) {
    const auto& coarse = seq.levels[static_cast<std::size_t>(n)].stops;
    const auto& fine = seq.levels[static_cast<std::size_t>(n) + 1].stops;
    for (double t : coarse)
      if (!std::binary_search(fine.begin(), fine.end(), t)) {
        seq.nested = false;
        seq.nesting_mismatches.emplace_back(n, t);
      }
  }
  return seq;
}

ExhaustionReport exhausts(const LadderSequence& seq, const CadlagPath& path) {
  ExhaustionReport rep;
  const auto& stops = seq.levels.back().stops;
  for (double t : path.jump_times())
    if (!std::binary_search(stops.begin(), stops.end(), t))
      rep.uncovered_jump_times.push_back(t);
  // Scan the open gaps between consecutive stops (and after the last one) for
  // value changes.
  std::vector<double> gaps = stops;
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
  gaps.push_back(path.horizon());
  const auto& ts = path.times();
  const auto& vs = path.values();
  for (std::size_t g = 1; g < gaps.size(); ++g) {
    double a = gaps[g - 1], b = gaps[g];
    if (!(b > a)) continue;
    double entry = path(a);
    bool varies = false;
    auto it = std::upper_bound(ts.begin(), ts.end(), a);
    for (std::size_t i = static_cast<std::size_t>(it - ts.begin());
         i < ts.size() && ts[i] < b; ++i)
      if (vs[i] != entry) {
        varies = true;
        break;
      }
    if (path.mode() == PathMode::linear && !varies && path(b) != entry)
      varies = true;
    if (varies) rep.uncovered_intervals.emplace_back(a, b);
  }
  return rep;
}

Ladder merge_multidim(const std::vector<CadlagPath>& paths, int n) {
  if (paths.empty()) throw std::invalid_argument("merge requires M >= 1 paths");
  double T = paths[0].horizon();
  for (const auto& p : paths)
    if (p.horizon() != T)
      throw std::domain_error("merge requires equal horizons");
  Ladder merged;
  merged.level = n;
  auto absorb = [&](const CadlagPath& p) {
    Ladder l = build_ladder(p, n);
    merged.stops.insert(merged.stops.end(), l.stops.begin(), l.stops.end());
  };
  for (const auto& p : paths) absorb(p);
  for (const auto& pm : paths)
    for (const auto& pl : paths) absorb(add(pm, pl));
  std::sort(merged.stops.begin(), merged.stops.end());
  merged.stops.erase(std::unique(merged.stops.begin(), merged.stops.end()),
                     merged.stops.end());
  return merged;
}

std::vector<Ladder> merge_multidim_sequence(const std::vector<CadlagPath>& paths,
                                            int n_max) {
  std::vector<Ladder> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) out.push_back(merge_multidim(paths, n));
  return out;
}

namespace {

double poly_eval(const std::vector<double>& coeffs, double x) {
  double v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

}  // namespace

DyadicTypeLevelReport dyadic_type_check_level(const std::vector<double>& stops,
                                              const CadlagPath& path, int n,
                                              const DyadicTypeParams& params) {
  DyadicTypeLevelReport rep;
  rep.level = n;
  rep.stop_count = stops.size();
  double thr = params.C * dyadic_value(1, n);
  const auto& ts = path.times();
  const auto& vs = path.values();
  for (std::size_t i = 0; i < ts.size() && rep.increment_ok; ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      if (std::abs(vs[j] - vs[i]) <= thr) continue;
      auto lo = std::upper_bound(stops.begin(), stops.end(), ts[i]);
      if (lo == stops.end() || *lo > ts[j]) {
        rep.increment_ok = false;
        rep.witness = {ts[i], ts[j]};
        break;
      }
    }
  }
  double cap = poly_eval(params.p, static_cast<double>(n)) * std::ldexp(1.0, 2 * n);
  rep.count_ok = static_cast<double>(rep.stop_count) <= cap;
  return rep;
}

bool DyadicTypeReport::pass() const {
  if (!nested || !exhaustion.empty()) return false;
  for (const auto& l : levels)
    if (!l.increment_ok || !l.count_ok) return false;
  return true;
}

DyadicTypeReport dyadic_type_check(const LadderSequence& seq,
                                   const CadlagPath& path,
                                   const DyadicTypeParams& params) {
  DyadicTypeReport rep;
  rep.nested = seq.nested;
  rep.exhaustion = exhausts(seq, path);
  for (const auto& ladder : seq.levels)
    rep.levels.push_back(
        dyadic_type_check_level(ladder.stops, path, ladder.level, params));
  return rep;
}

}  // namespace pathwise
