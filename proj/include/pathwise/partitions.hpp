#pragma once

#include <vector>

#include "pathwise/path.hpp"

namespace pathwise {

// Finite increasing time grid 0 = t_0 < t_1 < ... < t_m <= T, conceptually
// padded with entries beyond T.
struct Partition {
  std::vector<double> times;

  explicit Partition(std::vector<double> ts);
  std::size_t size() const { return times.size(); }
};

double mesh(const Partition& partition, double horizon);

// max over cells [t_{k-1} /\ T, t_k /\ T) of the path's oscillation; the cell
// after the last partition point runs to the horizon.
double osc_over_partition(const CadlagPath& path, const Partition& partition);

// Stopping times tau^n_k with their dyadic anchors D^n_k.  anchors[0] is the
// integer floor of the starting value at every level; when the starting value
// already lies on the level's grid away from that floor, the ladder re-anchors
// with a second entry at time 0 (the only place where stop times may repeat).
struct Ladder {
  int level = 0;
  std::vector<double> stops;
  std::vector<double> anchors;

  Partition partition() const;  // deduplicated stop times
};

struct LadderSequence {
  std::vector<Ladder> levels;  // index n = 0..n_max
  bool nested = true;
  // (n, stop time) pairs present at level n but missing at level n+1.
  std::vector<std::pair<int, double>> nesting_mismatches;

  const Ladder& at(int n) const { return levels.at(static_cast<std::size_t>(n)); }
  int n_max() const { return static_cast<int>(levels.size()) - 1; }
};

Ladder build_ladder(const CadlagPath& path, int n);
LadderSequence build_ladder_sequence(const CadlagPath& path, int n_max);

struct ExhaustionReport {
  std::vector<double> uncovered_jump_times;
  // Open intervals between consecutive top-level stops on which the path is
  // not constant.
  std::vector<std::pair<double, double>> uncovered_intervals;

  bool empty() const {
    return uncovered_jump_times.empty() && uncovered_intervals.empty();
  }
};

ExhaustionReport exhausts(const LadderSequence& seq, const CadlagPath& path);

// Union of the per-component and per-pair-sum ladders (pairs include m = l),
// times only.
Ladder merge_multidim(const std::vector<CadlagPath>& paths, int n);
std::vector<Ladder> merge_multidim_sequence(const std::vector<CadlagPath>& paths,
                                            int n_max);

struct DyadicTypeParams {
  double C = 4;
  std::vector<double> p;  // stop-count polynomial, lowest degree first
};

struct DyadicTypeLevelReport {
  int level = 0;
  bool increment_ok = true;   // condition on |w(t)-w(s)| vs stops in (s,t]
  bool count_ok = true;       // finite stops <= p(n) 2^{2n}
  std::pair<double, double> witness{0, 0};  // violating (s,t) if any
  std::size_t stop_count = 0;
};

struct DyadicTypeReport {
  bool nested = true;
  ExhaustionReport exhaustion;
  std::vector<DyadicTypeLevelReport> levels;

  bool pass() const;
};

DyadicTypeReport dyadic_type_check(const LadderSequence& seq,
                                   const CadlagPath& path,
                                   const DyadicTypeParams& params);

// Same increment/count scan against an externally supplied stop set per level
// (used to exhibit failures for thinned ladders).
DyadicTypeLevelReport dyadic_type_check_level(const std::vector<double>& stops,
                                              const CadlagPath& path, int n,
                                              const DyadicTypeParams& params);

}  // namespace pathwise
