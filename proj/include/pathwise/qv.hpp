#pragma once

#include <memory>
#include <vector>

#include "pathwise/partitions.hpp"
#include "pathwise/path.hpp"

namespace pathwise {

// A_t = sum_k (w(pi_k /\ t) - w(pi_{k-1} /\ t))^2 held exactly: prefix sums at
// the partition times plus the live term (w(t) - w(pi_j))^2 for the cell
// containing t.
class QVCurve {
public:
  QVCurve(std::shared_ptr<const CadlagPath> path, std::vector<double> stops,
          int level);

  double operator()(double t) const;
  double left_value(double t) const;

  const std::vector<double>& stops() const { return stops_; }
  const std::vector<double>& prefix() const { return prefix_; }
  const CadlagPath& path() const { return *path_; }
  int level() const { return level_; }  // -1 tags a limit curve
  double horizon() const { return path_->horizon(); }

  // Stop times, path breakpoints and the horizon, merged and sorted.
  std::vector<double> event_times() const;

private:
  std::shared_ptr<const CadlagPath> path_;
  std::vector<double> stops_;
  std::vector<double> prefix_;
  int level_;
};

QVCurve qv_approx(const CadlagPath& path, const Partition& partition);
QVCurve qv_approx(std::shared_ptr<const CadlagPath> path,
                  std::vector<double> stop_times, int level);

// Exact uniform distance between two curves on the same path.
double qv_distance(const QVCurve& a, const QVCurve& b);

struct QVLimit {
  QVCurve limit;
  std::vector<double> distances;  // distances[n] = rho(A^n, A^{n+1})
  bool converged = false;
  double tol = 0;
};

QVLimit qv_limit(const CadlagPath& path, const LadderSequence& seq,
                 double tol = -1);  // tol < 0 picks the default 2^{-n_max/2}

struct JumpIdentityReport {
  double max_residual = 0;
  std::vector<double> uncovered_jump_times;
};

JumpIdentityReport jump_identity_check(const CadlagPath& path,
                                       const QVCurve& qv);

class CovariationSet {
public:
  CovariationSet(std::vector<std::shared_ptr<const CadlagPath>> paths,
                 int n_max);

  std::size_t dim() const { return components_.size(); }
  // [w]^{m,l}_t via polarization along the merged ladder.
  double cov(std::size_t m, std::size_t l, double t) const;
  const QVCurve& component(std::size_t m) const { return components_.at(m); }
  const QVCurve& pair_sum(std::size_t m, std::size_t l) const;
  const std::vector<double>& merged_stops() const { return merged_stops_; }
  std::vector<double> event_times() const;

private:
  std::vector<std::shared_ptr<const CadlagPath>> paths_;
  std::vector<double> merged_stops_;
  std::vector<QVCurve> components_;
  std::vector<QVCurve> pair_sums_;  // row-major M x M
};

CovariationSet covariation(const std::vector<CadlagPath>& paths, int n_max);

double norvaisa_check(const CadlagPath& path, const QVCurve& qv,
                      const std::vector<std::pair<double, double>>& pairs);

struct FollmerReport {
  double max_residual = 0;
  // Largest decrease of V(t) - sum of squared covered jumps up to t; a
  // nonpositive value certifies the nondecreasing continuous part.
  double decomposition_decrease = 0;
};

FollmerReport follmer_check(const CadlagPath& path, const QVCurve& qv,
                            const std::vector<double>& continuity_points);

struct EquivalenceReport {
  std::vector<double> level_distances;
  double norvaisa_residual = 0;
  double follmer_residual = 0;
  double jump_residual = 0;
};

}  // namespace pathwise
