#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pathwise/partitions.hpp"
#include "pathwise/path.hpp"
#include "pathwise/qv.hpp"
#include "pathwise/trading.hpp"

namespace pathwise {

struct SmoothFunction {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;  // optional; required for C^2 uses

  bool has_second() const { return static_cast<bool>(d2f); }
};

// Spot-checks the derivative handles against central differences at the given
// points; throws on inconsistency.
void validate_derivatives(const SmoothFunction& fn,
                          const std::vector<double>& points,
                          bool check_second = false);

// Left-point Riemann sums along the level-n stops, held exactly: value at t is
// prefix_j + f(w(tau_j)) (w(t) - w(tau_j)).
class IntegralCurve {
public:
  IntegralCurve(std::shared_ptr<const CadlagPath> path,
                std::vector<double> stops, const SmoothFunction& f, int level);

  double operator()(double t) const;
  double left_value(double t) const;
  int level() const { return level_; }
  const std::vector<double>& stops() const { return stops_; }
  const CadlagPath& path() const { return *path_; }

private:
  std::shared_ptr<const CadlagPath> path_;
  std::vector<double> stops_;
  std::vector<double> prefix_;
  std::vector<double> f_at_;  // f(w(tau_j))
  int level_;
};

IntegralCurve follmer_integral(const CadlagPath& path, const LadderSequence& seq,
                               int n, const SmoothFunction& f);

struct ItoResidualReport {
  int level = 0;
  double sup_residual = 0;
  double integral_term_at_T = 0;
  double qv_term_at_T = 0;
  double jump_term_at_T = 0;
};

ItoResidualReport ito_residual(const CadlagPath& path, const LadderSequence& seq,
                               int n, const SmoothFunction& F);

struct QvFormulaReport {
  double sup_residual = 0;
  std::vector<double> event_times;
  std::vector<double> lhs;  // QV of the transformed object along the ladder
  std::vector<double> rhs;  // the formula's right side
};

// [f(w)]_t vs the integral of f'(w)^2 against the continuous QV part plus the
// squared jumps of f(w).
QvFormulaReport qv_of_function(const CadlagPath& path, const LadderSequence& seq,
                               const SmoothFunction& f);

// [Phi]_t for Phi the Follmer integral of f, vs the Stieltjes sum of
// f(w(s-))^2 against d[w].
QvFormulaReport qv_of_integral(const CadlagPath& path, const LadderSequence& seq,
                               const SmoothFunction& f);

struct LogCalculusReport {
  std::vector<double> event_times;
  std::vector<double> log_qv;      // [ln w]
  std::vector<double> stoch_log;   // Ln w
  std::vector<double> stoch_log_qv;  // [Ln w]
  double log_qv_residual = 0;      // vs d[w]^c / w^2 + squared log jumps
  double stoch_log_qv_residual = 0;  // vs d[w] / w(s-)^2
};

LogCalculusReport log_calculus(const CadlagPath& path,
                               const LadderSequence& seq);

}  // namespace pathwise
