#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "pathwise/partitions.hpp"
#include "pathwise/path.hpp"
#include "pathwise/qv.hpp"

namespace pathwise {

// The realized form of a simple strategy on a concrete path: position
// positions[i] is taken at stops[i] and held until the next stop (the last one
// until the horizon).  Stop times are nondecreasing and finite.
struct RealizedStrategy {
  std::vector<double> stops;
  std::vector<double> positions;
  double position_bound = 1e9;
};

// K_t = alpha + sum_i h_i (w(tau_{i+1} /\ t) - w(tau_i /\ t)), exact via
// prefix sums at the stops plus the live increment.
class CapitalTrajectory {
public:
  CapitalTrajectory(std::shared_ptr<const CadlagPath> path,
                    RealizedStrategy strategy, double alpha);

  double operator()(double t) const;
  double left_value(double t) const;
  double initial_capital() const { return alpha_; }
  double final_capital() const { return (*this)(path_->horizon()); }
  // Position held at time t (between stops; 0 before the first stop).
  double position_at(double t) const;

  const CadlagPath& path() const { return *path_; }
  const RealizedStrategy& strategy() const { return strategy_; }
  std::vector<double> event_times() const;
  double min_over_events() const;

private:
  std::shared_ptr<const CadlagPath> path_;
  RealizedStrategy strategy_;
  double alpha_;
  std::vector<double> prefix_;  // capital at each stop
};

CapitalTrajectory run_capital(const CadlagPath& path,
                              const RealizedStrategy& strategy, double alpha);

// Multidimensional variant: positions[i] is a vector dotted with the vector of
// path increments.  Returns capital sampled at the query times.
std::vector<double> run_capital_multi(
    const std::vector<CadlagPath>& paths, const std::vector<double>& stops,
    const std::vector<std::vector<double>>& positions, double alpha,
    const std::vector<double>& query_times);

// Weighted sum of capital trajectories evaluated pointwise.
class PortfolioTrajectory {
public:
  void add_component(double weight, CapitalTrajectory trajectory);
  double operator()(double t) const;
  double initial_capital() const;
  std::size_t size() const { return components_.size(); }
  const CapitalTrajectory& component(std::size_t i) const {
    return components_.at(i).second;
  }
  double weight(std::size_t i) const { return components_.at(i).first; }

private:
  std::vector<std::pair<double, CapitalTrajectory>> components_;
};

// Replays A^n - A^{n-1} as a simple capital process (positions
// -2(w(tau^n_k) - w(tau)) with tau the last level-(n-1) stop).
CapitalTrajectory qv_diff_strategy(const CadlagPath& path,
                                   const LadderSequence& seq, int n);

struct KolmogorovResult {
  CapitalTrajectory trajectory;  // U^n stopped at sigma^n
  double sigma_n = kNever;
  double min_capital = 0;            // min over events of the stopped U^n
  double max_increment = 0;          // max |S_t - S_{tau_k}| over level-n cells
  double increment_bound = 0;        // 2^{-n+4} c
  double replay_residual = 0;        // |replay - direct formula| sup
};

KolmogorovResult kolmogorov_process(const CadlagPath& path,
                                    const LadderSequence& seq, int n, double c);

struct DoobResult {
  CapitalTrajectory trajectory;
  double sigma = kNever;              // sigma_L
  double guarantee_residual_min = 0;  // min over events of V - (b-a) M
  double min_capital = 0;             // min over events up to sigma_L
};

DoobResult doob_strategy(const CadlagPath& path, double a, double b, int L,
                         double c);

struct StrickerResult {
  PortfolioTrajectory portfolio;
  double initial_capital = 0;
  double sigma = kNever;
  double guarantee_residual_min = 0;  // min of V_t - 2^{-2n-L-1} M_{t-}(w,2^-n)
};

inline constexpr std::size_t kStrickerComponentCap = 1u << 16;

StrickerResult stricker_strategy(const CadlagPath& path, int n, int L, double c,
                                 std::size_t component_cap = kStrickerComponentCap);

struct CorollaryLevel {
  int n = 0;
  long long crossings_before_sigma = 0;  // M_{sigma_L -}(w, 2^-n)
  double bound = 0;                      // n^2 2^{2n}
  bool bound_holds = true;
};

struct CorollaryResult {
  std::vector<CorollaryLevel> levels;
  double initial_capital = 0;
  double final_capital = 0;
};

CorollaryResult corollary_portfolio(const CadlagPath& path, int L, double c,
                                    int n_lo, int n_hi);

struct MarginParams {
  double c_long = 0.5;
  double c_short = 0.5;
};

double psi_prime(double u, const JumpBound& psi, double c_short);

struct MarginViolation {
  double time = 0;
  double shortfall = 0;  // how far below 0 the stressed capital falls
};

struct MarginReport {
  bool compliant = true;
  std::vector<MarginViolation> violations;
};

MarginReport margin_check(const CadlagPath& path,
                          const CapitalTrajectory& trajectory,
                          const MarginParams& params, const JumpBound& psi);

// A causal rule: the realized stops/positions up to t may depend only on the
// path restricted to [0,t].
using StrategyRule = std::function<RealizedStrategy(const CadlagPath&)>;

StrategyRule buy_and_hold_rule();
StrategyRule doob_rule(double a, double b, int L, double c);
StrategyRule qv_diff_rule(int n);
StrategyRule kolmogorov_rule(int n, double c);
StrategyRule stricker_component_rule(long long k, int n, int L, double c);

// Mutates the path strictly after t_cut (seeded) and compares the realized
// prefixes.  True means the prefix is invariant, i.e. the rule behaves
// causally on this triple.
bool causality_check(const StrategyRule& rule, const CadlagPath& path,
                     double t_cut, std::uint64_t seed);

}  // namespace pathwise
