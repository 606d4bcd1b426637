#include "pathwise/qv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathwise {

namespace {

double sq(double x) { return x * x; }

std::vector<double> merged_events(const CadlagPath& path,
                                  const std::vector<double>& stops) {
  std::vector<double> ev;
  ev.reserve(stops.size() + path.size() + 1);
  ev.insert(ev.end(), stops.begin(), stops.end());
  ev.insert(ev.end(), path.times().begin(), path.times().end());
  ev.push_back(path.horizon());
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  return ev;
}

}  // namespace

QVCurve::QVCurve(std::shared_ptr<const CadlagPath> path,
                 std::vector<double> stops, int level)
    : path_(std::move(path)), stops_(std::move(stops)), level_(level) {
  if (stops_.empty() || stops_.front() != 0.0)
    throw std::invalid_argument("stop times must start at 0");
  prefix_.reserve(stops_.size());
  double acc = 0, prev = (*path_)(0.0);
  for (double t : stops_) {
    double v = (*path_)(t);
    acc += sq(v - prev);
    prefix_.push_back(acc);
    prev = v;
  }
}

double QVCurve::operator()(double t) const {
  auto it = std::upper_bound(stops_.begin(), stops_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - stops_.begin()) - 1;
  return prefix_[j] + sq((*path_)(t) - (*path_)(stops_[j]));
}

double QVCurve::left_value(double t) const {
  if (!(t > 0)) return 0;
  auto it = std::lower_bound(stops_.begin(), stops_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - stops_.begin());
  if (j == 0) return 0;
  --j;
  return prefix_[j] + sq(path_->left_limit(t) - (*path_)(stops_[j]));
}

std::vector<double> QVCurve::event_times() const {
  return merged_events(*path_, stops_);
}

QVCurve qv_approx(const CadlagPath& path, const Partition& partition) {
  std::vector<double> stops;
  for (double t : partition.times)
    if (t <= path.horizon()) stops.push_back(t);
  return QVCurve(std::make_shared<CadlagPath>(path), std::move(stops), -1);
}

QVCurve qv_approx(std::shared_ptr<const CadlagPath> path,
                  std::vector<double> stop_times, int level) {
  for (double t : stop_times)
    if (t > path->horizon())
      throw std::invalid_argument("stop time beyond horizon");
  return QVCurve(std::move(path), std::move(stop_times), level);
}

double qv_distance(const QVCurve& a, const QVCurve& b) {
  if (a.horizon() != b.horizon())
    throw std::domain_error("qv_distance requires equal horizons");
  std::vector<double> ev;
  ev.insert(ev.end(), a.stops().begin(), a.stops().end());
  ev.insert(ev.end(), b.stops().begin(), b.stops().end());
  std::vector<double> pe = merged_events(a.path(), ev);
  double d = 0;
  for (double t : pe) {
    d = std::max(d, std::abs(a(t) - b(t)));
    if (t > 0) d = std::max(d, std::abs(a.left_value(t) - b.left_value(t)));
  }
  return d;
}

QVLimit qv_limit(const CadlagPath& path, const LadderSequence& seq,
                 double tol) {
  int n_max = seq.n_max();
  if (tol < 0) tol = std::exp2(-0.5 * n_max);
  auto shared = std::make_shared<CadlagPath>(path);
  std::vector<QVCurve> curves;
  curves.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    curves.push_back(
        qv_approx(shared, seq.at(n).partition().times, n));
  std::vector<double> dist;
  for (int n = 0; n < n_max; ++n)
    dist.push_back(qv_distance(curves[static_cast<std::size_t>(n)],
                               curves[static_cast<std::size_t>(n) + 1]));
  QVLimit out{std::move(curves.back()), std::move(dist), false, tol};
  out.converged = out.distances.empty() || out.distances.back() <= tol;
  return out;
}

JumpIdentityReport jump_identity_check(const CadlagPath& path,
                                       const QVCurve& qv) {
  JumpIdentityReport rep;
  const auto& stops = qv.stops();
  for (double t : path.jump_times()) {
    if (!std::binary_search(stops.begin(), stops.end(), t)) {
      rep.uncovered_jump_times.push_back(t);
      continue;
    }
    double da = qv(t) - qv.left_value(t);
    rep.max_residual = std::max(rep.max_residual, std::abs(da - sq(path.jump(t))));
  }
  return rep;
}

CovariationSet::CovariationSet(
    std::vector<std::shared_ptr<const CadlagPath>> paths, int n_max)
    : paths_(std::move(paths)) {
  if (paths_.empty()) throw std::invalid_argument("empty path family");
  std::vector<CadlagPath> plain;
  plain.reserve(paths_.size());
  for (const auto& p : paths_) plain.push_back(*p);
  merged_stops_ = merge_multidim(plain, n_max).stops;
  for (const auto& p : paths_)
    components_.push_back(QVCurve(p, merged_stops_, n_max));
  for (std::size_t m = 0; m < paths_.size(); ++m)
    for (std::size_t l = 0; l < paths_.size(); ++l) {
      auto sum = std::make_shared<CadlagPath>(add(*paths_[m], *paths_[l]));
      pair_sums_.push_back(QVCurve(std::move(sum), merged_stops_, n_max));
    }
}

const QVCurve& CovariationSet::pair_sum(std::size_t m, std::size_t l) const {
  return pair_sums_.at(m * dim() + l);
}

double CovariationSet::cov(std::size_t m, std::size_t l, double t) const {
  return 0.5 * (pair_sum(m, l)(t) - components_.at(m)(t) - components_.at(l)(t));
}

std::vector<double> CovariationSet::event_times() const {
  std::vector<double> ev = merged_stops_;
  for (const auto& p : paths_)
    ev.insert(ev.end(), p->times().begin(), p->times().end());
  ev.push_back(paths_[0]->horizon());
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  return ev;
}

CovariationSet covariation(const std::vector<CadlagPath>& paths, int n_max) {
  std::vector<std::shared_ptr<const CadlagPath>> shared;
  shared.reserve(paths.size());
  for (const auto& p : paths) shared.push_back(std::make_shared<CadlagPath>(p));
  return CovariationSet(std::move(shared), n_max);
}

double norvaisa_check(const CadlagPath& path, const QVCurve& qv,
                      const std::vector<std::pair<double, double>>& pairs) {
  const auto& stops = qv.stops();
  double worst = 0;
  for (auto [s, t] : pairs) {
    if (!(0 <= s && s < t && t <= path.horizon()))
      throw std::domain_error("norvaisa pair must satisfy 0 <= s < t <= T");
    double sum = 0, prev = path(s);
    for (std::size_t k = 1; k <= stops.size(); ++k) {
      double u = k < stops.size() ? stops[k] : path.horizon();
      double clamped = std::max(s, std::min(u, t));
      double v = path(clamped);
      sum += sq(v - prev);
      prev = v;
      if (u >= t) break;
    }
    worst = std::max(worst, std::abs(qv(t) - qv(s) - sum));
  }
  return worst;
}

FollmerReport follmer_check(const CadlagPath& path, const QVCurve& qv,
                            const std::vector<double>& continuity_points) {
  FollmerReport rep;
  const auto& stops = qv.stops();
  const auto& prefix = qv.prefix();
  for (double t : continuity_points) {
    if (path.mode() == PathMode::step && t > 0 && path.jump(t) != 0)
      throw std::domain_error("follmer_check expects continuity points");
    // Sum of completed squared increments up to t: the partial-sum
    // distribution function of the increment measure at level n_max.
    auto it = std::upper_bound(stops.begin(), stops.end(), t);
    std::size_t j = static_cast<std::size_t>(it - stops.begin()) - 1;
    rep.max_residual = std::max(rep.max_residual, std::abs(prefix[j] - qv(t)));
  }
  // Decomposition: V minus accumulated squared jumps must be nondecreasing
  // across events.
  std::vector<double> ev = qv.event_times();
  std::vector<double> jumps = path.jump_times();
  std::vector<double> jump_prefix;
  jump_prefix.reserve(jumps.size());
  double acc = 0;
  for (double s : jumps) {
    if (std::binary_search(stops.begin(), stops.end(), s))
      acc += sq(path.jump(s));
    jump_prefix.push_back(acc);
  }
  double prev = 0;
  for (double t : ev) {
    auto jt = std::upper_bound(jumps.begin(), jumps.end(), t);
    double jsum = jt == jumps.begin()
                      ? 0.0
                      : jump_prefix[static_cast<std::size_t>(jt - jumps.begin()) - 1];
    double cont = qv(t) - jsum;
    rep.decomposition_decrease = std::max(rep.decomposition_decrease, prev - cont);
    prev = cont;
  }
  return rep;
}

}  // namespace pathwise
