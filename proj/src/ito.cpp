#include "pathwise/ito.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathwise {

namespace {

double sq(double x) { return x * x; }

}  // namespace

void validate_derivatives(const SmoothFunction& fn,
                          const std::vector<double>& points,
                          bool check_second) {
  if (!fn.f || !fn.df) throw std::domain_error("f and f' handles required");
  if (check_second && !fn.has_second())
    throw std::domain_error("second derivative handle required");
  for (double x : points) {
    double h = std::ldexp(1.0 + std::abs(x), -20);
    double fd = (fn.f(x + h) - fn.f(x - h)) / (2 * h);
    if (std::abs(fd - fn.df(x)) > 1e-6 * (1 + std::abs(fn.df(x))))
      throw std::domain_error("first derivative handle inconsistent with f");
    if (check_second) {
      double fd2 = (fn.df(x + h) - fn.df(x - h)) / (2 * h);
      if (std::abs(fd2 - fn.d2f(x)) > 1e-6 * (1 + std::abs(fn.d2f(x))))
        throw std::domain_error("second derivative handle inconsistent with f'");
    }
  }
}

IntegralCurve::IntegralCurve(std::shared_ptr<const CadlagPath> path,
                             std::vector<double> stops,
                             const SmoothFunction& f, int level)
    : path_(std::move(path)), stops_(std::move(stops)), level_(level) {
  if (stops_.empty() || stops_.front() != 0.0)
    throw std::invalid_argument("stop times must start at 0");
  prefix_.resize(stops_.size());
  f_at_.resize(stops_.size());
  double acc = 0;
  for (std::size_t k = 0; k < stops_.size(); ++k) {
    double w = (*path_)(stops_[k]);
    if (k > 0) acc += f_at_[k - 1] * (w - (*path_)(stops_[k - 1]));
    prefix_[k] = acc;
    f_at_[k] = f.f(w);
  }
}

double IntegralCurve::operator()(double t) const {
  auto it = std::upper_bound(stops_.begin(), stops_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - stops_.begin()) - 1;
  return prefix_[j] + f_at_[j] * ((*path_)(t) - (*path_)(stops_[j]));
}

double IntegralCurve::left_value(double t) const {
  if (!(t > 0)) return 0;
  auto it = std::lower_bound(stops_.begin(), stops_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - stops_.begin());
  if (j == 0) return 0;
  --j;
  return prefix_[j] + f_at_[j] * (path_->left_limit(t) - (*path_)(stops_[j]));
}

IntegralCurve follmer_integral(const CadlagPath& path, const LadderSequence& seq,
                               int n, const SmoothFunction& f) {
  if (!f.f) throw std::domain_error("function handle required");
  return IntegralCurve(std::make_shared<CadlagPath>(path),
                       seq.at(n).partition().times, f, n);
}

namespace {

// Left-point Stieltjes sums sum_k w_k (G(tau_{k+1} /\ t) - G(tau_k /\ t)) for
// a right-continuous integrator G, held as prefix sums plus the live term.
class StieltjesSum {
public:
  StieltjesSum(std::vector<double> stops, std::vector<double> weights,
               std::function<double(double)> integrator)
      : stops_(std::move(stops)), weights_(std::move(weights)),
        g_(std::move(integrator)) {
    prefix_.resize(stops_.size());
    g_at_.resize(stops_.size());
    double acc = 0;
    for (std::size_t k = 0; k < stops_.size(); ++k) {
      g_at_[k] = g_(stops_[k]);
      if (k > 0) acc += weights_[k - 1] * (g_at_[k] - g_at_[k - 1]);
      prefix_[k] = acc;
    }
  }

  double operator()(double t) const {
    auto it = std::upper_bound(stops_.begin(), stops_.end(), t);
    std::size_t j = static_cast<std::size_t>(it - stops_.begin()) - 1;
    return prefix_[j] + weights_[j] * (g_(t) - g_at_[j]);
  }

private:
  std::vector<double> stops_, weights_, prefix_, g_at_;
  std::function<double(double)> g_;
};

// Squared-increment sums of an arbitrary curve along fixed stops.
class CurveQV {
public:
  CurveQV(std::vector<double> stops, std::function<double(double)> curve)
      : stops_(std::move(stops)), c_(std::move(curve)) {
    prefix_.resize(stops_.size());
    c_at_.resize(stops_.size());
    double acc = 0;
    for (std::size_t k = 0; k < stops_.size(); ++k) {
      c_at_[k] = c_(stops_[k]);
      if (k > 0) acc += sq(c_at_[k] - c_at_[k - 1]);
      prefix_[k] = acc;
    }
  }

  double operator()(double t) const {
    auto it = std::upper_bound(stops_.begin(), stops_.end(), t);
    std::size_t j = static_cast<std::size_t>(it - stops_.begin()) - 1;
    return prefix_[j] + sq(c_(t) - c_at_[j]);
  }

private:
  std::vector<double> stops_, prefix_, c_at_;
  std::function<double(double)> c_;
};

// Accumulated squared jumps (or a general per-jump functional) up to t.
class JumpSum {
public:
  JumpSum(const CadlagPath& path,
          const std::function<double(double, double)>& term)
      : times_(path.jump_times()) {
    prefix_.reserve(times_.size());
    double acc = 0;
    for (double s : times_) {
      acc += term(path.left_limit(s), path(s));
      prefix_.push_back(acc);
    }
  }

  double operator()(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0;
    return prefix_[static_cast<std::size_t>(it - times_.begin()) - 1];
  }

private:
  std::vector<double> times_;
  std::vector<double> prefix_;
};

struct QvPieces {
  std::shared_ptr<const CadlagPath> shared;
  std::vector<double> top_stops;
  QVCurve qv;           // [w] estimate at the top level
  JumpSum squared_jumps;

  double continuous(double t) const { return qv(t) - squared_jumps(t); }
};

QvPieces make_pieces(const CadlagPath& path, const LadderSequence& seq) {
  ExhaustionReport ex = exhausts(seq, path);
  if (!ex.uncovered_jump_times.empty())
    throw std::domain_error(
        "ladder does not cover every jump; continuous QV part undefined");
  auto shared = std::make_shared<CadlagPath>(path);
  std::vector<double> stops = seq.levels.back().partition().times;
  QVCurve qv(shared, stops, seq.n_max());
  JumpSum js(path, [](double before, double after) { return sq(after - before); });
  return QvPieces{shared, std::move(stops), std::move(qv), std::move(js)};
}

std::vector<double> merged_event_times(const CadlagPath& path,
                                       const std::vector<double>& stops) {
  std::vector<double> ev;
  ev.insert(ev.end(), stops.begin(), stops.end());
  ev.insert(ev.end(), path.times().begin(), path.times().end());
  ev.push_back(path.horizon());
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  return ev;
}

}  // namespace

ItoResidualReport ito_residual(const CadlagPath& path, const LadderSequence& seq,
                               int n, const SmoothFunction& F) {
  if (!F.has_second()) throw std::domain_error("ito_residual needs F in C^2");
  {
    std::vector<double> pts = {path.min_value(), path.max_value(),
                               0.5 * (path.min_value() + path.max_value())};
    validate_derivatives(F, pts, true);
  }
  QvPieces pieces = make_pieces(path, seq);
  const std::vector<double> stops = seq.at(n).partition().times;

  SmoothFunction fprime{F.df, F.d2f, nullptr};
  IntegralCurve integral(pieces.shared, stops, fprime, n);

  std::vector<double> d2_weights(stops.size());
  for (std::size_t k = 0; k < stops.size(); ++k)
    d2_weights[k] = F.d2f(path(stops[k]));
  StieltjesSum qv_term(stops, std::move(d2_weights),
                       [&pieces](double t) { return pieces.continuous(t); });

  JumpSum corrections(path, [&F](double before, double after) {
    return F.f(after) - F.f(before) - F.df(before) * (after - before);
  });

  ItoResidualReport rep;
  rep.level = n;
  double f0 = F.f(path(0.0));
  for (double t : merged_event_times(path, stops)) {
    double rhs = f0 + integral(t) + 0.5 * qv_term(t) + corrections(t);
    rep.sup_residual = std::max(rep.sup_residual, std::abs(F.f(path(t)) - rhs));
  }
  double T = path.horizon();
  rep.integral_term_at_T = integral(T);
  rep.qv_term_at_T = 0.5 * qv_term(T);
  rep.jump_term_at_T = corrections(T);
  return rep;
}

QvFormulaReport qv_of_function(const CadlagPath& path, const LadderSequence& seq,
                               const SmoothFunction& f) {
  if (!f.f || !f.df) throw std::domain_error("f and f' handles required");
  QvPieces pieces = make_pieces(path, seq);
  const std::vector<double>& stops = pieces.top_stops;

  CurveQV lhs(stops, [&](double t) { return f.f(path(t)); });

  std::vector<double> weights(stops.size());
  for (std::size_t k = 0; k < stops.size(); ++k)
    weights[k] = sq(f.df(path(stops[k])));
  StieltjesSum cont_part(stops, std::move(weights),
                         [&pieces](double t) { return pieces.continuous(t); });
  JumpSum jumps(path, [&f](double before, double after) {
    return sq(f.f(after) - f.f(before));
  });

  QvFormulaReport rep;
  rep.event_times = merged_event_times(path, stops);
  for (double t : rep.event_times) {
    double l = lhs(t), r = cont_part(t) + jumps(t);
    rep.lhs.push_back(l);
    rep.rhs.push_back(r);
    rep.sup_residual = std::max(rep.sup_residual, std::abs(l - r));
  }
  return rep;
}

QvFormulaReport qv_of_integral(const CadlagPath& path, const LadderSequence& seq,
                               const SmoothFunction& f) {
  if (!f.f) throw std::domain_error("function handle required");
  QvPieces pieces = make_pieces(path, seq);
  const std::vector<double>& stops = pieces.top_stops;

  IntegralCurve phi(pieces.shared, stops, f, seq.n_max());
  CurveQV lhs(stops, [&phi](double t) { return phi(t); });

  std::vector<double> weights(stops.size());
  for (std::size_t k = 0; k < stops.size(); ++k)
    weights[k] = sq(f.f(path(stops[k])));
  StieltjesSum rhs(stops, std::move(weights),
                   [&pieces](double t) { return pieces.qv(t); });

  QvFormulaReport rep;
  rep.event_times = merged_event_times(path, stops);
  for (double t : rep.event_times) {
    double l = lhs(t), r = rhs(t);
    rep.lhs.push_back(l);
    rep.rhs.push_back(r);
    rep.sup_residual = std::max(rep.sup_residual, std::abs(l - r));
  }
  return rep;
}

LogCalculusReport log_calculus(const CadlagPath& path,
                               const LadderSequence& seq) {
  if (!(path.min_value() > 0))
    throw std::domain_error("log calculus requires a strictly positive path");
  QvPieces pieces = make_pieces(path, seq);
  const std::vector<double>& stops = pieces.top_stops;

  CurveQV log_qv(stops, [&](double t) { return std::log(path(t)); });
  std::vector<double> inv_sq(stops.size());
  for (std::size_t k = 0; k < stops.size(); ++k)
    inv_sq[k] = 1.0 / sq(path(stops[k]));
  StieltjesSum log_rhs_cont(stops, inv_sq,
                            [&pieces](double t) { return pieces.continuous(t); });
  JumpSum log_jumps(path, [](double before, double after) {
    return sq(std::log(after) - std::log(before));
  });

  SmoothFunction inv{[](double x) { return 1.0 / x; },
                     [](double x) { return -1.0 / (x * x); }, nullptr};
  IntegralCurve stoch_log(pieces.shared, stops, inv, seq.n_max());
  CurveQV stoch_log_qv(stops, [&stoch_log](double t) { return stoch_log(t); });
  StieltjesSum stoch_rhs(stops, inv_sq,
                         [&pieces](double t) { return pieces.qv(t); });

  LogCalculusReport rep;
  rep.event_times = merged_event_times(path, stops);
  for (double t : rep.event_times) {
    double lq = log_qv(t);
    rep.log_qv.push_back(lq);
    rep.stoch_log.push_back(stoch_log(t));
    double sq_lhs = stoch_log_qv(t);
    rep.stoch_log_qv.push_back(sq_lhs);
    rep.log_qv_residual = std::max(rep.log_qv_residual,
                                   std::abs(lq - (log_rhs_cont(t) + log_jumps(t))));
    rep.stoch_log_qv_residual =
        std::max(rep.stoch_log_qv_residual, std::abs(sq_lhs - stoch_rhs(t)));
  }
  return rep;
}

}  // namespace pathwise
