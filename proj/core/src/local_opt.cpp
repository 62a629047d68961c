#include "mcir/local_opt.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace mcir {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

struct CorrectionPair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion: returns -H g for the implicit inverse Hessian H.
std::vector<double> lbfgs_direction(std::span<const double> g,
                                    const std::deque<CorrectionPair>& history) {
  std::vector<double> q(g.begin(), g.end());
  std::vector<double> alpha(history.size());
  for (std::size_t k = history.size(); k-- > 0;) {
    alpha[k] = history[k].rho * dot(history[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * history[k].y[i];
  }
  if (!history.empty()) {
    const CorrectionPair& last = history.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < history.size(); ++k) {
    const double beta = history[k].rho * dot(history[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += history[k].s[i] * (alpha[k] - beta);
  }
  for (double& v : q) v = -v;
  return q;
}

// Drops direction components that would immediately leave the box.
void freeze_active(std::span<double> d, std::span<const double> x, const BoxDomain& box) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if ((x[i] <= box.lower(i) && d[i] < 0.0) || (x[i] >= box.upper(i) && d[i] > 0.0)) d[i] = 0.0;
  }
}

}  // namespace

LocalOptReport local_opt(Objective& f, std::span<const double> x0, const BoxDomain& box,
                         std::uint64_t budget, const LocalOptOptions& options) {
  if (x0.size() != box.dims() || !box.contains(x0)) {
    throw std::invalid_argument("local_opt: starting point outside the box");
  }
  const std::uint64_t cap = budget + 1;
  const std::size_t n = x0.size();

  LocalOptReport report;
  report.x.assign(x0.begin(), x0.end());
  report.y = f.value(report.x);
  report.evaluations = 1;
  if (budget == 0 || !std::isfinite(report.y) || report.evaluations >= cap) return report;

  std::vector<double>& x = report.x;
  double& fx = report.y;
  std::vector<double> g(n);
  f.gradient(x, g);
  ++report.evaluations;
  if (!all_finite(g)) return report;

  std::deque<CorrectionPair> history;
  std::vector<double> trial(n);
  std::vector<double> g_next(n);
  bool first = true;

  for (;;) {
    double pg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double projected = std::clamp(x[i] - g[i], box.lower(i), box.upper(i));
      pg = std::max(pg, std::fabs(x[i] - projected));
    }
    if (pg < options.projected_gradient_tolerance) {
      report.converged = true;
      return report;
    }

    std::vector<double> d = lbfgs_direction(g, history);
    freeze_active(d, x, box);
    if (!all_finite(d) || dot(g, d) >= 0.0) {
      history.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      freeze_active(d, x, box);
    }
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
      report.converged = true;
      return report;
    }

    double step = 1.0;
    if (first) {
      double gmax = 0.0;
      for (double v : d) gmax = std::max(gmax, std::fabs(v));
      step = std::min(1.0, 1.0 / gmax);
    }

    bool accepted = false;
    double f_trial = fx;
    for (int halving = 0; halving <= options.max_halvings; ++halving, step *= 0.5) {
      if (report.evaluations >= cap) return report;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = std::clamp(x[i] + step * d[i], box.lower(i), box.upper(i));
      }
      f_trial = f.value(trial);
      ++report.evaluations;
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (trial[i] - x[i]);
      if (std::isfinite(f_trial) && f_trial < fx && f_trial <= fx + options.armijo * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) return report;

    const double improvement = fx - f_trial;
    const double previous = fx;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = trial[i] - x[i];
    x = trial;
    fx = f_trial;
    first = false;

    if (improvement <= options.min_relative_improvement * std::fabs(previous)) {
      report.converged = true;
      return report;
    }
    if (report.evaluations >= cap) return report;
    f.gradient(x, g_next);
    ++report.evaluations;
    if (!all_finite(g_next)) return report;

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = g_next[i] - g[i];
    const double sy = dot(s, y);
    if (sy > 1e-10 * std::sqrt(dot(s, s) * dot(y, y))) {
      history.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (history.size() > options.memory) history.pop_front();
    }
    g.swap(g_next);
  }
}

LocalOptReport local_opt(const Expression& f, std::span<const double> x0, const BoxDomain& box,
                         std::uint64_t budget, const LocalOptOptions& options) {
  Objective objective(f);
  return local_opt(objective, x0, box, budget, options);
}

}  // namespace mcir
