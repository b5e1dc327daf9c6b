#pragma once

// Finite-difference gradient checking against the tape's analytic gradients.
// Central differences; the relative-error denominator has a small floor so
// near-zero gradient pairs compare on an absolute scale instead of blowing up
// on finite-difference noise.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "scirel/nn/params.hpp"

namespace scirel::nn {

struct GradCheckEntry {
  std::string param;
  int index = 0;
  double analytic = 0;
  double numeric = 0;
  double rel_err = 0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> per_param;  // worst entry per parameter
  GradCheckEntry worst;
  std::size_t checked = 0;

  bool pass(double tolerance) const { return worst.rel_err < tolerance; }

  std::string to_string() const {
    std::ostringstream out;
    for (const auto& e : per_param)
      out << e.param << " max_rel_err=" << e.rel_err << " (index " << e.index
          << ", analytic " << e.analytic << ", numeric " << e.numeric << ")\n";
    out << "overall max_rel_err=" << worst.rel_err << " over " << checked
        << " components (worst: " << worst.param << "[" << worst.index << "])\n";
    return out.str();
  }
};

inline double grad_rel_err(double analytic, double numeric, double floor = 1e-4) {
  return std::abs(analytic - numeric) /
         std::max(std::abs(analytic) + std::abs(numeric), floor);
}

// loss_fn(compute_grad): evaluates the loss as a deterministic function of the
// store's current parameter values; when compute_grad is true it must also run
// backward, accumulating into the store's gradients (which arrive zeroed).
// skip_param: parameters to leave unchecked (frozen tables enter the graph as
// constants, so their analytic gradient is zero by design, not by error).
template <class T>
GradCheckReport grad_check(ParameterStore<T>& store,
                           const std::function<double(bool)>& loss_fn,
                           double epsilon = 1e-5, double denom_floor = 1e-4,
                           const std::function<bool(const std::string&)>& skip_param = {}) {
  GradCheckReport report;
  store.zero_grads();
  loss_fn(true);
  // Snapshot the analytic gradients; FD evaluations must not see them change.
  std::vector<std::vector<double>> analytic;
  for (auto* p : store.all()) {
    std::vector<double> g(p->grad.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(p->grad[i]);
    analytic.push_back(std::move(g));
  }
  std::size_t pi = 0;
  for (auto* p : store.all()) {
    if (skip_param && skip_param(p->name)) {
      ++pi;
      continue;
    }
    GradCheckEntry worst_here;
    worst_here.param = p->name;
    worst_here.rel_err = -1;
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const T orig = p->value[i];
      p->value[i] = orig + static_cast<T>(epsilon);
      const double fp = loss_fn(false);
      p->value[i] = orig - static_cast<T>(epsilon);
      const double fm = loss_fn(false);
      p->value[i] = orig;
      const double numeric = (fp - fm) / (2 * epsilon);
      const double a = analytic[pi][i];
      const double rel = grad_rel_err(a, numeric, denom_floor);
      ++report.checked;
      if (rel > worst_here.rel_err) {
        worst_here.rel_err = rel;
        worst_here.index = static_cast<int>(i);
        worst_here.analytic = a;
        worst_here.numeric = numeric;
      }
    }
    report.per_param.push_back(worst_here);
    if (report.worst.param.empty() || worst_here.rel_err > report.worst.rel_err)
      report.worst = worst_here;
    ++pi;
  }
  store.zero_grads();
  return report;
}

}  // namespace scirel::nn
