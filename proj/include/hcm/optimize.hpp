#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <vector>

namespace hcm {

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0;
  int evals = 0;
};

/// Derivative-free Nelder-Mead simplex minimization. Deterministic given
/// the start point. Suited to the smooth convex / difference-of-convex
/// norm objectives used by the orthogonality deciders (dims <= ~40).
template <typename F>
MinimizeResult nelder_mead(F&& f, const Eigen::VectorXd& x0, double step, double ftol,
                           int max_eval) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& p) {
    ++evals;
    return f(p);
  };

  val[0] = eval(pts[0]);
  for (int i = 0; i < n; ++i) {
    pts[i + 1](i) += step * (1.0 + std::abs(x0(i)));
    val[i + 1] = eval(pts[i + 1]);
  }

  std::vector<int> order(n + 1);
  for (int i = 0; i <= n; ++i) order[i] = i;

  while (evals < max_eval) {
    std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (val[worst] - val[best] <= ftol * (1.0 + std::abs(val[best]))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
    double fr = eval(xr);
    if (fr < val[order[0]]) {
      Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    Eigen::VectorXd xc = centroid + rho * (pts[worst] - centroid);
    double fc = eval(xc);
    if (fc < val[worst]) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (int i = 1; i <= n; ++i) { // shrink toward best
      int idx = order[i];
      pts[idx] = pts[best] + sigma * (pts[idx] - pts[best]);
      val[idx] = eval(pts[idx]);
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (val[i] < val[best]) best = i;
  return {pts[best], val[best], evals};
}

/// Golden-section minimization of a univariate function on [lo, hi].
template <typename F>
MinimizeResult golden_section(F&& f, double lo, double hi, double xtol, int max_eval = 200) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (std::abs(b - a) > xtol && evals < max_eval) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  Eigen::VectorXd x(1);
  if (fc < fd) { x(0) = c; return {x, fc, evals}; }
  x(0) = d;
  return {x, fd, evals};
}

} // namespace hcm
