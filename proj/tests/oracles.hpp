#pragma once

// Independent oracles for the unit and acceptance suites. Each one takes a
// different computational route from the implementation it checks: naive
// loops instead of Eigen products, SVD instead of eigensolves of a* a,
// dense grids instead of local optimization.

#include <Eigen/SVD>

#include "hcm/forms.hpp"
#include "hcm/module.hpp"

namespace oracles {

using hcm::AlgebraElement;
using hcm::Complex;
using hcm::Matrix;
using hcm::ModuleVector;

/// Triple-loop block product.
inline AlgebraElement naive_block_product(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r = AlgebraElement::zero(a.shape);
  for (int blk = 0; blk < a.shape.blocks(); ++blk) {
    const int d = a.shape.block_dims[blk];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Complex s = 0;
        for (int l = 0; l < d; ++l) s += a.blocks[blk](i, l) * b.blocks[blk](l, j);
        r.blocks[blk](i, j) = s;
      }
  }
  return r;
}

/// Operator norm by singular value decomposition (the implementation uses
/// an eigensolve of a* a).
inline double op_norm_svd(const AlgebraElement& a) {
  double n = 0;
  for (const auto& m : a.blocks) {
    if (m.rows() == 1) {
      n = std::max(n, std::abs(m(0, 0)));
      continue;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    n = std::max(n, svd.singularValues()(0));
  }
  return n;
}

/// Hermitian spectrum of the symmetrized element, all blocks pooled.
inline std::vector<double> hermitian_spectrum(const AlgebraElement& a) {
  std::vector<double> eigs;
  for (const auto& m : a.blocks) {
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    for (int i = 0; i < es.eigenvalues().size(); ++i) eigs.push_back(es.eigenvalues()(i));
  }
  return eigs;
}

/// Dense lambda-grid minimum of |x + lambda y| over the disk of the given
/// radius. Resolution ~ 2 radius / steps per axis.
inline double lambda_grid_min(const ModuleVector& x, const ModuleVector& y, double radius,
                              int steps) {
  double best = hcm::vector_norm(x);
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      Complex lam(-radius + 2 * radius * i / steps, -radius + 2 * radius * j / steps);
      best = std::min(best, hcm::vector_norm(x + lam * y));
    }
  return best;
}

/// Determinant-based invertibility, independent of singular values.
inline bool det_invertible(const AlgebraElement& a, double tol) {
  for (const auto& m : a.blocks) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (std::abs(m.determinant()) <= std::pow(tol * scale, m.rows())) return false;
  }
  return true;
}

/// Recursive multi-index form evaluation, written without the flat-index
/// arithmetic of the implementation. Abelian shapes only (factor order is
/// immaterial there); arities 1 and 2 use the exact slot layout.
inline AlgebraElement naive_form_eval(const hcm::MultiForm& f,
                                      const std::vector<ModuleVector>& args) {
  AlgebraElement acc = AlgebraElement::zero(f.shape);
  std::vector<int> idx(f.n, 0);
  auto coeff_at = [&](const std::vector<int>& mi) {
    std::size_t flat = 0;
    for (int j = 0; j < f.n; ++j) flat = flat * f.k + mi[j];
    return f.coeffs[flat];
  };
  std::function<void(int)> rec = [&](int slot) {
    if (slot == f.n) {
      if (f.n == 1) {
        acc += coeff_at(idx) * args[0].entries[idx[0]];
      } else if (f.n == 2) {
        acc += args[0].entries[idx[0]].adjoint() * coeff_at(idx) * args[1].entries[idx[1]];
      } else {
        AlgebraElement term = coeff_at(idx);
        for (int j = 0; j < f.n; ++j) {
          const auto& e = args[j].entries[idx[j]];
          term = term * (j % 2 == 0 ? e.adjoint() : e);
        }
        acc += term;
      }
      return;
    }
    for (idx[slot] = 0; idx[slot] < f.k; ++idx[slot]) rec(slot + 1);
    idx[slot] = 0;
  };
  rec(0);
  return acc;
}

} // namespace oracles
