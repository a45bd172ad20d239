#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "hcm/algebra.hpp"

namespace hcm {

/// Seeded source of all randomness. The Gaussian transform is hand-rolled
/// Box-Muller on raw engine output so that identical seeds give identical
/// streams on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  double uniform() { // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) { // inclusive bounds
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Standard complex normal: variance 1 overall.
  Complex cgauss() {
    const double re = gauss(), im = gauss();
    return Complex(re, im) / std::sqrt(2.0);
  }

  Matrix gaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cgauss();
    return m;
  }

  AlgebraElement element(const AlgebraShape& s) {
    std::vector<Matrix> b;
    b.reserve(s.blocks());
    for (int d : s.block_dims) b.push_back(gaussian_matrix(d, d));
    return AlgebraElement(s, std::move(b));
  }

  AlgebraElement hermitian(const AlgebraShape& s) { return hermitian_part(element(s)); }

  AlgebraElement positive(const AlgebraShape& s) {
    AlgebraElement c = element(s);
    return c.adjoint() * c;
  }

  /// Haar-ish unitary per block via QR with phase fix.
  AlgebraElement unitary(const AlgebraShape& s) {
    AlgebraElement u = AlgebraElement::zero(s);
    for (int b = 0; b < s.blocks(); ++b) {
      const int d = s.block_dims[b];
      Matrix g = gaussian_matrix(d, d);
      Eigen::HouseholderQR<Matrix> qr(g);
      Matrix q = qr.householderQ();
      Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (int j = 0; j < d; ++j) {
        Complex rjj = r(j, j);
        Complex phase = (std::abs(rjj) > 0) ? rjj / std::abs(rjj) : Complex(1, 0);
        q.col(j) *= phase;
      }
      u.blocks[b] = q;
    }
    return u;
  }

  /// Invertible element: unitary times a well-separated positive diagonal.
  AlgebraElement invertible(const AlgebraShape& s) {
    AlgebraElement u = unitary(s);
    for (int b = 0; b < s.blocks(); ++b) {
      const int d = s.block_dims[b];
      Eigen::VectorXd diag(d);
      for (int j = 0; j < d; ++j) diag(j) = uniform(0.4, 2.5);
      u.blocks[b] = u.blocks[b] * diag.asDiagonal();
    }
    return u;
  }

  State state(const AlgebraShape& s) {
    std::vector<Matrix> dens;
    std::vector<double> w;
    double total = 0;
    for (int b = 0; b < s.blocks(); ++b) {
      const int d = s.block_dims[b];
      Matrix g = gaussian_matrix(d, d);
      Matrix rho = g * g.adjoint();
      rho /= rho.trace().real();
      dens.push_back(rho);
      const double wb = uniform() + 1e-3;
      w.push_back(wb);
      total += wb;
    }
    for (auto& wb : w) wb /= total;
    return State(s, std::move(dens), std::move(w));
  }

  /// Sub-generator with a decorrelated seed, for per-trial streams.
  Rng fork(std::uint64_t salt) {
    std::uint64_t x = eng_() ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27; x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return Rng(x);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

} // namespace hcm
