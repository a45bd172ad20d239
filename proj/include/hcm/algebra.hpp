#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hcm/config.hpp"

namespace hcm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// A finite-dimensional C*-algebra presented as a direct sum of full
/// complex matrix blocks. The block dimension list is the whole datum.
struct AlgebraShape {
  std::vector<int> block_dims;

  AlgebraShape() = default;
  AlgebraShape(std::initializer_list<int> dims) : block_dims(dims) { check(); }
  explicit AlgebraShape(std::vector<int> dims) : block_dims(std::move(dims)) { check(); }

  void check() const {
    if (block_dims.empty()) throw std::invalid_argument("AlgebraShape: need at least one block");
    for (int d : block_dims)
      if (d < 1) throw std::invalid_argument("AlgebraShape: block dims must be positive");
  }

  int blocks() const { return static_cast<int>(block_dims.size()); }

  bool abelian() const {
    for (int d : block_dims)
      if (d != 1) return false;
    return true;
  }

  /// Complex dimension as a vector space: sum of d_i^2.
  int coord_dim() const {
    int n = 0;
    for (int d : block_dims) n += d * d;
    return n;
  }

  bool operator==(const AlgebraShape&) const = default;
};

namespace detail {

/// Largest eigenvalue of a Hermitian matrix. Closed form for d <= 2,
/// Eigen's direct solver for d == 3, iterative QR beyond.
inline double lambda_max_hermitian(const Matrix& h) {
  const auto d = h.rows();
  if (d == 1) return h(0, 0).real();
  if (d == 2) {
    const double a = h(0, 0).real(), c = h(1, 1).real();
    const double m = 0.5 * (a + c);
    const double r = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(h(0, 1)));
    return m + r;
  }
  if (d == 3) {
    Eigen::Matrix3cd f = h;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es;
    es.computeDirect(f, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(2);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(d - 1);
}

inline double lambda_min_hermitian(const Matrix& h) {
  const auto d = h.rows();
  if (d == 1) return h(0, 0).real();
  if (d == 2) {
    const double a = h(0, 0).real(), c = h(1, 1).real();
    const double m = 0.5 * (a + c);
    const double r = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(h(0, 1)));
    return m - r;
  }
  if (d == 3) {
    Eigen::Matrix3cd f = h;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es;
    es.computeDirect(f, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double sigma_max(const Matrix& m) {
  // Operator norm via an eigensolve of m* m; exact at desk-scale dims.
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Matrix g = m.adjoint() * m;
  return std::sqrt(std::max(0.0, lambda_max_hermitian(g)));
}

inline double sigma_min(const Matrix& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  // SVD, not an eigensolve of m* m: tiny singular values fall below the
  // rounding noise of the squared matrix.
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

} // namespace detail

/// Element of a direct-sum matrix algebra: one complex matrix per block.
struct AlgebraElement {
  AlgebraShape shape;
  std::vector<Matrix> blocks;

  AlgebraElement() = default;

  AlgebraElement(AlgebraShape s, std::vector<Matrix> b)
      : shape(std::move(s)), blocks(std::move(b)) {
    if (static_cast<int>(blocks.size()) != shape.blocks())
      throw std::invalid_argument("AlgebraElement: block count mismatch");
    for (int i = 0; i < shape.blocks(); ++i)
      if (blocks[i].rows() != shape.block_dims[i] || blocks[i].cols() != shape.block_dims[i])
        throw std::invalid_argument("AlgebraElement: block dimension mismatch");
  }

  static AlgebraElement zero(const AlgebraShape& s) {
    std::vector<Matrix> b;
    b.reserve(s.blocks());
    for (int d : s.block_dims) b.push_back(Matrix::Zero(d, d));
    return AlgebraElement(s, std::move(b));
  }

  static AlgebraElement identity(const AlgebraShape& s) {
    std::vector<Matrix> b;
    b.reserve(s.blocks());
    for (int d : s.block_dims) b.push_back(Matrix::Identity(d, d));
    return AlgebraElement(s, std::move(b));
  }

  /// Scalar multiple of the identity.
  static AlgebraElement scalar(const AlgebraShape& s, Complex v) {
    AlgebraElement e = identity(s);
    for (auto& m : e.blocks) m *= v;
    return e;
  }

  AlgebraElement adjoint() const {
    AlgebraElement r = *this;
    for (auto& m : r.blocks) m = m.adjoint().eval();
    return r;
  }

  /// Max over blocks of the operator norm (largest singular value).
  double norm() const {
    double n = 0;
    for (const auto& m : blocks) n = std::max(n, detail::sigma_max(m));
    return n;
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto& m : blocks)
      if (m.cwiseAbs().maxCoeff() > tol) return false;
    return true;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    require_same_shape(o);
    for (int i = 0; i < shape.blocks(); ++i) blocks[i] += o.blocks[i];
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    require_same_shape(o);
    for (int i = 0; i < shape.blocks(); ++i) blocks[i] -= o.blocks[i];
    return *this;
  }
  AlgebraElement& operator*=(Complex v) {
    for (auto& m : blocks) m *= v;
    return *this;
  }

  void require_same_shape(const AlgebraElement& o) const {
    if (shape != o.shape) throw std::invalid_argument("algebra shape mismatch");
  }
};

inline AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
inline AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
inline AlgebraElement operator*(AlgebraElement a, Complex v) { return a *= v; }
inline AlgebraElement operator*(Complex v, AlgebraElement a) { return a *= v; }
inline AlgebraElement operator-(AlgebraElement a) { return a *= Complex(-1.0, 0.0); }

/// Blockwise product.
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_same_shape(b);
  AlgebraElement r = a;
  for (int i = 0; i < a.shape.blocks(); ++i) r.blocks[i] = a.blocks[i] * b.blocks[i];
  return r;
}

inline AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }
inline double alg_norm(const AlgebraElement& a) { return a.norm(); }

inline double distance(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).norm(); }

/// Frobenius norm over all blocks (cheap upper bound on the operator norm).
inline double frobenius(const AlgebraElement& a) {
  double s = 0;
  for (const auto& m : a.blocks) s += m.squaredNorm();
  return std::sqrt(s);
}

/// Equality within tol scaled by magnitudes.
inline bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double tol) {
  return distance(a, b) <= tol * (1.0 + a.norm() + b.norm());
}

inline AlgebraElement hermitian_part(const AlgebraElement& a) {
  AlgebraElement r = a;
  for (auto& m : r.blocks) m = (0.5 * (m + m.adjoint())).eval();
  return r;
}

inline double asymmetry(const AlgebraElement& a) { return (a - a.adjoint()).norm(); }

/// Smallest eigenvalue of the symmetrized element, over all blocks.
inline double lambda_min(const AlgebraElement& a) {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& m : a.blocks) {
    Matrix h = 0.5 * (m + m.adjoint());
    v = std::min(v, detail::lambda_min_hermitian(h));
  }
  return v;
}

inline double lambda_max(const AlgebraElement& a) {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& m : a.blocks) {
    Matrix h = 0.5 * (m + m.adjoint());
    v = std::max(v, detail::lambda_max_hermitian(h));
  }
  return v;
}

/// Positive iff Hermitian within tol and every eigenvalue >= -tol (scaled).
/// Asymmetry beyond the tolerance is a failure, not silently repaired.
inline bool is_positive(const AlgebraElement& a, double tol = 1e-9) {
  const double scale = 1.0 + a.norm();
  if (asymmetry(a) > tol * scale) return false;
  return lambda_min(a) >= -tol * scale;
}

/// Unique positive square root of a positive element.
inline AlgebraElement sqrt_positive(const AlgebraElement& a, double tol = 1e-9) {
  if (!is_positive(a, tol))
    throw std::domain_error("sqrt_positive: input is not positive");
  AlgebraElement r = a;
  for (auto& m : r.blocks) {
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd v = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    m = es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
  }
  return r;
}

struct NotInvertible {
  int block = -1;
  double sigma_min = 0.0;
};

using InverseResult = std::variant<AlgebraElement, NotInvertible>;

/// Blockwise inverse, guarded by a relative smallest-singular-value cutoff.
/// Membership in the invertible group is exactly success of this call.
inline InverseResult try_inverse(const AlgebraElement& a, double sing_tol = 1e-10) {
  const double threshold = sing_tol * std::max(a.norm(), 1e-300);
  for (int i = 0; i < a.shape.blocks(); ++i) {
    const double s = detail::sigma_min(a.blocks[i]);
    if (!(s > threshold)) return NotInvertible{i, s};
  }
  AlgebraElement r = a;
  for (auto& m : r.blocks) m = m.fullPivLu().inverse().eval();
  return r;
}

inline bool is_invertible(const AlgebraElement& a, double sing_tol = 1e-10) {
  return std::holds_alternative<AlgebraElement>(try_inverse(a, sing_tol));
}

/// Blockwise solve A X = B (backward stable, unlike forming the inverse of
/// an ill-conditioned A).
inline AlgebraElement solve(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_same_shape(b);
  AlgebraElement r = b;
  for (int i = 0; i < a.shape.blocks(); ++i)
    r.blocks[i] = a.blocks[i].fullPivLu().solve(b.blocks[i]).eval();
  return r;
}

/// Blockwise Moore-Penrose pseudo-inverse.
inline AlgebraElement pinv(const AlgebraElement& a, double rel_tol = 1e-12) {
  AlgebraElement r = a;
  for (auto& m : r.blocks) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = rel_tol * std::max(1e-300, sv.size() ? sv(0) : 0.0);
    Eigen::VectorXd inv = sv;
    for (int i = 0; i < inv.size(); ++i) inv(i) = sv(i) > cut ? 1.0 / sv(i) : 0.0;
    m = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  }
  return r;
}

inline const AlgebraElement& inverse_or_throw(const InverseResult& r) {
  if (const auto* e = std::get_if<AlgebraElement>(&r)) return *e;
  const auto& ni = std::get<NotInvertible>(r);
  throw std::domain_error("element not invertible (block " + std::to_string(ni.block) +
                          ", sigma_min " + std::to_string(ni.sigma_min) + ")");
}

/// Positive norm-one functional: convex weights over per-block densities.
struct State {
  AlgebraShape shape;
  std::vector<Matrix> densities; // unit trace, PSD
  std::vector<double> weights;   // nonnegative, sum to one

  State() = default;
  State(AlgebraShape s, std::vector<Matrix> d, std::vector<double> w)
      : shape(std::move(s)), densities(std::move(d)), weights(std::move(w)) {
    if (densities.size() != weights.size() ||
        static_cast<int>(densities.size()) != shape.blocks())
      throw std::invalid_argument("State: block count mismatch");
  }

  /// Vector state a |-> <xi, a xi> for a unit vector given by its block
  /// components (not individually normalized).
  static State vector_state(const AlgebraShape& s, const std::vector<Eigen::VectorXcd>& xi) {
    std::vector<Matrix> dens;
    std::vector<double> w;
    double total = 0;
    for (int b = 0; b < s.blocks(); ++b) total += xi[b].squaredNorm();
    if (total <= 0) throw std::invalid_argument("vector_state: zero vector");
    for (int b = 0; b < s.blocks(); ++b) {
      const double nb = xi[b].squaredNorm();
      w.push_back(nb / total);
      if (nb > 0) {
        Eigen::VectorXcd u = xi[b] / std::sqrt(nb);
        dens.push_back(u * u.adjoint());
      } else {
        const int d = s.block_dims[b];
        dens.push_back(Matrix::Identity(d, d) / static_cast<double>(d));
      }
    }
    return State(s, std::move(dens), std::move(w));
  }

  /// Convex combination t*phi + (1-t)*psi.
  static State mix(const State& phi, const State& psi, double t) {
    if (phi.shape != psi.shape) throw std::invalid_argument("State::mix: shape mismatch");
    State r = phi;
    for (int b = 0; b < phi.shape.blocks(); ++b) {
      const double w = t * phi.weights[b] + (1 - t) * psi.weights[b];
      if (w > 0) {
        r.densities[b] = (t * phi.weights[b] * phi.densities[b] +
                          (1 - t) * psi.weights[b] * psi.densities[b]) / w;
      }
      r.weights[b] = w;
    }
    return r;
  }
};

inline Complex apply_state(const State& phi, const AlgebraElement& a) {
  if (phi.shape != a.shape) throw std::invalid_argument("apply_state: shape mismatch");
  Complex v = 0;
  for (int b = 0; b < a.shape.blocks(); ++b)
    v += phi.weights[b] * (phi.densities[b] * a.blocks[b]).trace();
  return v;
}

/// Coordinate-evaluation characters of an abelian shape. On any shape with
/// a matrix block of size >= 2 no multiplicative functional exists, so
/// `characters` returns nothing (a value, not an error).
struct CharacterSet {
  AlgebraShape shape;

  int count() const { return shape.blocks(); }

  Complex eval(int chi, const AlgebraElement& a) const {
    return a.blocks.at(chi)(0, 0);
  }
};

inline std::optional<CharacterSet> characters(const AlgebraShape& shape) {
  if (!shape.abelian()) return std::nullopt;
  return CharacterSet{shape};
}

} // namespace hcm
