#pragma once

#include "hcm/algebra.hpp"
#include "hcm/random.hpp"

namespace hcm {

/// Element of the standard Hilbert A-module A^k: a k-tuple of algebra
/// elements with inner product <x,y> = sum_i x_i^* y_i.
struct ModuleVector {
  AlgebraShape shape;
  int k = 0;
  std::vector<AlgebraElement> entries;

  ModuleVector() = default;
  ModuleVector(AlgebraShape s, std::vector<AlgebraElement> e)
      : shape(std::move(s)), k(static_cast<int>(e.size())), entries(std::move(e)) {
    if (k < 1) throw std::invalid_argument("ModuleVector: k must be >= 1");
    for (const auto& a : entries)
      if (a.shape != shape) throw std::invalid_argument("ModuleVector: entry shape mismatch");
  }

  static ModuleVector zero(const AlgebraShape& s, int k) {
    std::vector<AlgebraElement> e(k, AlgebraElement::zero(s));
    return ModuleVector(s, std::move(e));
  }

  void require_compatible(const ModuleVector& o) const {
    if (shape != o.shape || k != o.k)
      throw std::invalid_argument("module dimension mismatch");
  }

  ModuleVector& operator+=(const ModuleVector& o) {
    require_compatible(o);
    for (int i = 0; i < k; ++i) entries[i] += o.entries[i];
    return *this;
  }
  ModuleVector& operator-=(const ModuleVector& o) {
    require_compatible(o);
    for (int i = 0; i < k; ++i) entries[i] -= o.entries[i];
    return *this;
  }
  ModuleVector& operator*=(Complex v) {
    for (auto& a : entries) a *= v;
    return *this;
  }
};

inline ModuleVector operator+(ModuleVector x, const ModuleVector& y) { return x += y; }
inline ModuleVector operator-(ModuleVector x, const ModuleVector& y) { return x -= y; }
inline ModuleVector operator*(ModuleVector x, Complex v) { return x *= v; }
inline ModuleVector operator*(Complex v, ModuleVector x) { return x *= v; }
inline ModuleVector operator-(ModuleVector x) { return x *= Complex(-1, 0); }

inline AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y) {
  x.require_compatible(y);
  AlgebraElement g = AlgebraElement::zero(x.shape);
  for (int i = 0; i < x.k; ++i) g += x.entries[i].adjoint() * y.entries[i];
  return g;
}

/// Entrywise right action x . a.
inline ModuleVector right_action(const ModuleVector& x, const AlgebraElement& a) {
  if (x.shape != a.shape) throw std::invalid_argument("right_action: shape mismatch");
  ModuleVector r = x;
  for (auto& e : r.entries) e = e * a;
  return r;
}

inline ModuleVector operator*(const ModuleVector& x, const AlgebraElement& a) {
  return right_action(x, a);
}

/// |x| = unique positive square root of <x,x>.
inline AlgebraElement modulus(const ModuleVector& x, double psd_tol = 1e-9) {
  return sqrt_positive(inner_product(x, x), psd_tol);
}

inline double vector_norm(const ModuleVector& x) {
  return std::sqrt(inner_product(x, x).norm());
}

/// theta_{x,y}(z) = x <y,z>.
inline ModuleVector theta_map(const ModuleVector& x, const ModuleVector& y,
                              const ModuleVector& z) {
  return right_action(x, inner_product(y, z));
}

inline double distance(const ModuleVector& x, const ModuleVector& y) {
  return vector_norm(x - y);
}

inline bool approx_equal(const ModuleVector& x, const ModuleVector& y, double tol) {
  return distance(x, y) <= tol * (1.0 + vector_norm(x) + vector_norm(y));
}

namespace detail {

/// Modulus without the positivity gate: symmetrize and clamp. Used inside
/// optimizer objectives and hypothesis probes where <v,v> carries harmless
/// eigenvalue noise.
inline AlgebraElement modulus_clamped(const ModuleVector& v) {
  AlgebraElement g = inner_product(v, v);
  for (auto& m : g.blocks) {
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }
  return g;
}

} // namespace detail

inline ModuleVector random_vector(Rng& rng, const AlgebraShape& s, int k) {
  std::vector<AlgebraElement> e;
  e.reserve(k);
  for (int i = 0; i < k; ++i) e.push_back(rng.element(s));
  return ModuleVector(s, std::move(e));
}

/// A-linear map given by an m x k array of coefficients acting by left
/// multiplication: (Tx)_p = sum_i c_{p,i} x_i. Commutes with the right
/// action by construction.
struct AModuleMap {
  AlgebraShape shape;
  int rows = 0, cols = 0;
  std::vector<AlgebraElement> coeffs; // row-major, rows*cols entries

  AModuleMap() = default;
  AModuleMap(AlgebraShape s, int m, int k, std::vector<AlgebraElement> c)
      : shape(std::move(s)), rows(m), cols(k), coeffs(std::move(c)) {
    if (rows < 1 || cols < 1 || static_cast<int>(coeffs.size()) != rows * cols)
      throw std::invalid_argument("AModuleMap: bad coefficient array");
  }

  const AlgebraElement& at(int p, int i) const { return coeffs[p * cols + i]; }

  static AModuleMap identity(const AlgebraShape& s, int k) {
    std::vector<AlgebraElement> c(k * k, AlgebraElement::zero(s));
    for (int i = 0; i < k; ++i) c[i * k + i] = AlgebraElement::identity(s);
    return AModuleMap(s, k, k, std::move(c));
  }

  /// gamma * (scalar unitary Q on coordinates) * (left multiplication by a
  /// single algebra unitary u): an A-linear scaled isometry.
  static AModuleMap scaled_isometry(Rng& rng, const AlgebraShape& s, int k, double gamma) {
    Matrix g = rng.gaussian_matrix(k, k);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    AlgebraElement u = rng.unitary(s);
    std::vector<AlgebraElement> c;
    c.reserve(k * k);
    for (int p = 0; p < k; ++p)
      for (int i = 0; i < k; ++i) c.push_back((gamma * q(p, i)) * u);
    return AModuleMap(s, k, k, std::move(c));
  }

  ModuleVector apply(const ModuleVector& x) const {
    if (x.shape != shape || x.k != cols)
      throw std::invalid_argument("AModuleMap: dimension mismatch");
    std::vector<AlgebraElement> out(rows, AlgebraElement::zero(shape));
    for (int p = 0; p < rows; ++p)
      for (int i = 0; i < cols; ++i) out[p] += at(p, i) * x.entries[i];
    return ModuleVector(shape, std::move(out));
  }

  ModuleVector operator()(const ModuleVector& x) const { return apply(x); }
};

/// Flattened complex coordinates of A^k: entries in order, each block
/// row-major. Total length k * coord_dim(shape).
inline Eigen::VectorXcd flatten(const ModuleVector& x) {
  Eigen::VectorXcd v(x.k * x.shape.coord_dim());
  int at = 0;
  for (const auto& e : x.entries)
    for (const auto& m : e.blocks)
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) v(at++) = m(r, c);
  return v;
}

inline ModuleVector unflatten(const AlgebraShape& s, int k, const Eigen::VectorXcd& v) {
  if (v.size() != static_cast<long>(k) * s.coord_dim())
    throw std::invalid_argument("unflatten: length mismatch");
  std::vector<AlgebraElement> entries;
  entries.reserve(k);
  int at = 0;
  for (int i = 0; i < k; ++i) {
    AlgebraElement e = AlgebraElement::zero(s);
    for (auto& m : e.blocks)
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) m(r, c) = v(at++);
    entries.push_back(std::move(e));
  }
  return ModuleVector(s, std::move(entries));
}

/// Merely complex-linear map on the flattened coordinates. Additive and
/// C-homogeneous by construction; not required to commute with the right
/// A-action (that is a measurable property, not a type guarantee).
struct CLinearMap {
  AlgebraShape shape;
  int in_k = 0, out_k = 0;
  Matrix dense;

  CLinearMap() = default;
  CLinearMap(AlgebraShape s, int kin, int kout, Matrix d)
      : shape(std::move(s)), in_k(kin), out_k(kout), dense(std::move(d)) {
    const int cd = shape.coord_dim();
    if (dense.rows() != static_cast<long>(kout) * cd ||
        dense.cols() != static_cast<long>(kin) * cd)
      throw std::invalid_argument("CLinearMap: dense matrix size mismatch");
  }

  static CLinearMap identity(const AlgebraShape& s, int k) {
    const int n = k * s.coord_dim();
    return CLinearMap(s, k, k, Matrix::Identity(n, n));
  }

  /// Dense realization of an A-linear map (forgetting its module structure).
  static CLinearMap from_module_map(const AModuleMap& t) {
    const int cd = t.shape.coord_dim();
    Matrix d = Matrix::Zero(static_cast<long>(t.rows) * cd, static_cast<long>(t.cols) * cd);
    for (int i = 0; i < t.cols; ++i) {
      for (int c = 0; c < cd; ++c) {
        Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(static_cast<long>(t.cols) * cd);
        basis(static_cast<long>(i) * cd + c) = 1.0;
        ModuleVector e = unflatten(t.shape, t.cols, basis);
        d.col(static_cast<long>(i) * cd + c) = flatten(t.apply(e));
      }
    }
    return CLinearMap(t.shape, t.cols, t.rows, std::move(d));
  }

  ModuleVector apply(const ModuleVector& x) const {
    if (x.shape != shape || x.k != in_k)
      throw std::invalid_argument("CLinearMap: dimension mismatch");
    return unflatten(shape, out_k, dense * flatten(x));
  }

  ModuleVector operator()(const ModuleVector& x) const { return apply(x); }
};

/// <Tx,Ty> recovered through the four-term polarization chain: T is applied
/// to the combined arguments y+x, y-x, iy+x, iy-x and only squared moduli of
/// single image vectors enter (never the inner product of Tx with Ty
/// directly). Agrees with <Tx,Ty> exactly when T is additive and
/// C-homogeneous.
template <typename MapFn>
AlgebraElement polarization_gram(MapFn&& t, const ModuleVector& x, const ModuleVector& y) {
  const Complex i(0, 1);
  auto sq = [&](const ModuleVector& v) {
    ModuleVector tv = t(v);
    return inner_product(tv, tv);
  };
  AlgebraElement p1 = sq(y + x);
  AlgebraElement p2 = sq(y - x);
  AlgebraElement p3 = sq(i * y + x);
  AlgebraElement p4 = sq(i * y - x);
  return 0.25 * (p1 - p2 - i * p3 + i * p4);
}

} // namespace hcm
