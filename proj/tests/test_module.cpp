#include <catch2/catch_amalgamated.hpp>

#include "hcm/module.hpp"
#include "hcm/suites.hpp"
#include "oracles.hpp"

using namespace hcm;

namespace {

ModuleVector example_X() {
  AlgebraShape s{2};
  return ModuleVector(s, {AlgebraElement::identity(s)});
}

ModuleVector example_Y() {
  AlgebraShape s{2};
  AlgebraElement y = AlgebraElement::zero(s);
  y.blocks[0](0, 0) = 1.0;
  return ModuleVector(s, {y});
}

} // namespace

TEST_CASE("inner product") {
  AlgebraShape s{2};
  Rng rng(31);

  CHECK(inner_product(random_vector(rng, s, 2), ModuleVector::zero(s, 2)).norm() == 0.0);
  CHECK(approx_equal(inner_product(example_X(), example_Y()), example_Y().entries[0], 1e-15));

  SECTION("module axioms on random data") {
    for (int i = 0; i < 30; ++i) {
      ModuleVector x = random_vector(rng, s, 2), y = random_vector(rng, s, 2),
                   z = random_vector(rng, s, 2);
      AlgebraElement a = rng.element(s);
      Complex alpha = rng.cgauss(), beta = rng.cgauss();
      // (C1) positivity and definiteness
      CHECK(is_positive(inner_product(x, x)));
      // (C2) linearity in the second slot
      CHECK(distance(inner_product(x, alpha * y + beta * z),
                     alpha * inner_product(x, y) + beta * inner_product(x, z)) < 1e-12 * 50);
      // (C3) right action compatibility
      CHECK(distance(inner_product(x, y * a), inner_product(x, y) * a) < 1e-12 * 50);
      // (C4) adjoint symmetry
      CHECK(distance(inner_product(x, y), inner_product(y, x).adjoint()) < 1e-13 * 10);
    }
    CHECK(inner_product(ModuleVector::zero(s, 2), ModuleVector::zero(s, 2)).norm() == 0.0);
  }

  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(inner_product(random_vector(rng, s, 1), random_vector(rng, s, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("modulus and norm") {
  AlgebraShape s{2};
  Rng rng(37);

  CHECK(modulus(ModuleVector::zero(s, 1)).norm() == 0.0);

  AlgebraElement d = AlgebraElement::zero(s);
  d.blocks[0](0, 0) = 2.0;
  d.blocks[0](1, 1) = 3.0;
  ModuleVector vd(s, {d});
  CHECK(approx_equal(modulus(vd), d, 1e-12)); // positive element is its own modulus

  CHECK(vector_norm(ModuleVector::zero(s, 3)) == 0.0);
  CHECK(vector_norm(example_X()) == Catch::Approx(1.0));

  for (int i = 0; i < 20; ++i) {
    ModuleVector x = random_vector(rng, s, 2);
    AlgebraElement m = modulus(x);
    CHECK(distance(m * m, inner_product(x, x)) <= 1e-8 * (1.0 + vector_norm(x)));
    CHECK(std::abs(vector_norm(x) - m.norm()) < 1e-10 * (1.0 + m.norm()));
  }
}

TEST_CASE("right action") {
  AlgebraShape s{2};
  Rng rng(41);

  ModuleVector x = random_vector(rng, s, 2);
  CHECK(approx_equal(x * AlgebraElement::identity(s), x, 1e-15));
  CHECK(approx_equal(example_X() * (-example_Y().entries[0]), -example_Y(), 1e-15));

  for (int i = 0; i < 20; ++i) {
    ModuleVector y = random_vector(rng, s, 2);
    AlgebraElement a = rng.element(s);
    CHECK(distance(inner_product(x, y * a), inner_product(x, y) * a) < 1e-11);
    // scalar compatibility (alpha x) a = x (alpha a) = alpha (x a)
    Complex alpha = rng.cgauss();
    CHECK(distance((alpha * x) * a, x * (alpha * a)) < 1e-12 * 20);
    // submultiplicativity
    CHECK(vector_norm(x * a) <= vector_norm(x) * a.norm() + 1e-10);
  }
}

TEST_CASE("theta map") {
  AlgebraShape s{2};
  Rng rng(43);
  ModuleVector x = random_vector(rng, s, 2), y = random_vector(rng, s, 2);

  CHECK(vector_norm(theta_map(x, y, ModuleVector::zero(s, 2))) == 0.0);

  AlgebraShape s1{1};
  ModuleVector one(s1, {AlgebraElement::identity(s1)});
  CHECK(approx_equal(theta_map(one, one, one), one, 1e-15));

  for (int i = 0; i < 10; ++i) {
    ModuleVector z = random_vector(rng, s, 2);
    // componentwise brute force: x_i <y,z>
    AlgebraElement g = inner_product(y, z);
    ModuleVector expect = x;
    for (auto& e : expect.entries) e = oracles::naive_block_product(e, g);
    CHECK(distance(theta_map(x, y, z), expect) < 1e-11);
  }
}

TEST_CASE("Pythagorean expansion for orthogonal pairs") {
  AlgebraShape s{2};
  Rng rng(47);
  Config cfg;
  int done = 0;
  for (int i = 0; i < 40 && done < 20; ++i) {
    auto pair = detail::random_orthogonal_pair(rng, s, 2, cfg);
    if (!pair) continue;
    ++done;
    auto& [x, y] = *pair;
    AlgebraElement a = rng.element(s);
    ModuleVector xa = x * a;
    AlgebraElement lhs = inner_product(xa + y, xa + y);
    AlgebraElement rhs = inner_product(xa, xa) + inner_product(y, y);
    CHECK(distance(lhs, rhs) <= cfg.tol.eq_tol * (1.0 + lhs.norm() + rhs.norm()) * 10);
  }
  REQUIRE(done >= 20);
}

TEST_CASE("module maps") {
  AlgebraShape s{2};
  Rng rng(53);

  SECTION("A-module maps commute with the action") {
    for (int i = 0; i < 10; ++i) {
      std::vector<AlgebraElement> coeffs;
      for (int j = 0; j < 4; ++j) coeffs.push_back(rng.element(s));
      AModuleMap t(s, 2, 2, coeffs);
      ModuleVector x = random_vector(rng, s, 2), y = random_vector(rng, s, 2);
      AlgebraElement a = rng.element(s);
      Complex alpha = rng.cgauss();
      CHECK(distance(t(x * a), t(x) * a) < 1e-11);
      CHECK(distance(t(alpha * x + y), alpha * t(x) + t(y)) < 1e-11);
    }
  }

  SECTION("dense linear maps are additive but generically not A-linear") {
    CLinearMap t(s, 2, 2, rng.gaussian_matrix(8, 8));
    ModuleVector x = random_vector(rng, s, 2), y = random_vector(rng, s, 2);
    Complex alpha = rng.cgauss();
    CHECK(distance(t(alpha * x + y), alpha * t(x) + t(y)) < 1e-11);
    AlgebraElement a = rng.element(s);
    CHECK(distance(t(x * a), t(x) * a) > 1e-3); // almost surely
  }

  SECTION("flatten round trip") {
    ModuleVector x = random_vector(rng, AlgebraShape{2, 3}, 2);
    CHECK(distance(unflatten(x.shape, x.k, flatten(x)), x) == 0.0);
  }

  SECTION("dense realization agrees with the module map") {
    AModuleMap t = AModuleMap::scaled_isometry(rng, s, 2, 1.5);
    CLinearMap d = CLinearMap::from_module_map(t);
    for (int i = 0; i < 5; ++i) {
      ModuleVector x = random_vector(rng, s, 2);
      CHECK(distance(t(x), d(x)) < 1e-11);
    }
  }
}

TEST_CASE("polarization gram") {
  AlgebraShape s{2};
  Rng rng(59);

  SECTION("identity map recovers the inner product") {
    ModuleVector x = random_vector(rng, s, 2), y = random_vector(rng, s, 2);
    auto id = [](const ModuleVector& v) { return v; };
    CHECK(distance(polarization_gram(id, x, y), inner_product(x, y)) <
          1e-10 * (1.0 + vector_norm(x) * vector_norm(y)));
  }

  SECTION("gamma-scaled A-linear isometry gives gamma^2 <x,y>") {
    AModuleMap t = AModuleMap::scaled_isometry(rng, s, 2, 2.0);
    for (int i = 0; i < 10; ++i) {
      ModuleVector x = random_vector(rng, s, 2), y = random_vector(rng, s, 2);
      CHECK(distance(polarization_gram(t, x, y), 4.0 * inner_product(x, y)) <
            1e-9 * (1.0 + vector_norm(x) * vector_norm(y)));
    }
  }

  SECTION("any complex-linear map matches the direct inner product") {
    for (int i = 0; i < 10; ++i) {
      CLinearMap t(s, 2, 2, rng.gaussian_matrix(8, 8));
      ModuleVector x = random_vector(rng, s, 2), y = random_vector(rng, s, 2);
      AlgebraElement direct = inner_product(t(x), t(y));
      CHECK(distance(polarization_gram(t, x, y), direct) <
            1e-9 * (1.0 + direct.norm()));
    }
  }

  SECTION("sesquilinear in its slots") {
    CLinearMap t(s, 2, 2, rng.gaussian_matrix(8, 8));
    ModuleVector x = random_vector(rng, s, 2), y = random_vector(rng, s, 2),
                 z = random_vector(rng, s, 2);
    Complex alpha = rng.cgauss();
    AlgebraElement lhs = polarization_gram(t, alpha * x + z, y);
    AlgebraElement rhs = std::conj(alpha) * polarization_gram(t, x, y) +
                         polarization_gram(t, z, y);
    CHECK(distance(lhs, rhs) < 1e-9 * (1.0 + lhs.norm()));
    lhs = polarization_gram(t, x, alpha * y + z);
    rhs = alpha * polarization_gram(t, x, y) + polarization_gram(t, x, z);
    CHECK(distance(lhs, rhs) < 1e-9 * (1.0 + lhs.norm()));
  }
}
