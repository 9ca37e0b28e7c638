#include <doctest.h>

#include "mtclust/rng.hpp"
#include "mtclust/smallopt.hpp"

using namespace mtclust;

TEST_CASE("solve_lp on known programs") {
  SUBCASE("simplex vertex") {
    // min -x0 - 2 x1 s.t. x0 + x1 <= 1, x >= 0  ->  (0, 1), value -2.
    Matrix a_le(1, 2);
    a_le << 1.0, 1.0;
    Vector b_le(1);
    b_le << 1.0;
    Vector c(2);
    c << -1.0, -2.0;
    const LpResult r =
        solve_lp(Matrix(0, 2), Vector(0), a_le, b_le, c);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(-2.0));
    CHECK(r.x(0) == doctest::Approx(0.0));
    CHECK(r.x(1) == doctest::Approx(1.0));
  }
  SUBCASE("equality plus inequality") {
    // min x0 + x1 s.t. x0 + x1 + x2 = 1, x0 >= 0.25 (as -x0 <= -0.25).
    Matrix a_eq(1, 3);
    a_eq << 1.0, 1.0, 1.0;
    Vector b_eq(1);
    b_eq << 1.0;
    Matrix a_le(1, 3);
    a_le << -1.0, 0.0, 0.0;
    Vector b_le(1);
    b_le << -0.25;
    Vector c(3);
    c << 1.0, 1.0, 0.0;
    const LpResult r = solve_lp(a_eq, b_eq, a_le, b_le, c);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(0.25));
    CHECK(r.x(0) == doctest::Approx(0.25));
  }
  SUBCASE("infeasible") {
    Matrix a_eq(1, 1);
    a_eq << 1.0;
    Vector b_eq(1);
    b_eq << -1.0;  // x = -1 impossible with x >= 0
    const LpResult r =
        solve_lp(a_eq, b_eq, Matrix(0, 1), Vector(0), Vector::Ones(1));
    CHECK(r.status == LpStatus::Infeasible);
  }
  SUBCASE("max over a cutting-plane model") {
    // min z s.t. z >= 0.5 - mu, z >= mu, mu in [0,1]: optimum mu = 0.25.
    Matrix a_eq(0, 3);
    Matrix a_le(3, 3);
    Vector b_le(3);
    //  0.5 - mu <= z  ->  -mu - z+ + z- <= -0.5    (z split as z+ - z-)
    a_le.row(0) << -1.0, -1.0, 1.0;
    b_le(0) = -0.5;
    a_le.row(1) << 1.0, -1.0, 1.0;
    b_le(1) = 0.0;
    a_le.row(2) << 1.0, 0.0, 0.0;  // mu <= 1
    b_le(2) = 1.0;
    Vector c(3);
    c << 0.0, 1.0, -1.0;
    const LpResult r = solve_lp(a_eq, Vector(0), a_le, b_le, c);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(0.25));
    CHECK(r.x(0) == doctest::Approx(0.25));
  }
}

TEST_CASE("project_active_set projects onto constrained sets") {
  SUBCASE("probability simplex") {
    // Project (2, 0, 0) onto the 3-simplex: (1, 0, 0).
    Vector r(3);
    r << 2.0, 0.0, 0.0;
    Matrix a_eq(1, 3);
    a_eq << 1.0, 1.0, 1.0;
    Vector b_eq(1);
    b_eq << 1.0;
    Matrix a_in = -Matrix::Identity(3, 3);
    Vector b_in = Vector::Zero(3);
    Vector x0 = Vector::Constant(3, 1.0 / 3.0);
    const auto x = project_active_set(r, a_eq, b_eq, a_in, b_in, x0);
    REQUIRE(x.has_value());
    CHECK((*x)(0) == doctest::Approx(1.0));
    CHECK((*x)(1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK((*x)(2) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("simplex interior point is its own projection") {
    Vector r(3);
    r << 0.2, 0.3, 0.5;
    Matrix a_eq(1, 3);
    a_eq << 1.0, 1.0, 1.0;
    Vector b_eq(1);
    b_eq << 1.0;
    Matrix a_in = -Matrix::Identity(3, 3);
    Vector b_in = Vector::Zero(3);
    Vector x0 = Vector::Constant(3, 1.0 / 3.0);
    const auto x = project_active_set(r, a_eq, b_eq, a_in, b_in, x0);
    REQUIRE(x.has_value());
    CHECK((*x - r).norm() <= 1e-9);
  }
  SUBCASE("halfspace cut") {
    // Project (1, 1) onto {x0 + x1 <= 1}: (0.5, 0.5).
    Vector r(2);
    r << 1.0, 1.0;
    Matrix a_in(1, 2);
    a_in << 1.0, 1.0;
    Vector b_in(1);
    b_in << 1.0;
    Vector x0 = Vector::Zero(2);
    const auto x = project_active_set(r, Matrix(0, 2), Vector(0), a_in, b_in,
                                      x0);
    REQUIRE(x.has_value());
    CHECK((*x)(0) == doctest::Approx(0.5));
    CHECK((*x)(1) == doctest::Approx(0.5));
  }
  SUBCASE("random projections satisfy optimality against a grid") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 4;
      Vector r(n);
      for (int i = 0; i < n; ++i) r(i) = rng.normal();
      Matrix a_eq(1, n);
      a_eq.setOnes();
      Vector b_eq = Vector::Ones(1);
      Matrix a_in = -Matrix::Identity(n, n);
      Vector b_in = Vector::Zero(n);
      Vector x0 = Vector::Constant(n, 0.25);
      const auto x = project_active_set(r, a_eq, b_eq, a_in, b_in, x0);
      REQUIRE(x.has_value());
      // Feasibility.
      CHECK(std::abs(x->sum() - 1.0) <= 1e-9);
      CHECK(x->minCoeff() >= -1e-9);
      // No feasible random perturbation improves the distance.
      const double best = (*x - r).squaredNorm();
      for (int probe = 0; probe < 50; ++probe) {
        Vector y(n);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
          y(i) = rng.uniform01();
          s += y(i);
        }
        y /= s;
        CHECK((y - r).squaredNorm() >= best - 1e-9);
      }
    }
  }
}
