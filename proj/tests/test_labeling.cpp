#include <doctest.h>

#include <cmath>

#include "mtclust/labeling.hpp"
#include "mtclust/labels.hpp"
#include "mtclust/rng.hpp"

using namespace mtclust;

TEST_CASE("derive_count_bounds translates the slack inequalities") {
  SUBCASE("n=10, C=2, l=0.2") {
    const CountBounds b = derive_count_bounds(10, 2, {0.2, 0.2});
    CHECK(b.lower == std::vector<int>{4, 4});
    CHECK(b.upper == std::vector<int>{6, 6});
  }
  SUBCASE("n=10, C=2, l=0 pins the counts") {
    const CountBounds b = derive_count_bounds(10, 2, {0.0, 0.0});
    CHECK(b.lower == std::vector<int>{5, 5});
    CHECK(b.upper == std::vector<int>{5, 5});
  }
  SUBCASE("n=10, C=3, l=0 is infeasible and suggests a slack") {
    try {
      derive_count_bounds(10, 3, {0.0, 0.0, 0.0});
      FAIL("expected BalanceInfeasibleError");
    } catch (const BalanceInfeasibleError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("minimal feasible") != std::string::npos);
    }
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(derive_count_bounds(1, 2, {0.0, 0.0}), ArgumentError);
    CHECK_THROWS_AS(derive_count_bounds(10, 2, {1.5, 0.0}), ArgumentError);
  }
}

TEST_CASE("minimal_feasible_slack repairs infeasible combinations") {
  const double l = minimal_feasible_slack(10, 3);
  CHECK(l > 0.0);
  std::vector<double> lv(3, l);
  CHECK_NOTHROW(derive_count_bounds(10, 3, lv));
}

TEST_CASE("is_member checks codes and counts") {
  const CountBounds b = derive_count_bounds(2, 2, {0.0, 0.0});
  IndicatorMatrix y;
  y.task_id = 0;
  y.values.resize(2, 2);
  y.values.row(0) = encode_label(0, 2).transpose();
  y.values.row(1) = encode_label(1, 2).transpose();
  CHECK(is_member(y, b));

  y.values.row(1) = encode_label(0, 2).transpose();
  CHECK_FALSE(is_member(y, b));

  y.values.row(1) << 0.5, 0.5;
  CHECK_FALSE(is_member(y, b));
}

TEST_CASE("most_violated solves the documented instances") {
  SUBCASE("balanced 2x2 picks the cheap crossing") {
    Matrix alpha(2, 2);
    alpha << 0.9, 0.1, 0.2, 0.8;
    const CountBounds b = derive_count_bounds(2, 2, {0.0, 0.0});
    const IndicatorMatrix y = most_violated(alpha, b);
    CHECK(indicator_to_assignment(y.values) == std::vector<int>{1, 0});
    CHECK(is_member(y, b));
  }
  SUBCASE("all-zero duals take the lexicographically smallest assignment") {
    const Matrix alpha = Matrix::Zero(2, 2);
    const CountBounds b = derive_count_bounds(2, 2, {0.0, 0.0});
    const IndicatorMatrix y = most_violated(alpha, b);
    CHECK(indicator_to_assignment(y.values) == std::vector<int>{0, 1});
  }
  SUBCASE("slack bounds decouple the rows") {
    Matrix alpha(3, 3);
    alpha << 0.3, 0.1, 0.9, 0.05, 0.5, 0.2, 0.7, 0.6, 0.4;
    const CountBounds b = derive_count_bounds(3, 3, {1.0, 1.0, 1.0});
    const IndicatorMatrix y = most_violated(alpha, b);
    CHECK(indicator_to_assignment(y.values) == std::vector<int>{1, 0, 2});
  }
}

TEST_CASE("most_violated agrees with the enumeration oracle") {
  Rng rng(41);
  const std::vector<double> slacks{0.0, 0.2, 1.0};
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int C = 2 + static_cast<int>(rng.below(2));
    const int n = C + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                          9 - C)));
    const double l = slacks[trial % slacks.size()];
    CountBounds b;
    try {
      b = derive_count_bounds(n, C, std::vector<double>(
                                        static_cast<std::size_t>(C), l));
    } catch (const BalanceInfeasibleError&) {
      continue;
    }
    Matrix alpha(n, C);
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
      alpha(i % n, i / n) = rng.normal();

    const IndicatorMatrix fast = most_violated(alpha, b);
    const IndicatorMatrix slow = most_violated_oracle(alpha, b);
    CHECK(constraint_value(alpha, fast) == constraint_value(alpha, slow));
    CHECK((fast.values - slow.values).cwiseAbs().maxCoeff() == 0.0);
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("most_violated assignment is invariant to positive scaling") {
  Rng rng(43);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(5));
    Matrix alpha(n, 2);
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
      alpha(i % n, i / n) = rng.normal();
    const CountBounds b = derive_count_bounds(n, 2, {0.5, 0.5});
    const IndicatorMatrix a = most_violated(alpha, b);
    const IndicatorMatrix s = most_violated(Matrix(3.7 * alpha), b);
    CHECK((a.values - s.values).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("oracle guard rejects large instances") {
  const Matrix alpha = Matrix::Zero(11, 2);
  const CountBounds b = derive_count_bounds(11, 2, {1.0, 1.0});
  CHECK_THROWS_AS(most_violated_oracle(alpha, b), ArgumentError);
}

TEST_CASE("constraint pool deduplicates and tracks weights") {
  const CountBounds b = derive_count_bounds(2, 2, {0.0, 0.0});
  ConstraintPool pool(0, b);

  IndicatorMatrix y01;
  y01.task_id = 0;
  y01.values = assignment_to_indicator({0, 1}, 2);
  IndicatorMatrix y10;
  y10.task_id = 0;
  y10.values = assignment_to_indicator({1, 0}, 2);

  CHECK(pool.add(y01));
  pool.reset_weights_uniform();
  CHECK(pool.size() == 1);
  CHECK(pool.weights() == std::vector<double>{1.0});

  CHECK_FALSE(pool.add(y01));
  CHECK(pool.size() == 1);

  CHECK(pool.add(y10));
  CHECK(pool.size() == 2);
  pool.reset_weights_uniform();
  CHECK(pool.weights() == std::vector<double>{0.5, 0.5});

  IndicatorMatrix bad;
  bad.task_id = 0;
  bad.values = assignment_to_indicator({0, 0}, 2);
  CHECK_THROWS_AS(pool.add(bad), ArgumentError);
}

TEST_CASE("fractional labels combine the pool") {
  const CountBounds b = derive_count_bounds(2, 2, {0.0, 0.0});
  ConstraintPool pool(0, b);
  IndicatorMatrix y01, y10;
  y01.values = assignment_to_indicator({0, 1}, 2);
  y10.values = assignment_to_indicator({1, 0}, 2);
  pool.add(y01);
  pool.add(y10);

  pool.set_weights({0.5, 0.5});
  Matrix mid = pool.fractional_labels().values;
  CHECK(mid.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  pool.set_weights({0.25, 0.75});
  Matrix f = pool.fractional_labels().values;
  CHECK(f(0, 0) == doctest::Approx(-0.5));
  CHECK(f(0, 1) == doctest::Approx(0.5));
  CHECK(f(1, 0) == doctest::Approx(0.5));
  CHECK(f(1, 1) == doctest::Approx(-0.5));

  // Rows of any convex combination sum to zero and stay inside the box.
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const double w = rng.uniform01();
    pool.set_weights({w, 1.0 - w});
    const Matrix v = pool.fractional_labels().values;
    for (Eigen::Index j = 0; j < v.rows(); ++j) {
      CHECK(std::abs(v.row(j).sum()) <= 1e-9);
      CHECK(v.row(j).minCoeff() >= -1.0 - 1e-12);
      CHECK(v.row(j).maxCoeff() <= 1.0 + 1e-12);
    }
  }

  ConstraintPool empty(1, b);
  CHECK_THROWS_AS(empty.fractional_labels(), StateError);
}
