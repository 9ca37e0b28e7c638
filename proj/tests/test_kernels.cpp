#include <doctest.h>

#include <cmath>

#include "mtclust/kernels.hpp"
#include "mtclust/objective.hpp"
#include "mtclust/rng.hpp"

using namespace mtclust;

namespace {

TaskDataset from_rows(const std::vector<Matrix>& feats) {
  std::vector<ObservationBlock> blocks;
  for (const auto& f : feats) {
    ObservationBlock b;
    b.features = f;
    blocks.push_back(std::move(b));
  }
  return TaskDataset(std::move(blocks));
}

}  // namespace

TEST_CASE("base_gram entries") {
  Matrix x(3, 2);
  x << 1.0, 0.0, 0.0, 1.0, 1.0, 2.0;
  const Matrix lin = base_gram(x, BaseKernelSpec::linear());
  CHECK(lin(0, 1) == doctest::Approx(0.0));  // orthogonal
  Matrix y(2, 2);
  y << 1.0, 2.0, 3.0, 4.0;
  CHECK(base_gram(y, BaseKernelSpec::linear())(0, 1) ==
        doctest::Approx(11.0));

  const Matrix rbf = base_gram(x, BaseKernelSpec::rbf(0.7));
  for (int i = 0; i < 3; ++i) CHECK(rbf(i, i) == doctest::Approx(1.0));
  const double d2 = 2.0;  // |(1,0)-(0,1)|^2
  CHECK(rbf(0, 1) == doctest::Approx(std::exp(-d2 / (2 * 0.7 * 0.7))));
}

TEST_CASE("default_rbf_width averages pairwise distances") {
  Matrix a(2, 1);
  a << 0.0, 1.0;
  CHECK(default_rbf_width(from_rows({a})) == doctest::Approx(1.0));

  Matrix b(3, 1);
  b << 0.0, 0.0, 3.0;
  CHECK(default_rbf_width(from_rows({b})) == doctest::Approx(2.0));

  Matrix c(1, 1);
  c << 0.0;
  CHECK_THROWS_AS(default_rbf_width(from_rows({c})), ArgumentError);
}

TEST_CASE("factorize_gram recovers structure") {
  SUBCASE("identity stays full rank") {
    const FeatureMap fm = factorize_gram(Matrix::Identity(3, 3), 3);
    CHECK(fm.phi.cols() == 3);
    CHECK((fm.phi * fm.phi.transpose() - Matrix::Identity(3, 3))
              .norm() <= 1e-10);
    CHECK(fm.truncation_error == doctest::Approx(0.0));
  }
  SUBCASE("rank-1 gram gives one column") {
    Vector x(2);
    x << 1.0, 2.0;
    const Matrix gram = x * x.transpose();
    const FeatureMap fm = factorize_gram(gram, 5);
    CHECK(fm.phi.cols() == 1);
    const double sign = fm.phi(0, 0) > 0 ? 1.0 : -1.0;
    CHECK((sign * fm.phi.col(0) - x).norm() <= 1e-10);
  }
  SUBCASE("rank cap drops trailing eigenvalues") {
    const FeatureMap fm = factorize_gram(Matrix::Identity(3, 3), 1);
    CHECK(fm.phi.cols() == 1);
    const double err =
        (fm.phi * fm.phi.transpose() - Matrix::Identity(3, 3)).norm();
    CHECK(err == doctest::Approx(std::sqrt(2.0)));
    CHECK(fm.truncation_error == doctest::Approx(2.0));
    CHECK(err <= fm.truncation_error + 1e-8);
  }
  SUBCASE("non-PSD input is rejected") {
    Matrix bad(2, 2);
    bad << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(factorize_gram(bad, 2), NumericalError);
  }
}

TEST_CASE("multitask_gram_feature matches the scalar algebra") {
  HyperParams hp;
  hp.lambda1 = 1.0;
  hp.lambda2 = 1.0;
  hp.num_classes = 2;
  hp.objective = ObjectiveKind::FeatureLearning;

  SUBCASE("single observation block") {
    Matrix x(1, 2);
    x << 1.0, 0.0;
    CovarianceVariable d{CovKind::FeatureCov, Matrix::Identity(2, 2) / 2.0};
    const MultitaskGram g = multitask_gram_feature({x}, d, hp);
    // raw kernel (1/2)/(3/2) = 1/3, plus n_1/2 = 1/2.
    CHECK(g.tilde(0, 0) == doctest::Approx(1.0 / 3.0 + 0.5));
  }
  SUBCASE("cross-task entries vanish") {
    Matrix x0(2, 2), x1(2, 2);
    x0 << 1.0, 0.0, 0.5, 0.5;
    x1 << 0.0, 1.0, 2.0, 1.0;
    CovarianceVariable d{CovKind::FeatureCov, Matrix::Identity(2, 2) / 2.0};
    const MultitaskGram g = multitask_gram_feature({x0, x1}, d, hp);
    CHECK(g.tilde.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.tilde.block(2, 0, 2, 2).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("isotropic D reduces to the scalar formula") {
    // D = I/d: entry x'y (1/d) / (lambda1/d + lambda2) = x'y/(l1 + d l2).
    Rng rng(3);
    const int d = 3;
    Matrix x(4, d);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x(i / d, i % d) = rng.normal();
    hp.lambda1 = std::pow(2.0, -10);
    hp.lambda2 = std::pow(2.0, -10);
    CovarianceVariable dv{CovKind::FeatureCov,
                          Matrix::Identity(d, d) / static_cast<double>(d)};
    const MultitaskGram g = multitask_gram_feature({x}, dv, hp);
    const double denom = hp.lambda1 + d * hp.lambda2;
    for (int p = 0; p < 4; ++p) {
      for (int q = 0; q < p; ++q) {
        CHECK(g.tilde(p, q) ==
              doctest::Approx(x.row(p).dot(x.row(q)) / denom));
      }
    }
  }
}

TEST_CASE("multitask_gram_relationship matches the scalar algebra") {
  HyperParams hp;
  hp.lambda1 = 1.0;
  hp.lambda2 = 1.0;
  hp.num_classes = 2;
  hp.objective = ObjectiveKind::RelationshipLearning;

  SUBCASE("same-task pair under Omega = I/2") {
    Matrix base(2, 2);
    base << 3.0, 3.0, 3.0, 3.0;  // inner products all 3
    CovarianceVariable omega{CovKind::TaskCov,
                             Matrix::Identity(2, 2) / 2.0};
    const MultitaskGram g =
        multitask_gram_relationship(base, omega, {0, 1}, hp);
    // same-task scaling (1/2)/(3/2) = 1/3 -> 3 * 1/3 = 1 on the diagonal
    // block, but here each task has one row so check the diagonal minus
    // the ridge n_i/2 = 1/2.
    CHECK(g.tilde(0, 0) - 0.5 == doctest::Approx(1.0));
    CHECK(g.tilde(1, 1) - 0.5 == doctest::Approx(1.0));
  }
  SUBCASE("diagonal Omega decouples tasks") {
    Rng rng(9);
    Matrix x(4, 2);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x(i / 2, i % 2) = rng.normal();
    const Matrix base = x * x.transpose();
    CovarianceVariable omega{CovKind::TaskCov,
                             Matrix::Identity(2, 2) / 2.0};
    const MultitaskGram g =
        multitask_gram_relationship(base, omega, {0, 0, 1, 1}, hp);
    CHECK(g.tilde.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single task degenerates to a ridge kernel") {
    Rng rng(13);
    Matrix x(3, 2);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x(i / 2, i % 2) = rng.normal();
    const Matrix base = x * x.transpose();
    CovarianceVariable omega{CovKind::TaskCov, Matrix::Ones(1, 1)};
    hp.lambda1 = 0.25;
    hp.lambda2 = 0.75;
    const MultitaskGram g =
        multitask_gram_relationship(base, omega, {0, 0, 0}, hp);
    const Matrix expect =
        base / (hp.lambda1 + hp.lambda2) +
        0.5 * 3.0 * Matrix::Identity(3, 3);
    CHECK((g.tilde - expect).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("multitask grams are symmetric and admit Cholesky") {
  Rng rng(17);
  HyperParams hp;
  hp.lambda1 = 1e-3;
  hp.lambda2 = 1e-3;
  hp.num_classes = 2;

  Matrix x0(5, 3), x1(4, 3);
  for (Eigen::Index i = 0; i < x0.size(); ++i)
    x0(i / 3, i % 3) = rng.normal();
  for (Eigen::Index i = 0; i < x1.size(); ++i)
    x1(i / 3, i % 3) = rng.normal();

  // Random PSD trace-1 covariances.
  Matrix gd(3, 3), go(2, 2);
  for (Eigen::Index i = 0; i < gd.size(); ++i)
    gd(i / 3, i % 3) = rng.normal();
  for (Eigen::Index i = 0; i < go.size(); ++i)
    go(i / 2, i % 2) = rng.normal();
  Matrix dmat = gd * gd.transpose();
  dmat /= dmat.trace();
  Matrix omat = go * go.transpose();
  omat /= omat.trace();

  hp.objective = ObjectiveKind::FeatureLearning;
  const MultitaskGram gf = multitask_gram_feature(
      {x0, x1}, {CovKind::FeatureCov, dmat}, hp);
  CHECK((gf.tilde - gf.tilde.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(Eigen::LLT<Matrix>(gf.tilde).info() == Eigen::Success);

  TaskDataset data = from_rows({x0, x1});
  hp.objective = ObjectiveKind::RelationshipLearning;
  const MultitaskGram gr = multitask_gram_relationship(
      base_gram(data, BaseKernelSpec::rbf(1.3)), {CovKind::TaskCov, omat},
      data.task_index(), hp);
  CHECK((gr.tilde - gr.tilde.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(Eigen::LLT<Matrix>(gr.tilde).info() == Eigen::Success);
}

TEST_CASE("factorize_gram reconstruction bound") {
  Rng rng(19);
  Matrix g(6, 6);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i / 6, i % 6) = rng.normal();
  Matrix gram = g * g.transpose();
  for (int cap : {2, 4, 6}) {
    const FeatureMap fm = factorize_gram(gram, cap);
    const double err = (fm.phi * fm.phi.transpose() - gram).norm();
    CHECK(err <= fm.truncation_error + 1e-8);
  }
}
