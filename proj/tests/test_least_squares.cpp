#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ranpower/least_squares.hpp"
#include "support/gen.hpp"

using namespace ranpower;

TEST_CASE("exactly determined system is solved with zero residual") {
  Eigen::MatrixXd a(3, 3);
  a << 1, 1, 0,
       1, 0, 1,
       1, 1, 1;
  Eigen::VectorXd b(3);
  b << 207, 236, 291;
  const auto fit = solve_least_squares(a, b);
  CHECK(fit.full_rank());
  CHECK(fit.rank == 3);
  CHECK(fit.solution(0) == doctest::Approx(152));
  CHECK(fit.solution(1) == doctest::Approx(55));
  CHECK(fit.solution(2) == doctest::Approx(84));
  CHECK(fit.residuals.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("overdetermined line fit") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 1.0,
       1, 0.5,
       1, 0.3;
  Eigen::VectorXd b(3);
  b << 18, 10, 6;
  const auto fit = solve_least_squares(a, b);
  // Closed form: slope = Sxy / Sxx = 4.4 / 0.26.
  CHECK(fit.solution(1) == doctest::Approx(4.4 / 0.26).epsilon(1e-12));
  CHECK(fit.solution(0) == doctest::Approx(34.0 / 3.0 - 0.6 * 4.4 / 0.26).epsilon(1e-12));
  CHECK(fit.residuals.sum() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rank deficiency reports the confounded columns") {
  // Columns 1 and 2 always appear together.
  Eigen::MatrixXd a(3, 3);
  a << 1, 1, 1,
       1, 1, 1,
       1, 0, 0;
  Eigen::VectorXd b(3);
  b << 10, 10, 4;
  const auto fit = solve_least_squares(a, b);
  CHECK_FALSE(fit.full_rank());
  CHECK(fit.rank == 2);
  CHECK(fit.confounded() == std::vector<int>{1, 2});
  Eigen::VectorXd sum(3);
  sum << 0, 1, 1;
  CHECK(fit.estimable(sum));
  Eigen::VectorXd single(3);
  single << 0, 1, 0;
  CHECK_FALSE(fit.estimable(single));
  CHECK(fit.solution(1) + fit.solution(2) == doctest::Approx(6));
}

TEST_CASE("weights change the balance between inconsistent rows") {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  Eigen::VectorXd b(2);
  b << 0, 10;
  Eigen::VectorXd w(2);
  w << 1, 3;
  const auto fit = solve_least_squares(a, b, &w);
  CHECK(fit.solution(0) == doctest::Approx(7.5));
}

TEST_CASE("property: noise-free systems are recovered and redundant rows change nothing") {
  gen::for_all(200, [](gen::Rng& rng) {
    const int n = rng.integer(1, 6);
    Eigen::VectorXd truth(n);
    for (int j = 0; j < n; ++j) truth(j) = rng.uniform(-100.0, 300.0);

    // Random 0/1 design with an intercept column, regenerated until full rank.
    Eigen::MatrixXd a;
    LeastSquaresFit fit;
    do {
      const int m = n + rng.integer(0, 6);
      a = Eigen::MatrixXd::Zero(m, n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = j == 0 ? 1.0 : (rng.coin() ? 1.0 : 0.0);
      fit = solve_least_squares(a, a * truth);
    } while (!fit.full_rank());

    for (int j = 0; j < n; ++j) CHECK(fit.solution(j) == doctest::Approx(truth(j)).epsilon(1e-9));
    CHECK(fit.residuals.cwiseAbs().maxCoeff() < 1e-8);

    // Append a consistent combination of existing rows.
    Eigen::MatrixXd a2(a.rows() + 1, n);
    a2.topRows(a.rows()) = a;
    a2.row(a.rows()) = a.row(0);
    const auto fit2 = solve_least_squares(a2, a2 * truth);
    for (int j = 0; j < n; ++j) CHECK(fit2.solution(j) == doctest::Approx(fit.solution(j)).epsilon(1e-9));
  });
}

TEST_CASE("property: minimum-norm solutions still reproduce estimable combinations") {
  gen::for_all(100, [](gen::Rng& rng) {
    const int n = rng.integer(2, 5);
    Eigen::VectorXd truth(n);
    for (int j = 0; j < n; ++j) truth(j) = rng.uniform(0.0, 100.0);
    // Duplicate the last column so it can never be separated.
    const int m = n + 3;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n - 1; ++j) a(i, j) = rng.coin() ? 1.0 : 0.0;
      a(i, n - 1) = a(i, n - 2);
    }
    const auto fit = solve_least_squares(a, a * truth);
    CHECK_FALSE(fit.full_rank());
    const Eigen::VectorXd predicted = a * fit.solution;
    const Eigen::VectorXd observed = a * truth;
    for (int i = 0; i < m; ++i) CHECK(predicted(i) == doctest::Approx(observed(i)).epsilon(1e-9));
  });
}
