#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ranpower {

inline constexpr double kRankTolerance = 1e-8;

// Result of an ordinary (optionally weighted) linear least-squares solve.
// When the design is rank deficient the solution is the minimum-norm one and
// null_space spans the unidentifiable directions.
struct LeastSquaresFit {
  Eigen::VectorXd solution;
  Eigen::VectorXd residuals;  // A * solution - b, one per observation
  Eigen::MatrixXd null_space;
  int rank = 0;

  bool full_rank() const { return null_space.cols() == 0; }
  // Parameter indices that take part in at least one null direction.
  std::vector<int> confounded(double tol = 1e-6) const;
  // True when c . x is pinned down by the data even if x itself is not.
  bool estimable(const Eigen::VectorXd& combination, double tol = 1e-8) const;
};

// Singular values below rank_tol * largest count as zero. Weights, if given,
// multiply each row's squared residual.
LeastSquaresFit solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& observed,
                                    const Eigen::VectorXd* weights = nullptr,
                                    double rank_tol = kRankTolerance);

}  // namespace ranpower
