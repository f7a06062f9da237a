#include "ranpower/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "ranpower/error.hpp"

namespace ranpower {

std::vector<int> LeastSquaresFit::confounded(double tol) const {
  std::vector<int> out;
  for (int j = 0; j < null_space.rows(); ++j) {
    if (null_space.row(j).norm() > tol) out.push_back(j);
  }
  return out;
}

bool LeastSquaresFit::estimable(const Eigen::VectorXd& combination, double tol) const {
  if (null_space.cols() == 0) return true;
  const double scale = std::max(1.0, combination.norm());
  return (null_space.transpose() * combination).norm() <= tol * scale;
}

LeastSquaresFit solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& observed,
                                    const Eigen::VectorXd* weights, double rank_tol) {
  const Eigen::Index m = design.rows();
  const Eigen::Index n = design.cols();
  if (observed.size() != m) {
    throw Error(ErrorKind::Domain, "least squares: observation count does not match design rows");
  }
  if (weights != nullptr && weights->size() != m) {
    throw Error(ErrorKind::Domain, "least squares: weight count does not match design rows");
  }

  Eigen::MatrixXd a = design;
  Eigen::VectorXd b = observed;
  if (weights != nullptr) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!((*weights)(i) > 0.0)) throw Error(ErrorKind::Domain, "least squares: weights must be positive");
      const double s = std::sqrt((*weights)(i));
      a.row(i) *= s;
      b(i) *= s;
    }
  }

  LeastSquaresFit fit;
  fit.solution = Eigen::VectorXd::Zero(n);
  if (m == 0 || n == 0) {
    fit.null_space = Eigen::MatrixXd::Identity(n, n);
    fit.residuals = -observed;
    return fit;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double threshold = rank_tol * sigma(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold && sigma(i) > 0.0) ++rank;
  }
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  for (int i = 0; i < rank; ++i) {
    fit.solution += v.col(i) * (u.col(i).dot(b) / sigma(i));
  }
  fit.rank = rank;
  fit.null_space = v.rightCols(n - rank);
  fit.residuals = design * fit.solution - observed;
  return fit;
}

}  // namespace ranpower
