#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigbell/solver/conic.hpp"

namespace sigbell::solver::detail {

/// Canonical conic form
///   minimize    c'w
///   subject to  G w + s = h,   s in K,
/// with K = {0}^zero_dim  x  R+^nonneg_dim  x  product of real symmetric
/// PSD cones (svec coordinates, sqrt(2)-scaled off-diagonals). Rows are
/// ordered zero cone, nonnegative cone, then the PSD blocks.
struct ConeSpec {
  int zero_dim = 0;
  int nonneg_dim = 0;
  std::vector<int> psd_dims;  // matrix side lengths

  int svec_len() const;
  int order() const;  // barrier degree: nonneg_dim + sum of psd dims
};

struct ConicData {
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  ConeSpec cone;
};

struct ConicResult {
  Status status = Status::NumericalFailure;
  Eigen::VectorXd w;
  Eigen::VectorXd s;
  Eigen::VectorXd z;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;       // <s, z>
  double rel_gap = 0.0;
  double primal_resid = 0.0;
  double dual_resid = 0.0;
  int iterations = 0;
};

ConicResult solve_conic(const ConicData& data, const Settings& settings);

int svec_dim(int d);
Eigen::VectorXd svec(const Eigen::MatrixXd& m);
Eigen::MatrixXd smat(const Eigen::VectorXd& v, int d);

}  // namespace sigbell::solver::detail
