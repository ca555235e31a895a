#pragma once

#include <Eigen/Dense>

#include "dirac/lagrange_dirac.hpp"

namespace dirac {

struct RollingBallParams {
  double inertia_small = 1.0;
  double inertia_large = 1.0;
  double density = 1.0;
  double torque = 0.1;
};

/// Coordinates (s1, s2, theta_1..3, u_1..3). theta are exponential
/// coordinates of R = R0 exp(hat(theta)) around a chart center R0 that the
/// re-chart hook moves whenever |theta| exceeds pi/2.
LagrangeDiracSystem build_rolling_ball(const RollingBallParams& params);

Eigen::Matrix3d hat(const Eigen::Vector3d& w);
Eigen::Matrix3d exp_so3(const Eigen::Vector3d& theta);
/// Left Jacobian: R_dot R^T = hat(R0 J_l(theta) theta_dot) for R = R0 exp(theta).
Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& theta);
/// Right Jacobian: body angular velocity = J_r(theta) theta_dot.
Eigen::Matrix3d right_jacobian(const Eigen::Vector3d& theta);

inline constexpr double kRechartThreshold = 1.5707963267948966;

}  // namespace dirac
