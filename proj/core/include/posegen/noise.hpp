#pragma once

// Measurement synthesis and information matrices.
//
// Odometry follows a travelled-distance / heading-change model: the sensor
// reports dl = |p_k - p_{k-1}| + n_l and dth = th_k - th_{k-1} + n_th, and
// the edge stores (dl cos dth, dl sin dth, dth). This is biased and its
// covariance couples the lateral component with the heading. Loop closures
// add independent noise to the true relative pose and are unbiased.

#include <Eigen/Core>

#include "posegen/model.hpp"
#include "posegen/rng.hpp"

namespace posegen {

struct OdomNoiseParams {
  double sigma_pos = 0.023;
  double sigma_ang = 0.023;
};

/// Information matrices are built from max(sigma, kInfoSigmaFloor) so that
/// noise-free datasets still carry finite weights.
inline constexpr double kInfoSigmaFloor = 1e-4;

RelativeMeasurement odometry_measurement(const ScaledPose& prev, const ScaledPose& curr,
                                         const OdomNoiseParams& p, RngStream& rng);

/// Relative pose of `pose_i` in the frame of `pose_j` plus additive noise.
RelativeMeasurement lc_measurement(const ScaledPose& pose_i, const ScaledPose& pose_j,
                                   const LoopClosureParams& p, RngStream& rng);

/// diag(sigma_pos^-2, sigma_pos^-2, sigma_ang^-2). Throws std::domain_error
/// when either sigma is not strictly positive.
InformationMatrix lc_information(const LoopClosureParams& p);

/// Exact covariance of (dx, dy, dth) under the odometry model for a move of
/// true length `length` with true heading change `rel_heading`.
Eigen::Matrix3d odometry_covariance_exact(double rel_heading, double length,
                                          const OdomNoiseParams& p);

/// Inverse of odometry_covariance_exact. Throws std::domain_error when the
/// covariance is singular or a sigma is not strictly positive.
InformationMatrix odom_information_exact(double rel_heading, double length,
                                         const OdomNoiseParams& p);

/// exact -> odom_information_exact; diagonal -> diag(sigma_pos^-2,
/// sigma_pos^-2, sigma_ang^-2) regardless of the motion.
InformationMatrix odom_information(InfoMode mode, double rel_heading, double length,
                                   const OdomNoiseParams& p);

Eigen::Matrix3d to_eigen(const InformationMatrix& info);
InformationMatrix from_eigen(const Eigen::Matrix3d& m);

}  // namespace posegen
