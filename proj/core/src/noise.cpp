#include "posegen/noise.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>
#include <string>

namespace posegen {

namespace {

// cos/sin of multiples of pi/2 come out as ~1e-17 instead of 0; snapping
// keeps the structural zeros of the information matrix exact.
double snap(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

void require_positive(double sigma, const char* what) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::domain_error(std::string(what) + " must be > 0 to form an information matrix");
  }
}

}  // namespace

RelativeMeasurement odometry_measurement(const ScaledPose& prev, const ScaledPose& curr,
                                         const OdomNoiseParams& p, RngStream& rng) {
  const double n_ang = rng.normal(p.sigma_ang);
  const double n_len = rng.normal(p.sigma_pos);
  RelativeMeasurement m;
  m.dtheta = wrap_angle(curr.heading - prev.heading + n_ang);
  const double length = std::hypot(curr.x - prev.x, curr.y - prev.y) + n_len;
  m.dx = length * std::cos(m.dtheta);
  m.dy = length * std::sin(m.dtheta);
  return m;
}

RelativeMeasurement lc_measurement(const ScaledPose& pose_i, const ScaledPose& pose_j,
                                   const LoopClosureParams& p, RngStream& rng) {
  const double n_ang = rng.normal(p.sigma_ang);
  const double n_x = rng.normal(p.sigma_pos);
  const double n_y = rng.normal(p.sigma_pos);
  const double c = snap(std::cos(pose_j.heading));
  const double s = snap(std::sin(pose_j.heading));
  const double ex = pose_i.x - pose_j.x;
  const double ey = pose_i.y - pose_j.y;
  RelativeMeasurement m;
  m.dtheta = wrap_angle(pose_i.heading - pose_j.heading + n_ang);
  m.dx = c * ex + s * ey + n_x;
  m.dy = -s * ex + c * ey + n_y;
  return m;
}

InformationMatrix lc_information(const LoopClosureParams& p) {
  require_positive(p.sigma_pos, "loop-closure sigma_pos");
  require_positive(p.sigma_ang, "loop-closure sigma_ang");
  const double ip = 1.0 / (p.sigma_pos * p.sigma_pos);
  return InformationMatrix::diagonal(ip, ip, 1.0 / (p.sigma_ang * p.sigma_ang));
}

Eigen::Matrix3d odometry_covariance_exact(double rel_heading, double length,
                                          const OdomNoiseParams& p) {
  // L ~ N(l, sp^2), Phi ~ N(phi, a), a = sa^2; measurement (L cos Phi,
  // L sin Phi, Phi). Gaussian trig moments:
  //   E[cos Phi] = cos phi e^{-a/2},  E[cos^2 Phi] = (1 + cos 2phi e^{-2a}) / 2
  //   E[(Phi - phi) sin(Phi)] = cos phi a e^{-a/2}, etc.
  // The 1 - e^{-a} factors are evaluated with expm1 to keep small-a accuracy.
  const double l = length;
  const double sp2 = p.sigma_pos * p.sigma_pos;
  const double a = p.sigma_ang * p.sigma_ang;
  const double c = snap(std::cos(rel_heading));
  const double s = snap(std::sin(rel_heading));
  const double c2 = snap(std::cos(2.0 * rel_heading));
  const double s2 = snap(std::sin(2.0 * rel_heading));
  const double e1 = std::exp(-a);
  const double e2 = std::exp(-2.0 * a);
  const double om = -std::expm1(-a);  // 1 - e^{-a}

  const double var_x = l * l * om * (1.0 - c2 * e1) / 2.0 + sp2 * (1.0 + c2 * e2) / 2.0;
  const double var_y = l * l * om * (1.0 + c2 * e1) / 2.0 + sp2 * (1.0 - c2 * e2) / 2.0;
  const double cov_xy = s2 / 2.0 * (-l * l * e1 * om + sp2 * e2);
  const double half = std::exp(-a / 2.0);
  const double cov_xt = -l * s * a * half;
  const double cov_yt = l * c * a * half;

  Eigen::Matrix3d cov;
  cov << var_x, cov_xy, cov_xt,
         cov_xy, var_y, cov_yt,
         cov_xt, cov_yt, a;
  return cov;
}

InformationMatrix odom_information_exact(double rel_heading, double length,
                                         const OdomNoiseParams& p) {
  require_positive(p.sigma_pos, "odometry sigma_pos");
  require_positive(p.sigma_ang, "odometry sigma_ang");
  const Eigen::Matrix3d cov = odometry_covariance_exact(rel_heading, length, p);
  Eigen::LLT<Eigen::Matrix3d> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("odometry covariance is numerically singular");
  }
  const Eigen::Matrix3d info = llt.solve(Eigen::Matrix3d::Identity());
  InformationMatrix out = from_eigen(0.5 * (info + info.transpose()));
  // Structural zeros: the x block decouples from (y, th) for a +-x move and
  // vice versa.
  if (snap(std::sin(rel_heading)) == 0.0) {
    out.i12 = 0.0;
    out.i13 = 0.0;
  }
  if (snap(std::cos(rel_heading)) == 0.0) {
    out.i12 = 0.0;
    out.i23 = 0.0;
  }
  if (!out.is_positive_definite()) {
    throw std::domain_error("odometry information matrix is not positive definite");
  }
  return out;
}

InformationMatrix odom_information(InfoMode mode, double rel_heading, double length,
                                   const OdomNoiseParams& p) {
  if (mode == InfoMode::exact) {
    return odom_information_exact(rel_heading, length, p);
  }
  require_positive(p.sigma_pos, "odometry sigma_pos");
  require_positive(p.sigma_ang, "odometry sigma_ang");
  const double ip = 1.0 / (p.sigma_pos * p.sigma_pos);
  return InformationMatrix::diagonal(ip, ip, 1.0 / (p.sigma_ang * p.sigma_ang));
}

Eigen::Matrix3d to_eigen(const InformationMatrix& info) {
  Eigen::Matrix3d m;
  m << info.i11, info.i12, info.i13,
       info.i12, info.i22, info.i23,
       info.i13, info.i23, info.i33;
  return m;
}

InformationMatrix from_eigen(const Eigen::Matrix3d& m) {
  return {m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2)};
}

}  // namespace posegen
