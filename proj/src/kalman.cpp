#include "het/kalman.hpp"

#include <string>

#include "het/errors.hpp"

namespace het {

KalmanFilter::KalmanFilter(Vec2 initial_position, const KalmanConfig& config) {
  x_ << initial_position.x, initial_position.y, 0.0, 0.0;
  P_ = Eigen::Matrix4d::Identity() * config.p0;
  Q0_ = Eigen::Vector4d(config.q_pos, config.q_pos, config.q_vel, config.q_vel).asDiagonal();
  R0_ = Eigen::Vector2d(config.r_pos, config.r_pos).asDiagonal();
  Q_cur_ = Q0_;
  R_cur_ = R0_;
}

void KalmanFilter::adapt_noise(double confidence) {
  if (!(confidence >= 0.1 && confidence <= 0.9)) {
    throw ContractError("confidence out of [0.1, 0.9]: " + std::to_string(confidence));
  }
  Q_cur_ = confidence * Q0_;
  R_cur_ = (1.0 - confidence) * R0_;
}

void KalmanFilter::predict(double dt) {
  if (!(dt > 0.0)) throw ContractError("dt must be > 0");
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity();
  a(0, 2) = dt;
  a(1, 3) = dt;
  x_ = a * x_;
  P_ = a * P_ * a.transpose() + Q_cur_;
}

void KalmanFilter::correct(Vec2 measured_center) {
  Eigen::Matrix<double, 2, 4> b = Eigen::Matrix<double, 2, 4>::Zero();
  b(0, 0) = 1.0;
  b(1, 1) = 1.0;

  const Eigen::Vector2d z(measured_center.x, measured_center.y);
  const Eigen::Vector2d innovation = z - b * x_;
  const Eigen::Matrix2d s = b * P_ * b.transpose() + R_cur_;
  // R_cur is positive definite by construction, so s is invertible.
  const double det = s.determinant();
  if (!(det > 0.0)) throw ContractError("singular innovation covariance");
  const Eigen::Matrix<double, 4, 2> gain = P_ * b.transpose() * s.inverse();

  x_ += gain * innovation;
  P_ = (Eigen::Matrix4d::Identity() - gain * b) * P_;
  P_ = 0.5 * (P_ + P_.transpose().eval());
}

}  // namespace het
