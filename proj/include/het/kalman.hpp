#pragma once

#include <Eigen/Dense>

#include "het/geometry.hpp"

namespace het {

struct KalmanConfig {
  double p0 = 10.0;    // initial state covariance (diagonal, px^2)
  double q_pos = 4.0;  // base process noise, position terms
  double q_vel = 1.0;  // base process noise, velocity terms
  double r_pos = 4.0;  // base measurement noise
};

// Constant-velocity filter over the target center with confidence-scaled
// noise covariances: Q_cur = s * Q0 and R_cur = (1 - s) * R0 for the most
// recent ensemble confidence s. High confidence trusts the measurement;
// low confidence coasts on the motion model.
class KalmanFilter {
 public:
  KalmanFilter(Vec2 initial_position, const KalmanConfig& config = {});

  // s must lie in [0.1, 0.9]; Q0/R0 are never modified.
  void adapt_noise(double confidence);

  // x <- A x with the Newton constant-velocity matrix; P <- A P A^T + Q_cur.
  void predict(double dt = 1.0);

  // Standard Kalman update with observation B = [I2 | 0]; the posterior
  // covariance is symmetrized numerically.
  void correct(Vec2 measured_center);

  Vec2 position() const { return {x_(0), x_(1)}; }
  Vec2 velocity() const { return {x_(2), x_(3)}; }

  const Eigen::Vector4d& state() const { return x_; }
  const Eigen::Matrix4d& covariance() const { return P_; }
  const Eigen::Matrix4d& process_noise_base() const { return Q0_; }
  const Eigen::Matrix2d& measurement_noise_base() const { return R0_; }
  const Eigen::Matrix4d& process_noise() const { return Q_cur_; }
  const Eigen::Matrix2d& measurement_noise() const { return R_cur_; }

  void set_state(const Eigen::Vector4d& x, const Eigen::Matrix4d& P) {
    x_ = x;
    P_ = P;
  }
  void set_noise(const Eigen::Matrix4d& q_cur, const Eigen::Matrix2d& r_cur) {
    Q_cur_ = q_cur;
    R_cur_ = r_cur;
  }

 private:
  Eigen::Vector4d x_;
  Eigen::Matrix4d P_;
  Eigen::Matrix4d Q0_, Q_cur_;
  Eigen::Matrix2d R0_, R_cur_;
};

}  // namespace het
