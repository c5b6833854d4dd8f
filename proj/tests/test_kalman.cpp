#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "het/errors.hpp"
#include "het/kalman.hpp"
#include "het/rng.hpp"

using namespace het;

TEST_CASE("predict applies Newton motion") {
  KalmanFilter kf({0.0, 0.0});
  kf.set_state(Eigen::Vector4d(0, 0, 1, 1), kf.covariance());
  kf.predict(1.0);
  CHECK(kf.position().x == doctest::Approx(1.0));
  CHECK(kf.position().y == doctest::Approx(1.0));
  CHECK(kf.velocity().x == doctest::Approx(1.0));
  CHECK(kf.velocity().y == doctest::Approx(1.0));

  kf.set_state(Eigen::Vector4d(5, 3, -2, 0), kf.covariance());
  kf.predict(1.0);
  CHECK(kf.position().x == doctest::Approx(3.0));
  CHECK(kf.position().y == doctest::Approx(3.0));
}

TEST_CASE("predict with zero velocity only grows the covariance by Q_cur") {
  KalmanFilter kf({7.0, 9.0});
  const Eigen::Matrix4d before = kf.covariance();
  const Eigen::Matrix4d q = kf.process_noise();
  kf.predict(1.0);
  CHECK(kf.position().x == doctest::Approx(7.0));
  CHECK(kf.position().y == doctest::Approx(9.0));
  // P0 is diagonal; with zero off-diagonal velocity terms the position
  // entries grow by exactly q + dt^2 * P_vv.
  CHECK(kf.covariance()(0, 0) ==
        doctest::Approx(before(0, 0) + before(2, 2) + q(0, 0)).epsilon(1e-12));
}

TEST_CASE("correct with the predicted position leaves it and shrinks the trace") {
  KalmanFilter kf({10.0, 20.0});
  kf.predict(1.0);
  const Vec2 predicted = kf.position();
  const double trace_before = kf.covariance().trace();
  kf.correct(predicted);
  CHECK(kf.position().x == doctest::Approx(predicted.x).epsilon(1e-12));
  CHECK(kf.position().y == doctest::Approx(predicted.y).epsilon(1e-12));
  CHECK(kf.covariance().trace() < trace_before);
}

TEST_CASE("near-degenerate measurement noise pins the posterior to the measurement") {
  KalmanConfig config;
  config.r_pos = 4e-9;  // R0 scaled by 1e-9
  KalmanFilter kf({0.0, 0.0}, config);
  kf.adapt_noise(0.9);
  kf.predict(1.0);
  kf.correct({3.0, -2.0});
  CHECK(std::abs(kf.position().x - 3.0) < 1e-3);
  CHECK(std::abs(kf.position().y + 2.0) < 1e-3);
}

TEST_CASE("scalar analogue matches the hand-computed Kalman gain") {
  // One predict/correct cycle per axis against closed-form 1-D arithmetic:
  // after predict, p = p0 + q; gain k = p / (p + r); x' = x + k (z - x).
  KalmanConfig config;
  config.p0 = 10.0;
  config.q_pos = 4.0;
  config.q_vel = 1e-30;  // freeze the velocity channel's influence
  config.r_pos = 4.0;
  KalmanFilter kf({2.0, -1.0}, config);
  kf.predict(1.0);
  const double p = 10.0 + 10.0 + 4.0;  // position variance + dt^2 * velocity variance + q
  const double k = p / (p + 4.0);
  const double expected_x = 2.0 + k * (5.0 - 2.0);
  const double expected_y = -1.0 + k * (0.5 - -1.0);
  kf.correct({5.0, 0.5});
  CHECK(kf.position().x == doctest::Approx(expected_x).epsilon(1e-9));
  CHECK(kf.position().y == doctest::Approx(expected_y).epsilon(1e-9));
}

TEST_CASE("adapt_noise scales the bases linearly and leaves them untouched") {
  KalmanFilter kf({0.0, 0.0});
  const Eigen::Matrix4d q0 = kf.process_noise_base();
  const Eigen::Matrix2d r0 = kf.measurement_noise_base();

  kf.adapt_noise(0.5);
  CHECK((kf.process_noise() - 0.5 * q0).norm() == 0.0);
  CHECK((kf.measurement_noise() - 0.5 * r0).norm() == 0.0);

  kf.adapt_noise(0.9);
  CHECK((kf.measurement_noise() - 0.1 * r0).norm() < 1e-15);

  kf.adapt_noise(0.1);
  CHECK((kf.process_noise() - 0.1 * q0).norm() == 0.0);
  CHECK((kf.measurement_noise() - 0.9 * r0).norm() < 1e-15);

  CHECK(kf.process_noise_base() == q0);
  CHECK(kf.measurement_noise_base() == r0);
}

TEST_CASE("adapt_noise rejects out-of-range confidence") {
  KalmanFilter kf({0.0, 0.0});
  CHECK_THROWS_AS(kf.adapt_noise(0.05), ContractError);
  CHECK_THROWS_AS(kf.adapt_noise(0.95), ContractError);
}

TEST_CASE("velocity converges on a noiseless constant-velocity stream") {
  KalmanFilter kf({0.0, 0.0});
  const Vec2 true_velocity{2.0, -1.5};
  for (int k = 1; k <= 30; ++k) {
    kf.adapt_noise(0.5);
    kf.predict(1.0);
    kf.correct({true_velocity.x * k, true_velocity.y * k});
  }
  CHECK(std::abs(kf.velocity().x - true_velocity.x) < 0.05);
  CHECK(std::abs(kf.velocity().y - true_velocity.y) < 0.05);
}

TEST_CASE("P stays symmetric PSD over many cycles") {
  KalmanFilter kf({0.0, 0.0});
  Rng rng(555);
  for (int k = 0; k < 10000; ++k) {
    kf.adapt_noise(rng.uniform(0.1, 0.9));
    kf.predict(1.0);
    kf.correct({rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)});
    const Eigen::Matrix4d& p = kf.covariance();
    CHECK((p - p.transpose()).norm() < 1e-12);
    if (k % 100 == 0) {
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(p);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
    }
  }
}
