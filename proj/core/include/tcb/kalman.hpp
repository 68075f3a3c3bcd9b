#pragma once

#include <Eigen/Dense>

#include <tcb/geometry.hpp>

namespace tcb {

/// Constant-velocity box filter state over (cx, cy, aspect, height) plus
/// per-frame velocities. Covariance stays symmetric PSD through the pure
/// predict/update cycle.
struct KalmanState {
    Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> covariance = Eigen::Matrix<double, 8, 8>::Zero();
};

/// Noise scaling relative to box height (SORT/BYTE convention).
struct KalmanNoise {
    double std_weight_position = 1.0 / 20.0;
    double std_weight_velocity = 1.0 / 160.0;
};

/// New state centred on the box with zero velocity and size-scaled
/// diagonal covariance.
KalmanState kf_init(const BBox& box, const KalmanNoise& noise = {});

/// One-frame constant-velocity transition; adds process noise so the
/// covariance trace strictly grows.
KalmanState kf_predict(const KalmanState& state, const KalmanNoise& noise = {});

/// Standard Kalman correction on the (cx, cy, aspect, height) observation.
/// Throws ValidationError on a non-finite or degenerate observation.
KalmanState kf_update(const KalmanState& state, const BBox& observation,
                      const KalmanNoise& noise = {});

/// Box implied by the state mean.
BBox kf_box(const KalmanState& state);

}  // namespace tcb
