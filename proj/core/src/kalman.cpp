#include <tcb/kalman.hpp>

namespace tcb {

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat4x8 = Eigen::Matrix<double, 4, 8>;

Mat8 transition() {
    Mat8 f = Mat8::Identity();
    for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
    return f;
}

Mat4x8 observation_model() {
    Mat4x8 h = Mat4x8::Zero();
    for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
    return h;
}

Vec4 measure(const BBox& box) {
    Vec4 z;
    z << box.cx(), box.cy(), box.aspect(), box.h;
    return z;
}

}  // namespace

KalmanState kf_init(const BBox& box, const KalmanNoise& noise) {
    if (!box.valid()) throw ValidationError("kf_init: invalid box");
    KalmanState state;
    state.mean.head<4>() = measure(box);

    const double h = box.h;
    Vec8 std;
    std << 2.0 * noise.std_weight_position * h, 2.0 * noise.std_weight_position * h, 1e-2,
        2.0 * noise.std_weight_position * h, 10.0 * noise.std_weight_velocity * h,
        10.0 * noise.std_weight_velocity * h, 1e-5, 10.0 * noise.std_weight_velocity * h;
    state.covariance = std.array().square().matrix().asDiagonal();
    return state;
}

KalmanState kf_predict(const KalmanState& state, const KalmanNoise& noise) {
    const double h = state.mean(3);
    Vec8 std;
    std << noise.std_weight_position * h, noise.std_weight_position * h, 1e-2,
        noise.std_weight_position * h, noise.std_weight_velocity * h,
        noise.std_weight_velocity * h, 1e-5, noise.std_weight_velocity * h;
    const Mat8 process_noise = std.array().square().matrix().asDiagonal();

    const Mat8 f = transition();
    KalmanState next;
    next.mean = f * state.mean;
    next.covariance = f * state.covariance * f.transpose() + process_noise;
    return next;
}

KalmanState kf_update(const KalmanState& state, const BBox& observation,
                      const KalmanNoise& noise) {
    if (!observation.valid()) throw ValidationError("kf_update: invalid observation");

    const double h = state.mean(3);
    Vec4 std;
    std << noise.std_weight_position * h, noise.std_weight_position * h, 1e-1,
        noise.std_weight_position * h;
    const Mat4 measurement_noise = std.array().square().matrix().asDiagonal();

    const Mat4x8 obs = observation_model();
    const Vec4 innovation = measure(observation) - obs * state.mean;
    const Mat4 s = obs * state.covariance * obs.transpose() + measurement_noise;
    const Eigen::Matrix<double, 8, 4> gain =
        s.ldlt().solve(obs * state.covariance.transpose()).transpose();

    KalmanState next;
    next.mean = state.mean + gain * innovation;
    next.covariance = state.covariance - gain * s * gain.transpose();
    // keep symmetry against roundoff
    next.covariance = 0.5 * (next.covariance + next.covariance.transpose()).eval();
    return next;
}

BBox kf_box(const KalmanState& state) {
    const double cx = state.mean(0);
    const double cy = state.mean(1);
    const double a = state.mean(2);
    const double h = state.mean(3);
    const double w = a * h;
    return BBox{cx - 0.5 * w, cy - 0.5 * h, w, h};
}

}  // namespace tcb
