#pragma once

#include "mview/geometry.hpp"
#include "mview/rng.hpp"
#include "mview/score_map.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

namespace helpers {

/// WILDTRACK-sized grid: 12 x 36 m AOI, 120 x 360 cells, 0.1 m cell size.
inline mview::GroundGrid wildtrack_grid() {
    return mview::GroundGrid({0.0, 0.0}, {12.0, 36.0}, 120, 360);
}

/// Seven cameras ringing the WILDTRACK-sized AOI, elevated and looking at
/// points inside it.
inline std::vector<mview::CameraCalibration> wildtrack_cameras(int width = 480,
                                                               int height = 270) {
    const Eigen::Vector3d center(6.0, 18.0, 0.0);
    std::vector<mview::CameraCalibration> cams;
    for (int i = 0; i < 7; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / 7.0;
        const Eigen::Vector3d pos = center + Eigen::Vector3d(14.0 * std::cos(angle),
                                                             22.0 * std::sin(angle), 4.0);
        cams.push_back(mview::make_lookat_calibration(i + 1, pos, center, 0.45 * width, width,
                                                      height));
    }
    return cams;
}

/// Well-conditioned random camera around an AOI centered at `center`:
/// elevated ring position, looking at a point near the center. The ring
/// radius exceeds the WILDTRACK AOI half-diagonal (~19 m) by enough that
/// every grid point up to 2 m height stays strictly in front of the camera.
inline mview::CameraCalibration random_camera(mview::Rng& rng, int id,
                                              const Eigen::Vector3d& center) {
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double range = rng.uniform(26.0, 40.0);
    const double elevation = rng.uniform(3.0, 10.0);
    const Eigen::Vector3d pos =
        center + Eigen::Vector3d(range * std::cos(angle), range * std::sin(angle), elevation);
    const Eigen::Vector3d target =
        center + Eigen::Vector3d(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), 0.0);
    const double f = rng.uniform(400.0, 1500.0);
    return mview::make_lookat_calibration(id, pos, target, f, 1920, 1080);
}

/// Max absolute difference after scale canonicalization (unit Frobenius norm,
/// largest-magnitude entry positive): zero iff projectively equal.
inline double up_to_scale_difference(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
    const auto canonical = [](Eigen::Matrix3d m) {
        m /= m.norm();
        int r = 0, c = 0;
        m.cwiseAbs().maxCoeff(&r, &c);
        if (m(r, c) < 0.0) {
            m = -m;
        }
        return m;
    };
    return (canonical(a) - canonical(b)).cwiseAbs().maxCoeff();
}

/// Uniform random map with entries in [0, 1).
inline mview::ScoreMap random_map(mview::Rng& rng, int rows, int cols) {
    mview::ScoreMap map(rows, cols);
    for (double& v : map.data()) {
        v = rng.uniform01();
    }
    return map;
}

inline bool maps_equal_bitwise(const mview::ScoreMap& a, const mview::ScoreMap& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    return std::memcmp(a.data().data(), b.data().data(), a.data().size() * sizeof(double)) == 0;
}

inline double max_abs_difference(const mview::ScoreMap& a, const mview::ScoreMap& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    }
    return worst;
}

}  // namespace helpers
