#include "mview/warp.hpp"

#include "mview/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace mview {

namespace {

bool invertible(const Eigen::Matrix3d& h) {
    const double fro = h.norm();
    if (!(fro > 0.0) || !std::isfinite(fro)) {
        return false;
    }
    return std::abs(Eigen::Matrix3d(h / fro).determinant()) > 1e-12;
}

// Core inverse-mapping kernel: dst_to_src maps output pixels to input pixels.
ScoreMap warp_dst_to_src(const ScoreMap& in, const Eigen::Matrix3d& dst_to_src, int out_rows,
                         int out_cols, FrameOfReference out_frame) {
    ScoreMap out(out_rows, out_cols, 0.0);
    out.frame = out_frame;

    const int in_rows = in.rows();
    const int in_cols = in.cols();

    for (int r = 0; r < out_rows; ++r) {
        for (int c = 0; c < out_cols; ++c) {
            const Eigen::Vector3d s =
                dst_to_src * Eigen::Vector3d(static_cast<double>(c), static_cast<double>(r), 1.0);
            if (!(s.z() > 0.0)) {
                continue;  // behind the camera or at infinity
            }
            const double x = s.x() / s.z();
            const double y = s.y() / s.z();
            const double xf = std::floor(x);
            const double yf = std::floor(y);
            const int x0 = static_cast<int>(xf);
            const int y0 = static_cast<int>(yf);
            const double dx = x - xf;
            const double dy = y - yf;

            double value = 0.0;
            const auto sample = [&](int xi, int yi, double w) {
                if (w != 0.0 && xi >= 0 && xi < in_cols && yi >= 0 && yi < in_rows) {
                    value += w * in.at(yi, xi);
                }
            };
            sample(x0, y0, (1.0 - dx) * (1.0 - dy));
            sample(x0 + 1, y0, dx * (1.0 - dy));
            sample(x0, y0 + 1, (1.0 - dx) * dy);
            sample(x0 + 1, y0 + 1, dx * dy);
            out.at(r, c) = value;
        }
    }
    return out;
}

}  // namespace

PlaneHomography pixel_homography(const PlaneHomography& hom, const GroundGrid& grid) {
    PlaneHomography out = hom;
    if (hom.direction == HomographyDirection::TopToCam) {
        out.h_matrix = hom.h_matrix * grid.toppix_to_world();
    } else {
        out.h_matrix = grid.world_to_toppix() * hom.h_matrix;
    }
    return out;
}

ScoreMap warp_map(const ScoreMap& map, const PlaneHomography& hom, int out_rows, int out_cols) {
    if (out_rows <= 0 || out_cols <= 0) {
        throw ShapeMismatch("warp output shape must be positive");
    }
    if (map.frame.kind == FrameOfReference::Kind::CameraImage &&
        hom.direction != HomographyDirection::CamToTop) {
        throw ShapeMismatch("camera-frame map requires a CamToTop homography");
    }
    if (map.frame.kind == FrameOfReference::Kind::TopView &&
        hom.direction != HomographyDirection::TopToCam) {
        throw ShapeMismatch("top-view map requires a TopToCam homography");
    }
    if (!invertible(hom.h_matrix)) {
        throw SingularPlane("warp homography is singular");
    }

    FrameOfReference out_frame;
    if (map.frame.kind == FrameOfReference::Kind::CameraImage) {
        out_frame = FrameOfReference::top_view(hom.height);
    } else if (map.frame.kind == FrameOfReference::Kind::TopView) {
        out_frame = FrameOfReference::camera(-1);
    }
    return warp_dst_to_src(map, hom.h_matrix.inverse(), out_rows, out_cols, out_frame);
}

ProjectionStack project_multilayer(std::span<const ScoreMap> per_view_maps,
                                   std::span<const CameraCalibration> calibs,
                                   const GroundGrid& grid, std::span<const double> heights) {
    if (per_view_maps.size() != calibs.size()) {
        throw SizeMismatch("project_multilayer: " + std::to_string(per_view_maps.size()) +
                           " maps for " + std::to_string(calibs.size()) + " calibrations");
    }
    if (heights.empty()) {
        throw ShapeMismatch("project_multilayer: empty height list");
    }

    ProjectionStack stack;
    stack.heights.assign(heights.begin(), heights.end());
    stack.layers.reserve(per_view_maps.size() * heights.size());

    for (std::size_t c = 0; c < calibs.size(); ++c) {
        stack.source_cameras.push_back(calibs[c].camera_id);
        const ProjectionMatrix proj = build_projection(calibs[c]);
        for (const double h : heights) {
            // Top-view pixel -> camera pixel, assembled directly so no matrix
            // inversion is needed; this is the exact inverse of the CamToTop
            // pixel homography warp_map would use.
            const PlaneHomography top_to_cam =
                plane_homography(proj, h, HomographyDirection::TopToCam);
            const Eigen::Matrix3d dst_to_src = top_to_cam.h_matrix * grid.toppix_to_world();
            stack.layers.push_back(warp_dst_to_src(per_view_maps[c], dst_to_src, grid.rows(),
                                                   grid.cols(),
                                                   FrameOfReference::top_view(h)));
        }
    }
    return stack;
}

}  // namespace mview
