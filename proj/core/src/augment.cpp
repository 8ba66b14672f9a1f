#include "mview/augment.hpp"

#include "mview/error.hpp"
#include "mview/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mview {

namespace {

// Per-camera homographies for the foot and head planes, built once per frame.
struct OccluderGeometry {
    int camera_id;
    int image_width;
    int image_height;
    PlaneHomography foot;  // TopToCam at height 0
    PlaneHomography head;  // TopToCam at height h_a
};

std::vector<OccluderGeometry> build_geometry(std::span<const CameraCalibration> calibs,
                                             double height_m) {
    std::vector<OccluderGeometry> out;
    out.reserve(calibs.size());
    for (const CameraCalibration& calib : calibs) {
        const ProjectionMatrix proj = build_projection(calib);
        out.push_back({calib.camera_id, calib.image_width, calib.image_height,
                       ground_homography(proj, HomographyDirection::TopToCam),
                       plane_homography(proj, height_m, HomographyDirection::TopToCam)});
    }
    return out;
}

ViewRect rect_in_view(const OccluderGeometry& geo, const Eigen::Vector2d& world,
                      double width_ratio) {
    ViewRect rect;
    rect.camera_id = geo.camera_id;

    const Eigen::Vector3d foot = geo.foot.apply(world);
    const Eigen::Vector3d head = geo.head.apply(world);
    if (!(foot.z() > 0.0) || !(head.z() > 0.0)) {
        return rect;  // behind the camera: invisible, nothing painted
    }

    rect.u_foot = foot.x() / foot.z();
    rect.v_foot = foot.y() / foot.z();
    const double v_head = head.y() / head.z();
    rect.height_px = std::abs(rect.v_foot - v_head);
    rect.width_px = width_ratio * rect.height_px;

    const bool foot_inside = rect.u_foot >= 0.0 && rect.u_foot <= geo.image_width - 1.0 &&
                             rect.v_foot >= 0.0 && rect.v_foot <= geo.image_height - 1.0;
    if (!foot_inside) {
        return rect;
    }
    rect.visible = true;

    if (rect.height_px <= 0.0) {
        return rect;  // degenerate (h_a = 0): empty rectangle
    }

    const long u0 = std::lround(rect.u_foot - rect.width_px / 2.0);
    const long u1 = std::lround(rect.u_foot + rect.width_px / 2.0);
    const long v0 = std::lround(std::min(rect.v_foot, v_head));
    const long v1 = std::lround(std::max(rect.v_foot, v_head));

    rect.u0 = static_cast<int>(std::max(u0, 0L));
    rect.u1 = static_cast<int>(std::min(u1, static_cast<long>(geo.image_width - 1)));
    rect.v0 = static_cast<int>(std::max(v0, 0L));
    rect.v1 = static_cast<int>(std::min(v1, static_cast<long>(geo.image_height - 1)));
    rect.clipped = rect.u0 != u0 || rect.u1 != u1 || rect.v0 != v0 || rect.v1 != v1;
    return rect;
}

std::vector<ViewRect> rects_for_world(std::span<const OccluderGeometry> geometry,
                                      const Eigen::Vector2d& world, double width_ratio) {
    std::vector<ViewRect> rects;
    rects.reserve(geometry.size());
    for (const OccluderGeometry& geo : geometry) {
        rects.push_back(rect_in_view(geo, world, width_ratio));
    }
    return rects;
}

}  // namespace

void OcclusionConfig::validate() const {
    if (probability_p < 0.0 || probability_p > 1.0 || !std::isfinite(probability_p)) {
        throw Error("occlusion probability must lie in [0, 1]");
    }
    if (n_occlusions < 0) {
        throw Error("occlusion count must be non-negative");
    }
    if (!(min_separation_d > 0.0)) {
        throw Error("minimum separation must be positive");
    }
    if (!(width_ratio_alpha > 0.0) || !(width_ratio_alpha < 1.0)) {
        throw Error("width ratio must lie in (0, 1)");
    }
    if (!(pedestrian_height_ha > 0.0)) {
        throw Error("pedestrian height must be positive");
    }
    if (max_rejections <= 0) {
        throw Error("rejection budget must be positive");
    }
}

std::vector<ViewRect> rect_for_location(std::span<const CameraCalibration> calibs,
                                        const GroundGrid& grid, int grid_index, double height_m,
                                        double width_ratio) {
    const auto geometry = build_geometry(calibs, height_m);
    return rects_for_world(geometry, grid.index_to_world(grid_index), width_ratio);
}

std::vector<ViewRect> rect_for_location(std::span<const CameraCalibration> calibs,
                                        const GroundGrid& grid, int grid_index,
                                        const OcclusionConfig& config) {
    return rect_for_location(calibs, grid, grid_index, config.pedestrian_height_ha,
                             config.width_ratio_alpha);
}

void paint_rect(ImageU8& image, const ViewRect& rect, std::uint8_t value) {
    if (!rect.visible || rect.empty()) {
        return;
    }
    for (int v = rect.v0; v <= rect.v1; ++v) {
        for (int u = rect.u0; u <= rect.u1; ++u) {
            for (int ch = 0; ch < image.channels; ++ch) {
                image.at(v, u, ch) = value;
            }
        }
    }
}

void paint_rect(ScoreMap& map, const ViewRect& rect, double value) {
    if (!rect.visible || rect.empty()) {
        return;
    }
    for (int v = rect.v0; v <= rect.v1; ++v) {
        for (int u = rect.u0; u <= rect.u1; ++u) {
            map.at(v, u) = value;
        }
    }
}

OccludedFrame occlude_frame(std::span<const ImageU8> images,
                            std::span<const CameraCalibration> calibs, const GroundGrid& grid,
                            const OcclusionConfig& config) {
    config.validate();
    if (images.size() != calibs.size()) {
        throw SizeMismatch("occlude_frame: " + std::to_string(images.size()) + " images for " +
                           std::to_string(calibs.size()) + " calibrations");
    }
    for (std::size_t c = 0; c < calibs.size(); ++c) {
        if (images[c].cols != calibs[c].image_width || images[c].rows != calibs[c].image_height) {
            throw SizeMismatch("occlude_frame: image " + std::to_string(c) + " is " +
                               std::to_string(images[c].cols) + "x" +
                               std::to_string(images[c].rows) + ", calibration says " +
                               std::to_string(calibs[c].image_width) + "x" +
                               std::to_string(calibs[c].image_height));
        }
    }

    OccludedFrame out;
    out.images.assign(images.begin(), images.end());

    Rng rng(config.rng_seed);
    if (!(rng.uniform01() < config.probability_p)) {
        return out;  // frame skipped; images are untouched copies
    }
    out.applied = true;
    if (config.n_occlusions == 0) {
        return out;
    }

    const auto geometry = build_geometry(calibs, config.pedestrian_height_ha);

    std::vector<Eigen::Vector2d> placed;
    int rejections = 0;
    while (static_cast<int>(out.records.size()) < config.n_occlusions) {
        const int k = static_cast<int>(rng.uniform_int(1, grid.size()));
        const Eigen::Vector2d world = grid.index_to_world(k);

        const bool too_close = std::any_of(placed.begin(), placed.end(), [&](const auto& p) {
            return (world - p).norm() < config.min_separation_d;
        });
        if (too_close) {
            if (++rejections >= config.max_rejections) {
                throw PlacementExhausted(
                    "gave up after " + std::to_string(rejections) +
                    " consecutive rejections with " + std::to_string(out.records.size()) +
                    " of " + std::to_string(config.n_occlusions) + " occlusions placed");
            }
            continue;
        }
        rejections = 0;

        OcclusionRecord record;
        record.grid_index = k;
        record.world = world;
        record.per_view = rects_for_world(geometry, world, config.width_ratio_alpha);
        for (std::size_t c = 0; c < record.per_view.size(); ++c) {
            paint_rect(out.images[c], record.per_view[c], config.fill_value_omega);
        }
        placed.push_back(world);
        out.records.push_back(std::move(record));
    }
    return out;
}

}  // namespace mview
