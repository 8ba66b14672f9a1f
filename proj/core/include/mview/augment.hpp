#pragma once

#include "mview/geometry.hpp"
#include "mview/score_map.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mview {

/// Parameters of the 3D random-occlusion augmentation.
struct OcclusionConfig {
    int n_occlusions = 25;             // occlusions per augmented frame
    double probability_p = 1.0;        // chance a frame is augmented at all
    double min_separation_d = 1.0;     // meters between any two occluders
    double pedestrian_height_ha = 1.80;// occluder height, meters
    double width_ratio_alpha = 0.4;    // width = alpha * projected height
    std::uint8_t fill_value_omega = 0; // constant paint value
    std::uint64_t rng_seed = 0;
    int max_rejections = 10000;        // consecutive rejections before giving up

    void validate() const;
};

/// Projection of one upright occluder (or pedestrian) into one camera view.
/// The continuous rectangle is centered horizontally on the foot point and
/// spans from the projected head row to the foot row; the integer paint box
/// is its rasterization clipped to the image. An entry is visible when the
/// foot has positive depth inside the image and the head has positive depth.
struct ViewRect {
    int camera_id = 0;
    double u_foot = 0.0;
    double v_foot = 0.0;
    double height_px = 0.0;  // |v_foot - v_head|
    double width_px = 0.0;   // alpha * height_px
    bool visible = false;
    bool clipped = false;
    // Inclusive pixel bounds, already clipped; empty() when nothing to paint.
    int u0 = 0, u1 = -1, v0 = 0, v1 = -1;

    bool empty() const { return u1 < u0 || v1 < v0; }
};

/// One placed occlusion: the grid cell it stands on plus its footprint in
/// every camera view.
struct OcclusionRecord {
    int grid_index = 0;
    Eigen::Vector2d world = Eigen::Vector2d::Zero();
    std::vector<ViewRect> per_view;
};

struct OccludedFrame {
    std::vector<ImageU8> images;
    std::vector<OcclusionRecord> records;
    bool applied = false;  // false when the probability draw skipped the frame
};

/// Rectangle an upright box of height `height_m` standing on grid cell
/// `grid_index` projects to, in every view. Width is width_ratio times the
/// projected height. Propagates SingularPlane from the homography setup.
std::vector<ViewRect> rect_for_location(std::span<const CameraCalibration> calibs,
                                        const GroundGrid& grid, int grid_index,
                                        double height_m, double width_ratio);

/// Same, pulling height and width ratio from the config.
std::vector<ViewRect> rect_for_location(std::span<const CameraCalibration> calibs,
                                        const GroundGrid& grid, int grid_index,
                                        const OcclusionConfig& config);

/// Apply 3D random occlusion to one frame. With probability 1 - p the frame
/// is returned untouched; otherwise exactly n grid locations are drawn
/// uniformly, rejecting any candidate closer than d to an already accepted
/// one, and each accepted occluder is painted with the constant fill value in
/// every view that sees it. Deterministic in config.rng_seed.
/// Throws SizeMismatch when images disagree with calibrations, and
/// PlacementExhausted after max_rejections consecutive rejections.
OccludedFrame occlude_frame(std::span<const ImageU8> images,
                            std::span<const CameraCalibration> calibs, const GroundGrid& grid,
                            const OcclusionConfig& config);

/// Paint the rectangle into an 8-bit image (all channels). No-op for
/// invisible or empty rectangles.
void paint_rect(ImageU8& image, const ViewRect& rect, std::uint8_t value);

/// Paint into a scalar map; used by the synthetic-scene renderer.
void paint_rect(ScoreMap& map, const ViewRect& rect, double value);

}  // namespace mview
