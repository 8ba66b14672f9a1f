#pragma once

#include "mview/geometry.hpp"
#include "mview/score_map.hpp"

#include <span>
#include <vector>

namespace mview {

/// Rebase a plane homography so its top-view side works in top-view pixel
/// coordinates instead of world meters (the camera side is already in
/// pixels). The result is what warp_map and project_multilayer consume.
PlaneHomography pixel_homography(const PlaneHomography& hom, const GroundGrid& grid);

/// Inverse-mapping warp: every output pixel samples the input map at the
/// location the (inverted) homography assigns to it, with bilinear
/// interpolation and zero outside the input. `hom` maps input-frame pixels to
/// output-frame pixels; when the map and the homography both carry frame
/// tags they must agree. Output pixels whose source has non-positive
/// projective depth are forced to zero (cheirality mask).
/// Throws SingularPlane when hom is not invertible.
ScoreMap warp_map(const ScoreMap& map, const PlaneHomography& hom, int out_rows, int out_cols);

/// Ordered set of per-(camera, height) top-view projections. Layers are
/// camera-major, height-minor: layer index c * |heights| + j.
struct ProjectionStack {
    std::vector<ScoreMap> layers;
    std::vector<int> source_cameras;
    std::vector<double> heights;

    int layer_count() const { return static_cast<int>(layers.size()); }

    const ScoreMap& layer(int camera_pos, int height_pos) const {
        return layers[static_cast<std::size_t>(camera_pos) * heights.size() + height_pos];
    }
};

/// Warp each camera's map to the top-view grid through the homography of
/// every requested plane height. One map per calibration, in the same order.
/// The layers are concatenated, never summed: each keeps its own channel.
ProjectionStack project_multilayer(std::span<const ScoreMap> per_view_maps,
                                   std::span<const CameraCalibration> calibs,
                                   const GroundGrid& grid, std::span<const double> heights);

}  // namespace mview
