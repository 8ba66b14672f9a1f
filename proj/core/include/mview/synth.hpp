#pragma once

#include "mview/eval.hpp"
#include "mview/geometry.hpp"
#include "mview/warp.hpp"

#include <vector>

namespace mview {

/// Synthetic multi-camera scene: upright box "pedestrians" standing on grid
/// cells, rendered as filled rectangles per view with the same projection
/// math the occlusion augmentation uses.
struct PedestrianSpec {
    int grid_index = 0;
    double height_m = 1.80;
    double width_ratio = 0.4;
};

struct SceneSpec {
    std::vector<CameraCalibration> cameras;
    GroundGrid grid;
    std::vector<PedestrianSpec> pedestrians;
    double background = 0.0;
    double foreground = 1.0;

    void validate() const;
};

struct RenderedScene {
    std::vector<ScoreMap> views;  // one silhouette map per camera
    GroundTruthSet ground_truth;  // world coordinates of the pedestrian cells
};

/// Deterministic silhouette rendering of the scene. Pedestrians invisible in
/// a view simply leave no mark there.
RenderedScene render_scene(const SceneSpec& spec);

/// Consensus localization over a projection stack: counts, per cell, how many
/// layers exceed `threshold`, takes local maxima of the count, and greedily
/// suppresses maxima within nms_radius_m of an already accepted one
/// (descending count). A maximum is kept only when its count reaches
/// min_score (a fraction of the layer count; 1.0 keeps full-consensus cells
/// only). Detections are placed at the centroid of each maximum's
/// equal-count plateau, scored by count / layer_count.
DetectionSet intersection_localize(const ProjectionStack& stack, const GroundGrid& grid,
                                   double threshold, double nms_radius_m,
                                   double min_score = 1.0);

}  // namespace mview
