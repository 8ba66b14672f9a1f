#pragma once

#include "mview/geometry.hpp"
#include "mview/score_map.hpp"

#include <span>
#include <vector>

namespace mview {

/// Per-frame ground-truth annotations.
struct ViewAnnotation {
    int camera_id = 0;
    Eigen::Vector2d head = Eigen::Vector2d::Zero();  // pixel (u, v)
    Eigen::Vector2d foot = Eigen::Vector2d::Zero();  // pixel (u, v)
    bool visible = true;
};

struct PedestrianAnnotation {
    int person_id = 0;
    int grid_index = 0;  // 1-based top-view cell
    std::vector<ViewAnnotation> views;
};

struct AnnotationFrame {
    int frame_id = 0;
    std::vector<PedestrianAnnotation> pedestrians;
};

/// Truncated Gaussian kernel used to soften ground-truth maps into
/// regression targets.
struct GaussianSpec {
    enum class Normalization { UnitSum, UnitPeak };

    double sigma = 3.0;             // cells (top view) or pixels (camera view)
    int truncation_radius = -1;     // < 0 means ceil(3 * sigma)
    Normalization normalization = Normalization::UnitSum;

    int radius() const;
    void validate() const;
};

/// Binary top-view occupancy: 1 at every annotated pedestrian's cell, 0
/// elsewhere. Coincident pedestrians still give 1 (occupancy, not a count).
/// Throws OutOfGrid on bad indices.
ScoreMap occupancy_map(const AnnotationFrame& frame, const GroundGrid& grid);

/// Binary map with 1 at each point's nearest pixel; points outside the shape
/// are ignored. Convenience for building single-view head/foot targets.
ScoreMap point_map(std::span<const Eigen::Vector2d> pixels, int rows, int cols);

/// Separable truncated-Gaussian convolution with zero-padded borders.
ScoreMap gaussian_blur(const ScoreMap& map, const GaussianSpec& spec);

/// || pred - blur(gt) ||_2 over all cells. Throws ShapeMismatch.
double loss_topview(const ScoreMap& pred, const ScoreMap& gt, const GaussianSpec& spec);

/// || pred_head - blur(gt_head) ||_2 + || pred_foot - blur(gt_foot) ||_2.
double loss_single_view(const ScoreMap& pred_head, const ScoreMap& pred_foot,
                        const ScoreMap& gt_head, const ScoreMap& gt_foot,
                        const GaussianSpec& spec);

/// Combined loss: top_loss plus the mean of the per-view losses.
/// Throws EmptyViewList when no single-view losses are given.
double loss_overall(double top_loss, std::span<const double> single_losses);

}  // namespace mview
