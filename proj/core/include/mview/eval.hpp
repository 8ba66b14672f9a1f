#pragma once

#include "mview/geometry.hpp"

#include <span>
#include <vector>

namespace mview {

/// Ground-plane detections of one frame.
struct DetectionPoint {
    double x = 0.0;  // meters
    double y = 0.0;
    double score = 1.0;
};

struct DetectionSet {
    int frame_id = 0;
    std::vector<DetectionPoint> points;
};

struct GroundTruthSet {
    int frame_id = 0;
    std::vector<Eigen::Vector2d> points;  // meters
};

/// One matched (detection, ground truth) pair.
struct Match {
    int det_index = 0;
    int gt_index = 0;
    double distance = 0.0;  // meters, <= radius by construction
};

struct FrameCounts {
    int frame_id = 0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double matched_quality = 0.0;  // sum of (1 - d/r) over matches
    double moda = 0.0;
    double modp = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Per-frame and pooled detection metrics. Pooling is micro-averaged:
/// counts are summed over frames before the ratios are formed.
struct EvalReport {
    double radius = 0.5;  // meters
    std::vector<FrameCounts> per_frame;
    long total_gt = 0;
    long total_det = 0;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double moda = 0.0;
    double modp = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Optimal one-to-one matching between detections and ground truth under the
/// thresholded cost: pairs farther apart than `radius` can never match, the
/// number of matched pairs is maximal, and among maximal matchings the total
/// distance is minimal. Solved with the Hungarian algorithm; results are
/// deterministic (ties resolved by scan order, which prefers low indices).
/// Matches are returned sorted by detection index.
std::vector<Match> match_frame(const DetectionSet& det, const GroundTruthSet& gt, double radius);

/// Match every frame pair and aggregate MODA, MODP, precision and recall.
/// Frame ids inside each pair must agree (FrameMismatch otherwise).
/// Conventions for empty denominators: MODA is 1 when there is no ground
/// truth and no false positive, 0 when there are false positives but no
/// ground truth; MODP is 0 when there are no true positives; precision is 1
/// only when there are neither detections nor ground truth; recall is 1 when
/// there is no ground truth.
EvalReport score_frames(std::span<const std::pair<DetectionSet, GroundTruthSet>> frames,
                        double radius);

/// Drop points outside the grid's area of interest. Applied to both
/// detections and ground truth before matching when an AOI is configured.
DetectionSet filter_to_aoi(const DetectionSet& det, const GroundGrid& grid);
GroundTruthSet filter_to_aoi(const GroundTruthSet& gt, const GroundGrid& grid);

namespace detail {

/// Minimum-cost assignment of n rows to m columns (n <= m), O(n^2 m).
/// Returns the assigned column for every row. Exposed for tests.
std::vector<int> solve_assignment(const std::vector<double>& cost, int n, int m);

}  // namespace detail

}  // namespace mview
