#pragma once

#include "mview/augment.hpp"
#include "mview/eval.hpp"
#include "mview/geometry.hpp"
#include "mview/gtmaps.hpp"
#include "mview/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mview {

// JSON-compatible file schemas. Array-valued files also load from JSONL
// (one object per line), which is how the tools write per-frame records.

/// Calibration file: array of
/// {id, K: 9 row-major, R: 9 row-major, t: 3, width, height, dist: 5}.
/// A nonzero distortion block is rejected: the homography math assumes
/// pre-rectified pinhole images.
std::vector<CameraCalibration> load_calibrations(const std::filesystem::path& path);
void save_calibrations(const std::filesystem::path& path,
                       std::span<const CameraCalibration> calibs);

/// Grid file: {origin: [x, y], extent: [lx, ly], shape: [nx, ny]}.
GroundGrid load_grid(const std::filesystem::path& path);
void save_grid(const std::filesystem::path& path, const GroundGrid& grid);

/// Annotations: one record per frame,
/// {frame_id, pedestrians: [{id, grid_index,
///   views: [{cam, head: [u, v], foot: [u, v], visible}]}]}.
std::vector<AnnotationFrame> load_annotations(const std::filesystem::path& path);
void save_annotations(const std::filesystem::path& path,
                      std::span<const AnnotationFrame> frames);

/// Detections / ground truth: one record per frame,
/// {frame_id, points: [[x, y, score?], ...]}. Ground-truth readers ignore
/// any score column.
std::vector<DetectionSet> load_detections(const std::filesystem::path& path);
void save_detections(const std::filesystem::path& path, std::span<const DetectionSet> frames);
std::vector<GroundTruthSet> load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const std::filesystem::path& path,
                       std::span<const GroundTruthSet> frames);

/// Synthetic scene description; camera and grid schemas embedded.
SceneSpec load_scene_spec(const std::filesystem::path& path);
void save_scene_spec(const std::filesystem::path& path, const SceneSpec& spec);

/// Per-frame occlusion record emitted by the augment pipeline.
void save_occlusion_records(const std::filesystem::path& path, int frame_id,
                            std::uint64_t seed, bool applied,
                            std::span<const OcclusionRecord> records);

/// Evaluation report as structured text, all metrics to 4 decimal places.
std::string format_report(const EvalReport& report, bool per_frame = false);
void save_report(const std::filesystem::path& path, const EvalReport& report,
                 bool per_frame = false);

}  // namespace mview
