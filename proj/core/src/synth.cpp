#include "mview/synth.hpp"

#include "mview/augment.hpp"
#include "mview/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace mview {

void SceneSpec::validate() const {
    if (cameras.empty()) {
        throw Error("scene needs at least one camera");
    }
    for (const CameraCalibration& cam : cameras) {
        cam.validate();
    }
    for (const PedestrianSpec& ped : pedestrians) {
        if (ped.grid_index < 1 || ped.grid_index > grid.size()) {
            throw OutOfGrid("pedestrian grid index " + std::to_string(ped.grid_index) +
                            " outside [1, " + std::to_string(grid.size()) + "]");
        }
        if (!(ped.height_m > 0.0) || !(ped.width_ratio > 0.0) || !(ped.width_ratio < 1.0)) {
            throw Error("pedestrian height/width ratio out of range");
        }
    }
    if (foreground == background) {
        throw Error("foreground and background values must differ");
    }
}

RenderedScene render_scene(const SceneSpec& spec) {
    spec.validate();

    RenderedScene scene;
    scene.ground_truth.frame_id = 0;
    scene.views.reserve(spec.cameras.size());
    for (const CameraCalibration& cam : spec.cameras) {
        ScoreMap view(cam.image_height, cam.image_width, spec.background);
        view.frame = FrameOfReference::camera(cam.camera_id);
        scene.views.push_back(std::move(view));
    }

    for (const PedestrianSpec& ped : spec.pedestrians) {
        const std::vector<ViewRect> rects =
            rect_for_location(spec.cameras, spec.grid, ped.grid_index, ped.height_m,
                              ped.width_ratio);
        for (std::size_t c = 0; c < rects.size(); ++c) {
            paint_rect(scene.views[c], rects[c], spec.foreground);
        }
        scene.ground_truth.points.push_back(spec.grid.index_to_world(ped.grid_index));
    }
    return scene;
}

DetectionSet intersection_localize(const ProjectionStack& stack, const GroundGrid& grid,
                                   double threshold, double nms_radius_m, double min_score) {
    DetectionSet detections;
    detections.frame_id = 0;
    if (stack.layers.empty()) {
        return detections;
    }

    const int rows = grid.rows();
    const int cols = grid.cols();
    for (const ScoreMap& layer : stack.layers) {
        if (layer.rows() != rows || layer.cols() != cols) {
            throw ShapeMismatch("projection stack layers do not match the grid shape");
        }
    }

    // Per-cell count of layers whose value exceeds the threshold.
    std::vector<int> count(static_cast<std::size_t>(rows) * cols, 0);
    for (const ScoreMap& layer : stack.layers) {
        for (std::size_t i = 0; i < count.size(); ++i) {
            if (layer.data()[i] > threshold) {
                ++count[i];
            }
        }
    }

    const int layer_count = stack.layer_count();
    const int min_count = std::max(1, static_cast<int>(std::ceil(min_score * layer_count)));
    const auto cnt = [&](int r, int c) { return count[static_cast<std::size_t>(r) * cols + c]; };

    // Local maxima (8-neighborhood, non-strict so plateaus qualify).
    struct Candidate {
        int r, c, count;
    };
    std::vector<Candidate> candidates;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int v = cnt(r, c);
            if (v < min_count) {
                continue;
            }
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr;
                    const int cc = c + dc;
                    if (rr >= 0 && rr < rows && cc >= 0 && cc < cols && cnt(rr, cc) > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) {
                candidates.push_back({r, c, v});
            }
        }
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.count > b.count; });

    // Soft consensus of the topmost plane, used to place each detection.
    // Strips at low heights extend away from their camera starting at the
    // body axis, so the all-layer consensus region has the axis at a corner
    // and its centroid is biased. The top-plane strips are the most
    // symmetric about the axis (exactly symmetric when the plane sits at
    // half the body height), so the weighted centroid of their intersection
    // pins the axis much more tightly.
    std::size_t top_pos = 0;
    for (std::size_t j = 1; j < stack.heights.size(); ++j) {
        if (stack.heights[j] > stack.heights[top_pos]) {
            top_pos = j;
        }
    }
    const int n_heights = static_cast<int>(stack.heights.size());
    const int n_cameras = layer_count / n_heights;
    std::vector<double> top_consensus(count.size(), 0.0);
    for (std::size_t i = 0; i < top_consensus.size(); ++i) {
        double weakest = 1.0;
        for (int c = 0; c < n_cameras; ++c) {
            const double v =
                stack.layers[static_cast<std::size_t>(c) * n_heights + top_pos].data()[i];
            weakest = std::min(weakest, v - threshold);
        }
        top_consensus[i] = std::max(0.0, weakest);
    }

    const auto flat = [&](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };

    // Refined position: soft centroid of the connected top-plane consensus
    // region around the cell, bounded by the suppression radius. Falls back
    // to the cell center when the region is empty.
    const auto refine = [&](int r0, int c0) {
        const Eigen::Vector2d seed = grid.index_to_world(grid.cell_to_index(r0, c0));
        if (top_consensus[flat(r0, c0)] <= 0.0) {
            return seed;
        }
        std::vector<char> seen(count.size(), 0);
        std::deque<std::pair<int, int>> queue{{r0, c0}};
        seen[flat(r0, c0)] = 1;
        double mass = 0.0, sum_x = 0.0, sum_y = 0.0;
        while (!queue.empty()) {
            const auto [r, c] = queue.front();
            queue.pop_front();
            const double w = top_consensus[flat(r, c)];
            const Eigen::Vector2d p = grid.index_to_world(grid.cell_to_index(r, c));
            mass += w;
            sum_x += w * p.x();
            sum_y += w * p.y();
            const int neighbors[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
            for (const auto& n : neighbors) {
                if (n[0] < 0 || n[0] >= rows || n[1] < 0 || n[1] >= cols ||
                    seen[flat(n[0], n[1])] || top_consensus[flat(n[0], n[1])] <= 0.0) {
                    continue;
                }
                const Eigen::Vector2d q = grid.index_to_world(grid.cell_to_index(n[0], n[1]));
                if ((q - seed).norm() >= nms_radius_m) {
                    continue;
                }
                seen[flat(n[0], n[1])] = 1;
                queue.push_back({n[0], n[1]});
            }
        }
        return mass > 0.0 ? Eigen::Vector2d(sum_x / mass, sum_y / mass) : seed;
    };

    // Greedy NMS over the candidates, strongest count first.
    std::vector<Eigen::Vector2d> accepted;
    for (const Candidate& cand : candidates) {
        const Eigen::Vector2d center = refine(cand.r, cand.c);
        const bool suppressed = std::any_of(accepted.begin(), accepted.end(), [&](const auto& p) {
            return (center - p).norm() < nms_radius_m;
        });
        if (suppressed) {
            continue;
        }
        accepted.push_back(center);
        detections.points.push_back(
            {center.x(), center.y(), static_cast<double>(cand.count) / layer_count});
    }
    return detections;
}

}  // namespace mview
