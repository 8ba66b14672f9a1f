#include "mview/gtmaps.hpp"

#include "mview/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace mview {

namespace {

std::vector<double> kernel_weights(const GaussianSpec& spec) {
    const int radius = spec.radius();
    std::vector<double> w(2 * radius + 1);
    const double inv_two_sigma_sq = 1.0 / (2.0 * spec.sigma * spec.sigma);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        w[k + radius] = std::exp(-static_cast<double>(k) * k * inv_two_sigma_sq);
        sum += w[k + radius];
    }
    if (spec.normalization == GaussianSpec::Normalization::UnitSum) {
        for (double& v : w) {
            v /= sum;
        }
    }
    // UnitPeak: exp(0) = 1 at the center already.
    return w;
}

double norm_of_difference(const ScoreMap& a, const ScoreMap& b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

}  // namespace

int GaussianSpec::radius() const {
    return truncation_radius >= 0 ? truncation_radius
                                  : static_cast<int>(std::ceil(3.0 * sigma));
}

void GaussianSpec::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error("gaussian sigma must be positive");
    }
}

ScoreMap occupancy_map(const AnnotationFrame& frame, const GroundGrid& grid) {
    ScoreMap map(grid.rows(), grid.cols(), 0.0);
    map.frame = FrameOfReference::top_view(0.0);
    for (const PedestrianAnnotation& ped : frame.pedestrians) {
        const auto [ix, iy] = grid.index_to_cell(ped.grid_index);  // throws OutOfGrid
        map.at(ix, iy) = 1.0;
    }
    return map;
}

ScoreMap point_map(std::span<const Eigen::Vector2d> pixels, int rows, int cols) {
    ScoreMap map(rows, cols, 0.0);
    for (const Eigen::Vector2d& p : pixels) {
        const long u = std::lround(p.x());
        const long v = std::lround(p.y());
        if (u >= 0 && u < cols && v >= 0 && v < rows) {
            map.at(static_cast<int>(v), static_cast<int>(u)) = 1.0;
        }
    }
    return map;
}

ScoreMap gaussian_blur(const ScoreMap& map, const GaussianSpec& spec) {
    spec.validate();
    const std::vector<double> w = kernel_weights(spec);
    const int radius = spec.radius();
    const int rows = map.rows();
    const int cols = map.cols();

    ScoreMap horizontal(rows, cols, 0.0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int cc = c + k;
                if (cc >= 0 && cc < cols) {
                    acc += w[k + radius] * map.at(r, cc);
                }
            }
            horizontal.at(r, c) = acc;
        }
    }

    ScoreMap out(rows, cols, 0.0);
    out.frame = map.frame;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int rr = r + k;
                if (rr >= 0 && rr < rows) {
                    acc += w[k + radius] * horizontal.at(rr, c);
                }
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

double loss_topview(const ScoreMap& pred, const ScoreMap& gt, const GaussianSpec& spec) {
    if (!pred.same_shape(gt)) {
        throw ShapeMismatch("loss_topview: prediction and ground truth shapes differ");
    }
    return norm_of_difference(pred, gaussian_blur(gt, spec));
}

double loss_single_view(const ScoreMap& pred_head, const ScoreMap& pred_foot,
                        const ScoreMap& gt_head, const ScoreMap& gt_foot,
                        const GaussianSpec& spec) {
    if (!pred_head.same_shape(gt_head) || !pred_foot.same_shape(gt_foot)) {
        throw ShapeMismatch("loss_single_view: prediction and ground truth shapes differ");
    }
    return norm_of_difference(pred_head, gaussian_blur(gt_head, spec)) +
           norm_of_difference(pred_foot, gaussian_blur(gt_foot, spec));
}

double loss_overall(double top_loss, std::span<const double> single_losses) {
    if (single_losses.empty()) {
        throw EmptyViewList("loss_overall: no single-view losses");
    }
    double sum = 0.0;
    for (const double l : single_losses) {
        sum += l;
    }
    return top_loss + sum / static_cast<double>(single_losses.size());
}

}  // namespace mview
