#include "mview/eval.hpp"

#include "mview/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mview {

namespace detail {

std::vector<int> solve_assignment(const std::vector<double>& cost, int n, int m) {
    // Hungarian algorithm with row/column potentials; 1-indexed internally
    // with column 0 as the virtual start of the alternating path.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (!used[j]) {
                    const double cur =
                        cost[static_cast<std::size_t>(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta) {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (p[j] > 0) {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    return row_to_col;
}

}  // namespace detail

std::vector<Match> match_frame(const DetectionSet& det, const GroundTruthSet& gt, double radius) {
    if (!(radius > 0.0)) {
        throw Error("match radius must be positive");
    }
    const int nd = static_cast<int>(det.points.size());
    const int ng = static_cast<int>(gt.points.size());
    if (nd == 0 || ng == 0) {
        return {};
    }

    const auto dist = [&](int i, int j) {
        const double dx = det.points[i].x - gt.points[j].x();
        const double dy = det.points[i].y - gt.points[j].y();
        return std::hypot(dx, dy);
    };

    // Square padded cost matrix: each detection and each ground truth owns a
    // private dummy partner of cost U, and pairs beyond the radius cost BIG.
    // With 2U larger than any feasible total distance, minimizing total cost
    // first maximizes the number of real matches and then minimizes their
    // summed distance; BIG is large enough that infeasible pairs are never
    // chosen (the all-dummy completion is always cheaper).
    const int n = nd + ng;
    const double penalty_u = 0.5 * std::min(nd, ng) * radius + radius;
    const double big = n * (penalty_u + radius) + 1.0;

    std::vector<double> cost(static_cast<std::size_t>(n) * n, big);
    for (int i = 0; i < nd; ++i) {
        for (int j = 0; j < ng; ++j) {
            const double d = dist(i, j);
            if (d <= radius) {
                cost[static_cast<std::size_t>(i) * n + j] = d;
            }
        }
        cost[static_cast<std::size_t>(i) * n + ng + i] = penalty_u;
    }
    for (int j = 0; j < ng; ++j) {
        cost[static_cast<std::size_t>(nd + j) * n + j] = penalty_u;
    }
    for (int i = nd; i < n; ++i) {
        for (int j = ng; j < n; ++j) {
            cost[static_cast<std::size_t>(i) * n + j] = 0.0;
        }
    }

    const std::vector<int> assignment = detail::solve_assignment(cost, n, n);

    std::vector<Match> matches;
    for (int i = 0; i < nd; ++i) {
        const int j = assignment[i];
        if (j >= 0 && j < ng) {
            const double d = dist(i, j);
            if (d <= radius) {
                matches.push_back({i, j, d});
            }
        }
    }
    std::sort(matches.begin(), matches.end(),
              [](const Match& a, const Match& b) { return a.det_index < b.det_index; });
    return matches;
}

namespace {

void fill_ratios(long tp, long fp, long fn, long gt_total, long det_total,
                 double matched_quality, double& moda, double& modp, double& precision,
                 double& recall) {
    if (gt_total > 0) {
        moda = 1.0 - static_cast<double>(fp + fn) / static_cast<double>(gt_total);
    } else {
        moda = fp == 0 ? 1.0 : 0.0;
    }
    modp = tp > 0 ? matched_quality / static_cast<double>(tp) : 0.0;
    if (det_total > 0) {
        precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
        precision = gt_total == 0 ? 1.0 : 0.0;
    }
    recall = gt_total > 0 ? static_cast<double>(tp) / static_cast<double>(gt_total) : 1.0;
}

}  // namespace

EvalReport score_frames(std::span<const std::pair<DetectionSet, GroundTruthSet>> frames,
                        double radius) {
    EvalReport report;
    report.radius = radius;

    double quality_total = 0.0;
    for (const auto& [det, gt] : frames) {
        if (det.frame_id != gt.frame_id) {
            throw FrameMismatch("detections are frame " + std::to_string(det.frame_id) +
                                " but ground truth is frame " + std::to_string(gt.frame_id));
        }
        const std::vector<Match> matches = match_frame(det, gt, radius);

        FrameCounts fc;
        fc.frame_id = det.frame_id;
        fc.tp = static_cast<int>(matches.size());
        fc.fp = static_cast<int>(det.points.size()) - fc.tp;
        fc.fn = static_cast<int>(gt.points.size()) - fc.tp;
        for (const Match& m : matches) {
            fc.matched_quality += 1.0 - m.distance / radius;
        }
        fill_ratios(fc.tp, fc.fp, fc.fn, static_cast<long>(gt.points.size()),
                    static_cast<long>(det.points.size()), fc.matched_quality, fc.moda, fc.modp,
                    fc.precision, fc.recall);

        report.total_gt += static_cast<long>(gt.points.size());
        report.total_det += static_cast<long>(det.points.size());
        report.tp += fc.tp;
        report.fp += fc.fp;
        report.fn += fc.fn;
        quality_total += fc.matched_quality;
        report.per_frame.push_back(fc);
    }

    fill_ratios(report.tp, report.fp, report.fn, report.total_gt, report.total_det,
                quality_total, report.moda, report.modp, report.precision, report.recall);
    return report;
}

namespace {

bool inside_aoi(const GroundGrid& grid, double x, double y) {
    const double fx = (x - grid.origin().x()) / grid.cell_size();
    const double fy = (y - grid.origin().y()) / grid.cell_size();
    return fx >= 0.0 && fy >= 0.0 && fx <= grid.nx() && fy <= grid.ny();
}

}  // namespace

DetectionSet filter_to_aoi(const DetectionSet& det, const GroundGrid& grid) {
    DetectionSet out;
    out.frame_id = det.frame_id;
    for (const DetectionPoint& p : det.points) {
        if (inside_aoi(grid, p.x, p.y)) {
            out.points.push_back(p);
        }
    }
    return out;
}

GroundTruthSet filter_to_aoi(const GroundTruthSet& gt, const GroundGrid& grid) {
    GroundTruthSet out;
    out.frame_id = gt.frame_id;
    for (const Eigen::Vector2d& p : gt.points) {
        if (inside_aoi(grid, p.x(), p.y())) {
            out.points.push_back(p);
        }
    }
    return out;
}

}  // namespace mview
