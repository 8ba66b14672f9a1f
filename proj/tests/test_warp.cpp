#include "mview/warp.hpp"

#include "mview/error.hpp"
#include "mview/rng.hpp"

#include "oracles.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace mview;

namespace {

PlaneHomography pixel_warp(const Eigen::Matrix3d& m) {
    PlaneHomography hom;
    hom.h_matrix = m;
    hom.direction = HomographyDirection::CamToTop;
    return hom;
}

}  // namespace

TEST_SUITE_BEGIN("warp");

TEST_CASE("identity warp returns the input bitwise") {
    Rng rng(7);
    const ScoreMap in = helpers::random_map(rng, 37, 53);
    const ScoreMap out = warp_map(in, pixel_warp(Eigen::Matrix3d::Identity()), 37, 53);
    CHECK(helpers::maps_equal_bitwise(in, out));
}

TEST_CASE("integer translation matches the index-shift oracle") {
    Rng rng(8);
    const ScoreMap in = helpers::random_map(rng, 24, 31);
    const int dx = 5, dy = -3;
    Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
    t(0, 2) = dx;
    t(1, 2) = dy;
    const ScoreMap out = warp_map(in, pixel_warp(t), 24, 31);
    const ScoreMap expected = oracle::shift_map(in, dx, dy);
    CHECK(helpers::maps_equal_bitwise(out, expected));
}

TEST_CASE("singular homography is rejected") {
    const ScoreMap in(8, 8, 1.0);
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 0) = 1.0;
    CHECK_THROWS_AS(warp_map(in, pixel_warp(m), 8, 8), SingularPlane);
}

TEST_CASE("frame direction consistency is enforced") {
    ScoreMap cam_map(8, 8, 0.0);
    cam_map.frame = FrameOfReference::camera(3);
    PlaneHomography wrong = pixel_warp(Eigen::Matrix3d::Identity());
    wrong.direction = HomographyDirection::TopToCam;
    CHECK_THROWS_AS(warp_map(cam_map, wrong, 8, 8), ShapeMismatch);
    wrong.direction = HomographyDirection::CamToTop;
    CHECK_NOTHROW(warp_map(cam_map, wrong, 8, 8));
}

TEST_CASE("delta map mass stays in the bilinear neighborhood of the mapped point") {
    // Contractive map (input -> output scale 0.8): the sampling points of
    // adjacent output pixels are > 1 input pixel apart, so the total mass
    // picked up from a single input delta cannot exceed 1.
    ScoreMap in(40, 40, 0.0);
    const int qx = 17, qy = 23;
    in.at(qy, qx) = 1.0;

    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = 0.8;
    m(1, 1) = 0.8;
    m(0, 2) = 1.3;
    m(1, 2) = -0.7;
    const ScoreMap out = warp_map(in, pixel_warp(m), 40, 40);

    // Mapped location of the delta.
    const double px = 0.8 * qx + 1.3;
    const double py = 0.8 * qy - 0.7;

    double mass = 0.0;
    for (int r = 0; r < out.rows(); ++r) {
        for (int c = 0; c < out.cols(); ++c) {
            if (out.at(r, c) != 0.0) {
                CHECK(std::abs(c - px) < 2.0);
                CHECK(std::abs(r - py) < 2.0);
                mass += out.at(r, c);
            }
        }
    }
    CHECK(mass > 0.0);
    CHECK(mass <= 1.0 + 1e-12);
}

TEST_CASE("warp is linear in map values and preserves zero") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const ScoreMap a = helpers::random_map(rng, 64, 64);
        const ScoreMap b = helpers::random_map(rng, 64, 64);
        const double ca = rng.uniform(-2.0, 2.0);
        const double cb = rng.uniform(-2.0, 2.0);

        // Mild random perspective around the identity.
        Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
        m(0, 0) = 1.0 + rng.uniform(-0.2, 0.2);
        m(1, 1) = 1.0 + rng.uniform(-0.2, 0.2);
        m(0, 1) = rng.uniform(-0.1, 0.1);
        m(1, 0) = rng.uniform(-0.1, 0.1);
        m(0, 2) = rng.uniform(-4.0, 4.0);
        m(1, 2) = rng.uniform(-4.0, 4.0);
        m(2, 0) = rng.uniform(-1e-3, 1e-3);
        m(2, 1) = rng.uniform(-1e-3, 1e-3);

        ScoreMap combined(64, 64);
        for (std::size_t i = 0; i < combined.data().size(); ++i) {
            combined.data()[i] = ca * a.data()[i] + cb * b.data()[i];
        }

        const ScoreMap wa = warp_map(a, pixel_warp(m), 64, 64);
        const ScoreMap wb = warp_map(b, pixel_warp(m), 64, 64);
        const ScoreMap wc = warp_map(combined, pixel_warp(m), 64, 64);

        double worst = 0.0;
        for (std::size_t i = 0; i < wc.data().size(); ++i) {
            worst = std::max(worst,
                             std::abs(wc.data()[i] - (ca * wa.data()[i] + cb * wb.data()[i])));
        }
        CHECK(worst < 1e-9);

        const ScoreMap zero(64, 64, 0.0);
        const ScoreMap wz = warp_map(zero, pixel_warp(m), 64, 64);
        CHECK(wz.sum() == 0.0);
    }
}

TEST_CASE("mass bound holds for contractive warps") {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const ScoreMap in = helpers::random_map(rng, 48, 48);
        const double sx = rng.uniform(0.3, 1.0);  // shrink: source spacing >= 1
        const double sy = rng.uniform(0.3, 1.0);
        Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
        m(0, 0) = sx;
        m(1, 1) = sy;
        m(0, 2) = rng.uniform(-3.0, 3.0);
        m(1, 2) = rng.uniform(-3.0, 3.0);
        const ScoreMap out = warp_map(in, pixel_warp(m), 48, 48);
        CHECK(out.sum() <= in.sum() + 1e-9);
    }
}

TEST_CASE("cheirality: cells behind the camera stay zero") {
    // Camera standing inside the AOI looking along +x. Ground cells behind it
    // have negative projective depth; a homography alone would mirror them
    // into the image.
    const GroundGrid grid({0.0, 0.0}, {20.0, 20.0}, 100, 100);
    const CameraCalibration cam =
        make_lookat_calibration(1, {10.0, 10.0, 2.0}, {19.0, 10.0, 0.0}, 300.0, 640, 480);

    ScoreMap ones(480, 640, 1.0);
    ones.frame = FrameOfReference::camera(1);

    const ProjectionMatrix proj = build_projection(cam);
    const PlaneHomography cam_to_top =
        pixel_homography(ground_homography(proj, HomographyDirection::CamToTop), grid);
    const ScoreMap top = warp_map(ones, cam_to_top, grid.rows(), grid.cols());

    // Behind the camera: x < 10 m. In front, at ground visible in the image.
    const auto [bx, by] = grid.index_to_cell(grid.world_to_index({4.0, 10.0}));
    CHECK(top.at(bx, by) == 0.0);
    const auto [fx, fy] = grid.index_to_cell(grid.world_to_index({15.0, 10.0}));
    CHECK(top.at(fx, fy) > 0.0);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("project_multilayer");

namespace {

std::vector<CameraCalibration> two_orthogonal_cameras() {
    return {make_lookat_calibration(1, {-6.0, 5.0, 3.0}, {5.0, 5.0, 0.0}, 350.0, 640, 480),
            make_lookat_calibration(2, {5.0, -6.0, 3.0}, {5.0, 5.0, 0.0}, 350.0, 640, 480)};
}

}  // namespace

TEST_CASE("stack shape and ordering are camera-major") {
    Rng rng(12);
    const GroundGrid grid({0.0, 0.0}, {10.0, 10.0}, 50, 50);
    const auto calibs = two_orthogonal_cameras();
    std::vector<ScoreMap> maps;
    for (const auto& c : calibs) {
        maps.push_back(helpers::random_map(rng, c.image_height, c.image_width));
        maps.back().frame = FrameOfReference::camera(c.camera_id);
    }
    const std::vector<double> heights{0.0, 0.15, 0.30, 0.60, 0.90};

    const ProjectionStack stack = project_multilayer(maps, calibs, grid, heights);
    CHECK(stack.layer_count() == 10);
    CHECK(stack.source_cameras == std::vector<int>{1, 2});
    for (int c = 0; c < 2; ++c) {
        for (int h = 0; h < 5; ++h) {
            const ScoreMap& layer = stack.layer(c, h);
            CHECK(layer.rows() == grid.rows());
            CHECK(layer.cols() == grid.cols());
            CHECK(layer.frame.kind == FrameOfReference::Kind::TopView);
            CHECK(layer.frame.height_m == heights[h]);
        }
    }
}

TEST_CASE("seven cameras and five heights give 35 layers") {
    const auto calibs = helpers::wildtrack_cameras(96, 54);
    const GroundGrid grid = helpers::wildtrack_grid();
    std::vector<ScoreMap> maps;
    for (const auto& c : calibs) {
        maps.emplace_back(c.image_height, c.image_width, 0.5);
    }
    const std::vector<double> heights{0.0, 0.15, 0.30, 0.60, 0.90};
    const ProjectionStack stack = project_multilayer(maps, calibs, grid, heights);
    CHECK(stack.layer_count() == 35);
}

TEST_CASE("each layer depends only on its source camera") {
    Rng rng(13);
    const GroundGrid grid({0.0, 0.0}, {10.0, 10.0}, 40, 40);
    const auto calibs = two_orthogonal_cameras();
    std::vector<ScoreMap> maps;
    for (const auto& c : calibs) {
        maps.push_back(helpers::random_map(rng, c.image_height, c.image_width));
    }
    const std::vector<double> heights{0.0, 0.45};

    const ProjectionStack before = project_multilayer(maps, calibs, grid, heights);
    maps[1] = helpers::random_map(rng, calibs[1].image_height, calibs[1].image_width);
    const ProjectionStack after = project_multilayer(maps, calibs, grid, heights);

    for (int h = 0; h < 2; ++h) {
        CHECK(helpers::maps_equal_bitwise(before.layer(0, h), after.layer(0, h)));
        CHECK_FALSE(helpers::maps_equal_bitwise(before.layer(1, h), after.layer(1, h)));
    }
}

TEST_CASE("stack layers agree with explicit warp_map calls") {
    Rng rng(14);
    const GroundGrid grid({0.0, 0.0}, {10.0, 10.0}, 40, 40);
    const auto calibs = two_orthogonal_cameras();
    std::vector<ScoreMap> maps;
    for (const auto& c : calibs) {
        maps.push_back(helpers::random_map(rng, c.image_height, c.image_width));
        maps.back().frame = FrameOfReference::camera(c.camera_id);
    }
    const std::vector<double> heights{0.0, 0.6};
    const ProjectionStack stack = project_multilayer(maps, calibs, grid, heights);

    for (std::size_t c = 0; c < calibs.size(); ++c) {
        const ProjectionMatrix proj = build_projection(calibs[c]);
        for (std::size_t h = 0; h < heights.size(); ++h) {
            const PlaneHomography cam_to_top = pixel_homography(
                plane_homography(proj, heights[h], HomographyDirection::CamToTop), grid);
            const ScoreMap direct = warp_map(maps[c], cam_to_top, grid.rows(), grid.cols());
            CHECK(helpers::max_abs_difference(direct,
                                              stack.layer(static_cast<int>(c),
                                                          static_cast<int>(h))) < 1e-9);
        }
    }
}

TEST_CASE("empty heights and mismatched map counts are rejected") {
    const auto calibs = two_orthogonal_cameras();
    std::vector<ScoreMap> maps(1, ScoreMap(480, 640, 0.0));
    const GroundGrid grid({0.0, 0.0}, {10.0, 10.0}, 40, 40);
    CHECK_THROWS_AS(project_multilayer(maps, calibs, grid, std::vector<double>{0.0}),
                    SizeMismatch);
    maps.emplace_back(480, 640, 0.0);
    CHECK_THROWS_AS(project_multilayer(maps, calibs, grid, std::vector<double>{}),
                    ShapeMismatch);
}

TEST_SUITE_END();
