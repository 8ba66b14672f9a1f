#include "mview/augment.hpp"

#include "mview/error.hpp"

#include "oracles.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace mview;

namespace {

std::vector<ImageU8> blank_frames(std::span<const CameraCalibration> calibs,
                                  unsigned char fill = 200, int channels = 1) {
    std::vector<ImageU8> images;
    for (const auto& c : calibs) {
        images.emplace_back(c.image_height, c.image_width, channels, fill);
    }
    return images;
}

bool records_equal(const std::vector<OcclusionRecord>& a,
                   const std::vector<OcclusionRecord>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].grid_index != b[i].grid_index || a[i].per_view.size() != b[i].per_view.size()) {
            return false;
        }
        for (std::size_t c = 0; c < a[i].per_view.size(); ++c) {
            const ViewRect& x = a[i].per_view[c];
            const ViewRect& y = b[i].per_view[c];
            if (x.camera_id != y.camera_id || x.u_foot != y.u_foot || x.v_foot != y.v_foot ||
                x.height_px != y.height_px || x.width_px != y.width_px ||
                x.visible != y.visible || x.clipped != y.clipped || x.u0 != y.u0 ||
                x.u1 != y.u1 || x.v0 != y.v0 || x.v1 != y.v1) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("augment");

TEST_CASE("projected height matches the similar-triangles oracle") {
    // Horizontal camera 2 m in front of the occluder, fronto-parallel case.
    const double f = 400.0;
    const auto cam = make_lookat_calibration(1, {0.0, 0.0, 1.0}, {10.0, 0.0, 1.0}, f, 1920, 1080);
    const GroundGrid grid({1.95, -0.05}, {0.1, 0.1}, 1, 1);  // single cell at (2, 0)

    const std::vector<CameraCalibration> calibs{cam};
    const auto rects = rect_for_location(calibs, grid, 1, 1.8, 0.4);
    REQUIRE(rects.size() == 1);
    const ViewRect& r = rects[0];
    CHECK(r.visible);
    const double expected = oracle::fronto_parallel_height_px(f, 1.8, 2.0);
    CHECK(std::abs(r.height_px - expected) < 1e-9);
    CHECK(std::abs(r.width_px - 0.4 * expected) < 1e-9);
    CHECK(r.u_foot == doctest::Approx(960.0).epsilon(1e-12));
}

TEST_CASE("location behind the camera is invisible and paints nothing") {
    const auto cam = make_lookat_calibration(1, {0.0, 0.0, 2.0}, {10.0, 0.0, 0.0}, 400, 640, 480);
    const GroundGrid grid({-2.05, -0.05}, {0.1, 0.1}, 1, 1);  // cell at (-2, 0)
    const std::vector<CameraCalibration> calibs{cam};

    const auto rects = rect_for_location(calibs, grid, 1, 1.8, 0.4);
    REQUIRE(rects.size() == 1);
    CHECK_FALSE(rects[0].visible);
    CHECK(rects[0].empty());

    ImageU8 image(480, 640, 1, 128);
    paint_rect(image, rects[0], 0);
    CHECK(image == ImageU8(480, 640, 1, 128));
}

TEST_CASE("zero occluder height gives an empty rectangle") {
    const auto cam = make_lookat_calibration(1, {-5.0, 0.0, 3.0}, {2.0, 0.0, 0.0}, 400, 640, 480);
    const GroundGrid grid({1.95, -0.05}, {0.1, 0.1}, 1, 1);
    const std::vector<CameraCalibration> calibs{cam};

    const auto rects = rect_for_location(calibs, grid, 1, 0.0, 0.4);
    REQUIRE(rects.size() == 1);
    CHECK(rects[0].visible);
    CHECK(rects[0].height_px == 0.0);
    CHECK(rects[0].empty());
}

TEST_CASE("visible rectangles keep width = alpha * height") {
    const auto calibs = helpers::wildtrack_cameras();
    const GroundGrid grid = helpers::wildtrack_grid();
    OcclusionConfig config;
    config.width_ratio_alpha = 0.4;
    Rng rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const int index = static_cast<int>(rng.uniform_int(1, grid.size()));
        for (const ViewRect& r : rect_for_location(calibs, grid, index, config)) {
            if (r.visible) {
                CHECK(r.height_px > 0.0);
                CHECK(r.width_px == doctest::Approx(0.4 * r.height_px).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("p = 0 returns bit-identical images and no records") {
    const auto calibs = helpers::wildtrack_cameras();
    const auto images = blank_frames(calibs);
    OcclusionConfig config;
    config.probability_p = 0.0;
    config.n_occlusions = 25;
    config.rng_seed = 99;

    const OccludedFrame out = occlude_frame(images, calibs, helpers::wildtrack_grid(), config);
    CHECK_FALSE(out.applied);
    CHECK(out.records.empty());
    REQUIRE(out.images.size() == images.size());
    for (std::size_t c = 0; c < images.size(); ++c) {
        CHECK(out.images[c] == images[c]);
    }
}

TEST_CASE("wildtrack-sized run places exactly n occlusions with 1 m separation") {
    const auto calibs = helpers::wildtrack_cameras();
    const GroundGrid grid = helpers::wildtrack_grid();
    const auto images = blank_frames(calibs);
    OcclusionConfig config;
    config.n_occlusions = 25;
    config.min_separation_d = 1.0;
    config.rng_seed = 2024;

    const OccludedFrame out = occlude_frame(images, calibs, grid, config);
    CHECK(out.applied);
    REQUIRE(out.records.size() == 25);
    for (std::size_t a = 0; a < out.records.size(); ++a) {
        for (std::size_t b = a + 1; b < out.records.size(); ++b) {
            CHECK((out.records[a].world - out.records[b].world).norm() >= 1.0);
        }
    }
}

TEST_CASE("equal seeds give byte-identical outputs") {
    const auto calibs = helpers::wildtrack_cameras();
    const GroundGrid grid = helpers::wildtrack_grid();
    const auto images = blank_frames(calibs);
    OcclusionConfig config;
    config.n_occlusions = 2;
    config.rng_seed = 31337;

    const OccludedFrame first = occlude_frame(images, calibs, grid, config);
    const OccludedFrame second = occlude_frame(images, calibs, grid, config);
    CHECK(first.applied);
    CHECK(first.images == second.images);
    CHECK(records_equal(first.records, second.records));

    config.rng_seed = 31338;
    const OccludedFrame third = occlude_frame(images, calibs, grid, config);
    CHECK_FALSE(records_equal(first.records, third.records));
}

TEST_CASE("painted pixels are exactly the union of visible rectangles") {
    // Small images so the check can be exhaustive.
    std::vector<CameraCalibration> calibs{
        make_lookat_calibration(1, {-4.0, 2.0, 2.5}, {2.0, 2.0, 0.0}, 60.0, 64, 48),
        make_lookat_calibration(2, {2.0, -4.0, 2.5}, {2.0, 2.0, 0.0}, 60.0, 64, 48)};
    const GroundGrid grid({0.0, 0.0}, {4.0, 4.0}, 8, 8);
    const auto images = blank_frames(calibs, 200);

    OcclusionConfig config;
    config.n_occlusions = 3;
    config.fill_value_omega = 7;
    config.rng_seed = 5;
    config.max_rejections = 1000;

    const OccludedFrame out = occlude_frame(images, calibs, grid, config);
    REQUIRE(out.applied);
    REQUIRE(out.records.size() == 3);

    for (std::size_t c = 0; c < calibs.size(); ++c) {
        for (int v = 0; v < 48; ++v) {
            for (int u = 0; u < 64; ++u) {
                bool in_union = false;
                for (const OcclusionRecord& rec : out.records) {
                    const ViewRect& r = rec.per_view[c];
                    if (r.visible && !r.empty() && u >= r.u0 && u <= r.u1 && v >= r.v0 &&
                        v <= r.v1) {
                        in_union = true;
                    }
                }
                CHECK(out.images[c].at(v, u) == (in_union ? 7 : 200));
            }
        }
    }
}

TEST_CASE("foot pixels map back to the occluded grid cell") {
    const auto calibs = helpers::wildtrack_cameras();
    const GroundGrid grid = helpers::wildtrack_grid();
    const auto images = blank_frames(calibs);
    OcclusionConfig config;
    config.n_occlusions = 10;
    config.rng_seed = 77;

    const OccludedFrame out = occlude_frame(images, calibs, grid, config);
    REQUIRE(out.records.size() == 10);

    std::vector<PlaneHomography> cam_to_top;
    for (const auto& c : calibs) {
        cam_to_top.push_back(
            ground_homography(build_projection(c), HomographyDirection::CamToTop));
    }
    for (const OcclusionRecord& rec : out.records) {
        for (std::size_t c = 0; c < rec.per_view.size(); ++c) {
            const ViewRect& r = rec.per_view[c];
            if (!r.visible) {
                continue;
            }
            const Eigen::Vector3d w = cam_to_top[c].apply({r.u_foot, r.v_foot});
            REQUIRE(w.z() != 0.0);
            const Eigen::Vector2d back(w.x() / w.z(), w.y() / w.z());
            CHECK((back - rec.world).norm() <= grid.cell_size());
        }
    }
}

TEST_CASE("occlusion count is n on success and 0 when skipped") {
    const auto calibs = helpers::wildtrack_cameras();
    const GroundGrid grid = helpers::wildtrack_grid();
    const auto images = blank_frames(calibs);

    OcclusionConfig config;
    config.rng_seed = 1;
    for (int n : {0, 1, 5, 25}) {
        config.n_occlusions = n;
        config.probability_p = 1.0;
        CHECK(occlude_frame(images, calibs, grid, config).records.size() ==
              static_cast<std::size_t>(n));
        config.probability_p = 0.0;
        CHECK(occlude_frame(images, calibs, grid, config).records.empty());
    }
}

TEST_CASE("placement gives up when the AOI cannot hold n separated occluders") {
    std::vector<CameraCalibration> calibs{
        make_lookat_calibration(1, {-4.0, 0.0, 2.5}, {0.15, 0.15, 0.0}, 60.0, 64, 48)};
    const GroundGrid grid({0.0, 0.0}, {0.3, 0.3}, 3, 3);  // 0.3 m wide: one occluder max
    const auto images = blank_frames(calibs);

    OcclusionConfig config;
    config.n_occlusions = 2;
    config.min_separation_d = 1.0;
    config.max_rejections = 50;
    config.rng_seed = 9;

    CHECK_THROWS_AS(occlude_frame(images, calibs, grid, config), PlacementExhausted);
}

TEST_CASE("image size mismatches are rejected") {
    const auto calibs = helpers::wildtrack_cameras();
    const GroundGrid grid = helpers::wildtrack_grid();
    OcclusionConfig config;

    auto images = blank_frames(calibs);
    images.pop_back();
    CHECK_THROWS_AS(occlude_frame(images, calibs, grid, config), SizeMismatch);

    images = blank_frames(calibs);
    images[2] = ImageU8(100, 100, 1, 0);
    CHECK_THROWS_AS(occlude_frame(images, calibs, grid, config), SizeMismatch);
}

TEST_CASE("config validation") {
    OcclusionConfig config;
    config.probability_p = 1.5;
    CHECK_THROWS_AS(config.validate(), Error);
    config = {};
    config.n_occlusions = -1;
    CHECK_THROWS_AS(config.validate(), Error);
    config = {};
    config.width_ratio_alpha = 1.0;
    CHECK_THROWS_AS(config.validate(), Error);
    config = {};
    config.min_separation_d = 0.0;
    CHECK_THROWS_AS(config.validate(), Error);
    config = {};
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("three-channel images are painted across all channels") {
    std::vector<CameraCalibration> calibs{
        make_lookat_calibration(1, {-4.0, 2.0, 2.5}, {2.0, 2.0, 0.0}, 60.0, 64, 48)};
    const GroundGrid grid({0.0, 0.0}, {4.0, 4.0}, 8, 8);
    const auto images = blank_frames(calibs, 200, 3);

    OcclusionConfig config;
    config.n_occlusions = 1;
    config.fill_value_omega = 9;
    config.rng_seed = 4;

    const OccludedFrame out = occlude_frame(images, calibs, grid, config);
    REQUIRE(out.records.size() == 1);
    const ViewRect& r = out.records[0].per_view[0];
    if (r.visible && !r.empty()) {
        for (int ch = 0; ch < 3; ++ch) {
            CHECK(out.images[0].at(r.v0, r.u0, ch) == 9);
        }
    }
}

TEST_SUITE_END();
