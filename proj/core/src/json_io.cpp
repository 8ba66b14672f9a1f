#include "mview/json_io.hpp"

#include "mview/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mview {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

// Array files may be a JSON array, an object wrapping one under `key`, or
// JSONL with one object per line.
json parse_records(const std::filesystem::path& path, const char* key) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return json::array();
    }
    try {
        if (text[first] == '[') {
            return json::parse(text);
        }
        if (text[first] == '{') {
            json j = json::parse(text, nullptr, true, /*ignore_trailing=*/false);
            if (j.contains(key)) {
                return j.at(key);
            }
            // Fall through: treat as JSONL (the parse above would have thrown
            // on multi-line input, so this is a single record).
            return json::array({j});
        }
    } catch (const json::exception&) {
        // Multiple concatenated objects: parse line by line below.
    }

    json records = json::array();
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) {
            continue;
        }
        try {
            records.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

void write_jsonl(const std::filesystem::path& path, const json& records) {
    std::ostringstream out;
    for (const json& rec : records) {
        out << rec.dump() << '\n';
    }
    write_text(path, out.str());
}

template <typename Matrix>
json matrix_to_json(const Matrix& m) {
    json j = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            j.push_back(m(r, c));
        }
    }
    return j;
}

template <typename Matrix>
void matrix_from_json(const json& j, Matrix& m, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != m.rows() * m.cols()) {
        throw ParseError(what + ": expected " + std::to_string(m.rows() * m.cols()) +
                         " numbers");
    }
    int k = 0;
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            m(r, c) = j.at(k++).get<double>();
        }
    }
}

CameraCalibration calibration_from_json(const json& j) {
    CameraCalibration calib;
    try {
        calib.camera_id = j.at("id").get<int>();
        matrix_from_json(j.at("K"), calib.intrinsics, "K");
        matrix_from_json(j.at("R"), calib.rotation, "R");
        matrix_from_json(j.at("t"), calib.translation, "t");
        calib.image_width = j.at("width").get<int>();
        calib.image_height = j.at("height").get<int>();
        if (j.contains("dist")) {
            for (const json& d : j.at("dist")) {
                if (d.get<double>() != 0.0) {
                    throw InvalidCalibration(
                        "camera " + std::to_string(calib.camera_id) +
                        ": nonzero distortion; rectify images and zero the block first");
                }
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("calibration: ") + e.what());
    }
    calib.validate();
    return calib;
}

json calibration_to_json(const CameraCalibration& calib) {
    return json{{"id", calib.camera_id},
                {"K", matrix_to_json(calib.intrinsics)},
                {"R", matrix_to_json(calib.rotation)},
                {"t", matrix_to_json(calib.translation)},
                {"width", calib.image_width},
                {"height", calib.image_height},
                {"dist", json::array({0.0, 0.0, 0.0, 0.0, 0.0})}};
}

GroundGrid grid_from_json(const json& j) {
    try {
        const json& origin = j.at("origin");
        const json& extent = j.at("extent");
        const json& shape = j.at("shape");
        return GroundGrid({origin.at(0).get<double>(), origin.at(1).get<double>()},
                          {extent.at(0).get<double>(), extent.at(1).get<double>()},
                          shape.at(0).get<int>(), shape.at(1).get<int>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("grid: ") + e.what());
    }
}

json grid_to_json(const GroundGrid& grid) {
    return json{{"origin", {grid.origin().x(), grid.origin().y()}},
                {"extent", {grid.extent().x(), grid.extent().y()}},
                {"shape", {grid.nx(), grid.ny()}}};
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

std::vector<CameraCalibration> load_calibrations(const std::filesystem::path& path) {
    const json records = parse_records(path, "cameras");
    std::vector<CameraCalibration> calibs;
    for (const json& j : records) {
        calibs.push_back(calibration_from_json(j));
    }
    if (calibs.empty()) {
        throw ParseError(path.string() + ": no cameras");
    }
    return calibs;
}

void save_calibrations(const std::filesystem::path& path,
                       std::span<const CameraCalibration> calibs) {
    json arr = json::array();
    for (const CameraCalibration& c : calibs) {
        arr.push_back(calibration_to_json(c));
    }
    write_text(path, arr.dump(2) + "\n");
}

GroundGrid load_grid(const std::filesystem::path& path) {
    return grid_from_json(parse_file(path));
}

void save_grid(const std::filesystem::path& path, const GroundGrid& grid) {
    write_text(path, grid_to_json(grid).dump(2) + "\n");
}

std::vector<AnnotationFrame> load_annotations(const std::filesystem::path& path) {
    const json records = parse_records(path, "frames");
    std::vector<AnnotationFrame> frames;
    try {
        for (const json& jf : records) {
            AnnotationFrame frame;
            frame.frame_id = jf.at("frame_id").get<int>();
            for (const json& jp : jf.value("pedestrians", json::array())) {
                PedestrianAnnotation ped;
                ped.person_id = jp.at("id").get<int>();
                ped.grid_index = jp.at("grid_index").get<int>();
                for (const json& jv : jp.value("views", json::array())) {
                    ViewAnnotation view;
                    view.camera_id = jv.at("cam").get<int>();
                    view.head = {jv.at("head").at(0).get<double>(),
                                 jv.at("head").at(1).get<double>()};
                    view.foot = {jv.at("foot").at(0).get<double>(),
                                 jv.at("foot").at(1).get<double>()};
                    view.visible = jv.value("visible", true);
                    ped.views.push_back(view);
                }
                frame.pedestrians.push_back(std::move(ped));
            }
            frames.push_back(std::move(frame));
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return frames;
}

void save_annotations(const std::filesystem::path& path,
                      std::span<const AnnotationFrame> frames) {
    json records = json::array();
    for (const AnnotationFrame& frame : frames) {
        json jf{{"frame_id", frame.frame_id}, {"pedestrians", json::array()}};
        for (const PedestrianAnnotation& ped : frame.pedestrians) {
            json jp{{"id", ped.person_id},
                    {"grid_index", ped.grid_index},
                    {"views", json::array()}};
            for (const ViewAnnotation& view : ped.views) {
                jp["views"].push_back(json{{"cam", view.camera_id},
                                           {"head", {view.head.x(), view.head.y()}},
                                           {"foot", {view.foot.x(), view.foot.y()}},
                                           {"visible", view.visible}});
            }
            jf["pedestrians"].push_back(std::move(jp));
        }
        records.push_back(std::move(jf));
    }
    write_jsonl(path, records);
}

std::vector<DetectionSet> load_detections(const std::filesystem::path& path) {
    const json records = parse_records(path, "frames");
    std::vector<DetectionSet> frames;
    try {
        for (const json& jf : records) {
            DetectionSet set;
            set.frame_id = jf.at("frame_id").get<int>();
            for (const json& jp : jf.value("points", json::array())) {
                DetectionPoint p;
                p.x = jp.at(0).get<double>();
                p.y = jp.at(1).get<double>();
                p.score = jp.size() > 2 ? jp.at(2).get<double>() : 1.0;
                if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.score)) {
                    throw ParseError("non-finite detection coordinates");
                }
                set.points.push_back(p);
            }
            frames.push_back(std::move(set));
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return frames;
}

void save_detections(const std::filesystem::path& path, std::span<const DetectionSet> frames) {
    json records = json::array();
    for (const DetectionSet& set : frames) {
        json points = json::array();
        for (const DetectionPoint& p : set.points) {
            points.push_back(json::array({p.x, p.y, p.score}));
        }
        records.push_back(json{{"frame_id", set.frame_id}, {"points", std::move(points)}});
    }
    write_jsonl(path, records);
}

std::vector<GroundTruthSet> load_ground_truth(const std::filesystem::path& path) {
    const json records = parse_records(path, "frames");
    std::vector<GroundTruthSet> frames;
    try {
        for (const json& jf : records) {
            GroundTruthSet set;
            set.frame_id = jf.at("frame_id").get<int>();
            for (const json& jp : jf.value("points", json::array())) {
                const double x = jp.at(0).get<double>();
                const double y = jp.at(1).get<double>();
                if (!std::isfinite(x) || !std::isfinite(y)) {
                    throw ParseError("non-finite ground-truth coordinates");
                }
                set.points.emplace_back(x, y);
            }
            frames.push_back(std::move(set));
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return frames;
}

void save_ground_truth(const std::filesystem::path& path,
                       std::span<const GroundTruthSet> frames) {
    json records = json::array();
    for (const GroundTruthSet& set : frames) {
        json points = json::array();
        for (const Eigen::Vector2d& p : set.points) {
            points.push_back(json::array({p.x(), p.y()}));
        }
        records.push_back(json{{"frame_id", set.frame_id}, {"points", std::move(points)}});
    }
    write_jsonl(path, records);
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
    const json j = parse_file(path);
    SceneSpec spec;
    try {
        for (const json& jc : j.at("cameras")) {
            spec.cameras.push_back(calibration_from_json(jc));
        }
        spec.grid = grid_from_json(j.at("grid"));
        for (const json& jp : j.value("pedestrians", json::array())) {
            PedestrianSpec ped;
            ped.grid_index = jp.at("grid_index").get<int>();
            ped.height_m = jp.value("height", 1.80);
            ped.width_ratio = jp.value("width_ratio", 0.4);
            spec.pedestrians.push_back(ped);
        }
        spec.background = j.value("background", 0.0);
        spec.foreground = j.value("foreground", 1.0);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    spec.validate();
    return spec;
}

void save_scene_spec(const std::filesystem::path& path, const SceneSpec& spec) {
    json cameras = json::array();
    for (const CameraCalibration& c : spec.cameras) {
        cameras.push_back(calibration_to_json(c));
    }
    json pedestrians = json::array();
    for (const PedestrianSpec& p : spec.pedestrians) {
        pedestrians.push_back(json{{"grid_index", p.grid_index},
                                   {"height", p.height_m},
                                   {"width_ratio", p.width_ratio}});
    }
    const json j{{"cameras", std::move(cameras)},
                 {"grid", grid_to_json(spec.grid)},
                 {"pedestrians", std::move(pedestrians)},
                 {"background", spec.background},
                 {"foreground", spec.foreground}};
    write_text(path, j.dump(2) + "\n");
}

void save_occlusion_records(const std::filesystem::path& path, int frame_id, std::uint64_t seed,
                            bool applied, std::span<const OcclusionRecord> records) {
    json occlusions = json::array();
    for (const OcclusionRecord& rec : records) {
        json views = json::array();
        for (const ViewRect& v : rec.per_view) {
            views.push_back(json{{"cam", v.camera_id},
                                 {"u_foot", v.u_foot},
                                 {"v_foot", v.v_foot},
                                 {"height_px", v.height_px},
                                 {"width_px", v.width_px},
                                 {"visible", v.visible},
                                 {"clipped", v.clipped},
                                 {"paint_box", {v.u0, v.v0, v.u1, v.v1}}});
        }
        occlusions.push_back(json{{"grid_index", rec.grid_index},
                                  {"world", {rec.world.x(), rec.world.y()}},
                                  {"views", std::move(views)}});
    }
    const json j{{"frame_id", frame_id},
                 {"seed", seed},
                 {"applied", applied},
                 {"occlusions", std::move(occlusions)}};
    write_text(path, j.dump(2) + "\n");
}

std::string format_report(const EvalReport& report, bool per_frame) {
    std::ostringstream out;
    out << "# mview evaluation report\n";
    out << "radius_m: " << fixed4(report.radius) << "\n";
    out << "frames: " << report.per_frame.size() << "\n";
    out << "gt_total: " << report.total_gt << "\n";
    out << "det_total: " << report.total_det << "\n";
    out << "tp: " << report.tp << "\n";
    out << "fp: " << report.fp << "\n";
    out << "fn: " << report.fn << "\n";
    out << "MODA: " << fixed4(report.moda) << "\n";
    out << "MODP: " << fixed4(report.modp) << "\n";
    out << "precision: " << fixed4(report.precision) << "\n";
    out << "recall: " << fixed4(report.recall) << "\n";
    if (per_frame) {
        out << "# frame tp fp fn MODA MODP precision recall\n";
        for (const FrameCounts& fc : report.per_frame) {
            out << "frame " << fc.frame_id << ": " << fc.tp << " " << fc.fp << " " << fc.fn
                << " " << fixed4(fc.moda) << " " << fixed4(fc.modp) << " "
                << fixed4(fc.precision) << " " << fixed4(fc.recall) << "\n";
        }
    }
    return out.str();
}

void save_report(const std::filesystem::path& path, const EvalReport& report, bool per_frame) {
    write_text(path, format_report(report, per_frame));
}

}  // namespace mview
