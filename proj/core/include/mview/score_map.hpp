#pragma once

#include <vector>

namespace mview {

/// Which frame a 2D map lives in. Unspecified covers maps loaded from files
/// whose provenance is unknown; frame checks are skipped for those.
struct FrameOfReference {
    enum class Kind { Unspecified, CameraImage, TopView };

    Kind kind = Kind::Unspecified;
    int camera_id = -1;    // valid when kind == CameraImage
    double height_m = 0.0; // valid when kind == TopView

    static FrameOfReference camera(int id) {
        return {Kind::CameraImage, id, 0.0};
    }
    static FrameOfReference top_view(double height) {
        return {Kind::TopView, -1, height};
    }
};

/// Dense 2D scalar map, row-major. Used for image-plane likelihoods,
/// projected features, silhouettes and occupancy maps.
class ScoreMap {
public:
    ScoreMap() = default;
    ScoreMap(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const ScoreMap& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    double sum() const;

    /// Throws ShapeMismatch on NaN/Inf entries (the maps' only invariant).
    void validate() const;

    FrameOfReference frame;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// 8-bit interleaved image, 1 (gray) or 3 (RGB) channels, row-major.
struct ImageU8 {
    int rows = 0;
    int cols = 0;
    int channels = 1;
    std::vector<unsigned char> data;

    ImageU8() = default;
    ImageU8(int r, int c, int ch, unsigned char fill = 0)
        : rows(r), cols(c), channels(ch),
          data(static_cast<std::size_t>(r) * c * ch, fill) {}

    unsigned char& at(int r, int c, int ch = 0) {
        return data[(static_cast<std::size_t>(r) * cols + c) * channels + ch];
    }
    unsigned char at(int r, int c, int ch = 0) const {
        return data[(static_cast<std::size_t>(r) * cols + c) * channels + ch];
    }

    bool operator==(const ImageU8&) const = default;
};

}  // namespace mview
