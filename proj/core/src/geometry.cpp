#include "mview/geometry.hpp"

#include "mview/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace mview {

namespace {

std::string cam_tag(int id) { return "camera " + std::to_string(id); }

// Singularity test from the type invariant: |det| of the unit-Frobenius
// normalized matrix must exceed 1e-12.
bool near_singular(const Eigen::Matrix3d& h) {
    const double fro = h.norm();
    if (!(fro > 0.0) || !std::isfinite(fro)) {
        return true;
    }
    const Eigen::Matrix3d hn = h / fro;
    return std::abs(hn.determinant()) <= 1e-12;
}

}  // namespace

void CameraCalibration::validate() const {
    const Eigen::Matrix3d& k = intrinsics;
    const Eigen::Matrix3d& r = rotation;

    const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (!(ortho <= 1e-6)) {
        throw InvalidCalibration(cam_tag(camera_id) + ": R is not orthonormal (max |R'R - I| = " +
                                 std::to_string(ortho) + ")");
    }
    if (!(r.determinant() > 0.0)) {
        throw InvalidCalibration(cam_tag(camera_id) + ": det(R) is not +1");
    }

    const double scale = k.cwiseAbs().maxCoeff();
    const double tri = std::max({std::abs(k(1, 0)), std::abs(k(2, 0)), std::abs(k(2, 1))});
    if (!(scale > 0.0) || tri > 1e-9 * scale) {
        throw InvalidCalibration(cam_tag(camera_id) + ": K is not upper-triangular");
    }
    if (!(k(0, 0) > 0.0) || !(k(1, 1) > 0.0) || !(k(2, 2) > 0.0)) {
        throw InvalidCalibration(cam_tag(camera_id) + ": K diagonal must be positive");
    }
    if (image_width <= 0 || image_height <= 0) {
        throw InvalidCalibration(cam_tag(camera_id) + ": image size must be positive");
    }
    if (!k.allFinite() || !r.allFinite() || !translation.allFinite()) {
        throw InvalidCalibration(cam_tag(camera_id) + ": non-finite parameters");
    }
}

Eigen::Matrix3d PlaneHomography::normalized() const {
    const double fro = h_matrix.norm();
    Eigen::Matrix3d out = h_matrix;
    if (fro > 0.0 && std::isfinite(fro)) {
        out /= fro;
    }
    // Sign canonicalization: flip so the entry of largest magnitude is positive.
    int r = 0, c = 0;
    out.cwiseAbs().maxCoeff(&r, &c);
    if (out(r, c) < 0.0) {
        out = -out;
    }
    return out;
}

ProjectionMatrix build_projection(const CameraCalibration& calib) {
    calib.validate();
    Eigen::Matrix<double, 3, 4> rt;
    rt.leftCols<3>() = calib.rotation;
    rt.col(3) = calib.translation;
    ProjectionMatrix proj;
    proj.m = calib.intrinsics * rt;
    proj.camera_id = calib.camera_id;
    return proj;
}

PlaneHomography ground_homography(const ProjectionMatrix& proj, HomographyDirection direction) {
    return plane_homography(proj, 0.0, direction);
}

PlaneHomography plane_homography(const ProjectionMatrix& proj, double height_m,
                                 HomographyDirection direction) {
    if (!std::isfinite(height_m)) {
        throw SingularPlane("plane height must be finite");
    }
    Eigen::Matrix3d top_to_cam;
    top_to_cam.col(0) = proj.m1();
    top_to_cam.col(1) = proj.m2();
    top_to_cam.col(2) = height_m * proj.m3() + proj.m4();
    if (near_singular(top_to_cam)) {
        throw SingularPlane("camera " + std::to_string(proj.camera_id) +
                            ": plane at height " + std::to_string(height_m) +
                            " m passes through the camera center");
    }

    PlaneHomography hom;
    hom.height = height_m;
    hom.direction = direction;
    hom.h_matrix = direction == HomographyDirection::TopToCam
                       ? top_to_cam
                       : Eigen::Matrix3d(top_to_cam.inverse());
    return hom;
}

GroundGrid::GroundGrid(const Eigen::Vector2d& origin, const Eigen::Vector2d& extent, int nx,
                       int ny)
    : origin_(origin), extent_(extent), nx_(nx), ny_(ny) {
    if (nx <= 0 || ny <= 0) {
        throw InvalidGrid("grid shape must be positive");
    }
    if (!(extent.x() > 0.0) || !(extent.y() > 0.0) || !extent.allFinite() ||
        !origin.allFinite()) {
        throw InvalidGrid("grid extent must be positive and finite");
    }
    cell_ = extent.x() / nx;
    const double other = cell_ * ny;
    if (std::abs(other - extent.y()) > 1e-9 * std::max(1.0, std::abs(extent.y()))) {
        throw InvalidGrid("cell size mismatch: extent/shape must give square cells");
    }
}

Eigen::Vector2d GroundGrid::index_to_world(int index) const {
    const auto [ix, iy] = index_to_cell(index);
    return {origin_.x() + (ix + 0.5) * cell_, origin_.y() + (iy + 0.5) * cell_};
}

int GroundGrid::world_to_index(const Eigen::Vector2d& p) const {
    const double fx = (p.x() - origin_.x()) / cell_;
    const double fy = (p.y() - origin_.y()) / cell_;
    if (!(fx >= 0.0) || !(fy >= 0.0) || !(fx <= nx_) || !(fy <= ny_)) {
        throw OutOfGrid("point (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                        ") lies outside the AOI");
    }
    // Points exactly on the far boundary belong to the last cell.
    const int ix = std::min(static_cast<int>(fx), nx_ - 1);
    const int iy = std::min(static_cast<int>(fy), ny_ - 1);
    return cell_to_index(ix, iy);
}

std::pair<int, int> GroundGrid::index_to_cell(int index) const {
    if (index < 1 || index > size()) {
        throw OutOfGrid("grid index " + std::to_string(index) + " outside [1, " +
                        std::to_string(size()) + "]");
    }
    const int zero_based = index - 1;
    return {zero_based / ny_, zero_based % ny_};
}

int GroundGrid::cell_to_index(int ix, int iy) const {
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) {
        throw OutOfGrid("cell (" + std::to_string(ix) + ", " + std::to_string(iy) +
                        ") outside the grid");
    }
    return 1 + ix * ny_ + iy;
}

Eigen::Matrix3d GroundGrid::toppix_to_world() const {
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    a(0, 1) = cell_;
    a(0, 2) = origin_.x() + 0.5 * cell_;
    a(1, 0) = cell_;
    a(1, 2) = origin_.y() + 0.5 * cell_;
    a(2, 2) = 1.0;
    return a;
}

Eigen::Matrix3d GroundGrid::world_to_toppix() const {
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    const double inv = 1.0 / cell_;
    a(0, 1) = inv;
    a(0, 2) = -origin_.y() * inv - 0.5;
    a(1, 0) = inv;
    a(1, 2) = -origin_.x() * inv - 0.5;
    a(2, 2) = 1.0;
    return a;
}

CameraCalibration make_lookat_calibration(int camera_id, const Eigen::Vector3d& position,
                                          const Eigen::Vector3d& target, double focal_px,
                                          int image_width, int image_height) {
    const Eigen::Vector3d forward = (target - position).normalized();
    Eigen::Vector3d right = forward.cross(Eigen::Vector3d::UnitZ());
    if (right.norm() < 1e-9) {
        // Looking straight down; pick an arbitrary horizontal right axis.
        right = Eigen::Vector3d::UnitY();
    }
    right.normalize();
    const Eigen::Vector3d down = forward.cross(right).normalized();

    CameraCalibration calib;
    calib.camera_id = camera_id;
    calib.rotation.row(0) = right;
    calib.rotation.row(1) = down;
    calib.rotation.row(2) = forward;
    calib.translation = -calib.rotation * position;
    calib.intrinsics << focal_px, 0.0, image_width / 2.0,  //
        0.0, focal_px, image_height / 2.0,                 //
        0.0, 0.0, 1.0;
    calib.image_width = image_width;
    calib.image_height = image_height;
    calib.validate();
    return calib;
}

}  // namespace mview
