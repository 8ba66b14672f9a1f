#pragma once

#include <Eigen/Core>

#include <utility>

namespace mview {

// Coordinate conventions used throughout the library:
//
//  * World frame: x/y on the ground plane (meters), z up. A point at height h
//    above ground location (X, Y) is (X, Y, h).
//  * Camera pixels: (u, v) with u along columns (right) and v along rows
//    (down); integer coordinates sit at pixel centers.
//  * Top view: the ground grid rasterized with rows along world x and columns
//    along world y. Pixel (row r, col c) is centered on the cell
//    (origin_x + (r+0.5)*cell, origin_y + (c+0.5)*cell).
//
// Homogeneous quantities keep the scale they inherit from the projection
// matrix M = K[R|t]: the third component of H * (X, Y, 1) is the projective
// depth of the 3D point, so its sign decides whether the point is in front of
// the camera. Matrices are therefore stored un-normalized; use
// PlaneHomography::normalized() when comparing up to scale.

/// Pinhole camera: intrinsics K, world-to-camera rotation R and translation t.
struct CameraCalibration {
    int camera_id = 0;
    Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();  // K, pixels
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();    // R, orthonormal
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();     // t, meters
    int image_width = 0;
    int image_height = 0;

    /// Throws InvalidCalibration unless R is orthonormal (1e-6, det +1),
    /// K is upper-triangular with positive focal entries, and the image size
    /// is positive.
    void validate() const;
};

/// 3x4 projection M = K [R | t]; column i is addressable as m(i).
struct ProjectionMatrix {
    Eigen::Matrix<double, 3, 4> m = Eigen::Matrix<double, 3, 4>::Zero();
    int camera_id = 0;

    Eigen::Vector3d m1() const { return m.col(0); }
    Eigen::Vector3d m2() const { return m.col(1); }
    Eigen::Vector3d m3() const { return m.col(2); }
    Eigen::Vector3d m4() const { return m.col(3); }

    /// Projective depth of world point (X, Y, Z); positive means in front of
    /// the camera.
    double depth(const Eigen::Vector3d& world) const {
        return m.row(2).head<3>().dot(world) + m(2, 3);
    }
};

enum class HomographyDirection { TopToCam, CamToTop };

/// 3x3 projective map between the plane z = height and a camera image.
/// TopToCam matrices map world ground coordinates (X, Y, 1) to camera pixels
/// (u*w, v*w, w); CamToTop matrices are their exact inverses. The stored
/// matrix keeps the scale of the projection matrix it came from (see the
/// conventions note above).
struct PlaneHomography {
    Eigen::Matrix3d h_matrix = Eigen::Matrix3d::Identity();
    double height = 0.0;  // meters above ground
    HomographyDirection direction = HomographyDirection::TopToCam;

    /// Apply to an inhomogeneous 2D point; returns the homogeneous result.
    Eigen::Vector3d apply(const Eigen::Vector2d& p) const {
        return h_matrix * Eigen::Vector3d(p.x(), p.y(), 1.0);
    }

    /// Scale-canonical form: unit Frobenius norm with the largest-magnitude
    /// entry made positive. Two homographies are projectively equal iff their
    /// canonical forms coincide.
    Eigen::Matrix3d normalized() const;
};

/// Throws InvalidCalibration if the calibration is bad; otherwise K [R | t].
ProjectionMatrix build_projection(const CameraCalibration& calib);

/// Ground-plane homography [m1, m2, m4] (or its inverse for CamToTop).
/// Throws SingularPlane when the camera center lies on the ground plane.
PlaneHomography ground_homography(const ProjectionMatrix& proj, HomographyDirection direction);

/// Homography for the plane parallel to the ground at height_m:
/// [m1, m2, height_m * m3 + m4], equal to the ground homography plus
/// [0 | height_m * m3]. Throws SingularPlane when the plane passes through
/// the camera center.
PlaneHomography plane_homography(const ProjectionMatrix& proj, double height_m,
                                 HomographyDirection direction);

/// Discretized area of interest on the ground plane. Cells are square;
/// indices are 1-based and row-major with x as the slow axis:
/// i = 1 + ix * ny + iy.
class GroundGrid {
public:
    GroundGrid() = default;

    /// Throws InvalidGrid unless extent/shape give the same cell size on both
    /// axes (within 1e-9) and the shape is positive.
    GroundGrid(const Eigen::Vector2d& origin, const Eigen::Vector2d& extent, int nx, int ny);

    const Eigen::Vector2d& origin() const { return origin_; }
    const Eigen::Vector2d& extent() const { return extent_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double cell_size() const { return cell_; }

    /// Total number of locations G.
    int size() const { return nx_ * ny_; }

    /// Top-view raster shape: rows follow x, columns follow y.
    int rows() const { return nx_; }
    int cols() const { return ny_; }

    /// Center of cell i (1-based). Throws OutOfGrid for i outside [1, G].
    Eigen::Vector2d index_to_world(int index) const;

    /// Cell containing p. Throws OutOfGrid when p lies outside the AOI;
    /// points exactly on the far boundary fall into the last cell.
    int world_to_index(const Eigen::Vector2d& p) const;

    /// (ix, iy) cell coordinates of index i; inverse of cell_to_index.
    std::pair<int, int> index_to_cell(int index) const;
    int cell_to_index(int ix, int iy) const;

    /// Affine map from continuous top-view pixel (u, v, 1) to world
    /// (X, Y, 1): X = origin_x + (v + 0.5) cell, Y = origin_y + (u + 0.5) cell.
    Eigen::Matrix3d toppix_to_world() const;
    /// Exact inverse of toppix_to_world().
    Eigen::Matrix3d world_to_toppix() const;

private:
    Eigen::Vector2d origin_ = Eigen::Vector2d::Zero();
    Eigen::Vector2d extent_ = Eigen::Vector2d::Zero();
    int nx_ = 0;
    int ny_ = 0;
    double cell_ = 0.0;
};

/// Convenience builder for synthetic scenes and tests: camera at `position`
/// looking at `target` (world z up), focal length in pixels, principal point
/// at the image center. The image v axis points downward in the world.
CameraCalibration make_lookat_calibration(int camera_id, const Eigen::Vector3d& position,
                                          const Eigen::Vector3d& target, double focal_px,
                                          int image_width, int image_height);

}  // namespace mview
