#pragma once

#include <stdexcept>
#include <string>

namespace mview {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Calibration violates its invariants (R not orthonormal, K not
/// upper-triangular with positive focals, bad image size, nonzero distortion).
class InvalidCalibration : public Error {
public:
    using Error::Error;
};

/// A plane homography is singular: the plane passes through the camera center.
class SingularPlane : public Error {
public:
    using Error::Error;
};

/// Grid definition violates cell_size * shape = extent.
class InvalidGrid : public Error {
public:
    using Error::Error;
};

/// Grid index outside [1, G] or world point outside the AOI.
class OutOfGrid : public Error {
public:
    using Error::Error;
};

/// Image dimensions disagree with the calibration, or view counts differ.
class SizeMismatch : public Error {
public:
    using Error::Error;
};

/// Two maps that must share a shape do not.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// Occlusion placement hit the consecutive-rejection budget before reaching n.
class PlacementExhausted : public Error {
public:
    using Error::Error;
};

/// Detection and ground-truth frame ids disagree.
class FrameMismatch : public Error {
public:
    using Error::Error;
};

/// An operation that averages over camera views received none.
class EmptyViewList : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// File content does not match the expected schema.
class ParseError : public IoError {
public:
    using IoError::IoError;
};

}  // namespace mview
