#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace crlscore {

// Base class for all library errors.  `kind()` is a stable machine-readable
// name that batch runs record next to the image id when a case fails.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// A file could not be parsed (bad PNG, wrong channel layout, malformed
// JSON/CSV, unknown config key, duplicate CSV ids, ...).
class DecodeError : public Error {
public:
    explicit DecodeError(const std::string& what) : Error("DecodeError", what) {}
};

// A label grid contains values outside the supported set {0,1,2,3}.
class LabelError : public Error {
public:
    explicit LabelError(const std::string& what) : Error("LabelError", what) {}
};

// Mask and grayscale frame of the same case disagree in size.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what)
        : Error("DimensionMismatch", what) {}
};

// Head or body region is absent, so the measurement pipeline cannot run.
class MissingStructure : public Error {
public:
    explicit MissingStructure(const std::string& what)
        : Error("MissingStructure", what) {}
};

// Head and body regions never touch; no neck junction point exists.
class NoJunction : public Error {
public:
    explicit NoJunction(const std::string& what) : Error("NoJunction", what) {}
};

// A geometric quantity is undefined for the given input (coincident points,
// empty contours, zero-length baseline, ...).
class DegenerateGeometry : public Error {
public:
    explicit DegenerateGeometry(const std::string& what)
        : Error("DegenerateGeometry", what) {}
};

// Two rating tables cannot be aligned row-by-row (different ids or lengths).
class PairingError : public Error {
public:
    explicit PairingError(const std::string& what)
        : Error("PairingError", what) {}
};

// A synthetic test image cannot be realised with the requested parameters.
class GeometryInfeasible : public Error {
public:
    explicit GeometryInfeasible(const std::string& what)
        : Error("GeometryInfeasible", what) {}
};

// Chance agreement is total (expected agreement 1), kappa is undefined.
class DegenerateMarginals : public Error {
public:
    explicit DegenerateMarginals(const std::string& what)
        : Error("DegenerateMarginals", what) {}
};

// Total score variance is zero, internal consistency is undefined.
class ZeroVariance : public Error {
public:
    explicit ZeroVariance(const std::string& what)
        : Error("ZeroVariance", what) {}
};

}  // namespace crlscore
