#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace knotfield {

/// Evaluation point (or loop edge) lies within the exclusion radius of a conductor.
/// segment_index is the 1-based α label of the offending knot segment, 0 when unknown;
/// loop_edge is the 0-based edge of the loop being integrated, if any.
class OnConductorError : public std::runtime_error {
public:
    OnConductorError(const std::string& what, std::size_t segment_index, std::size_t loop_edge = 0)
        : std::runtime_error(what), segment_index_(segment_index), loop_edge_(loop_edge) {}

    std::size_t segment_index() const noexcept { return segment_index_; }
    std::size_t loop_edge() const noexcept { return loop_edge_; }

private:
    std::size_t segment_index_;
    std::size_t loop_edge_;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gauss-integral linking estimate could not be rounded unambiguously.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Braid closure has more than one component.
class MultiComponentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidKnotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace knotfield
