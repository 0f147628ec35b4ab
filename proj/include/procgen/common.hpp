#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace procgen {

struct Vec2 {
    double x = 0.0, y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2& o) const = default;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr bool operator==(const Vec3& o) const = default;

    double length() const { return std::sqrt(x * x + y * y + z * z); }
    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    Vec3 normalized() const {
        double len = length();
        return len > 0.0 ? Vec3{x / len, y / len, z / len} : Vec3{0, 0, 0};
    }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.dot(b); }
inline Vec3 cross(const Vec3& a, const Vec3& b) { return a.cross(b); }
inline double distance(const Vec3& a, const Vec3& b) { return (a - b).length(); }

struct Aabb {
    Vec3 lo{1e300, 1e300, 1e300};
    Vec3 hi{-1e300, -1e300, -1e300};

    void expand(const Vec3& p) {
        lo.x = p.x < lo.x ? p.x : lo.x;
        lo.y = p.y < lo.y ? p.y : lo.y;
        lo.z = p.z < lo.z ? p.z : lo.z;
        hi.x = p.x > hi.x ? p.x : hi.x;
        hi.y = p.y > hi.y ? p.y : hi.y;
        hi.z = p.z > hi.z ? p.z : hi.z;
    }
    void expand(const Aabb& b) {
        expand(b.lo);
        expand(b.hi);
    }
    bool overlaps(const Aabb& o) const {
        return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y &&
               lo.z <= o.hi.z && o.lo.z <= hi.z;
    }
};

// Error codes for every failure contract in the library. Tests match on the
// code, messages are for humans.
enum class errc {
    unknown_op,
    missing_input,
    kind_mismatch,
    cycle_detected,
    ambiguous_kind,
    unsupported_cast,
    degenerate_range,
    invalid_mortar,
    missing_aux_field,
    eval_domain,
    invalid_range,
    empty_weights,
    non_positive_weight,
    untraceable_control_flow,
    path_explosion,
    unknown_param,
    out_of_range,
    structure_mismatch,
    out_of_range_param,
    interface_mismatch,
    no_feasible_placement,
    overlapping_windows,
    window_out_of_bounds,
    no_path_found,
    placement_exhausted,
    unbounded_param,
    even_window,
    malformed_file,
    degenerate_face,
    duplicate_param,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::unknown_op: return "UnknownOp";
        case errc::missing_input: return "MissingInput";
        case errc::kind_mismatch: return "KindMismatch";
        case errc::cycle_detected: return "CycleDetected";
        case errc::ambiguous_kind: return "AmbiguousKind";
        case errc::unsupported_cast: return "UnsupportedCast";
        case errc::degenerate_range: return "DegenerateRange";
        case errc::invalid_mortar: return "InvalidMortar";
        case errc::missing_aux_field: return "MissingAuxField";
        case errc::eval_domain: return "EvalDomainError";
        case errc::invalid_range: return "InvalidRange";
        case errc::empty_weights: return "EmptyWeights";
        case errc::non_positive_weight: return "NonPositiveWeight";
        case errc::untraceable_control_flow: return "UntraceableControlFlow";
        case errc::path_explosion: return "PathExplosion";
        case errc::unknown_param: return "UnknownParam";
        case errc::out_of_range: return "OutOfRange";
        case errc::structure_mismatch: return "StructureMismatch";
        case errc::out_of_range_param: return "OutOfRangeParam";
        case errc::interface_mismatch: return "InterfaceMismatch";
        case errc::no_feasible_placement: return "NoFeasiblePlacement";
        case errc::overlapping_windows: return "OverlappingWindows";
        case errc::window_out_of_bounds: return "WindowOutOfBounds";
        case errc::no_path_found: return "NoPathFound";
        case errc::placement_exhausted: return "PlacementExhausted";
        case errc::unbounded_param: return "UnboundedParam";
        case errc::even_window: return "EvenWindow";
        case errc::malformed_file: return "MalformedFile";
        case errc::degenerate_face: return "DegenerateFace";
        case errc::duplicate_param: return "DuplicateParam";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace procgen
