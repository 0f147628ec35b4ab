#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "procgen/common.hpp"

namespace procgen {

// Dataflow value kinds. Color and Vec3 are distinct on purpose: mixing them
// requires an explicit cast.
enum class ValueKind : std::uint8_t { Int, Float, Vec2, Vec3, Color, Bool };

inline int kind_arity(ValueKind k) {
    switch (k) {
        case ValueKind::Int:
        case ValueKind::Float:
        case ValueKind::Bool: return 1;
        case ValueKind::Vec2: return 2;
        case ValueKind::Vec3:
        case ValueKind::Color: return 3;
    }
    return 1;
}

inline const char* kind_name(ValueKind k) {
    switch (k) {
        case ValueKind::Int: return "Int";
        case ValueKind::Float: return "Float";
        case ValueKind::Vec2: return "Vec2";
        case ValueKind::Vec3: return "Vec3";
        case ValueKind::Color: return "Color";
        case ValueKind::Bool: return "Bool";
    }
    return "?";
}

inline bool kind_from_name(const std::string& s, ValueKind& out) {
    if (s == "Int") out = ValueKind::Int;
    else if (s == "Float") out = ValueKind::Float;
    else if (s == "Vec2") out = ValueKind::Vec2;
    else if (s == "Vec3") out = ValueKind::Vec3;
    else if (s == "Color") out = ValueKind::Color;
    else if (s == "Bool") out = ValueKind::Bool;
    else return false;
    return true;
}

inline bool is_scalar(ValueKind k) {
    return k == ValueKind::Int || k == ValueKind::Float;
}
inline bool is_vector(ValueKind k) {
    return k == ValueKind::Vec2 || k == ValueKind::Vec3 || k == ValueKind::Color;
}

// A kind-tagged static constant: node parameters and inline input constants.
// Strings are allowed as parameters only (they never flow through sockets).
class ParamValue {
public:
    ParamValue() : tag_("Float"), num_({0.0}) {}
    ParamValue(double v) : tag_("Float"), num_({v}) {}
    ParamValue(int v) : tag_("Int"), num_({static_cast<double>(v)}) {}
    ParamValue(std::int64_t v) : tag_("Int"), num_({static_cast<double>(v)}) {}
    ParamValue(bool v) : tag_("Bool"), num_({v ? 1.0 : 0.0}) {}
    ParamValue(const Vec2& v) : tag_("Vec2"), num_({v.x, v.y}) {}
    ParamValue(const Vec3& v) : tag_("Vec3"), num_({v.x, v.y, v.z}) {}
    ParamValue(const char* s) : tag_("String"), str_(s) {}
    ParamValue(std::string s) : tag_("String"), str_(std::move(s)) {}

    static ParamValue color(double r, double g, double b) {
        ParamValue p;
        p.tag_ = "Color";
        p.num_ = {r, g, b};
        return p;
    }
    static ParamValue with_tag(std::string tag, std::vector<double> num, std::string str = {}) {
        ParamValue p;
        p.tag_ = std::move(tag);
        p.num_ = std::move(num);
        p.str_ = std::move(str);
        return p;
    }

    const std::string& tag() const { return tag_; }
    bool is_string() const { return tag_ == "String"; }
    bool is_numeric_kind() const { return !is_string(); }

    // Returns the dataflow kind; only valid for non-string values.
    ValueKind kind() const {
        ValueKind k = ValueKind::Float;
        kind_from_name(tag_, k);
        return k;
    }

    double as_double() const { return num_.empty() ? 0.0 : num_[0]; }
    std::int64_t as_int() const { return static_cast<std::int64_t>(as_double()); }
    bool as_bool() const { return as_double() != 0.0; }
    Vec2 as_vec2() const { return num_.size() >= 2 ? Vec2{num_[0], num_[1]} : Vec2{}; }
    Vec3 as_vec3() const { return num_.size() >= 3 ? Vec3{num_[0], num_[1], num_[2]} : Vec3{}; }
    const std::string& as_string() const { return str_; }
    const std::vector<double>& components() const { return num_; }

    bool operator==(const ParamValue& o) const = default;

private:
    std::string tag_;
    std::vector<double> num_;
    std::string str_;
};

}  // namespace procgen
