#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "procgen/cameras.hpp"
#include "procgen/materials/samplers.hpp"
#include "procgen/scene.hpp"

namespace procgen {

// Scene files store generator references plus transforms, never raw
// geometry: reloading regenerates every mesh (and its material-driven
// displacement) deterministically from the recorded parameters.

struct MaterialRef {
    std::string sampler;  // id in the material sampler registry
    std::uint64_t seed = 0;
    double displacement_amplitude = 0.0;  // 0 = no displacement pass
};

struct ObjectSpec {
    enum class Kind { Room, Box, Cylinder, Grid };

    Kind kind = Kind::Box;
    Transform transform;
    std::vector<std::string> tags;
    MaterialRef material;  // empty sampler = untextured
    int displace_subdiv = 0;  // extra mesh density for displacement detail

    // Room
    double width = 5, depth = 4, height = 2.7, quad_size = 0.25;
    std::vector<WindowRect> windows;
    // Box
    Vec3 size{1, 1, 1};
    int subdiv = 2;
    // Cylinder
    double radius = 0.3, cyl_height = 1.0;
    int segments = 24;
    // Grid
    int nx = 32, ny = 32;
    double grid_size = 1.0;
};

struct SceneSpec {
    std::uint64_t seed = 0;
    std::vector<ObjectSpec> objects;
    std::vector<CameraSpec> cameras;
};

// ---------------------------------------------------------------------------
// JSON round-trip
// ---------------------------------------------------------------------------

namespace scenejson {

inline nlohmann::json vec3_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }
inline Vec3 vec3_from(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) raise(errc::malformed_file, "expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline nlohmann::json transform_json(const Transform& t) {
    return {{"translation", vec3_json(t.translation)},
            {"z_rotation", t.z_rotation},
            {"scale", t.scale}};
}

inline Transform transform_from(const nlohmann::json& j) {
    Transform t;
    if (j.contains("translation")) t.translation = vec3_from(j.at("translation"));
    if (j.contains("z_rotation")) t.z_rotation = j.at("z_rotation").get<double>();
    if (j.contains("scale")) t.scale = j.at("scale").get<double>();
    return t;
}

inline nlohmann::json camera_json(const CameraSpec& c) {
    return {{"position", vec3_json(c.position)}, {"look_at", vec3_json(c.look_at)},
            {"fov_y", c.fov_y},                  {"width", c.width},
            {"height", c.height},                {"stereo_baseline", c.stereo_baseline}};
}

inline CameraSpec camera_from(const nlohmann::json& j) {
    CameraSpec c;
    c.position = vec3_from(j.at("position"));
    c.look_at = vec3_from(j.at("look_at"));
    if (j.contains("fov_y")) c.fov_y = j.at("fov_y").get<double>();
    if (j.contains("width")) c.width = j.at("width").get<int>();
    if (j.contains("height")) c.height = j.at("height").get<int>();
    if (j.contains("stereo_baseline")) c.stereo_baseline = j.at("stereo_baseline").get<double>();
    c.check();
    return c;
}

}  // namespace scenejson

inline nlohmann::json scene_to_json(const SceneSpec& spec) {
    nlohmann::json j;
    j["version"] = 1;
    j["seed"] = spec.seed;
    j["objects"] = nlohmann::json::array();
    for (const ObjectSpec& o : spec.objects) {
        nlohmann::json jo;
        jo["transform"] = scenejson::transform_json(o.transform);
        if (!o.tags.empty()) jo["tags"] = o.tags;
        if (!o.material.sampler.empty()) {
            jo["material"] = {{"sampler", o.material.sampler},
                              {"seed", o.material.seed},
                              {"displacement_amplitude", o.material.displacement_amplitude}};
        }
        switch (o.kind) {
            case ObjectSpec::Kind::Room: {
                jo["generator"] = "room";
                jo["width"] = o.width;
                jo["depth"] = o.depth;
                jo["height"] = o.height;
                jo["quad_size"] = o.quad_size;
                nlohmann::json ws = nlohmann::json::array();
                for (const WindowRect& w : o.windows)
                    ws.push_back({{"wall", w.wall}, {"u0", w.u0}, {"u1", w.u1},
                                  {"v0", w.v0}, {"v1", w.v1}});
                if (!ws.empty()) jo["windows"] = ws;
                break;
            }
            case ObjectSpec::Kind::Box:
                jo["generator"] = "box";
                jo["size"] = scenejson::vec3_json(o.size);
                jo["subdiv"] = o.subdiv;
                break;
            case ObjectSpec::Kind::Cylinder:
                jo["generator"] = "cylinder";
                jo["radius"] = o.radius;
                jo["height"] = o.cyl_height;
                jo["segments"] = o.segments;
                break;
            case ObjectSpec::Kind::Grid:
                jo["generator"] = "grid";
                jo["nx"] = o.nx;
                jo["ny"] = o.ny;
                jo["size"] = o.grid_size;
                break;
        }
        j["objects"].push_back(std::move(jo));
    }
    j["cameras"] = nlohmann::json::array();
    for (const CameraSpec& c : spec.cameras) j["cameras"].push_back(scenejson::camera_json(c));
    return j;
}

inline SceneSpec scene_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("version") || j.at("version") != 1)
        raise(errc::malformed_file, "scene: missing or unsupported version");
    SceneSpec spec;
    spec.seed = j.value("seed", 0ull);
    for (const auto& jo : j.value("objects", nlohmann::json::array())) {
        ObjectSpec o;
        const std::string gen = jo.at("generator").get<std::string>();
        if (jo.contains("transform")) o.transform = scenejson::transform_from(jo.at("transform"));
        if (jo.contains("tags")) o.tags = jo.at("tags").get<std::vector<std::string>>();
        if (jo.contains("material")) {
            o.material.sampler = jo.at("material").at("sampler").get<std::string>();
            o.material.seed = jo.at("material").value("seed", 0ull);
            o.material.displacement_amplitude =
                jo.at("material").value("displacement_amplitude", 0.0);
        }
        if (gen == "room") {
            o.kind = ObjectSpec::Kind::Room;
            o.width = jo.at("width").get<double>();
            o.depth = jo.at("depth").get<double>();
            o.height = jo.at("height").get<double>();
            o.quad_size = jo.value("quad_size", 0.25);
            for (const auto& jw : jo.value("windows", nlohmann::json::array()))
                o.windows.push_back({jw.at("wall").get<int>(), jw.at("u0").get<double>(),
                                     jw.at("u1").get<double>(), jw.at("v0").get<double>(),
                                     jw.at("v1").get<double>()});
        } else if (gen == "box") {
            o.kind = ObjectSpec::Kind::Box;
            o.size = scenejson::vec3_from(jo.at("size"));
            o.subdiv = jo.value("subdiv", 2);
        } else if (gen == "cylinder") {
            o.kind = ObjectSpec::Kind::Cylinder;
            o.radius = jo.at("radius").get<double>();
            o.cyl_height = jo.at("height").get<double>();
            o.segments = jo.value("segments", 24);
        } else if (gen == "grid") {
            o.kind = ObjectSpec::Kind::Grid;
            o.nx = jo.at("nx").get<int>();
            o.ny = jo.at("ny").get<int>();
            o.grid_size = jo.value("size", 1.0);
        } else {
            raise(errc::malformed_file, "scene: unknown generator '" + gen + "'");
        }
        spec.objects.push_back(std::move(o));
    }
    for (const auto& jc : j.value("cameras", nlohmann::json::array()))
        spec.cameras.push_back(scenejson::camera_from(jc));
    return spec;
}

inline void write_scene(const std::string& path, const SceneSpec& spec) {
    std::ofstream out(path);
    if (!out) raise(errc::malformed_file, "cannot open '" + path + "' for writing");
    out << scene_to_json(spec).dump(2) << "\n";
}

inline SceneSpec read_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::malformed_file, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) raise(errc::malformed_file, path + ": invalid JSON");
    return scene_from_json(j);
}

// ---------------------------------------------------------------------------
// Mesh realization
// ---------------------------------------------------------------------------

// Regenerates an object's mesh, applying the material displacement pass when
// requested. Curvature is computed first so edge-wear masks have their aux
// input.
inline Mesh build_object_mesh(const ObjectSpec& o) {
    Mesh mesh;
    switch (o.kind) {
        case ObjectSpec::Kind::Room:
            mesh = make_room(o.width, o.depth, o.height, o.quad_size, o.windows);
            break;
        case ObjectSpec::Kind::Box: mesh = make_box(o.size.x, o.size.y, o.size.z, o.subdiv); break;
        case ObjectSpec::Kind::Cylinder:
            mesh = make_cylinder(o.radius, o.cyl_height, o.segments);
            break;
        case ObjectSpec::Kind::Grid: mesh = make_grid(o.nx, o.ny, o.grid_size); break;
    }
    if (!o.material.sampler.empty() && o.material.displacement_amplitude > 0.0) {
        const SamplerDef& def = materials::find_sampler(o.material.sampler);
        const Graph graph = run_sampler(def, o.material.seed).graph;
        compute_curvature(mesh);
        mesh = displace(mesh, graph, "displacement", o.material.displacement_amplitude);
    }
    return mesh;
}

inline Scene build_scene(const SceneSpec& spec) {
    Scene scene;
    for (const ObjectSpec& o : spec.objects)
        scene.add(SceneObject(std::make_shared<Mesh>(build_object_mesh(o)), o.transform, o.tags));
    return scene;
}

}  // namespace procgen
