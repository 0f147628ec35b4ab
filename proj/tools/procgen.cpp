// Command-line surface of the procedural generation engine: sampling,
// baking, tracing, analytics, transpilation, scenes, planning, ground truth
// and end-to-end datasets. Every command is reproducible from --seed.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "procgen/analytics.hpp"
#include "procgen/bake.hpp"
#include "procgen/dataset.hpp"
#include "procgen/materials/samplers.hpp"
#include "procgen/pfm.hpp"
#include "procgen/png.hpp"
#include "procgen/render.hpp"
#include "procgen/rrt.hpp"
#include "procgen/scenegen.hpp"
#include "procgen/transpile.hpp"
#include "procgen/version.hpp"

namespace {

using namespace procgen;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::malformed_file, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::malformed_file, "cannot open '" + path + "' for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

Vec3 parse_triple(const std::string& s) {
    Vec3 v;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',')
        raise(errc::malformed_file, "expected x,y,z but got '" + s + "'");
    return v;
}

nlohmann::json signature_json(const OpSignature& sig) {
    nlohmann::json j;
    j["name"] = sig.name;
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : sig.inputs)
        j["inputs"].push_back(
            {{"name", in.name}, {"kind", in.generic ? "Numeric" : kind_name(in.kind)}});
    j["params"] = nlohmann::json::array();
    for (const auto& p : sig.params) {
        nlohmann::json jp{{"name", p.name}, {"kind", p.tag}};
        jp["default"] = jsonio::tagged_value(p.def);
        if (std::isfinite(p.lo)) jp[p.lo_exclusive ? "min_exclusive" : "min"] = p.lo;
        if (std::isfinite(p.hi)) jp["max"] = p.hi;
        j["params"].push_back(std::move(jp));
    }
    j["outputs"] = nlohmann::json::array();
    for (const auto& out : sig.outputs)
        j["outputs"].push_back(
            {{"name", out.name}, {"kind", out.generic ? "Numeric" : kind_name(out.kind)}});
    return j;
}

Graph material_from_name(const std::string& name, const nlohmann::json& params) {
    using namespace procgen::materials;
    if (name == "wood")
        return material_graph([&](GraphBuilder& g, Value v) {
            return make_wood(g, WoodParams::from_json(params), v);
        });
    if (name == "marble")
        return material_graph([&](GraphBuilder& g, Value v) {
            return make_marble(g, MarbleParams::from_json(params), v);
        });
    if (name == "paint")
        return material_graph([&](GraphBuilder& g, Value v) {
            return make_paint(g, PaintParams::from_json(params), v);
        });
    if (name == "metal")
        return material_graph([&](GraphBuilder& g, Value v) {
            return make_metal(g, MetalParams::from_json(params), v);
        });
    if (name == "fabric")
        return material_graph([&](GraphBuilder& g, Value v) {
            return make_fabric(g, FabricParams::from_json(params), v);
        });
    if (name == "concrete")
        return material_graph([&](GraphBuilder& g, Value v) {
            return make_concrete(g, ConcreteParams::from_json(params), v);
        });
    raise(errc::unknown_op, "no material named '" + name + "'");
}

int run(int argc, char** argv) {
    CLI::App app{"procgen: procedural texture, scene and ground-truth engine"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // --- ops ---------------------------------------------------------------
    auto* ops_cmd = app.add_subcommand("ops", "catalog inspection");
    bool ops_list = false;
    ops_cmd->add_subcommand("list", "print the op catalog manifest")
        ->callback([&] { ops_list = true; });

    // --- bake --------------------------------------------------------------
    auto* bake_cmd = app.add_subcommand("bake", "evaluate a material channel to an image");
    std::string bake_material, bake_params_path, bake_graph, bake_sampler, bake_out;
    std::string bake_channel = "surface";
    int bake_res = 256;
    std::uint64_t bake_seed = 0;
    bool bake_validate = false;
    bake_cmd->add_option("--material", bake_material, "deterministic material name");
    bake_cmd->add_option("--params", bake_params_path, "JSON parameter file for --material");
    bake_cmd->add_option("--graph", bake_graph, "graph JSON file to bake");
    bake_cmd->add_option("--sampler", bake_sampler, "sampler id to draw the material from");
    bake_cmd->add_option("--seed", bake_seed, "seed for --sampler");
    bake_cmd->add_option("--channel", bake_channel, "surface|roughness|displacement");
    bake_cmd->add_option("--res", bake_res, "resolution")->check(CLI::Range(1, 16384));
    bake_cmd->add_option("--out", bake_out, "output image (.png or .pfm)")->required();
    bake_cmd->add_flag("--validate", bake_validate, "scan the buffer and report NaN counts");

    // --- sample ------------------------------------------------------------
    auto* sample_cmd = app.add_subcommand("sample", "run a sampler and write its graph");
    std::string sample_sampler = "composed", sample_out;
    std::uint64_t sample_seed = 0;
    sample_cmd->add_option("--sampler", sample_sampler, "sampler id");
    sample_cmd->add_option("--seed", sample_seed, "seed");
    sample_cmd->add_option("--out", sample_out, "output graph JSON")->required();

    // --- trace -------------------------------------------------------------
    auto* trace_cmd = app.add_subcommand("trace", "instance or distribution compute graph");
    std::string trace_sampler = "composed", trace_mode = "instance", trace_out;
    std::uint64_t trace_seed = 0;
    trace_cmd->add_option("--sampler", trace_sampler, "sampler id");
    trace_cmd->add_option("--mode", trace_mode, "instance|distribution")
        ->check(CLI::IsMember({"instance", "distribution"}));
    trace_cmd->add_option("--seed", trace_seed, "seed (instance mode)");
    trace_cmd->add_option("--out", trace_out, "output JSON (default stdout)");

    // --- analyze -----------------------------------------------------------
    auto* analyze_cmd = app.add_subcommand("analyze", "diversity report for a sampler");
    std::string analyze_sampler = "composed", analyze_out;
    analyze_cmd->add_option("--sampler", analyze_sampler, "sampler id");
    analyze_cmd->add_option("--out", analyze_out, "output JSON (default stdout)");

    // --- normalvar ---------------------------------------------------------
    auto* nv_cmd = app.add_subcommand("normalvar", "normal-variation metric of a PFM normal map");
    std::string nv_in, nv_out, nv_summary;
    int nv_window = kNormalVariationWindow;
    nv_cmd->add_option("--in", nv_in, "input normal map (PFM, 3 channels)")->required();
    nv_cmd->add_option("--out", nv_out, "output V image (PFM)");
    nv_cmd->add_option("--summary", nv_summary, "summary JSON (default stdout)");
    nv_cmd->add_option("--window", nv_window, "odd window size");

    // --- transpile -----------------------------------------------------------
    auto* tr_cmd = app.add_subcommand("transpile", "emit builder-API source for a graph");
    std::string tr_in, tr_out, tr_fn = "build_graph";
    bool tr_hsv = false, tr_no_operators = false;
    int tr_inline = 1;
    tr_cmd->add_option("--in", tr_in, "graph JSON")->required();
    tr_cmd->add_option("--out", tr_out, "output source file (default stdout)");
    tr_cmd->add_flag("--hsv", tr_hsv, "write color constants as HSV literals");
    tr_cmd->add_flag("--no-operators", tr_no_operators, "spell arithmetic as named calls");
    tr_cmd->add_option("--inline-max-uses", tr_inline, "inline nodes consumed at most this often");
    tr_cmd->add_option("--function-name", tr_fn, "emitted function name");

    // --- room ----------------------------------------------------------------
    auto* room_cmd = app.add_subcommand("room", "sample a furnished room scene");
    std::uint64_t room_seed = 0;
    std::string room_out;
    room_cmd->add_option("--seed", room_seed, "seed");
    room_cmd->add_option("--out", room_out, "output scene JSON")->required();

    // --- campath ---------------------------------------------------------------
    auto* cp_cmd = app.add_subcommand("campath", "plan a collision-free camera trajectory");
    std::string cp_scene, cp_start, cp_goal, cp_out;
    double cp_step = 0.4, cp_clearance = 0.25, cp_spacing = 0.5, cp_lookahead = 1.0;
    int cp_iters = 5000;
    std::uint64_t cp_seed = 0;
    cp_cmd->add_option("--scene", cp_scene, "scene JSON")->required();
    cp_cmd->add_option("--start", cp_start, "start x,y,z")->required();
    cp_cmd->add_option("--goal", cp_goal, "goal x,y,z")->required();
    cp_cmd->add_option("--out", cp_out, "output JSON (path + cameras)")->required();
    cp_cmd->add_option("--step", cp_step, "steer step in meters");
    cp_cmd->add_option("--clearance", cp_clearance, "probe clearance in meters");
    cp_cmd->add_option("--iters", cp_iters, "max iterations");
    cp_cmd->add_option("--spacing", cp_spacing, "camera spacing along the path");
    cp_cmd->add_option("--look-ahead", cp_lookahead, "look-ahead distance");
    cp_cmd->add_option("--seed", cp_seed, "planner seed");

    // --- rendergt -----------------------------------------------------------------
    auto* rg_cmd = app.add_subcommand("rendergt", "raycast ground truth for scene cameras");
    std::string rg_scene, rg_out_dir, rg_cameras, rg_format = "pfm";
    int rg_res = 0, rg_cam = -1;
    rg_cmd->add_option("--scene", rg_scene, "scene JSON")->required();
    rg_cmd->add_option("--cameras", rg_cameras, "camera JSON from campath (optional)");
    rg_cmd->add_option("--out", rg_out_dir, "output directory")->required();
    rg_cmd->add_option("--res", rg_res, "override resolution");
    rg_cmd->add_option("--cam", rg_cam, "render only this camera index");
    rg_cmd->add_option("--format", rg_format, "pfm|png")->check(CLI::IsMember({"pfm", "png"}));

    // --- dataset ---------------------------------------------------------------------
    auto* ds_cmd = app.add_subcommand("dataset", "rooms -> cameras -> GT, end to end");
    DatasetOptions ds;
    std::string ds_format = "pfm";
    ds_cmd->add_option("--seed", ds.seed, "root seed");
    ds_cmd->add_option("--scenes", ds.scenes, "scene count")->check(CLI::PositiveNumber);
    ds_cmd->add_option("--cams", ds.cameras_per_scene, "cameras per scene (12 by default)")
        ->check(CLI::PositiveNumber);
    ds_cmd->add_option("--res", ds.resolution, "frame resolution")->check(CLI::PositiveNumber);
    ds_cmd->add_option("--stereo", ds.stereo_baseline, "stereo baseline in meters");
    ds_cmd->add_option("--threads", ds.threads, "parallel scene workers");
    ds_cmd->add_option("--out", ds.out_dir, "output directory")->required();
    ds_cmd->add_option("--format", ds_format, "pfm|png")->check(CLI::IsMember({"pfm", "png"}));

    CLI11_PARSE(app, argc, argv);

    if (ops_cmd->parsed()) {
        if (!ops_list) {
            std::cerr << "usage: procgen ops list\n";
            return 2;
        }
        nlohmann::json manifest = nlohmann::json::array();
        for (const OpSignature& sig : Catalog::instance().ops())
            manifest.push_back(signature_json(sig));
        std::cout << manifest.dump(2) << "\n";
        return 0;
    }

    if (bake_cmd->parsed()) {
        Graph graph;
        if (!bake_graph.empty()) {
            graph = parse_graph(read_file(bake_graph));
        } else if (!bake_sampler.empty()) {
            graph = run_sampler(materials::find_sampler(bake_sampler), bake_seed).graph;
        } else if (!bake_material.empty()) {
            nlohmann::json params = nlohmann::json::object();
            if (!bake_params_path.empty()) {
                params = nlohmann::json::parse(read_file(bake_params_path), nullptr, false);
                if (params.is_discarded())
                    raise(errc::malformed_file, bake_params_path + ": invalid JSON");
            }
            graph = material_from_name(bake_material, params);
        } else {
            std::cerr << "bake: one of --material, --graph, --sampler is required\n";
            return 2;
        }
        Image img = bake_texture(graph, bake_channel, bake_res);
        if (bake_validate) {
            std::size_t nan = 0;
            for (double v : img.data)
                if (std::isnan(v)) ++nan;
            std::cout << "nan_count " << nan << "\n";
        }
        if (bake_out.size() >= 4 && bake_out.substr(bake_out.size() - 4) == ".pfm")
            write_pfm(bake_out, img);
        else
            write_png(bake_out, img, bake_channel == "surface");
        return 0;
    }

    if (sample_cmd->parsed()) {
        RunResult r = run_sampler(materials::find_sampler(sample_sampler), sample_seed);
        write_file(sample_out, serialize_graph(r.graph));
        return 0;
    }

    if (trace_cmd->parsed()) {
        const SamplerDef& def = materials::find_sampler(trace_sampler);
        nlohmann::json j;
        if (trace_mode == "instance") {
            j = trace_to_json(trace_instance(def, trace_seed));
        } else {
            j = distribution_to_json(trace_distribution(def));
        }
        if (trace_out.empty()) std::cout << j.dump(2) << "\n";
        else write_file(trace_out, j.dump(2) + "\n");
        return 0;
    }

    if (analyze_cmd->parsed()) {
        const SamplerDef& def = materials::find_sampler(analyze_sampler);
        DistributionGraph dist = trace_distribution(def);
        const DiversityReport report = diversity_report(dist);
        nlohmann::json j{{"sampler", analyze_sampler},
                         {"cont_params_mean", report.cont_params_mean},
                         {"disc_params_mean", report.disc_params_mean},
                         {"cyclomatic", report.cyclomatic},
                         {"entropy_bits", report.entropy_bits},
                         {"path_count", path_count(dist)}};
        if (analyze_out.empty()) std::cout << j.dump(2) << "\n";
        else write_file(analyze_out, j.dump(2) + "\n");
        return 0;
    }

    if (nv_cmd->parsed()) {
        const Image normals = read_pfm(nv_in);
        const NormalVariationResult r = normal_variation(normals, nv_window);
        if (!nv_out.empty()) write_pfm(nv_out, r.variation);
        nlohmann::json j{{"mean", r.mean},
                         {"valid_pixels", r.valid_pixels},
                         {"window", nv_window},
                         {"histogram_edges", r.histogram_edges},
                         {"histogram_counts", r.histogram_counts}};
        if (nv_summary.empty()) std::cout << j.dump(2) << "\n";
        else write_file(nv_summary, j.dump(2) + "\n");
        return 0;
    }

    if (tr_cmd->parsed()) {
        EmitOptions opts;
        opts.hsv_colors = tr_hsv;
        opts.use_operators = !tr_no_operators;
        opts.inline_max_uses = tr_inline;
        opts.function_name = tr_fn;
        const std::string text = emit(parse_graph(read_file(tr_in)), opts);
        if (tr_out.empty()) std::cout << text;
        else write_file(tr_out, text);
        return 0;
    }

    if (room_cmd->parsed()) {
        SampledScene s = sample_scene(room_seed);
        write_scene(room_out, s.spec);
        std::cout << "objects " << s.spec.objects.size() << "\n";
        return 0;
    }

    if (cp_cmd->parsed()) {
        SceneSpec spec = read_scene(cp_scene);
        Scene scene = build_scene(spec);
        RrtParams params;
        params.bounds = scene_interior(spec, cp_clearance);
        params.step = cp_step;
        params.max_iters = cp_iters;
        params.seed = cp_seed;
        auto is_free = [&](const Vec3& p) {
            return point_free(scene, scene.colliders, p, cp_clearance);
        };
        const RrtResult r = rrt_star(parse_triple(cp_start), parse_triple(cp_goal), is_free, params);
        const std::vector<CameraSpec> cams = path_to_cameras(r.path, cp_spacing, cp_lookahead);
        nlohmann::json j;
        j["cost"] = r.cost;
        j["iterations"] = r.iterations;
        j["path"] = nlohmann::json::array();
        for (const Vec3& p : r.path) j["path"].push_back(scenejson::vec3_json(p));
        j["cameras"] = nlohmann::json::array();
        for (const CameraSpec& c : cams) j["cameras"].push_back(scenejson::camera_json(c));
        write_file(cp_out, j.dump(2) + "\n");
        std::cout << "cost " << r.cost << " waypoints " << r.path.size() << " cameras "
                  << cams.size() << "\n";
        return 0;
    }

    if (rg_cmd->parsed()) {
        namespace fs = std::filesystem;
        SceneSpec spec = read_scene(rg_scene);
        Scene scene = build_scene(spec);
        std::vector<CameraSpec> cameras = spec.cameras;
        if (!rg_cameras.empty()) {
            nlohmann::json j = nlohmann::json::parse(read_file(rg_cameras), nullptr, false);
            if (j.is_discarded()) raise(errc::malformed_file, rg_cameras + ": invalid JSON");
            cameras.clear();
            for (const auto& jc : j.at("cameras")) cameras.push_back(scenejson::camera_from(jc));
        }
        if (cameras.empty()) raise(errc::invalid_range, "scene has no cameras to render");
        fs::create_directories(rg_out_dir);
        for (int k = 0; k < static_cast<int>(cameras.size()); ++k) {
            if (rg_cam >= 0 && k != rg_cam) continue;
            CameraSpec cam = cameras[static_cast<std::size_t>(k)];
            if (rg_res > 0) {
                cam.width = rg_res;
                cam.height = rg_res;
            }
            const GTFrame frame = render_gt(scene, cam);
            const std::string prefix =
                (fs::path(rg_out_dir) / ("cam" + std::to_string(k))).string();
            write_pfm(prefix + "_depth.pfm", frame.depth);
            write_pfm(prefix + "_normal.pfm", frame.normal);
            if (rg_format == "png") {
                write_png(prefix + "_depth.png", datasetdetail::depth_preview(frame.depth), false);
                write_png(prefix + "_normal.png", datasetdetail::normal_preview(frame.normal),
                          false);
            }
        }
        return 0;
    }

    if (ds_cmd->parsed()) {
        ds.png_previews = ds_format == "png";
        const nlohmann::json manifest = run_dataset(ds);
        std::cout << "files " << manifest.at("files").size() << "\n";
        return 0;
    }

    std::cerr << app.help();
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const procgen::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
