#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "procgen/pfm.hpp"
#include "procgen/png.hpp"
#include "procgen/render.hpp"
#include "procgen/scenegen.hpp"
#include "procgen/version.hpp"

namespace procgen {

// End-to-end dataset generation: seed -> rooms -> cameras -> ground-truth
// frames. The whole output tree is a pure function of (seed, options, tool
// version); worker count only changes wall time. Filenames embed the
// per-scene seed and camera index so files are greppable without the
// manifest.
struct DatasetOptions {
    std::uint64_t seed = 0;
    int scenes = 2;
    int cameras_per_scene = 12;
    int resolution = 128;
    double stereo_baseline = 0.0;  // > 0 adds right-eye frames and disparity
    int threads = 1;
    bool png_previews = false;
    std::string out_dir = ".";
};

namespace datasetdetail {

struct FileEntry {
    std::string path;
    int scene_index = 0;
    std::uint64_t scene_seed = 0;
    int camera = -1;
    std::string type;
};

inline Image normal_preview(const Image& normal) {
    Image out(normal.width, normal.height, 3);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = normal.data[i] * 0.5 + 0.5;
    return out;
}

inline Image depth_preview(const Image& depth) {
    Image out(depth.width, depth.height, 1);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = std::isinf(depth.data[i]) ? 0.0 : 1.0 / (1.0 + depth.data[i]);
    return out;
}

struct SceneJob {
    std::vector<FileEntry> files;
};

inline SceneJob run_scene(const DatasetOptions& opt, int index) {
    namespace fs = std::filesystem;
    RandomStream scene_stream = split(RandomStream::root(opt.seed), "scene" + std::to_string(index));
    const std::uint64_t scene_seed = scene_stream.next_raw();

    SampledScene sampled = sample_scene(scene_seed);
    RandomStream cam_stream = split(scene_stream, "cameras");
    const Aabb interior = scene_interior(sampled.spec);
    auto is_free = [&](const Vec3& p) {
        return point_free(sampled.scene, sampled.scene.colliders, p, 0.25);
    };
    sampled.spec.cameras =
        random_cameras(cam_stream, interior, opt.cameras_per_scene, is_free, opt.stereo_baseline,
                       1.0471975511965976, opt.resolution, opt.resolution);

    SceneJob job;
    const std::string scene_tag = "scene" + std::to_string(scene_seed);
    auto emit = [&](const std::string& name, const Image& img, int cam, const std::string& type,
                    bool preview_is_normal) {
        const std::string path = (fs::path(opt.out_dir) / name).string();
        write_pfm(path, img);
        job.files.push_back({name, index, scene_seed, cam, type});
        if (opt.png_previews) {
            const std::string png_name = name.substr(0, name.size() - 4) + ".png";
            const Image preview = preview_is_normal ? normal_preview(img) : depth_preview(img);
            write_png((fs::path(opt.out_dir) / png_name).string(), preview, false);
            job.files.push_back({png_name, index, scene_seed, cam, type + "_preview"});
        }
    };

    for (int k = 0; k < static_cast<int>(sampled.spec.cameras.size()); ++k) {
        const CameraSpec& cam = sampled.spec.cameras[static_cast<std::size_t>(k)];
        const GTFrame frame = render_gt(sampled.scene, cam);
        const std::string prefix = scene_tag + "_cam" + std::to_string(k);
        emit(prefix + "_depth.pfm", frame.depth, k, "depth", false);
        emit(prefix + "_normal.pfm", frame.normal, k, "normal", true);
        if (opt.stereo_baseline > 0.0) {
            const Image disparity =
                disparity_from_depth(frame.depth, cam.focal_px(), opt.stereo_baseline);
            emit(prefix + "_disparity.pfm", disparity, k, "disparity", false);
            const CameraSpec right = stereo_partner(cam);
            const GTFrame right_frame = render_gt(sampled.scene, right);
            emit(prefix + "_right_depth.pfm", right_frame.depth, k, "right_depth", false);
            emit(prefix + "_right_normal.pfm", right_frame.normal, k, "right_normal", true);
        }
    }

    const std::string scene_file = scene_tag + ".json";
    write_scene((fs::path(opt.out_dir) / scene_file).string(), sampled.spec);
    job.files.push_back({scene_file, index, scene_seed, -1, "scene"});
    return job;
}

}  // namespace datasetdetail

// Runs the dataset end to end and writes dataset.json. Returns the manifest.
inline nlohmann::json run_dataset(const DatasetOptions& opt) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);

    std::vector<datasetdetail::SceneJob> jobs(static_cast<std::size_t>(opt.scenes));
    const int workers = std::max(1, opt.threads);
    if (workers == 1) {
        for (int i = 0; i < opt.scenes; ++i)
            jobs[static_cast<std::size_t>(i)] = datasetdetail::run_scene(opt, i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (int i = next.fetch_add(1); i < opt.scenes; i = next.fetch_add(1))
                    jobs[static_cast<std::size_t>(i)] = datasetdetail::run_scene(opt, i);
            });
        for (std::thread& t : pool) t.join();
    }

    nlohmann::json manifest;
    manifest["tool_version"] = kVersion;
    manifest["seed"] = opt.seed;
    manifest["scenes"] = opt.scenes;
    manifest["cameras_per_scene"] = opt.cameras_per_scene;
    manifest["resolution"] = opt.resolution;
    manifest["stereo_baseline"] = opt.stereo_baseline;
    manifest["files"] = nlohmann::json::array();
    for (const auto& job : jobs)
        for (const auto& f : job.files)
            manifest["files"].push_back({{"path", f.path},
                                         {"scene_index", f.scene_index},
                                         {"scene_seed", f.scene_seed},
                                         {"camera", f.camera},
                                         {"type", f.type}});

    std::ofstream out(fs::path(opt.out_dir) / "dataset.json");
    out << manifest.dump(2) << "\n";
    return manifest;
}

}  // namespace procgen
