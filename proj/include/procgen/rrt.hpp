#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "procgen/mesh.hpp"
#include "procgen/rng.hpp"

namespace procgen {

// RRT* over 3D positions. The free-space oracle is a point predicate;
// segments are validated by sampling at step/10.
struct RrtParams {
    Aabb bounds;
    double step = 0.5;
    double gamma = 0.0;       // near radius constant; <= 0 picks 2 * volume^(1/3)
    double goal_bias = 0.1;
    int max_iters = 5000;
    std::uint64_t seed = 0;
};

struct RrtResult {
    std::vector<Vec3> path;              // start .. goal
    double cost = 0.0;                   // path length in meters
    std::vector<double> best_cost_trace;  // best goal cost after each iteration
    int iterations = 0;
};

using FreeOracle = std::function<bool(const Vec3&)>;

inline bool segment_free(const FreeOracle& free, const Vec3& a, const Vec3& b, double step) {
    const double len = distance(a, b);
    const int samples = std::max(1, static_cast<int>(std::ceil(len / (step / 10.0))));
    for (int i = 0; i <= samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        if (!free(a + (b - a) * t)) return false;
    }
    return true;
}

namespace rrtdetail {

struct TreeNode {
    Vec3 position;
    int parent = -1;
    double cost = 0.0;
    std::vector<int> children;
};

inline void propagate_cost(std::vector<TreeNode>& tree, int root, double delta) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int n = stack.back();
        stack.pop_back();
        tree[static_cast<std::size_t>(n)].cost += delta;
        for (int c : tree[static_cast<std::size_t>(n)].children) stack.push_back(c);
    }
}

inline void reparent(std::vector<TreeNode>& tree, int node, int new_parent, double new_cost) {
    TreeNode& n = tree[static_cast<std::size_t>(node)];
    if (n.parent >= 0) {
        auto& siblings = tree[static_cast<std::size_t>(n.parent)].children;
        siblings.erase(std::find(siblings.begin(), siblings.end(), node));
    }
    const double delta = new_cost - n.cost;
    n.parent = new_parent;
    tree[static_cast<std::size_t>(new_parent)].children.push_back(node);
    propagate_cost(tree, node, delta);
}

}  // namespace rrtdetail

inline RrtResult rrt_star(const Vec3& start, const Vec3& goal, const FreeOracle& free,
                          const RrtParams& params) {
    if (!free(start) || !free(goal))
        raise(errc::no_path_found, "start or goal is not collision-free");

    RrtResult result;
    if (start == goal) {
        result.path = {start};
        return result;
    }

    using rrtdetail::TreeNode;
    std::vector<TreeNode> tree;
    tree.push_back({start, -1, 0.0, {}});

    const Vec3 extent = params.bounds.hi - params.bounds.lo;
    const double volume = std::max(1e-9, extent.x * extent.y * extent.z);
    const double gamma = params.gamma > 0.0 ? params.gamma : 2.0 * std::cbrt(volume);

    RandomStream rng = RandomStream::root(params.seed);
    int goal_node = -1;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < params.max_iters; ++iter) {
        Vec3 sample;
        if (rng.next_unit() < params.goal_bias) {
            sample = goal;
        } else {
            sample = {params.bounds.lo.x + extent.x * rng.next_unit(),
                      params.bounds.lo.y + extent.y * rng.next_unit(),
                      params.bounds.lo.z + extent.z * rng.next_unit()};
        }

        int nearest = 0;
        double nearest_d = distance(tree[0].position, sample);
        for (std::size_t i = 1; i < tree.size(); ++i) {
            const double d = distance(tree[i].position, sample);
            if (d < nearest_d) {
                nearest_d = d;
                nearest = static_cast<int>(i);
            }
        }

        Vec3 candidate = sample;
        if (nearest_d > params.step)
            candidate = tree[static_cast<std::size_t>(nearest)].position +
                        (sample - tree[static_cast<std::size_t>(nearest)].position) *
                            (params.step / nearest_d);
        if (!free(candidate)) {
            result.best_cost_trace.push_back(
                goal_node >= 0 ? tree[static_cast<std::size_t>(goal_node)].cost : kInf);
            continue;
        }

        const double n = static_cast<double>(tree.size());
        const double radius =
            std::min(gamma * std::cbrt(std::log(n + 1.0) / (n + 1.0)), 2.0 * params.step);

        // Lowest-cost reachable parent among the neighborhood.
        std::vector<int> near;
        for (std::size_t i = 0; i < tree.size(); ++i)
            if (distance(tree[i].position, candidate) <= radius) near.push_back(static_cast<int>(i));
        if (near.empty()) near.push_back(nearest);

        int best_parent = -1;
        double best_cost = kInf;
        for (int i : near) {
            const TreeNode& p = tree[static_cast<std::size_t>(i)];
            const double c = p.cost + distance(p.position, candidate);
            if (c < best_cost && segment_free(free, p.position, candidate, params.step)) {
                best_cost = c;
                best_parent = i;
            }
        }
        if (best_parent < 0) {
            result.best_cost_trace.push_back(
                goal_node >= 0 ? tree[static_cast<std::size_t>(goal_node)].cost : kInf);
            continue;
        }

        const int node = static_cast<int>(tree.size());
        tree.push_back({candidate, best_parent, best_cost, {}});
        tree[static_cast<std::size_t>(best_parent)].children.push_back(node);

        // Rewire the neighborhood through the new node where cheaper.
        for (int i : near) {
            if (i == best_parent) continue;
            TreeNode& other = tree[static_cast<std::size_t>(i)];
            const double via = best_cost + distance(candidate, other.position);
            if (via < other.cost && segment_free(free, candidate, other.position, params.step))
                rrtdetail::reparent(tree, i, node, via);
        }

        // Try to connect the new node to the goal.
        const double to_goal = distance(candidate, goal);
        if (to_goal <= params.step && segment_free(free, candidate, goal, params.step)) {
            const double goal_cost = best_cost + to_goal;
            if (goal_node < 0) {
                goal_node = static_cast<int>(tree.size());
                tree.push_back({goal, node, goal_cost, {}});
                tree[static_cast<std::size_t>(node)].children.push_back(goal_node);
            } else if (goal_cost < tree[static_cast<std::size_t>(goal_node)].cost) {
                rrtdetail::reparent(tree, goal_node, node, goal_cost);
            }
        }

        result.best_cost_trace.push_back(
            goal_node >= 0 ? tree[static_cast<std::size_t>(goal_node)].cost : kInf);
        result.iterations = iter + 1;
    }

    if (goal_node < 0)
        raise(errc::no_path_found,
              "no path within " + std::to_string(params.max_iters) + " iterations");

    std::vector<Vec3> reversed;
    for (int n = goal_node; n >= 0; n = tree[static_cast<std::size_t>(n)].parent)
        reversed.push_back(tree[static_cast<std::size_t>(n)].position);
    result.path.assign(reversed.rbegin(), reversed.rend());
    result.cost = tree[static_cast<std::size_t>(goal_node)].cost;

    for (std::size_t i = 0; i + 1 < result.path.size(); ++i)
        if (!segment_free(free, result.path[i], result.path[i + 1], params.step))
            raise(errc::no_path_found, "emitted segment failed dense validation");
    return result;
}

}  // namespace procgen
