#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "procgen/image.hpp"
#include "procgen/trace.hpp"

namespace procgen {

// Diversity metrics over a sampler's distribution graph. Everything here is
// computed by dynamic programming over the control tree -- no path
// enumeration -- so it stays cheap for samplers with millions of paths.
//
// Entropy model: the control path contributes its own distribution entropy;
// every continuous draw contributes 3 bits (an 8-bin discretization over its
// declared range); every non-branching discrete draw contributes the entropy
// of its weight vector. Draws are independent given the path.
struct DiversityReport {
    double cont_params_mean = 0.0;
    double disc_params_mean = 0.0;
    int cyclomatic = 1;
    double entropy_bits = 0.0;
};

inline constexpr double kContinuousDrawBits = 3.0;

namespace analyticsdetail {

inline double weight_entropy_bits(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double h = 0.0;
    for (double w : weights) {
        const double p = w / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct SeqStats {
    double cont = 0.0;     // expected continuous draws
    double disc = 0.0;     // expected discrete decisions (choices + discrete draws)
    double entropy = 0.0;  // bits
};

class DiversityDP {
public:
    explicit DiversityDP(const DistributionGraph& g) : g_(g) {}

    SeqStats seq(const ControlSeq& s) {
        SeqStats total;
        for (const ControlNode& n : s) {
            switch (n.type) {
                case ControlNode::Type::Draw: {
                    if (n.spec.continuous()) {
                        if (!std::isfinite(n.spec.range_lo()) || !std::isfinite(n.spec.range_hi()))
                            raise(errc::unbounded_param, n.spec.name);
                        total.cont += 1.0;
                        total.entropy += kContinuousDrawBits;
                    } else {
                        total.disc += 1.0;
                        total.entropy += weight_entropy_bits(n.spec.weights);
                    }
                    break;
                }
                case ControlNode::Type::Choice: {
                    total.disc += 1.0;
                    total.entropy += weight_entropy_bits(n.weights);
                    double wsum = 0.0;
                    for (double w : n.weights) wsum += w;
                    for (std::size_t b = 0; b < n.branches.size(); ++b) {
                        const double p = n.weights[b] / wsum;
                        const SeqStats bs = seq(n.branches[b]);
                        total.cont += p * bs.cont;
                        total.disc += p * bs.disc;
                        total.entropy += p * bs.entropy;
                    }
                    break;
                }
                case ControlNode::Type::SubRef: {
                    const SeqStats ss = sub(n.sub_id);
                    total.cont += ss.cont;
                    total.disc += ss.disc;
                    total.entropy += ss.entropy;
                    break;
                }
                default: break;
            }
        }
        return total;
    }

    // Distinct choice sites of one frame: branch-duplicated occurrences of
    // the same frame-unique name collapse to one site.
    void collect_sites(const ControlSeq& s, std::map<std::string, std::size_t>& sites) {
        for (const ControlNode& n : s) {
            if (n.type == ControlNode::Type::Choice) {
                sites.emplace(n.name, n.weights.size());
                for (const auto& b : n.branches) collect_sites(b, sites);
            }
        }
    }

    SeqStats sub(const std::string& id) {
        auto it = memo_.find(id);
        if (it != memo_.end()) return it->second;
        SeqStats s = seq(g_.subs.at(id));
        memo_[id] = s;
        return s;
    }

private:
    const DistributionGraph& g_;
    std::map<std::string, SeqStats> memo_;
};

}  // namespace analyticsdetail

// Probability-weighted expected number of (continuous, discrete) parameters
// drawn per generated instance.
inline std::pair<double, double> count_params(const DistributionGraph& g) {
    analyticsdetail::DiversityDP dp(g);
    const analyticsdetail::SeqStats s = dp.seq(g.root);
    return {s.cont, s.disc};
}

// M = E - N + 2 over the control-flow graph in which each k-way choice fans
// out k edges that re-merge; for structured bodies this reduces to
// 1 + sum over choice sites of (k - 1). Each memoized component counts once,
// the way grammar rules do.
inline int cyclomatic(const DistributionGraph& g) {
    analyticsdetail::DiversityDP dp(g);
    std::size_t extra = 0;
    std::map<std::string, std::size_t> sites;
    dp.collect_sites(g.root, sites);
    for (const auto& [name, k] : sites) extra += k - 1;
    for (const auto& [id, seq] : g.subs) {
        std::map<std::string, std::size_t> sub_sites;
        dp.collect_sites(seq, sub_sites);
        for (const auto& [name, k] : sub_sites) extra += k - 1;
    }
    return 1 + static_cast<int>(extra);
}

// Joint entropy of (control path, discretized draws) in bits.
inline double entropy(const DistributionGraph& g) {
    analyticsdetail::DiversityDP dp(g);
    return dp.seq(g.root).entropy;
}

inline DiversityReport diversity_report(const DistributionGraph& g) {
    DiversityReport r;
    auto [cont, disc] = count_params(g);
    r.cont_params_mean = cont;
    r.disc_params_mean = disc;
    r.cyclomatic = cyclomatic(g);
    r.entropy_bits = entropy(g);
    return r;
}

// ---------------------------------------------------------------------------
// Normal-variation image metric
// ---------------------------------------------------------------------------

struct NormalVariationResult {
    Image variation;      // single channel, V per pixel (0 on invalid pixels)
    double mean = 0.0;    // over valid pixels
    std::vector<double> histogram_edges;
    std::vector<std::uint64_t> histogram_counts;
    std::uint64_t valid_pixels = 0;
};

inline constexpr int kNormalVariationWindow = 15;
inline constexpr int kNormalVariationBins = 32;

// V_i = sum over the window of angle(n_i, n_j), windows clipped at the
// borders, pixels with zero normals excluded on both sides of the pair.
inline NormalVariationResult normal_variation(const Image& normals,
                                              int window = kNormalVariationWindow) {
    if (window % 2 == 0 || window < 1) raise(errc::even_window, "window must be odd");
    if (normals.channels != 3) raise(errc::kind_mismatch, "normal map must have 3 channels");

    const int w = normals.width, h = normals.height;
    std::vector<char> valid(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const Vec3 n = pixel3(normals, x, y);
            const double len = n.length();
            if (len == 0.0) continue;
            if (std::fabs(len - 1.0) > 1e-3)
                raise(errc::out_of_range, "normals must be unit length within 1e-3");
            valid[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                  static_cast<std::size_t>(x)] = 1;
        }

    NormalVariationResult result;
    result.variation = Image(w, h, 1);
    const int r = window / 2;
    double sum = 0.0;
    double vmax = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!valid[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                       static_cast<std::size_t>(x)])
                continue;
            const Vec3 ni = pixel3(normals, x, y);
            double v = 0.0;
            const int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
            const int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) {
                    if (!valid[static_cast<std::size_t>(yy) * static_cast<std::size_t>(w) +
                               static_cast<std::size_t>(xx)])
                        continue;
                    const Vec3 nj = pixel3(normals, xx, yy);
                    const double d = std::min(1.0, std::max(-1.0, dot(ni, nj)));
                    v += std::acos(d);
                }
            result.variation.at(x, y, 0) = v;
            sum += v;
            vmax = std::max(vmax, v);
            ++result.valid_pixels;
        }
    result.mean = result.valid_pixels > 0 ? sum / static_cast<double>(result.valid_pixels) : 0.0;

    result.histogram_edges.resize(kNormalVariationBins + 1);
    result.histogram_counts.assign(kNormalVariationBins, 0);
    const double hi = vmax > 0.0 ? vmax : 1.0;
    for (int i = 0; i <= kNormalVariationBins; ++i)
        result.histogram_edges[static_cast<std::size_t>(i)] =
            hi * static_cast<double>(i) / kNormalVariationBins;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!valid[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                       static_cast<std::size_t>(x)])
                continue;
            const double v = result.variation.at(x, y, 0);
            int bin = static_cast<int>(v / hi * kNormalVariationBins);
            if (bin >= kNormalVariationBins) bin = kNormalVariationBins - 1;
            ++result.histogram_counts[static_cast<std::size_t>(bin)];
        }
    return result;
}

}  // namespace procgen
