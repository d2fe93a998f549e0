// gen.hpp - instance generators: reduction-based factories with known ground
// truth, plus random planted instances
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "triclust/core.hpp"

namespace triclust {

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // fixed ordering e_1..e_m, 0-indexed vertices

    void validate() const {
        std::vector<std::pair<int, int>> seen;
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("Graph: bad vertex");
            if (u == v) throw std::invalid_argument("Graph: loop");
            auto e = std::minmax(u, v);
            seen.emplace_back(e.first, e.second);
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw std::invalid_argument("Graph: parallel edges");
    }

    static Graph complete(int n) {
        Graph g;
        g.n = n;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
        return g;
    }

    static Graph cycle(int n) {
        Graph g;
        g.n = n;
        for (int u = 0; u < n; ++u) g.edges.emplace_back(u, (u + 1) % n);
        return g;
    }

    std::vector<int> degrees() const {
        std::vector<int> deg(n, 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        return deg;
    }
};

// Incidence vectors over the edge coordinates, extended by n-1 private
// coordinates per vertex with pad[i] of them set to one. Distances obey
// delta(a_i,a_j) = deg(i)+pad(i)+deg(j)+pad(j) - 2 [i adjacent to j].
inline std::vector<TriVector> incidence_reduction(const Graph& g, const std::vector<int>& pads) {
    g.validate();
    if (static_cast<int>(pads.size()) != g.n)
        throw std::invalid_argument("incidence_reduction: pad count mismatch");
    for (int x : pads)
        if (x < 0 || x > g.n - 1) throw std::invalid_argument("incidence_reduction: pad out of range");
    const int m = static_cast<int>(g.edges.size());
    const int d = m + g.n * (g.n - 1);
    std::vector<TriVector> rows;
    for (int i = 0; i < g.n; ++i) {
        TriVector row = TriVector::all_zero(d);
        for (int e = 0; e < m; ++e)
            if (g.edges[e].first == i || g.edges[e].second == i) row.set(e, Tri::One);
        const int base = m + i * (g.n - 1);
        for (int p = 0; p < pads[i]; ++p) row.set(base + p, Tri::One);
        rows.push_back(std::move(row));
    }
    return rows;
}

// The 3-coloring reduction: one row per vertex over the edge coordinates,
// missing on non-incident edges; on edge {u,v} with v<u the row of v gets 0
// and the row of u gets 1. The instance (k=3, r=0) is YES iff the graph is
// 3-colorable. Edgeless graphs get one constant zero column so d >= 1.
inline Instance coloring_completion_instance(const Graph& g, Variant variant = Variant::In) {
    g.validate();
    Instance inst;
    inst.k = 3;
    inst.r = 0;
    inst.variant = variant;
    const int m = static_cast<int>(g.edges.size());
    inst.d = std::max(m, 1);
    for (int v = 0; v < g.n; ++v) {
        TriVector row = TriVector::all_missing(inst.d);
        if (m == 0) row.set(0, Tri::Zero);
        for (int e = 0; e < m; ++e) {
            auto [a, b] = g.edges[e];
            if (a != v && b != v) continue;
            int lo = std::min(a, b);
            row.set(e, v == lo ? Tri::Zero : Tri::One);
        }
        inst.rows.push_back(std::move(row));
    }
    if (inst.rows.empty()) throw std::invalid_argument("coloring_completion_instance: empty graph");
    return inst;
}

// Closest-string reduction: the strings plus one all-missing row, k=1, In.
inline Instance closest_string_instance(const std::vector<std::string>& strings, int r) {
    if (strings.empty()) throw std::invalid_argument("closest_string_instance: no strings");
    Instance inst;
    inst.k = 1;
    inst.r = r;
    inst.variant = Variant::In;
    inst.d = static_cast<int>(strings[0].size());
    for (const auto& s : strings) {
        if (static_cast<int>(s.size()) != inst.d)
            throw std::invalid_argument("closest_string_instance: unequal lengths");
        inst.rows.push_back(TriVector::from_string(s));
    }
    inst.rows.push_back(TriVector::all_missing(inst.d));
    return inst;
}

struct MissingSpec {
    int rows = 0;   // number of rows eligible to carry missing entries
    int cols = 0;   // number of columns eligible to carry missing entries
    int count = 0;  // total missing entries to place
};

struct PlantedInstance {
    Instance instance;
    ClusteringSolution witness;  // valid for the deduplicated instance rows
    std::vector<TriVector> raw_rows;  // before deduplication, as emitted to file
};

namespace gen_detail {

inline int bounded(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % n); }

}  // namespace gen_detail

namespace gen_detail {

inline std::optional<PlantedInstance> planted_attempt(int n, int d, int k, int r, Variant variant,
                                                      const MissingSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int kk = std::min(k, n);

    std::vector<TriVector> centers;
    for (int c = 0; c < kk; ++c) {
        TriVector v = TriVector::all_zero(d);
        for (int j = 0; j < d; ++j)
            if (rng() & 1) v.set(j, Tri::One);
        centers.push_back(std::move(v));
    }

    const int reach = variant == Variant::Diam ? r / 2 : r;
    std::vector<TriVector> raw;
    std::vector<int> origin;
    for (int i = 0; i < n; ++i) {
        int c = i < kk ? i : bounded(rng, kk);  // first kk rows are the centers themselves
        TriVector row = centers[c];
        if (i >= kk && reach > 0) {
            int flips = bounded(rng, reach + 1);
            for (int f = 0; f < flips; ++f) {
                int j = bounded(rng, d);
                row.set(j, row.get(j) == Tri::One ? Tri::Zero : Tri::One);
            }
        }
        raw.push_back(std::move(row));
        origin.push_back(c);
    }

    std::vector<TriVector> completed = raw;  // the retained completion

    // erase entries only inside the eligible rows/columns
    std::vector<int> erows(n), ecols(d);
    for (int i = 0; i < n; ++i) erows[i] = i;
    for (int j = 0; j < d; ++j) ecols[j] = j;
    std::shuffle(erows.begin(), erows.end(), rng);
    std::shuffle(ecols.begin(), ecols.end(), rng);
    erows.resize(std::min(spec.rows, n));
    ecols.resize(std::min(spec.cols, d));
    int placed = 0;
    for (int attempt = 0; attempt < spec.count * 20 && placed < spec.count; ++attempt) {
        bool pick_row = !erows.empty() && (ecols.empty() || (rng() & 1));
        int i, j;
        if (pick_row) {
            i = erows[bounded(rng, static_cast<int>(erows.size()))];
            j = bounded(rng, d);
        } else if (!ecols.empty()) {
            i = bounded(rng, n);
            j = ecols[bounded(rng, static_cast<int>(ecols.size()))];
        } else {
            break;
        }
        if (raw[i].get(j) != Tri::Missing) {
            raw[i].set(j, Tri::Missing);
            ++placed;
        }
    }

    PlantedInstance out;
    out.raw_rows = raw;
    out.instance.d = d;
    out.instance.k = k;
    out.instance.r = r;
    out.instance.variant = variant;
    auto dd = dedupe_rows(raw);
    out.instance.rows = gather(raw, dd.kept);

    ClusteringSolution& w = out.witness;
    std::vector<std::vector<int>> blocks(kk);
    for (std::size_t pos = 0; pos < dd.kept.size(); ++pos) {
        w.completion.push_back(completed[dd.kept[pos]]);
        blocks[origin[dd.kept[pos]]].push_back(static_cast<int>(pos));
    }
    for (int c = 0; c < kk; ++c) {
        if (blocks[c].empty()) continue;
        w.clusters.push_back(blocks[c]);
        if (variant == Variant::In) {
            int ctr = -1;
            for (int pos : blocks[c])
                if (w.completion[pos] == centers[c]) {
                    ctr = pos;
                    break;
                }
            if (ctr == -1) return std::nullopt;  // center row merged away by erasure
            w.in_centers.push_back(ctr);
        }
        if (variant == Variant::Any) w.any_centers.push_back(centers[c]);
    }
    if (!verify_solution(out.instance, w)) return std::nullopt;
    return out;
}

}  // namespace gen_detail

// Random YES instance: k planted centers, rows scattered within the variant's
// reach, then entries erased inside the declared rows/columns so the covering
// number stays within spec. The witness on the deduplicated rows is retained;
// degenerate erasure collisions trigger a deterministic reseed.
inline PlantedInstance random_planted(int n, int d, int k, int r, Variant variant,
                                      const MissingSpec& spec, std::uint64_t seed) {
    if (n < 1 || d < 1 || k < 1 || r < 0) throw std::invalid_argument("random_planted: bad sizes");
    if (r > d) throw std::invalid_argument("random_planted: radius exceeds dimension");
    if (spec.rows > n || spec.cols > d || spec.count < 0)
        throw std::invalid_argument("random_planted: infeasible missing spec");
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto out = gen_detail::planted_attempt(n, d, k, r, variant, spec,
                                               seed + 0x9e3779b97f4a7c15ULL * attempt);
        if (out) return *out;
    }
    throw std::runtime_error("random_planted: could not build a verifiable instance");
}

}  // namespace triclust
