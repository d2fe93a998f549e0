// core.hpp - tri-state vectors, distances, neighborhoods, compatibility graphs
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace triclust {

enum class Tri : std::uint8_t { Zero = 0, One = 1, Missing = 2 };

enum class Variant { In, Any, Diam };

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::In: return "in";
        case Variant::Any: return "any";
        case Variant::Diam: return "diam";
    }
    return "?";
}

inline std::optional<Variant> variant_from_name(std::string_view s) {
    if (s == "in") return Variant::In;
    if (s == "any") return Variant::Any;
    if (s == "diam") return Variant::Diam;
    return std::nullopt;
}

// A vector over {0,1,missing}, bit-packed as (known-mask, value-mask) words.
// Unused high bits of both masks are kept zero so word-wise ops need no
// trailing fixups.
class TriVector {
public:
    TriVector() = default;

    explicit TriVector(int dim)
        : dim_(dim), known_((dim + 63) / 64, 0), value_((dim + 63) / 64, 0) {
        if (dim < 0) throw std::invalid_argument("TriVector: negative dimension");
    }

    static TriVector from_string(std::string_view s) {
        TriVector v(static_cast<int>(s.size()));
        for (int i = 0; i < v.dim_; ++i) {
            switch (s[i]) {
                case '0': v.set(i, Tri::Zero); break;
                case '1': v.set(i, Tri::One); break;
                case '?': v.set(i, Tri::Missing); break;
                default:
                    throw std::invalid_argument(std::string("TriVector: bad symbol '") + s[i] + "'");
            }
        }
        return v;
    }

    static TriVector all_missing(int dim) { return TriVector(dim); }

    static TriVector all_zero(int dim) {
        TriVector v(dim);
        for (int i = 0; i < dim; ++i) v.set(i, Tri::Zero);
        return v;
    }

    int dim() const { return dim_; }

    Tri get(int i) const {
        check_index(i);
        if (!(known_[i >> 6] >> (i & 63) & 1)) return Tri::Missing;
        return (value_[i >> 6] >> (i & 63) & 1) ? Tri::One : Tri::Zero;
    }

    void set(int i, Tri t) {
        check_index(i);
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (t == Tri::Missing) {
            known_[i >> 6] &= ~bit;
            value_[i >> 6] &= ~bit;
        } else {
            known_[i >> 6] |= bit;
            if (t == Tri::One)
                value_[i >> 6] |= bit;
            else
                value_[i >> 6] &= ~bit;
        }
    }

    bool known(int i) const {
        check_index(i);
        return known_[i >> 6] >> (i & 63) & 1;
    }

    bool complete() const {
        int full = dim_ / 64;
        for (int w = 0; w < full; ++w)
            if (known_[w] != ~std::uint64_t{0}) return false;
        if (dim_ % 64) {
            std::uint64_t tail = (std::uint64_t{1} << (dim_ % 64)) - 1;
            if (known_.back() != tail) return false;
        }
        return true;
    }

    int missing_count() const {
        int known_bits = 0;
        for (auto w : known_) known_bits += std::popcount(w);
        return dim_ - known_bits;
    }

    std::vector<int> missing_positions() const {
        std::vector<int> out;
        for (int i = 0; i < dim_; ++i)
            if (!known(i)) out.push_back(i);
        return out;
    }

    const std::vector<std::uint64_t>& known_words() const { return known_; }
    const std::vector<std::uint64_t>& value_words() const { return value_; }

    std::string to_string() const {
        std::string s(dim_, '?');
        for (int i = 0; i < dim_; ++i) {
            Tri t = get(i);
            s[i] = t == Tri::Missing ? '?' : (t == Tri::One ? '1' : '0');
        }
        return s;
    }

    // Restriction to a sorted coordinate subset.
    TriVector restrict(const std::vector<int>& coords) const {
        TriVector out(static_cast<int>(coords.size()));
        for (std::size_t j = 0; j < coords.size(); ++j) out.set(static_cast<int>(j), get(coords[j]));
        return out;
    }

    // Fill every missing coordinate with the donor's value. Donor must be complete.
    TriVector completed_like(const TriVector& donor) const {
        if (donor.dim_ != dim_) throw std::invalid_argument("completed_like: dimension mismatch");
        TriVector out = *this;
        for (std::size_t w = 0; w < out.known_.size(); ++w) {
            std::uint64_t fill = ~out.known_[w] & donor.known_[w];
            out.value_[w] |= fill & donor.value_[w];
            out.known_[w] |= fill;
        }
        return out;
    }

    friend bool operator==(const TriVector& a, const TriVector& b) {
        return a.dim_ == b.dim_ && a.known_ == b.known_ && a.value_ == b.value_;
    }
    friend bool operator!=(const TriVector& a, const TriVector& b) { return !(a == b); }

    std::size_t hash() const {
        std::size_t h = std::hash<int>{}(dim_);
        auto mix = [&h](std::uint64_t w) {
            h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        for (auto w : known_) mix(w);
        for (auto w : value_) mix(w);
        return h;
    }

private:
    void check_index(int i) const {
        if (i < 0 || i >= dim_) throw std::out_of_range("TriVector: index out of range");
    }

    int dim_ = 0;
    std::vector<std::uint64_t> known_;
    std::vector<std::uint64_t> value_;
};

struct TriVectorHash {
    std::size_t operator()(const TriVector& v) const { return v.hash(); }
};

inline void check_same_dim(const TriVector& a, const TriVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
}

// delta(a,b): number of coordinates where both entries are known and differ.
inline int hamming_delta(const TriVector& a, const TriVector& b) {
    check_same_dim(a, b);
    const auto& ka = a.known_words();
    const auto& kb = b.known_words();
    const auto& va = a.value_words();
    const auto& vb = b.value_words();
    int total = 0;
    for (std::size_t w = 0; w < ka.size(); ++w)
        total += std::popcount((va[w] ^ vb[w]) & ka[w] & kb[w]);
    return total;
}

// The exact coordinate set counted by hamming_delta, ascending, 0-indexed.
inline std::vector<int> delta_set(const TriVector& a, const TriVector& b) {
    check_same_dim(a, b);
    const auto& ka = a.known_words();
    const auto& kb = b.known_words();
    const auto& va = a.value_words();
    const auto& vb = b.value_words();
    std::vector<int> out;
    for (std::size_t w = 0; w < ka.size(); ++w) {
        std::uint64_t diff = (va[w] ^ vb[w]) & ka[w] & kb[w];
        while (diff) {
            int bit = std::countr_zero(diff);
            out.push_back(static_cast<int>(w) * 64 + bit);
            diff &= diff - 1;
        }
    }
    return out;
}

enum class NeighborhoodMode { Exact, AtMost };

inline std::vector<int> neighborhood(std::span<const TriVector> rows, const TriVector& v, int radius,
                                     NeighborhoodMode mode) {
    std::vector<int> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int dist = hamming_delta(rows[i], v);
        if (mode == NeighborhoodMode::Exact ? dist == radius : dist <= radius)
            out.push_back(static_cast<int>(i));
    }
    return out;
}

inline int diameter(std::span<const TriVector> rows, const std::vector<int>& subset) {
    if (subset.empty()) throw std::domain_error("diameter: empty row set");
    int best = 0;
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = i + 1; j < subset.size(); ++j)
            best = std::max(best, hamming_delta(rows[subset[i]], rows[subset[j]]));
    return best;
}

struct Instance {
    int d = 0;
    int k = 1;
    int r = 0;
    Variant variant = Variant::In;
    std::vector<TriVector> rows;

    int missing_total() const {
        int m = 0;
        for (const auto& row : rows) m += row.missing_count();
        return m;
    }
};

struct CompatibilityGraph {
    int threshold = 0;  // r, or 2r for the Any variant
    std::vector<std::vector<int>> adj;
    std::vector<int> component;  // component id per vertex
    int n_components = 0;

    std::vector<std::vector<int>> component_members() const {
        std::vector<std::vector<int>> out(n_components);
        for (std::size_t i = 0; i < component.size(); ++i) out[component[i]].push_back(static_cast<int>(i));
        return out;
    }
};

inline CompatibilityGraph build_compatibility(std::span<const TriVector> rows, int threshold) {
    CompatibilityGraph g;
    g.threshold = threshold;
    const int n = static_cast<int>(rows.size());
    g.adj.assign(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (hamming_delta(rows[i], rows[j]) <= threshold) {
                g.adj[i].push_back(j);
                g.adj[j].push_back(i);
            }
    g.component.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (g.component[s] != -1) continue;
        int id = g.n_components++;
        std::vector<int> stack{s};
        g.component[s] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : g.adj[u])
                if (g.component[w] == -1) {
                    g.component[w] = id;
                    stack.push_back(w);
                }
        }
    }
    return g;
}

inline int variant_threshold(Variant v, int r) { return v == Variant::Any ? 2 * r : r; }

inline CompatibilityGraph compatibility_graph(const Instance& inst) {
    return build_compatibility(inst.rows, variant_threshold(inst.variant, inst.r));
}

// Coordinates where two of the given rows carry opposite known values.
inline std::vector<int> important_coordinates(std::span<const TriVector> rows,
                                              const std::vector<int>& subset) {
    if (subset.empty() || rows.empty()) return {};
    const std::size_t words = rows[subset[0]].known_words().size();
    std::vector<std::uint64_t> seen0(words, 0), seen1(words, 0);
    for (int idx : subset) {
        const auto& kw = rows[idx].known_words();
        const auto& vw = rows[idx].value_words();
        for (std::size_t w = 0; w < words; ++w) {
            seen1[w] |= kw[w] & vw[w];
            seen0[w] |= kw[w] & ~vw[w];
        }
    }
    std::vector<int> out;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t both = seen0[w] & seen1[w];
        while (both) {
            out.push_back(static_cast<int>(w) * 64 + std::countr_zero(both));
            both &= both - 1;
        }
    }
    return out;
}

inline std::vector<int> important_coordinates(std::span<const TriVector> rows) {
    std::vector<int> all(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) all[i] = static_cast<int>(i);
    return important_coordinates(rows, all);
}

struct DedupeResult {
    std::vector<int> kept;                            // indices of first occurrences, input order
    std::vector<std::pair<int, int>> duplicate_of;    // (removed index, kept twin index)
};

// Tri-state equality dedupe; first occurrence wins.
inline DedupeResult dedupe_rows(std::span<const TriVector> rows) {
    DedupeResult res;
    std::unordered_map<TriVector, int, TriVectorHash> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto [it, inserted] = seen.emplace(rows[i], static_cast<int>(i));
        if (inserted)
            res.kept.push_back(static_cast<int>(i));
        else
            res.duplicate_of.emplace_back(static_cast<int>(i), it->second);
    }
    return res;
}

inline std::vector<TriVector> gather(std::span<const TriVector> rows, const std::vector<int>& idx) {
    std::vector<TriVector> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(rows[i]);
    return out;
}

struct ClusteringSolution {
    std::vector<TriVector> completion;          // aligned with the instance rows, fully Boolean
    std::vector<std::vector<int>> clusters;     // partition of row indices
    std::vector<int> in_centers;                // In: row index per cluster
    std::vector<TriVector> any_centers;         // Any: arbitrary Boolean vector per cluster
};

struct VerifyResult {
    bool ok = true;
    std::string violation;
    explicit operator bool() const { return ok; }
};

inline VerifyResult fail(std::string msg) { return {false, std::move(msg)}; }

inline VerifyResult verify_solution(const Instance& inst, const ClusteringSolution& sol) {
    const int n = static_cast<int>(inst.rows.size());
    if (static_cast<int>(sol.completion.size()) != n) return fail("completion shape mismatch");
    for (int i = 0; i < n; ++i) {
        if (sol.completion[i].dim() != inst.d) return fail("completion shape mismatch");
        if (!sol.completion[i].complete()) return fail("completion has missing entries");
        for (int j = 0; j < inst.d; ++j) {
            Tri orig = inst.rows[i].get(j);
            if (orig != Tri::Missing && orig != sol.completion[i].get(j))
                return fail("completion disagrees with known entry at row " + std::to_string(i + 1) +
                            ", col " + std::to_string(j + 1));
        }
    }
    if (static_cast<int>(sol.clusters.size()) > inst.k) return fail("cluster budget exceeded");
    std::vector<int> assigned(n, 0);
    for (const auto& block : sol.clusters) {
        if (block.empty()) return fail("empty cluster");
        for (int m : block) {
            if (m < 0 || m >= n) return fail("cluster refers to invalid row");
            ++assigned[m];
        }
    }
    for (int i = 0; i < n; ++i) {
        if (assigned[i] == 0) return fail("row " + std::to_string(i + 1) + " not clustered");
        if (assigned[i] > 1) return fail("row " + std::to_string(i + 1) + " clustered twice");
    }
    switch (inst.variant) {
        case Variant::In: {
            if (sol.in_centers.size() != sol.clusters.size()) return fail("center count mismatch");
            for (std::size_t c = 0; c < sol.clusters.size(); ++c) {
                int ctr = sol.in_centers[c];
                const auto& block = sol.clusters[c];
                if (std::find(block.begin(), block.end(), ctr) == block.end())
                    return fail("center row not inside its cluster");
                for (int m : block)
                    if (hamming_delta(sol.completion[ctr], sol.completion[m]) > inst.r)
                        return fail("radius exceeded in cluster " + std::to_string(c + 1));
            }
            break;
        }
        case Variant::Any: {
            if (sol.any_centers.size() != sol.clusters.size()) return fail("center count mismatch");
            for (std::size_t c = 0; c < sol.clusters.size(); ++c) {
                if (sol.any_centers[c].dim() != inst.d || !sol.any_centers[c].complete())
                    return fail("center vector malformed");
                for (int m : sol.clusters[c])
                    if (hamming_delta(sol.any_centers[c], sol.completion[m]) > inst.r)
                        return fail("radius exceeded in cluster " + std::to_string(c + 1));
            }
            break;
        }
        case Variant::Diam: {
            for (std::size_t c = 0; c < sol.clusters.size(); ++c) {
                const auto& block = sol.clusters[c];
                for (std::size_t i = 0; i < block.size(); ++i)
                    for (std::size_t j = i + 1; j < block.size(); ++j)
                        if (hamming_delta(sol.completion[block[i]], sol.completion[block[j]]) > inst.r)
                            return fail("diameter exceeded in cluster " + std::to_string(c + 1));
            }
            break;
        }
    }
    return {};
}

}  // namespace triclust
