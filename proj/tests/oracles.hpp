// oracles.hpp - independent brute-force references used only by the tests.
// These deliberately avoid the library's solver code paths: partitions are
// enumerated directly, candidate centers come from full cubes, and graph
// questions are answered by plain backtracking.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "triclust/core.hpp"
#include "triclust/encode.hpp"
#include "triclust/gen.hpp"

namespace oracles {

using namespace triclust;

// ----- complete-data clustering by partition enumeration -----

inline bool block_feasible(const std::vector<TriVector>& rows, const std::vector<int>& blk,
                           Variant variant, int r, int d) {
    if (variant == Variant::Diam) {
        for (std::size_t a = 0; a < blk.size(); ++a)
            for (std::size_t b = a + 1; b < blk.size(); ++b)
                if (hamming_delta(rows[blk[a]], rows[blk[b]]) > r) return false;
        return true;
    }
    if (variant == Variant::In) {
        for (int ctr : blk) {
            bool all = true;
            for (int m : blk)
                if (hamming_delta(rows[ctr], rows[m]) > r) {
                    all = false;
                    break;
                }
            if (all) return true;
        }
        return false;
    }
    // Any: candidates within r of the first member (any valid center is)
    const TriVector& base = rows[blk[0]];
    std::vector<int> comb;
    for (int w = 0; w <= std::min(r, d); ++w) {
        comb.assign(w, 0);
        for (int i = 0; i < w; ++i) comb[i] = i;
        while (true) {
            TriVector c = base;
            for (int i : comb) c.set(i, c.get(i) == Tri::One ? Tri::Zero : Tri::One);
            bool all = true;
            for (int m : blk)
                if (hamming_delta(c, rows[m]) > r) {
                    all = false;
                    break;
                }
            if (all) return true;
            if (w == 0) break;
            int pos = w - 1;
            while (pos >= 0 && comb[pos] == d - w + pos) --pos;
            if (pos < 0) break;
            ++comb[pos];
            for (int i = pos + 1; i < w; ++i) comb[i] = comb[i - 1] + 1;
        }
    }
    return false;
}

// enumerate partitions into at most k blocks, growing blocks one row at a
// time; infeasible blocks never recover, so prune as soon as one appears
inline bool partition_solve_complete(const std::vector<TriVector>& rows, Variant variant, int k,
                                     int r) {
    const int n = static_cast<int>(rows.size());
    const int d = rows.empty() ? 0 : rows[0].dim();
    if (n == 0) return true;
    std::vector<std::vector<int>> blocks;
    std::map<std::uint64_t, bool> memo;
    auto feasible = [&](const std::vector<int>& blk) {
        std::uint64_t mask = 0;
        for (int m : blk) mask |= std::uint64_t{1} << m;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        bool ok = block_feasible(rows, blk, variant, r, d);
        memo.emplace(mask, ok);
        return ok;
    };
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) return true;
        const std::size_t count = blocks.size();  // deeper calls push and pop
        for (std::size_t b = 0; b < count; ++b) {
            blocks[b].push_back(i);
            if (feasible(blocks[b]) && rec(i + 1)) return true;
            blocks[b].pop_back();
        }
        if (static_cast<int>(blocks.size()) < k) {
            blocks.push_back({i});
            if (feasible(blocks.back()) && rec(i + 1)) return true;
            blocks.pop_back();
        }
        return false;
    };
    return rec(0);
}

// completion-enumeration wrapper around the naive partition solver
inline bool partition_solve(const Instance& inst) {
    std::vector<std::pair<int, int>> miss;
    for (std::size_t i = 0; i < inst.rows.size(); ++i)
        for (int j = 0; j < inst.d; ++j)
            if (!inst.rows[i].known(j)) miss.emplace_back(static_cast<int>(i), j);
    std::vector<TriVector> work = inst.rows;
    std::function<bool(std::size_t)> rec = [&](std::size_t pos) -> bool {
        if (pos == miss.size()) {
            std::vector<TriVector> complete = work;
            return partition_solve_complete(complete, inst.variant, inst.k, inst.r);
        }
        for (int v = 0; v < 2; ++v) {
            work[miss[pos].first].set(miss[pos].second, v ? Tri::One : Tri::Zero);
            if (rec(pos + 1)) return true;
        }
        work[miss[pos].first].set(miss[pos].second, Tri::Missing);
        return false;
    };
    return rec(0);
}

// ----- covering number by exhaustive subset search -----

inline int brute_cover_value(const std::vector<TriVector>& rows) {
    std::vector<int> mrows, mcols;
    const int d = rows.empty() ? 0 : rows[0].dim();
    {
        std::vector<char> rh(rows.size(), 0), ch(d, 0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (int j = 0; j < d; ++j)
                if (!rows[i].known(j)) rh[i] = ch[j] = 1;
        for (std::size_t i = 0; i < rh.size(); ++i)
            if (rh[i]) mrows.push_back(static_cast<int>(i));
        for (int j = 0; j < d; ++j)
            if (ch[j]) mcols.push_back(j);
    }
    const int total = static_cast<int>(mrows.size() + mcols.size());
    int best = total;
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << total); ++pick) {
        std::vector<char> row_in(rows.size(), 0), col_in(d, 0);
        int cost = 0;
        for (int b = 0; b < total; ++b)
            if (pick >> b & 1) {
                ++cost;
                if (b < static_cast<int>(mrows.size()))
                    row_in[mrows[b]] = 1;
                else
                    col_in[mcols[b - mrows.size()]] = 1;
            }
        if (cost >= best) continue;
        bool covers = true;
        for (std::size_t i = 0; i < rows.size() && covers; ++i)
            for (int j = 0; j < d; ++j)
                if (!rows[i].known(j) && !row_in[i] && !col_in[j]) {
                    covers = false;
                    break;
                }
        if (covers) best = cost;
    }
    return best;
}

// ----- graph brute forces -----

inline bool graph_colorable(const Graph& g, int colors) {
    std::vector<std::vector<int>> adj(g.n);
    for (auto [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<int> color(g.n, -1);
    std::function<bool(int)> rec = [&](int v) -> bool {
        if (v == g.n) return true;
        for (int c = 0; c < colors; ++c) {
            bool ok = true;
            for (int u : adj[v])
                if (color[u] == c) {
                    ok = false;
                    break;
                }
            if (ok) {
                color[v] = c;
                if (rec(v + 1)) return true;
                color[v] = -1;
            }
        }
        return false;
    };
    return rec(0);
}

inline bool has_dominating_set(const Graph& g, int k) {
    std::vector<std::uint64_t> closed(g.n, 0);
    for (int v = 0; v < g.n; ++v) closed[v] = std::uint64_t{1} << v;
    for (auto [u, v] : g.edges) {
        closed[u] |= std::uint64_t{1} << v;
        closed[v] |= std::uint64_t{1} << u;
    }
    const std::uint64_t all = (std::uint64_t{1} << g.n) - 1;
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << g.n); ++pick) {
        if (std::popcount(pick) > k) continue;
        std::uint64_t dom = 0;
        for (int v = 0; v < g.n; ++v)
            if (pick >> v & 1) dom |= closed[v];
        if (dom == all) return true;
    }
    return false;
}

inline bool has_triangle_partition(const Graph& g) {
    std::vector<std::vector<char>> adj(g.n, std::vector<char>(g.n, 0));
    for (auto [u, v] : g.edges) adj[u][v] = adj[v][u] = 1;
    if (g.n % 3 != 0) return false;
    std::vector<char> used(g.n, 0);
    std::function<bool(int)> rec = [&](int done) -> bool {
        if (done == g.n) return true;
        int a = 0;
        while (used[a]) ++a;
        used[a] = 1;
        for (int b = a + 1; b < g.n; ++b) {
            if (used[b] || !adj[a][b]) continue;
            used[b] = 1;
            for (int c = b + 1; c < g.n; ++c) {
                if (used[c] || !adj[a][c] || !adj[b][c]) continue;
                used[c] = 1;
                if (rec(done + 3)) return true;
                used[c] = 0;
            }
            used[b] = 0;
        }
        used[a] = 0;
        return false;
    };
    return rec(0);
}

// ----- closest string by candidate enumeration -----

inline bool closest_string_exists(const std::vector<std::string>& strings, int r) {
    const int L = static_cast<int>(strings[0].size());
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << L); ++bits) {
        bool ok = true;
        for (const auto& s : strings) {
            int dist = 0;
            for (int j = 0; j < L; ++j)
                if ((bits >> j & 1) != static_cast<std::uint64_t>(s[j] - '0')) ++dist;
            if (dist > r) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

// ----- q-ary clustering, full enumeration -----

inline bool naive_qary(const QMatrix& m, int k, int r, Metric metric, Variant variant) {
    auto dist = [&](const DomainVector& a, const DomainVector& b) {
        return metric == Metric::Hamming ? hamming_q(a, b) : manhattan_q(a, b);
    };
    std::vector<std::pair<int, int>> miss;
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        for (int j = 0; j < m.d; ++j)
            if (m.rows[i].entries[j] == kQMissing) miss.emplace_back(static_cast<int>(i), j);
    QMatrix work = m;
    const int n = static_cast<int>(m.rows.size());
    std::function<bool(std::size_t)> rec = [&](std::size_t pos) -> bool {
        if (pos == miss.size()) {
            std::vector<int> assign(n, 0);
            std::function<bool(int, int)> part = [&](int i, int used) -> bool {
                if (i == n) {
                    for (int c = 0; c < used; ++c) {
                        std::vector<int> blk;
                        for (int v = 0; v < n; ++v)
                            if (assign[v] == c) blk.push_back(v);
                        bool okblk = false;
                        if (variant == Variant::Diam) {
                            okblk = true;
                            for (std::size_t a = 0; a < blk.size() && okblk; ++a)
                                for (std::size_t b = a + 1; b < blk.size(); ++b)
                                    if (dist(work.rows[blk[a]], work.rows[blk[b]]) > r) {
                                        okblk = false;
                                        break;
                                    }
                        } else if (variant == Variant::In) {
                            for (int ctr : blk) {
                                bool all = true;
                                for (int v : blk)
                                    if (dist(work.rows[ctr], work.rows[v]) > r) {
                                        all = false;
                                        break;
                                    }
                                if (all) {
                                    okblk = true;
                                    break;
                                }
                            }
                        } else {
                            std::vector<int> ctr(m.d, 0);
                            std::function<bool(int)> cube = [&](int p) -> bool {
                                if (p == m.d) {
                                    DomainVector c{m.q, ctr};
                                    for (int v : blk)
                                        if (dist(c, work.rows[v]) > r) return false;
                                    return true;
                                }
                                for (int val = 0; val < m.q; ++val) {
                                    ctr[p] = val;
                                    if (cube(p + 1)) return true;
                                }
                                return false;
                            };
                            okblk = cube(0);
                        }
                        if (!okblk) return false;
                    }
                    return true;
                }
                for (int c = 0; c <= std::min(used, k - 1); ++c) {
                    assign[i] = c;
                    if (part(i + 1, std::max(used, c + 1))) return true;
                }
                return false;
            };
            return part(0, 0);
        }
        for (int v = 0; v < m.q; ++v) {
            work.rows[miss[pos].first].entries[miss[pos].second] = v;
            if (rec(pos + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

// ----- random instance generator shared by the suites -----

struct SuiteParams {
    int max_rows = 10, max_d = 12, max_k = 3, max_r = 3, max_missing = 6;
};

inline Instance random_suite_instance(std::mt19937_64& rng, Variant variant,
                                      const SuiteParams& p = {}) {
    Instance inst;
    inst.d = 1 + static_cast<int>(rng() % p.max_d);
    inst.k = 1 + static_cast<int>(rng() % p.max_k);
    inst.r = static_cast<int>(rng() % (p.max_r + 1));
    inst.variant = variant;
    int n = 1 + static_cast<int>(rng() % p.max_rows);
    // missing entries restricted to <= 2 rows and <= 2 cols: cover <= 4
    std::vector<int> mrows{static_cast<int>(rng() % n), static_cast<int>(rng() % n)};
    std::vector<int> mcols{static_cast<int>(rng() % inst.d), static_cast<int>(rng() % inst.d)};
    std::vector<TriVector> raw;
    for (int i = 0; i < n; ++i) {
        TriVector v = TriVector::all_zero(inst.d);
        for (int j = 0; j < inst.d; ++j)
            if (rng() & 1) v.set(j, Tri::One);
        raw.push_back(v);
    }
    int missing = static_cast<int>(rng() % (p.max_missing + 1));
    for (int t = 0; t < missing; ++t) {
        bool via_row = rng() & 1;
        int i = via_row ? mrows[rng() % 2] : static_cast<int>(rng() % n);
        int j = via_row ? static_cast<int>(rng() % inst.d) : mcols[rng() % 2];
        raw[i].set(j, Tri::Missing);
    }
    auto dd = dedupe_rows(raw);
    inst.rows = gather(raw, dd.kept);
    return inst;
}

}  // namespace oracles
