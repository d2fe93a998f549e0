// covering.hpp - covering number of the missing entries and a witnessing (R_M, T_M)
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "triclust/core.hpp"

namespace triclust {

struct CoverCertificate {
    std::vector<int> rows;  // R_M, ascending row indices
    std::vector<int> cols;  // T_M, ascending coordinate indices
    int value = 0;          // |rows| + |cols|, minimum over all covers

    bool covers_row(int i) const { return std::binary_search(rows.begin(), rows.end(), i); }
    bool covers_col(int j) const { return std::binary_search(cols.begin(), cols.end(), j); }
};

namespace detail {

// Hopcroft-Karp maximum matching on the bipartite missing-entry graph.
class HopcroftKarp {
public:
    explicit HopcroftKarp(int nl) : nl_(nl), adj_(nl) {}

    void add_edge(int l, int r) { adj_[l].push_back(r); }

    int solve() {
        match_l_.assign(nl_, -1);
        int nr = 0;
        for (auto& v : adj_) for (int r : v) nr = std::max(nr, r + 1);
        match_r_.assign(nr, -1);
        int matching = 0;
        while (bfs()) {
            for (int l = 0; l < nl_; ++l)
                if (match_l_[l] == -1 && dfs(l)) ++matching;
        }
        return matching;
    }

private:
    bool bfs() {
        std::queue<int> q;
        dist_.assign(nl_, -1);
        for (int l = 0; l < nl_; ++l)
            if (match_l_[l] == -1) {
                dist_[l] = 0;
                q.push(l);
            }
        bool found = false;
        while (!q.empty()) {
            int l = q.front();
            q.pop();
            for (int r : adj_[l]) {
                int l2 = match_r_[r];
                if (l2 == -1)
                    found = true;
                else if (dist_[l2] == -1) {
                    dist_[l2] = dist_[l] + 1;
                    q.push(l2);
                }
            }
        }
        return found;
    }

    bool dfs(int l) {
        for (int r : adj_[l]) {
            int l2 = match_r_[r];
            if (l2 == -1 || (dist_[l2] == dist_[l] + 1 && dfs(l2))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = -1;
        return false;
    }

    int nl_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_l_, match_r_, dist_;
};

// Small Dinic max-flow, used for weighted vertex-cover feasibility tests.
class Dinic {
public:
    explicit Dinic(int n) : head_(n, -1) {}

    void add_edge(int u, int v, std::int64_t cap) {
        edges_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({u, head_[v], 0});
        head_[v] = static_cast<int>(edges_.size()) - 1;
    }

    std::int64_t max_flow(int s, int t) {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            it_ = head_;
            std::int64_t f;
            while ((f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) > 0) flow += f;
        }
        return flow;
    }

private:
    struct Edge {
        int to, next;
        std::int64_t cap;
    };

    bool bfs(int s, int t) {
        level_.assign(head_.size(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[u]; e != -1; e = edges_[e].next)
                if (edges_[e].cap > 0 && level_[edges_[e].to] == -1) {
                    level_[edges_[e].to] = level_[u] + 1;
                    q.push(edges_[e].to);
                }
        }
        return level_[t] != -1;
    }

    std::int64_t dfs(int u, int t, std::int64_t limit) {
        if (u == t || limit == 0) return limit;
        for (int& e = it_[u]; e != -1; e = edges_[e].next) {
            int v = edges_[e].to;
            if (edges_[e].cap > 0 && level_[v] == level_[u] + 1) {
                std::int64_t f = dfs(v, t, std::min(limit, edges_[e].cap));
                if (f > 0) {
                    edges_[e].cap -= f;
                    edges_[e ^ 1].cap += f;
                    return f;
                }
            }
        }
        return 0;
    }

    std::vector<int> head_, level_, it_;
    std::vector<Edge> edges_;
};

}  // namespace detail

// Minimum covering certificate. Ties among minimum covers are broken by
// fewest rows first, then lexicographically smallest row set, then
// lexicographically smallest column set; downstream kernels and golden tests
// rely on this being deterministic.
inline CoverCertificate covering_certificate(std::span<const TriVector> rows) {
    std::vector<int> mrows, mcols;  // rows/cols carrying at least one missing entry
    {
        std::vector<char> rowhit(rows.size(), 0);
        std::vector<char> colhit(rows.empty() ? 0 : rows[0].dim(), 0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (int j = 0; j < rows[i].dim(); ++j)
                if (!rows[i].known(j)) rowhit[i] = colhit[j] = 1;
        for (std::size_t i = 0; i < rowhit.size(); ++i)
            if (rowhit[i]) mrows.push_back(static_cast<int>(i));
        for (std::size_t j = 0; j < colhit.size(); ++j)
            if (colhit[j]) mcols.push_back(static_cast<int>(j));
    }
    if (mrows.empty()) return {};

    const int nl = static_cast<int>(mrows.size());
    const int nr = static_cast<int>(mcols.size());
    std::vector<int> colpos(rows[0].dim(), -1);
    for (int j = 0; j < nr; ++j) colpos[mcols[j]] = j;

    std::vector<std::pair<int, int>> cells;  // (left idx, right idx) per missing entry
    for (int li = 0; li < nl; ++li)
        for (int j = 0; j < rows[mrows[li]].dim(); ++j)
            if (!rows[mrows[li]].known(j)) cells.emplace_back(li, colpos[j]);

    detail::HopcroftKarp hk(nl);
    for (auto [l, r] : cells) hk.add_edge(l, r);
    const int nu = hk.solve();

    // Weighted vertex cover via min cut: weight = W per vertex plus 1 per row,
    // with forced inclusions/exclusions. Minimising the weight fixes the cover
    // size to nu and, within that, the row count.
    const std::int64_t W = nl + nr + 1;
    auto min_cover_weight = [&](const std::vector<char>& in_l, const std::vector<char>& out_l,
                                const std::vector<char>& in_r, const std::vector<char>& out_r) {
        const std::int64_t INF = W * W * 4;
        detail::Dinic flow(nl + nr + 2);
        const int src = nl + nr, snk = nl + nr + 1;
        for (int l = 0; l < nl; ++l)
            flow.add_edge(src, l, in_l[l] ? 0 : (out_l[l] ? INF : W + 1));
        for (int r = 0; r < nr; ++r)
            flow.add_edge(nl + r, snk, in_r[r] ? 0 : (out_r[r] ? INF : W));
        for (auto [l, r] : cells) flow.add_edge(l, nl + r, INF);
        std::int64_t cut = flow.max_flow(src, snk);
        // add back the zero-cost forced vertices
        std::int64_t forced_rows = std::count(in_l.begin(), in_l.end(), 1);
        std::int64_t forced_cols = std::count(in_r.begin(), in_r.end(), 1);
        return cut + forced_rows * (W + 1) + forced_cols * W;
    };

    std::vector<char> in_l(nl, 0), out_l(nl, 0), in_r(nr, 0), out_r(nr, 0);
    const std::int64_t best = min_cover_weight(in_l, out_l, in_r, out_r);
    const int best_rows = static_cast<int>(best - W * nu);  // best = W*nu + #rows

    // Greedy lexicographic fixing: rows ascending, then columns ascending.
    int taken_rows = 0;
    for (int l = 0; l < nl && taken_rows < best_rows; ++l) {
        in_l[l] = 1;
        if (min_cover_weight(in_l, out_l, in_r, out_r) == best)
            ++taken_rows;
        else {
            in_l[l] = 0;
            out_l[l] = 1;
        }
    }
    for (int l = 0; l < nl; ++l)
        if (!in_l[l]) out_l[l] = 1;
    int taken_cols = 0;
    const int best_cols = nu - best_rows;
    for (int r = 0; r < nr && taken_cols < best_cols; ++r) {
        in_r[r] = 1;
        if (min_cover_weight(in_l, out_l, in_r, out_r) == best)
            ++taken_cols;
        else {
            in_r[r] = 0;
            out_r[r] = 1;
        }
    }

    CoverCertificate cert;
    for (int l = 0; l < nl; ++l)
        if (in_l[l]) cert.rows.push_back(mrows[l]);
    for (int r = 0; r < nr; ++r)
        if (in_r[r]) cert.cols.push_back(mcols[r]);
    cert.value = static_cast<int>(cert.rows.size() + cert.cols.size());
    return cert;
}

// Checks the covering property only; minimality is not re-verified here.
inline bool verify_certificate(std::span<const TriVector> rows, const CoverCertificate& cert) {
    for (int i : cert.rows)
        if (i < 0 || i >= static_cast<int>(rows.size())) throw std::out_of_range("certificate row index");
    for (int j : cert.cols)
        if (!rows.empty() && (j < 0 || j >= rows[0].dim())) throw std::out_of_range("certificate col index");
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < rows[i].dim(); ++j)
            if (!rows[i].known(j) && !cert.covers_row(static_cast<int>(i)) && !cert.covers_col(j))
                return false;
    return true;
}

}  // namespace triclust
