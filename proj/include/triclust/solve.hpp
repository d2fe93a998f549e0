// solve.hpp - exact desk-scale solvers: XP center enumeration, clique cover,
// ball-candidate search, and the completion-enumeration wrapper
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "triclust/core.hpp"

namespace triclust {

struct SolverBudget {
    std::uint64_t max_completions = std::uint64_t{1} << 20;
    std::uint64_t max_center_tuples = 8'000'000;
    double time_hint_sec = 0;  // advisory; 0 disables the check

    void validate() const {
        if (max_completions == 0 || max_center_tuples == 0)
            throw std::invalid_argument("SolverBudget: caps must be positive");
    }
};

enum class Answer { Yes, No, BudgetExhausted };

inline const char* answer_name(Answer a) {
    switch (a) {
        case Answer::Yes: return "YES";
        case Answer::No: return "NO";
        case Answer::BudgetExhausted: return "BUDGET_EXHAUSTED";
    }
    return "?";
}

struct Decision {
    Answer answer = Answer::No;
    std::optional<ClusteringSolution> witness;
    std::uint64_t coverage_checks = 0;  // instrumentation for the XP solver shape
    bool lifting_failed = false;        // via-kernel runs: witness dropped, decision kept

    static Decision yes(ClusteringSolution sol) { return {Answer::Yes, std::move(sol), 0, false}; }
    static Decision no() { return {Answer::No, std::nullopt, 0, false}; }
    static Decision exhausted() { return {Answer::BudgetExhausted, std::nullopt, 0, false}; }
};

namespace detail {

inline void require_complete(std::span<const TriVector> rows) {
    for (const auto& r : rows)
        if (!r.complete()) throw std::invalid_argument("solver requires fully Boolean rows");
}

// Enumerates all vectors within Hamming distance <= radius of base, by
// flip-count then lexicographic flip positions. Deterministic order.
inline std::vector<TriVector> hamming_ball(const TriVector& base, int radius) {
    std::vector<TriVector> out{base};
    const int d = base.dim();
    std::vector<int> comb;
    for (int w = 1; w <= std::min(radius, d); ++w) {
        comb.resize(w);
        for (int i = 0; i < w; ++i) comb[i] = i;
        while (true) {
            TriVector v = base;
            for (int i : comb) v.set(i, v.get(i) == Tri::One ? Tri::Zero : Tri::One);
            out.push_back(std::move(v));
            int pos = w - 1;
            while (pos >= 0 && comb[pos] == d - w + pos) --pos;
            if (pos < 0) break;
            ++comb[pos];
            for (int i = pos + 1; i < w; ++i) comb[i] = comb[i - 1] + 1;
        }
    }
    return out;
}

}  // namespace detail

// Brute-force radius clustering with centers drawn from the rows themselves:
// enumerate min(k,|M|)-subsets of rows as centers, assign every row to its
// nearest center, accept when all assignments stay within r.
inline Decision solve_in_complete(std::span<const TriVector> rows, int k, int r) {
    detail::require_complete(rows);
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw std::invalid_argument("solve_in_complete: empty matrix");
    const int kk = std::min(k, n);
    Decision result = Decision::no();

    std::vector<int> comb(kk);
    for (int i = 0; i < kk; ++i) comb[i] = i;
    while (true) {
        result.coverage_checks += n;
        std::vector<std::vector<int>> clusters(kk);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            int best = -1, best_dist = r + 1;
            for (int c = 0; c < kk; ++c) {
                int dist = hamming_delta(rows[i], rows[comb[c]]);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = c;
                }
            }
            if (best == -1)
                ok = false;
            else
                clusters[best].push_back(i);
        }
        if (ok) {
            ClusteringSolution sol;
            sol.completion.assign(rows.begin(), rows.end());
            for (int c = 0; c < kk; ++c)
                if (!clusters[c].empty()) {
                    sol.clusters.push_back(clusters[c]);
                    sol.in_centers.push_back(comb[c]);
                }
            auto checks = result.coverage_checks;
            result = Decision::yes(std::move(sol));
            result.coverage_checks = checks;
            return result;
        }
        int pos = kk - 1;
        while (pos >= 0 && comb[pos] == n - kk + pos) --pos;
        if (pos < 0) break;
        ++comb[pos];
        for (int i = pos + 1; i < kk; ++i) comb[i] = comb[i - 1] + 1;
    }
    return result;
}

namespace detail {

// Exact minimum clique cover of the threshold graph, per connected component.
// Vertices are assigned in descending-degree order to existing cliques or a
// new one; a greedy independent set gives the pruning lower bound.
class CliqueCoverSearch {
public:
    CliqueCoverSearch(std::span<const TriVector> rows, const std::vector<int>& verts, int r)
        : rows_(rows), verts_(verts), r_(r) {
        const int m = static_cast<int>(verts.size());
        adj_.assign(m, std::vector<char>(m, 0));
        std::vector<int> deg(m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (hamming_delta(rows_[verts_[i]], rows_[verts_[j]]) <= r_) {
                    adj_[i][j] = adj_[j][i] = 1;
                    ++deg[i];
                    ++deg[j];
                }
        order_.resize(m);
        for (int i = 0; i < m; ++i) order_[i] = i;
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return deg[a] > deg[b]; });
    }

    // Smallest number of cliques covering the component, or nullopt if > cap.
    std::optional<std::vector<std::vector<int>>> solve(int cap) {
        int lb = lower_bound();
        for (int target = std::max(lb, 1); target <= cap; ++target) {
            cliques_.assign(target, {});
            if (place(0, 0)) {
                std::vector<std::vector<int>> out;
                for (auto& c : cliques_)
                    if (!c.empty()) {
                        std::vector<int> blk;
                        for (int local : c) blk.push_back(verts_[local]);
                        std::sort(blk.begin(), blk.end());
                        out.push_back(std::move(blk));
                    }
                return out;
            }
        }
        return std::nullopt;
    }

    int lower_bound() const {
        // pairwise non-adjacent vertices need distinct cliques
        std::vector<int> indep;
        for (int v : order_) {
            bool ok = true;
            for (int u : indep)
                if (adj_[u][v]) {
                    ok = false;
                    break;
                }
            if (ok) indep.push_back(v);
        }
        return static_cast<int>(indep.size());
    }

private:
    bool place(std::size_t pos, int used) {
        if (pos == order_.size()) return true;
        int v = order_[pos];
        for (int c = 0; c < used; ++c) {
            bool fits = true;
            for (int u : cliques_[c])
                if (!adj_[u][v]) {
                    fits = false;
                    break;
                }
            if (fits) {
                cliques_[c].push_back(v);
                if (place(pos + 1, used)) return true;
                cliques_[c].pop_back();
            }
        }
        if (used < static_cast<int>(cliques_.size())) {
            cliques_[used].push_back(v);  // first-fit opening kills clique symmetry
            if (place(pos + 1, used + 1)) return true;
            cliques_[used].pop_back();
        }
        return false;
    }

    std::span<const TriVector> rows_;
    const std::vector<int>& verts_;
    int r_;
    std::vector<std::vector<char>> adj_;
    std::vector<int> order_;
    std::vector<std::vector<int>> cliques_;
};

}  // namespace detail

// Diameter clustering on complete data: partition into <= k cliques of the
// delta<=r threshold graph, solved exactly component by component.
inline Decision solve_diam_complete(std::span<const TriVector> rows, int k, int r) {
    detail::require_complete(rows);
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw std::invalid_argument("solve_diam_complete: empty matrix");
    auto graph = build_compatibility(rows, r);
    if (graph.n_components > k) return Decision::no();
    ClusteringSolution sol;
    sol.completion.assign(rows.begin(), rows.end());
    int remaining = k;
    auto comps = graph.component_members();
    for (const auto& comp : comps) {
        detail::CliqueCoverSearch search(rows, comp, r);
        int reserve = static_cast<int>(comps.size()) - static_cast<int>(&comp - comps.data()) - 1;
        auto cover = search.solve(remaining - reserve);
        if (!cover) return Decision::no();
        for (auto& blk : *cover) sol.clusters.push_back(std::move(blk));
        remaining -= static_cast<int>(cover->size());
    }
    return Decision::yes(std::move(sol));
}

// Radius clustering with arbitrary Boolean centers. Candidates come from
// Hamming balls around the rows: a minimal center covers some row, so it lies
// within r of it. Branches on the lowest uncovered row's ball, memoising
// uncovered sets already shown infeasible.
inline Decision solve_any_complete(std::span<const TriVector> rows, int k, int r,
                                   const SolverBudget& budget = {}) {
    detail::require_complete(rows);
    budget.validate();
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw std::invalid_argument("solve_any_complete: empty matrix");
    if (n > 62) throw std::invalid_argument("solve_any_complete: too many rows for mask search");
    if (k >= n) {
        ClusteringSolution sol;
        sol.completion.assign(rows.begin(), rows.end());
        for (int i = 0; i < n; ++i) {
            sol.clusters.push_back({i});
            sol.any_centers.push_back(rows[i]);
        }
        return Decision::yes(std::move(sol));
    }

    std::vector<std::vector<TriVector>> balls(n);
    std::uint64_t pool = 0;
    for (int i = 0; i < n; ++i) {
        balls[i] = detail::hamming_ball(rows[i], r);
        pool += balls[i].size();
    }
    if (pool > budget.max_center_tuples) return Decision::exhausted();

    std::uint64_t nodes = 0;
    bool cut = false;
    std::set<std::pair<std::uint64_t, int>> dead;
    std::vector<TriVector> centers;

    auto covered_by = [&](const TriVector& c) {
        std::uint64_t mask = 0;
        for (int i = 0; i < n; ++i)
            if (hamming_delta(c, rows[i]) <= r) mask |= std::uint64_t{1} << i;
        return mask;
    };

    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    auto search = [&](auto&& self, std::uint64_t uncovered, int left) -> bool {
        if (uncovered == 0) return true;
        if (left == 0) return false;
        if (dead.count({uncovered, left})) return false;
        int pivot = std::countr_zero(uncovered);
        for (const auto& cand : balls[pivot]) {
            if (++nodes > budget.max_center_tuples) {
                cut = true;
                return false;
            }
            centers.push_back(cand);
            if (self(self, uncovered & ~covered_by(cand), left - 1)) return true;
            centers.pop_back();
            if (cut) return false;
        }
        dead.insert({uncovered, left});
        return false;
    };

    if (search(search, all, k)) {
        ClusteringSolution sol;
        sol.completion.assign(rows.begin(), rows.end());
        std::vector<std::vector<int>> clusters(centers.size());
        for (int i = 0; i < n; ++i) {
            int best = -1, best_dist = r + 1;
            for (std::size_t c = 0; c < centers.size(); ++c) {
                int dist = hamming_delta(centers[c], rows[i]);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = static_cast<int>(c);
                }
            }
            clusters[best].push_back(i);
        }
        for (std::size_t c = 0; c < centers.size(); ++c)
            if (!clusters[c].empty()) {
                sol.clusters.push_back(clusters[c]);
                sol.any_centers.push_back(centers[c]);
            }
        return Decision::yes(std::move(sol));
    }
    return cut ? Decision::exhausted() : Decision::no();
}

inline Decision solve_variant_complete(std::span<const TriVector> rows, Variant variant, int k, int r,
                                       const SolverBudget& budget = {}) {
    switch (variant) {
        case Variant::In: return solve_in_complete(rows, k, r);
        case Variant::Any: return solve_any_complete(rows, k, r, budget);
        case Variant::Diam: return solve_diam_complete(rows, k, r);
    }
    return Decision::no();
}

// Streams the 2^m completions of the matrix in lexicographic order of the
// missing entries read row-major: 00, 01, 10, 11 for two missing entries.
class CompletionEnumerator {
public:
    CompletionEnumerator(std::span<const TriVector> rows, const SolverBudget& budget) {
        budget.validate();
        base_.assign(rows.begin(), rows.end());
        for (std::size_t i = 0; i < base_.size(); ++i)
            for (int j = 0; j < base_[i].dim(); ++j)
                if (!base_[i].known(j)) positions_.emplace_back(static_cast<int>(i), j);
        if (positions_.size() >= 63 ||
            (std::uint64_t{1} << positions_.size()) > budget.max_completions)
            exhausted_ = true;
        else
            total_ = std::uint64_t{1} << positions_.size();
    }

    bool budget_exhausted() const { return exhausted_; }
    std::uint64_t total() const { return total_; }

    std::optional<std::vector<TriVector>> next() {
        if (exhausted_ || index_ >= total_) return std::nullopt;
        std::vector<TriVector> out = base_;
        const std::size_t m = positions_.size();
        for (std::size_t j = 0; j < m; ++j) {
            bool one = index_ >> (m - 1 - j) & 1;  // first missing entry = most significant
            auto [row, col] = positions_[j];
            out[row].set(col, one ? Tri::One : Tri::Zero);
        }
        ++index_;
        return out;
    }

private:
    std::vector<TriVector> base_;
    std::vector<std::pair<int, int>> positions_;
    std::uint64_t total_ = 0;
    std::uint64_t index_ = 0;
    bool exhausted_ = false;
};

// Brute-force oracle over all completions; the reference the kernel route is
// validated against.
inline Decision solve_completion(const Instance& inst, const SolverBudget& budget = {}) {
    CompletionEnumerator en(inst.rows, budget);
    if (en.budget_exhausted()) return Decision::exhausted();
    auto start = std::chrono::steady_clock::now();
    bool inner_exhausted = false;
    std::uint64_t checks = 0;
    while (auto completion = en.next()) {
        Decision inner = solve_variant_complete(*completion, inst.variant, inst.k, inst.r, budget);
        checks += inner.coverage_checks;
        if (inner.answer == Answer::Yes) {
            inner.witness->completion = *completion;
            inner.coverage_checks = checks;
            return inner;
        }
        if (inner.answer == Answer::BudgetExhausted) inner_exhausted = true;
        if (budget.time_hint_sec > 0) {
            std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
            if (el.count() > budget.time_hint_sec) return Decision::exhausted();
        }
    }
    if (inner_exhausted) return Decision::exhausted();
    Decision d = Decision::no();
    d.coverage_checks = checks;
    return d;
}

}  // namespace triclust
