// pipeline.hpp - kernelize-then-solve with witness lifting back to the
// original instance
#pragma once

#include <algorithm>
#include <iostream>
#include <optional>
#include <vector>

#include "triclust/core.hpp"
#include "triclust/kernelize.hpp"
#include "triclust/solve.hpp"

namespace triclust {

namespace lift_detail {

// Extends the kernel witness to full width. Same-cluster rows never disagree
// outside D' (that is what the separator coordinates guarantee), so kept rows
// keep their own known values there and centers copy their cluster.
inline std::optional<ClusteringSolution> lift_witness(const Instance& inst, const KernelResult& kr,
                                                      const ClusteringSolution& kernel_sol) {
    const int n = static_cast<int>(inst.rows.size());
    ClusteringSolution sol;
    sol.completion.assign(n, TriVector());

    // partial completions: D' carries the kernel witness, other coordinates
    // keep the row's own entries for now
    std::vector<TriVector> partial(n);
    std::vector<char> placed(n, 0);
    for (std::size_t ki = 0; ki < kr.kept_rows.size(); ++ki) {
        int orig = kr.kept_rows[ki];
        TriVector full = inst.rows[orig];
        for (std::size_t j = 0; j < kr.kept_coords.size(); ++j)
            full.set(kr.kept_coords[j], kernel_sol.completion[ki].get(static_cast<int>(j)));
        partial[orig] = std::move(full);
        placed[orig] = 1;
    }

    // same-cluster rows never disagree on a known coordinate outside D', so a
    // per-cluster template closes the remaining gaps consistently
    std::vector<char> in_dprime(inst.d, 0);
    for (int c : kr.kept_coords) in_dprime[c] = 1;
    for (const auto& kblock : kernel_sol.clusters) {
        std::vector<int> block;
        for (int ki : kblock) block.push_back(kr.kept_rows[ki]);
        TriVector tmpl = TriVector::all_zero(inst.d);
        for (int j = 0; j < inst.d; ++j) {
            if (in_dprime[j]) continue;
            for (int m : block)
                if (partial[m].known(j)) {
                    tmpl.set(j, partial[m].get(j));
                    break;
                }
        }
        for (int m : block) sol.completion[m] = partial[m].completed_like(tmpl);
        sol.clusters.push_back(std::move(block));
    }
    if (inst.variant == Variant::In)
        for (int ki : kernel_sol.in_centers) sol.in_centers.push_back(kr.kept_rows[ki]);
    if (inst.variant == Variant::Any) {
        for (std::size_t c = 0; c < kernel_sol.any_centers.size(); ++c) {
            int member = sol.clusters[c][0];
            TriVector center = sol.completion[member];
            for (std::size_t j = 0; j < kr.kept_coords.size(); ++j)
                center.set(kr.kept_coords[j], kernel_sol.any_centers[c].get(static_cast<int>(j)));
            sol.any_centers.push_back(std::move(center));
        }
    }

    auto cluster_of = [&](int row) -> int {
        for (std::size_t c = 0; c < sol.clusters.size(); ++c)
            if (std::find(sol.clusters[c].begin(), sol.clusters[c].end(), row) !=
                sol.clusters[c].end())
                return static_cast<int>(c);
        return -1;
    };

    // removed rows come back in reverse removal order
    for (auto it = kr.removed.rbegin(); it != kr.removed.rend(); ++it) {
        const int f = it->row;
        if (it->rule == "duplicate") {
            int twin = kr.duplicate_twin[f];
            if (twin < 0 || !placed[twin]) return std::nullopt;
            sol.completion[f] = sol.completion[twin];
            sol.clusters[cluster_of(twin)].push_back(f);
            placed[f] = 1;
            continue;
        }
        if (inst.variant == Variant::Diam) {
            bool done = false;
            for (std::size_t c = 0; c < sol.clusters.size() && !done; ++c) {
                for (int donor : sol.clusters[c]) {
                    TriVector cand = inst.rows[f].completed_like(sol.completion[donor]);
                    bool fits = true;
                    for (int m : sol.clusters[c])
                        if (hamming_delta(cand, sol.completion[m]) > inst.r) {
                            fits = false;
                            break;
                        }
                    if (fits) {
                        sol.completion[f] = std::move(cand);
                        sol.clusters[c].push_back(f);
                        done = true;
                        break;
                    }
                }
            }
            if (!done && static_cast<int>(sol.clusters.size()) < inst.k) {
                sol.completion[f] = inst.rows[f].completed_like(TriVector::all_zero(inst.d));
                sol.clusters.push_back({f});
                done = true;
            }
            if (!done) return std::nullopt;
        } else {
            auto center_of = [&](std::size_t c) -> const TriVector& {
                return inst.variant == Variant::In ? sol.completion[sol.in_centers[c]]
                                                   : sol.any_centers[c];
            };
            int best = -1, best_dist = inst.r + 1;
            for (std::size_t c = 0; c < sol.clusters.size(); ++c) {
                int dist = hamming_delta(inst.rows[f], center_of(c));
                if (dist < best_dist) {
                    best_dist = dist;
                    best = static_cast<int>(c);
                }
            }
            if (best == -1) return std::nullopt;
            sol.completion[f] = inst.rows[f].completed_like(center_of(best));
            sol.clusters[best].push_back(f);
        }
        placed[f] = 1;
    }

    for (int i = 0; i < n; ++i)
        if (sol.completion[i].dim() != inst.d) return std::nullopt;  // row never placed
    return sol;
}

}  // namespace lift_detail

// Kernelize, solve the reduced instance, and lift the witness back. The
// decision always matches solve_completion on the original instance; if the
// witness lift ever fails the decision is still reported, flagged as
// decision-only.
inline Decision solve_via_kernel(const Instance& inst, const SolverBudget& budget = {},
                                 KernelResult* kernel_out = nullptr) {
    KernelResult kr = kernelize(inst);
    if (kernel_out) *kernel_out = kr;
    if (kr.early_no) return Decision::no();
    Decision sub = solve_completion(kr.reduced, budget);
    if (sub.answer != Answer::Yes) return sub;

    auto lifted = lift_detail::lift_witness(inst, kr, *sub.witness);
    Decision out = Decision::no();
    out.answer = Answer::Yes;
    out.coverage_checks = sub.coverage_checks;
    if (lifted) {
        auto check = verify_solution(inst, *lifted);
        if (check) {
            out.witness = std::move(lifted);
            return out;
        }
        std::cerr << "triclust: witness lift failed verification (" << check.violation
                  << "); reporting decision only\n";
    } else {
        std::cerr << "triclust: witness lift failed; reporting decision only\n";
    }
    out.lifting_failed = true;
    return out;
}

}  // namespace triclust
