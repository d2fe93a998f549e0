// sunflower.hpp - constructive Erdos-Rado extraction on uniform set families
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "triclust/core.hpp"

namespace triclust {

// Uniform family of coordinate sets. Members are kept as given (duplicates
// allowed in the sequence); extraction collapses duplicate sets first.
struct SetFamily {
    int b = 0;                              // uniform cardinality
    std::vector<std::vector<int>> members;  // each sorted ascending

    static SetFamily from(std::vector<std::vector<int>> sets) {
        SetFamily fam;
        if (sets.empty()) throw std::invalid_argument("SetFamily: empty family");
        for (auto& s : sets) std::sort(s.begin(), s.end());
        fam.b = static_cast<int>(sets[0].size());
        if (fam.b < 1) throw std::invalid_argument("SetFamily: empty member sets");
        for (const auto& s : sets)
            if (static_cast<int>(s.size()) != fam.b)
                throw std::invalid_argument("SetFamily: non-uniform family");
        fam.members = std::move(sets);
        return fam;
    }
};

struct Sunflower {
    std::vector<int> core;    // sorted
    std::vector<int> petals;  // indices into the family
};

inline bool verify_sunflower(const SetFamily& fam, const Sunflower& sf) {
    if (sf.petals.empty()) return false;
    std::set<int> seen_sets;
    for (int p : sf.petals) {
        if (p < 0 || p >= static_cast<int>(fam.members.size())) return false;
        if (!seen_sets.insert(p).second) return false;
    }
    if (sf.petals.size() == 1) {
        const auto& s = fam.members[sf.petals[0]];
        return std::includes(s.begin(), s.end(), sf.core.begin(), sf.core.end());
    }
    for (std::size_t i = 0; i < sf.petals.size(); ++i)
        for (std::size_t j = i + 1; j < sf.petals.size(); ++j) {
            const auto& a = fam.members[sf.petals[i]];
            const auto& b = fam.members[sf.petals[j]];
            std::vector<int> inter;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
            if (inter != sf.core) return false;
        }
    return true;
}

namespace detail {

// Greedy maximal pairwise-disjoint subfamily, scanning in input order.
inline std::vector<int> greedy_disjoint(const std::vector<std::vector<int>>& sets,
                                        const std::vector<int>& idx) {
    std::vector<int> picked;
    std::set<int> used;
    for (int i : idx) {
        bool clash = false;
        for (int x : sets[i])
            if (used.count(x)) {
                clash = true;
                break;
            }
        if (!clash) {
            picked.push_back(i);
            for (int x : sets[i]) used.insert(x);
        }
    }
    return picked;
}

// Recursion from the standard proof of the sunflower lemma: either a large
// disjoint subfamily exists (empty core) or some element is frequent enough
// to recurse on its link.
inline std::optional<Sunflower> recurse(const std::vector<std::vector<int>>& sets,
                                        const std::vector<int>& idx, int a) {
    auto disjoint = greedy_disjoint(sets, idx);
    if (static_cast<int>(disjoint.size()) >= a) return Sunflower{{}, std::move(disjoint)};
    if (sets[idx[0]].empty()) return std::nullopt;  // b exhausted

    std::map<int, int> freq;
    for (int i : idx)
        for (int x : sets[i]) ++freq[x];
    int best_elem = -1, best_count = 0;
    for (auto [x, c] : freq)
        if (c > best_count) {  // ties resolved by smallest element (map order)
            best_elem = x;
            best_count = c;
        }
    if (best_count < 2) return std::nullopt;

    std::vector<std::vector<int>> link_sets(sets.size());
    std::vector<int> link_idx;
    std::set<std::vector<int>> dedup;
    for (int i : idx) {
        const auto& s = sets[i];
        if (!std::binary_search(s.begin(), s.end(), best_elem)) continue;
        std::vector<int> rest;
        for (int x : s)
            if (x != best_elem) rest.push_back(x);
        if (!dedup.insert(rest).second) continue;
        link_sets[i] = std::move(rest);
        link_idx.push_back(i);
    }
    auto sub = recurse(link_sets, link_idx, a);
    if (!sub) return std::nullopt;
    sub->core.insert(std::lower_bound(sub->core.begin(), sub->core.end(), best_elem), best_elem);
    return sub;
}

// Exact search fallback for small families: every sunflower's core is a
// pairwise intersection (or empty), so scan candidate cores and pack links.
class ExactSearch {
public:
    ExactSearch(const std::vector<std::vector<int>>& sets, const std::vector<int>& idx, int a)
        : sets_(sets), idx_(idx), a_(a) {}

    std::optional<Sunflower> run() {
        std::set<std::vector<int>> cores;
        cores.insert({});
        for (std::size_t i = 0; i < idx_.size(); ++i)
            for (std::size_t j = i + 1; j < idx_.size(); ++j) {
                const auto& x = sets_[idx_[i]];
                const auto& y = sets_[idx_[j]];
                std::vector<int> inter;
                std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(inter));
                cores.insert(std::move(inter));
            }
        for (const auto& core : cores) {
            auto found = try_core(core);
            if (found) return found;
        }
        return std::nullopt;
    }

private:
    std::optional<Sunflower> try_core(const std::vector<int>& core) {
        std::vector<int> cand;
        std::vector<std::vector<int>> links;
        for (int i : idx_) {
            const auto& s = sets_[i];
            if (!std::includes(s.begin(), s.end(), core.begin(), core.end())) continue;
            std::vector<int> link;
            std::set_difference(s.begin(), s.end(), core.begin(), core.end(), std::back_inserter(link));
            cand.push_back(i);
            links.push_back(std::move(link));
        }
        if (static_cast<int>(cand.size()) < a_) return std::nullopt;
        nodes_ = 0;
        std::vector<int> chosen;
        std::set<int> used;
        if (pack(cand, links, 0, chosen, used)) {
            Sunflower sf;
            sf.core = core;
            sf.petals = chosen;
            return sf;
        }
        return std::nullopt;
    }

    bool pack(const std::vector<int>& cand, const std::vector<std::vector<int>>& links, std::size_t pos,
              std::vector<int>& chosen, std::set<int>& used) {
        if (static_cast<int>(chosen.size()) >= a_) return true;
        if (pos >= cand.size()) return false;
        if (static_cast<int>(chosen.size() + (cand.size() - pos)) < a_) return false;
        if (++nodes_ > kNodeCap) return false;
        bool clash = false;
        for (int x : links[pos])
            if (used.count(x)) {
                clash = true;
                break;
            }
        if (!clash) {
            chosen.push_back(cand[pos]);
            for (int x : links[pos]) used.insert(x);
            if (pack(cand, links, pos + 1, chosen, used)) return true;
            for (int x : links[pos]) used.erase(x);
            chosen.pop_back();
        }
        return pack(cand, links, pos + 1, chosen, used);
    }

    static constexpr std::uint64_t kNodeCap = 2'000'000;
    const std::vector<std::vector<int>>& sets_;
    const std::vector<int>& idx_;
    int a_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

// Finds a sunflower of size >= a when one exists at the family's scale. The
// constructive recursion runs first; for small families an exact core scan
// backs it up, so the b!(a-1)^b regime never slips through on test sizes.
inline std::optional<Sunflower> find_sunflower(const SetFamily& fam, int a) {
    // collapse duplicate sets, first occurrence wins
    std::vector<int> idx;
    {
        std::set<std::vector<int>> seen;
        for (std::size_t i = 0; i < fam.members.size(); ++i)
            if (seen.insert(fam.members[i]).second) idx.push_back(static_cast<int>(i));
    }
    if (a <= 1) return Sunflower{{}, {idx[0]}};

    auto found = detail::recurse(fam.members, idx, a);
    if (found) return found;
    if (idx.size() <= 4096) return detail::ExactSearch(fam.members, idx, a).run();
    return std::nullopt;
}

}  // namespace triclust
