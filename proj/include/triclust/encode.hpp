// encode.hpp - bounded-domain support: one-hot and unary block encodings of
// q-ary matrices, block-preserving completion, and q-ary solving
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "triclust/core.hpp"
#include "triclust/solve.hpp"

namespace triclust {

inline constexpr int kQMissing = -1;

struct DomainVector {
    int q = 2;
    std::vector<int> entries;  // values in [0, q) or kQMissing

    void validate() const {
        if (q < 2) throw std::invalid_argument("DomainVector: q must be at least 2");
        for (int e : entries)
            if (e != kQMissing && (e < 0 || e >= q))
                throw std::invalid_argument("DomainVector: entry outside domain");
    }
};

struct QMatrix {
    int q = 2;
    int d = 0;
    std::vector<DomainVector> rows;
};

enum class Metric { Hamming, Manhattan };

inline const char* metric_name(Metric m) { return m == Metric::Hamming ? "hamming" : "manhattan"; }

enum class BlockEncoding { Alpha, Beta };

struct BlockMatrix {
    int q = 2;
    int d = 0;  // q-ary dimension; Boolean width is d*q
    BlockEncoding tag = BlockEncoding::Alpha;
    std::vector<TriVector> rows;
};

// Hamming distance over known q-ary entry pairs.
inline int hamming_q(const DomainVector& a, const DomainVector& b) {
    if (a.entries.size() != b.entries.size()) throw std::invalid_argument("dimension mismatch");
    int dist = 0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        if (a.entries[i] != kQMissing && b.entries[i] != kQMissing && a.entries[i] != b.entries[i])
            ++dist;
    return dist;
}

// Manhattan distance over known q-ary entry pairs.
inline int manhattan_q(const DomainVector& a, const DomainVector& b) {
    if (a.entries.size() != b.entries.size()) throw std::invalid_argument("dimension mismatch");
    int dist = 0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        if (a.entries[i] != kQMissing && b.entries[i] != kQMissing)
            dist += std::abs(a.entries[i] - b.entries[i]);
    return dist;
}

namespace encode_detail {

// alpha(i): the width-q binary representation of 2^i, so the single one sits
// at block position q-1-i. alpha((0,2)) with q=3 reads (0,0,1, 1,0,0).
inline void write_alpha_block(TriVector& row, int base, int q, int value) {
    for (int j = 0; j < q; ++j) row.set(base + j, Tri::Zero);
    row.set(base + (q - 1 - value), Tri::One);
}

// beta(i): unary, i ones at the high end of the block. beta((0,2)) with q=3
// reads (0,0,0, 0,1,1).
inline void write_beta_block(TriVector& row, int base, int q, int value) {
    for (int j = 0; j < q; ++j) row.set(base + j, j >= q - value ? Tri::One : Tri::Zero);
}

inline int read_block(const TriVector& row, int base, int q, BlockEncoding tag) {
    bool all_missing = true, any_missing = false;
    for (int j = 0; j < q; ++j) {
        if (row.get(base + j) == Tri::Missing)
            any_missing = true;
        else
            all_missing = false;
    }
    if (all_missing) return kQMissing;
    if (any_missing) throw std::invalid_argument("decode: partially missing block");
    if (tag == BlockEncoding::Alpha) {
        int ones = 0, pos = -1;
        for (int j = 0; j < q; ++j)
            if (row.get(base + j) == Tri::One) {
                ++ones;
                pos = j;
            }
        if (ones != 1) throw std::invalid_argument("decode: block is not one-hot");
        return q - 1 - pos;
    }
    int ones = 0;
    for (int j = 0; j < q; ++j)
        if (row.get(base + j) == Tri::One) ++ones;
    for (int j = 0; j < q; ++j) {
        bool want_one = j >= q - ones;
        if ((row.get(base + j) == Tri::One) != want_one)
            throw std::invalid_argument("decode: block is not unary");
    }
    return ones;
}

}  // namespace encode_detail

inline BlockMatrix encode_with(const QMatrix& m, BlockEncoding tag) {
    BlockMatrix out;
    out.q = m.q;
    out.d = m.d;
    out.tag = tag;
    for (const auto& row : m.rows) {
        row.validate();
        if (static_cast<int>(row.entries.size()) != m.d)
            throw std::invalid_argument("encode: row length mismatch");
        TriVector enc(m.d * m.q);
        for (int i = 0; i < m.d; ++i) {
            int v = row.entries[i];
            if (v == kQMissing) continue;  // whole block stays missing
            if (tag == BlockEncoding::Alpha)
                encode_detail::write_alpha_block(enc, i * m.q, m.q, v);
            else
                encode_detail::write_beta_block(enc, i * m.q, m.q, v);
        }
        out.rows.push_back(std::move(enc));
    }
    return out;
}

inline BlockMatrix encode_alpha(const QMatrix& m) { return encode_with(m, BlockEncoding::Alpha); }
inline BlockMatrix encode_beta(const QMatrix& m) { return encode_with(m, BlockEncoding::Beta); }

// Exact left inverse of the matching encoder; throws on rows that are not
// block-preserving.
inline QMatrix decode(const BlockMatrix& bm) {
    QMatrix out;
    out.q = bm.q;
    out.d = bm.d;
    for (const auto& row : bm.rows) {
        if (row.dim() != bm.d * bm.q) throw std::invalid_argument("decode: width mismatch");
        DomainVector dv;
        dv.q = bm.q;
        for (int i = 0; i < bm.d; ++i)
            dv.entries.push_back(encode_detail::read_block(row, i * bm.q, bm.q, bm.tag));
        out.rows.push_back(std::move(dv));
    }
    return out;
}

struct QDecision {
    static QDecision just(Answer a) {
        QDecision out;
        out.answer = a;
        return out;
    }

    Answer answer = Answer::No;
    QMatrix completion;                      // YES only
    std::vector<std::vector<int>> clusters;  // YES only
    std::vector<int> in_centers;             // In
    std::vector<DomainVector> any_centers;   // Any
};

namespace encode_detail {

inline int q_distance(const DomainVector& a, const DomainVector& b, Metric metric) {
    return metric == Metric::Hamming ? hamming_q(a, b) : manhattan_q(a, b);
}

inline std::vector<DomainVector> q_ball(const DomainVector& base, int q, int radius, Metric metric) {
    std::vector<DomainVector> out;
    DomainVector cur = base;
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == static_cast<int>(base.entries.size())) {
            out.push_back(cur);
            return;
        }
        int orig = cur.entries[pos];
        for (int v = 0; v < q; ++v) {
            int cost = metric == Metric::Hamming ? (v != orig ? 1 : 0) : std::abs(v - orig);
            if (cost > left) continue;
            cur.entries[pos] = v;
            self(self, pos + 1, left - cost);
        }
        cur.entries[pos] = orig;
    };
    rec(rec, 0, radius);
    return out;
}

}  // namespace encode_detail

// Decides the q-ary clustering-completion problem by encoding into Boolean
// blocks (alpha for Hamming with bound 2r, beta for Manhattan with bound r)
// and enumerating block-preserving completions: q values per missing block,
// never 2^q bit patterns.
inline QDecision solve_qary(const QMatrix& m, int k, int r, Metric metric, Variant variant,
                            const SolverBudget& budget = {}) {
    budget.validate();
    if (m.rows.empty()) throw std::invalid_argument("solve_qary: empty matrix");
    const BlockEncoding tag = metric == Metric::Hamming ? BlockEncoding::Alpha : BlockEncoding::Beta;
    const int r_enc = metric == Metric::Hamming ? 2 * r : r;

    std::vector<std::pair<int, int>> missing;  // (row, q-ary coord)
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        for (int j = 0; j < m.d; ++j)
            if (m.rows[i].entries[j] == kQMissing) missing.emplace_back(static_cast<int>(i), j);
    double total = 1;
    for (std::size_t i = 0; i < missing.size(); ++i) {
        total *= m.q;
        if (total > static_cast<double>(budget.max_completions))
            return QDecision::just(Answer::BudgetExhausted);
    }

    QMatrix work = m;
    std::vector<int> digits(missing.size(), 0);
    bool inner_exhausted = false;
    while (true) {
        for (std::size_t i = 0; i < missing.size(); ++i)
            work.rows[missing[i].first].entries[missing[i].second] = digits[i];
        BlockMatrix enc = encode_with(work, tag);

        Decision inner;
        if (variant == Variant::Any) {
            // block-preserving candidate centers: q-ary balls around the rows
            std::set<std::vector<int>> cand_set;
            for (const auto& row : work.rows)
                for (const auto& c : encode_detail::q_ball(row, m.q, r, metric))
                    cand_set.insert(c.entries);
            if (cand_set.size() > budget.max_center_tuples)
                return QDecision::just(Answer::BudgetExhausted);
            std::vector<DomainVector> cands;
            for (const auto& e : cand_set) cands.push_back({m.q, e});
            std::vector<TriVector> enc_cands;
            for (const auto& c : cands) {
                QMatrix one{m.q, m.d, {c}};
                enc_cands.push_back(encode_with(one, tag).rows[0]);
            }
            // exact cover search over candidates, pivoting on the first
            // uncovered row
            const int n = static_cast<int>(work.rows.size());
            if (n > 62) throw std::invalid_argument("solve_qary: too many rows for mask search");
            std::vector<std::uint64_t> covers(cands.size(), 0);
            for (std::size_t c = 0; c < cands.size(); ++c)
                for (int i = 0; i < n; ++i)
                    if (hamming_delta(enc_cands[c], enc.rows[i]) <= r_enc)
                        covers[c] |= std::uint64_t{1} << i;
            std::uint64_t nodes = 0;
            bool cut = false;
            std::vector<int> chosen;
            std::set<std::pair<std::uint64_t, int>> dead;
            auto search = [&](auto&& self, std::uint64_t uncovered, int left) -> bool {
                if (uncovered == 0) return true;
                if (left == 0 || dead.count({uncovered, left})) return false;
                int pivot = std::countr_zero(uncovered);
                for (std::size_t c = 0; c < cands.size(); ++c) {
                    if (!(covers[c] >> pivot & 1)) continue;
                    if (++nodes > budget.max_center_tuples) {
                        cut = true;
                        return false;
                    }
                    chosen.push_back(static_cast<int>(c));
                    if (self(self, uncovered & ~covers[c], left - 1)) return true;
                    chosen.pop_back();
                    if (cut) return false;
                }
                dead.insert({uncovered, left});
                return false;
            };
            std::uint64_t all = (std::uint64_t{1} << n) - 1;
            if (search(search, all, std::min(k, n))) {
                QDecision qd;
                qd.answer = Answer::Yes;
                qd.completion = work;
                std::vector<std::vector<int>> clusters(chosen.size());
                for (int i = 0; i < n; ++i) {
                    int best = -1, best_dist = r + 1;
                    for (std::size_t c = 0; c < chosen.size(); ++c) {
                        int dist = encode_detail::q_distance(cands[chosen[c]], work.rows[i], metric);
                        if (dist < best_dist) {
                            best_dist = dist;
                            best = static_cast<int>(c);
                        }
                    }
                    clusters[best].push_back(i);
                }
                for (std::size_t c = 0; c < chosen.size(); ++c)
                    if (!clusters[c].empty()) {
                        qd.clusters.push_back(clusters[c]);
                        qd.any_centers.push_back(cands[chosen[c]]);
                    }
                return qd;
            }
            if (cut) inner_exhausted = true;
        } else {
            inner = variant == Variant::In ? solve_in_complete(enc.rows, k, r_enc)
                                           : solve_diam_complete(enc.rows, k, r_enc);
            if (inner.answer == Answer::Yes) {
                QDecision qd;
                qd.answer = Answer::Yes;
                qd.completion = work;
                qd.clusters = inner.witness->clusters;
                qd.in_centers = inner.witness->in_centers;
                return qd;
            }
        }

        // next block-preserving completion, last missing entry fastest
        int pos = static_cast<int>(digits.size()) - 1;
        while (pos >= 0 && digits[pos] == m.q - 1) {
            digits[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++digits[pos];
    }
    return QDecision::just(inner_exhausted ? Answer::BudgetExhausted : Answer::No);
}

}  // namespace triclust
