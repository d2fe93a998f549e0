// io.hpp - instance file parsing/printing and JSON report documents
#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "triclust/core.hpp"
#include "triclust/covering.hpp"
#include "triclust/encode.hpp"
#include "triclust/kernelize.hpp"
#include "triclust/solve.hpp"

namespace triclust {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at line " + std::to_string(line_) + ", col " +
                             std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
};

// Parsed instance file: Boolean, or q-ary with a metric.
struct ParsedInstance {
    bool qary = false;
    Instance boolean;     // valid when !qary
    QMatrix qmatrix;      // valid when qary
    int k = 1, r = 0;
    Variant variant = Variant::In;
    Metric metric = Metric::Hamming;
};

namespace io_detail {

inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

inline int parse_int(const std::string& t, int line, int col, const char* what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(line, col, std::string("expected integer for ") + what + ", got '" + t + "'");
    }
}

}  // namespace io_detail

// Header "d k r variant [q metric]" followed by one row per line: d glued
// symbols from {0,1,?} for Boolean instances, d space-separated tokens from
// {0..q-1, ?} for q-ary ones.
inline ParsedInstance parse_instance(std::istream& in, bool dedupe = true) {
    ParsedInstance out;
    std::string line;
    int lineno = 0;
    // header
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = io_detail::tokens(line);
        if (toks.empty()) continue;
        if (toks.size() != 4 && toks.size() != 6)
            throw ParseError(lineno, 1, "header must be 'd k r variant [q metric]'");
        int d = io_detail::parse_int(toks[0], lineno, 1, "d");
        int k = io_detail::parse_int(toks[1], lineno, 2, "k");
        int r = io_detail::parse_int(toks[2], lineno, 3, "r");
        auto variant = variant_from_name(toks[3]);
        if (!variant) throw ParseError(lineno, 4, "variant must be in, any or diam");
        if (d < 1) throw ParseError(lineno, 1, "d must be at least 1");
        if (k < 1) throw ParseError(lineno, 2, "k must be at least 1");
        if (r < 0) throw ParseError(lineno, 3, "r must be non-negative");
        out.k = k;
        out.r = r;
        out.variant = *variant;
        if (toks.size() == 6) {
            out.qary = true;
            out.qmatrix.q = io_detail::parse_int(toks[4], lineno, 5, "q");
            if (out.qmatrix.q < 2) throw ParseError(lineno, 5, "q must be at least 2");
            if (toks[5] == "hamming")
                out.metric = Metric::Hamming;
            else if (toks[5] == "manhattan")
                out.metric = Metric::Manhattan;
            else
                throw ParseError(lineno, 6, "metric must be hamming or manhattan");
            out.qmatrix.d = d;
        } else {
            out.boolean.d = d;
            out.boolean.k = k;
            out.boolean.r = r;
            out.boolean.variant = *variant;
        }
        break;
    }
    if (lineno == 0) throw ParseError(1, 1, "empty file");

    const int d = out.qary ? out.qmatrix.d : out.boolean.d;
    std::vector<TriVector> brows;
    while (std::getline(in, line)) {
        ++lineno;
        if (out.qary) {
            auto toks = io_detail::tokens(line);
            if (toks.empty()) continue;
            if (static_cast<int>(toks.size()) != d)
                throw ParseError(lineno, 1, "expected " + std::to_string(d) + " entries");
            DomainVector dv;
            dv.q = out.qmatrix.q;
            for (int j = 0; j < d; ++j) {
                if (toks[j] == "?")
                    dv.entries.push_back(kQMissing);
                else {
                    int v = io_detail::parse_int(toks[j], lineno, j + 1, "entry");
                    if (v < 0 || v >= out.qmatrix.q)
                        throw ParseError(lineno, j + 1, "entry outside domain");
                    dv.entries.push_back(v);
                }
            }
            out.qmatrix.rows.push_back(std::move(dv));
        } else {
            std::string trimmed;
            for (char c : line)
                if (!isspace(static_cast<unsigned char>(c))) trimmed += c;
            if (trimmed.empty()) continue;
            if (static_cast<int>(trimmed.size()) != d)
                throw ParseError(lineno, 1,
                                 "expected " + std::to_string(d) + " symbols, got " +
                                     std::to_string(trimmed.size()));
            for (int j = 0; j < d; ++j)
                if (trimmed[j] != '0' && trimmed[j] != '1' && trimmed[j] != '?')
                    throw ParseError(lineno, j + 1, std::string("bad symbol '") + trimmed[j] + "'");
            brows.push_back(TriVector::from_string(trimmed));
        }
    }
    if (out.qary) {
        if (out.qmatrix.rows.empty()) throw ParseError(lineno + 1, 1, "no rows");
    } else {
        if (brows.empty()) throw ParseError(lineno + 1, 1, "no rows");
        if (dedupe) {
            auto dd = dedupe_rows(brows);
            out.boolean.rows = gather(brows, dd.kept);
        } else {
            out.boolean.rows = std::move(brows);
        }
    }
    return out;
}

inline ParsedInstance parse_instance_file(const std::string& path, bool dedupe = true) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_instance(in, dedupe);
}

inline std::string print_instance(const Instance& inst) {
    std::ostringstream out;
    out << inst.d << ' ' << inst.k << ' ' << inst.r << ' ' << variant_name(inst.variant) << '\n';
    for (const auto& row : inst.rows) out << row.to_string() << '\n';
    return out.str();
}

inline std::string print_qinstance(const QMatrix& m, int k, int r, Variant variant, Metric metric) {
    std::ostringstream out;
    out << m.d << ' ' << k << ' ' << r << ' ' << variant_name(variant) << ' ' << m.q << ' '
        << metric_name(metric) << '\n';
    for (const auto& row : m.rows) {
        for (int j = 0; j < m.d; ++j) {
            if (j) out << ' ';
            if (row.entries[j] == kQMissing)
                out << '?';
            else
                out << row.entries[j];
        }
        out << '\n';
    }
    return out.str();
}

// --- JSON report fragments (indices 1-based in every report) ---

inline nlohmann::json cover_json(const CoverCertificate& cert) {
    nlohmann::json j;
    j["value"] = cert.value;
    j["rows"] = nlohmann::json::array();
    j["cols"] = nlohmann::json::array();
    for (int r : cert.rows) j["rows"].push_back(r + 1);
    for (int c : cert.cols) j["cols"].push_back(c + 1);
    return j;
}

inline nlohmann::json witness_json(const Instance& inst, const ClusteringSolution& sol) {
    nlohmann::json j;
    j["completion"] = nlohmann::json::array();
    for (const auto& row : sol.completion) j["completion"].push_back(row.to_string());
    j["clusters"] = nlohmann::json::array();
    for (const auto& block : sol.clusters) {
        nlohmann::json b = nlohmann::json::array();
        for (int m : block) b.push_back(m + 1);
        j["clusters"].push_back(b);
    }
    if (inst.variant == Variant::In) {
        j["centers"] = nlohmann::json::array();
        for (int c : sol.in_centers) j["centers"].push_back(c + 1);
    } else if (inst.variant == Variant::Any) {
        j["centers"] = nlohmann::json::array();
        for (const auto& c : sol.any_centers) j["centers"].push_back(c.to_string());
    }
    return j;
}

inline ClusteringSolution witness_from_json(const Instance& inst, const nlohmann::json& j) {
    ClusteringSolution sol;
    for (const auto& s : j.at("completion"))
        sol.completion.push_back(TriVector::from_string(s.get<std::string>()));
    for (const auto& b : j.at("clusters")) {
        std::vector<int> block;
        for (int m : b) block.push_back(m - 1);
        sol.clusters.push_back(std::move(block));
    }
    if (inst.variant == Variant::In)
        for (int c : j.at("centers")) sol.in_centers.push_back(c - 1);
    if (inst.variant == Variant::Any)
        for (const auto& c : j.at("centers"))
            sol.any_centers.push_back(TriVector::from_string(c.get<std::string>()));
    return sol;
}

inline nlohmann::json bound_report_json(const BoundReport& b) {
    nlohmann::json j;
    j["row_guard"] = b.row_guard;
    j["row_bound_final"] = b.row_bound_final;
    j["coord_bound"] = b.coord_bound;
    j["row_guard_lemma_statement"] = b.row_guard_stmt;
    j["row_guard_theorem_proof"] = b.row_guard_theorem;
    j["coord_bound_c1"] = b.coord_bound_c1;
    j["removal_thresholds"] = b.thresholds;
    j["augment_bound"] = b.aug_bound;
    j["gamma_threshold"] = b.gamma_threshold;
    j["gamma_max"] = b.gamma_max;
    j["gamma_max_full"] = b.gamma_max_full;
    j["components"] = b.components;
    j["t_max"] = b.t_max;
    j["tm_size"] = b.tm_size;
    j["rm_size"] = b.rm_size;
    return j;
}

inline nlohmann::json kernel_json(const KernelResult& kr) {
    nlohmann::json j;
    j["early_no"] = kr.early_no ? nlohmann::json(*kr.early_no) : nlohmann::json();
    j["bound_report"] = bound_report_json(kr.bounds);
    j["cover"] = cover_json(kr.cert);
    j["kept_coords"] = nlohmann::json::array();
    for (int c : kr.kept_coords) j["kept_coords"].push_back(c + 1);
    j["kept_rows"] = nlohmann::json::array();
    for (int r : kr.kept_rows) j["kept_rows"].push_back(r + 1);
    j["removed"] = nlohmann::json::array();
    for (const auto& rr : kr.removed)
        j["removed"].push_back({{"row", rr.row + 1}, {"rule", rr.rule}});
    j["augmented_rows"] = nlohmann::json::array();
    for (int a : kr.augmented_rows) j["augmented_rows"].push_back(a + 1);
    return j;
}

}  // namespace triclust
