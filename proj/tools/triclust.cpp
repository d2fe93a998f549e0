// triclust - radius/diameter clustering of incomplete Boolean matrices:
// covering certificates, kernelization, exact solving, verification and
// instance generation.
//
// Exit codes: 0 = YES (or success), 1 = NO (or failed verification),
// 2 = budget exhausted, 3 = usage or parse errors.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triclust/core.hpp"
#include "triclust/covering.hpp"
#include "triclust/encode.hpp"
#include "triclust/gen.hpp"
#include "triclust/io.hpp"
#include "triclust/kernelize.hpp"
#include "triclust/pipeline.hpp"
#include "triclust/solve.hpp"

using nlohmann::json;
using namespace triclust;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 3;

SolverBudget budget_from_env() {
    SolverBudget b;
    if (const char* e = std::getenv("TRICLUST_BUDGET_COMPLETIONS")) b.max_completions = std::strtoull(e, nullptr, 10);
    if (const char* e = std::getenv("TRICLUST_BUDGET_CENTERS")) b.max_center_tuples = std::strtoull(e, nullptr, 10);
    return b;
}

void emit(const json& j, const std::string& report_path) {
    std::string text = j.dump(2);
    std::cout << text << '\n';
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write " + report_path);
        out << text << '\n';
    }
}

int exit_for(Answer a) {
    switch (a) {
        case Answer::Yes: return kExitYes;
        case Answer::No: return kExitNo;
        case Answer::BudgetExhausted: return kExitBudget;
    }
    return kExitUsage;
}

json qwitness_json(const QDecision& qd) {
    json w;
    w["completion"] = json::array();
    for (const auto& row : qd.completion.rows) {
        std::string s;
        for (std::size_t j = 0; j < row.entries.size(); ++j) {
            if (j) s += ' ';
            s += std::to_string(row.entries[j]);
        }
        w["completion"].push_back(s);
    }
    w["clusters"] = json::array();
    for (const auto& block : qd.clusters) {
        json b = json::array();
        for (int m : block) b.push_back(m + 1);
        w["clusters"].push_back(b);
    }
    w["centers"] = json::array();
    for (int c : qd.in_centers) w["centers"].push_back(c + 1);
    for (const auto& c : qd.any_centers) {
        std::string s;
        for (std::size_t j = 0; j < c.entries.size(); ++j) {
            if (j) s += ' ';
            s += std::to_string(c.entries[j]);
        }
        w["centers"].push_back(s);
    }
    return w;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file " + path);
    Graph g;
    int m;
    if (!(in >> g.n >> m)) throw std::runtime_error("graph file: expected 'n m' header");
    for (int e = 0; e < m; ++e) {
        int u, v;
        if (!(in >> u >> v)) throw std::runtime_error("graph file: truncated edge list");
        g.edges.emplace_back(u - 1, v - 1);
    }
    g.validate();
    return g;
}

bool three_colorable(const Graph& g) {
    std::vector<int> color(g.n, -1);
    std::vector<std::vector<int>> adj(g.n);
    for (auto [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    auto rec = [&](auto&& self, int v) -> bool {
        if (v == g.n) return true;
        for (int c = 0; c < 3; ++c) {
            bool ok = true;
            for (int u : adj[v])
                if (color[u] == c) {
                    ok = false;
                    break;
                }
            if (ok) {
                color[v] = c;
                if (self(self, v + 1)) return true;
                color[v] = -1;
            }
        }
        return false;
    };
    return rec(rec, 0);
}

struct SolveOutcome {
    json report;
    int exit_code;
};

SolveOutcome run_solve(const std::string& path, bool via_kernel, SolverBudget budget) {
    auto parsed = parse_instance_file(path);
    json rep;
    rep["instance"] = {{"k", parsed.k}, {"r", parsed.r}, {"variant", variant_name(parsed.variant)},
                       {"qary", parsed.qary}};
    auto t0 = std::chrono::steady_clock::now();
    int code;
    if (parsed.qary) {
        rep["instance"]["d"] = parsed.qmatrix.d;
        rep["instance"]["q"] = parsed.qmatrix.q;
        rep["instance"]["metric"] = metric_name(parsed.metric);
        QDecision qd = solve_qary(parsed.qmatrix, parsed.k, parsed.r, parsed.metric, parsed.variant,
                                  budget);
        rep["decision"] = answer_name(qd.answer);
        rep["witness"] = qd.answer == Answer::Yes ? qwitness_json(qd) : json();
        code = exit_for(qd.answer);
    } else {
        const Instance& inst = parsed.boolean;
        rep["instance"]["d"] = inst.d;
        rep["cover"] = cover_json(covering_certificate(inst.rows));
        Decision dec;
        if (via_kernel) {
            KernelResult kr;
            dec = solve_via_kernel(inst, budget, &kr);
            rep["kernel"] = kernel_json(kr);
        } else {
            dec = solve_completion(inst, budget);
            rep["kernel"] = json();
        }
        rep["decision"] = answer_name(dec.answer);
        rep["witness"] = dec.witness ? witness_json(inst, *dec.witness) : json();
        if (dec.lifting_failed) rep["lifting_failed"] = true;
        code = exit_for(dec.answer);
    }
    std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - t0;
    rep["timings"] = {{"total_ms", ms.count()}};
    return {rep, code};
}

int cmd_verify(const std::string& instance_path, const std::string& report_path) {
    auto parsed = parse_instance_file(instance_path);
    std::ifstream in(report_path);
    if (!in) throw std::runtime_error("cannot open " + report_path);
    json rep = json::parse(in);
    std::string decision = rep.at("decision");
    if (decision != "YES") {
        if (!rep.at("witness").is_null()) {
            std::cerr << "verify: non-YES report carries a witness\n";
            return kExitNo;
        }
        std::cout << "verify: decision " << decision << ", nothing to check\n";
        return kExitYes;
    }
    if (rep.at("witness").is_null()) {
        std::cerr << "verify: YES report without witness\n";
        return kExitNo;
    }
    if (parsed.qary) {
        const json& w = rep["witness"];
        const QMatrix& m = parsed.qmatrix;
        QMatrix comp = m;
        auto rows = w.at("completion");
        if (rows.size() != m.rows.size()) {
            std::cerr << "verify: completion shape mismatch\n";
            return kExitNo;
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::stringstream ss(rows[i].get<std::string>());
            for (int j = 0; j < m.d; ++j) {
                int v;
                ss >> v;
                if (m.rows[i].entries[j] != kQMissing && m.rows[i].entries[j] != v) {
                    std::cerr << "verify: completion disagrees with known entry\n";
                    return kExitNo;
                }
                comp.rows[i].entries[j] = v;
            }
        }
        auto dist = [&](const DomainVector& a, const DomainVector& b) {
            return parsed.metric == Metric::Hamming ? hamming_q(a, b) : manhattan_q(a, b);
        };
        std::vector<int> seen(m.rows.size(), 0);
        if (w.at("clusters").size() > static_cast<std::size_t>(parsed.k)) {
            std::cerr << "verify: cluster budget\n";
            return kExitNo;
        }
        for (std::size_t c = 0; c < w.at("clusters").size(); ++c) {
            std::vector<int> block;
            for (int v : w["clusters"][c]) block.push_back(v - 1);
            for (int v : block) ++seen[v];
            if (parsed.variant == Variant::Diam) {
                for (std::size_t i = 0; i < block.size(); ++i)
                    for (std::size_t j = i + 1; j < block.size(); ++j)
                        if (dist(comp.rows[block[i]], comp.rows[block[j]]) > parsed.r) {
                            std::cerr << "verify: diameter exceeded\n";
                            return kExitNo;
                        }
            } else {
                DomainVector center;
                if (parsed.variant == Variant::In) {
                    int ctr = w["centers"][c].get<int>() - 1;
                    center = comp.rows[ctr];
                } else {
                    center.q = m.q;
                    std::stringstream ss(w["centers"][c].get<std::string>());
                    int v;
                    while (ss >> v) center.entries.push_back(v);
                }
                for (int v : block)
                    if (dist(center, comp.rows[v]) > parsed.r) {
                        std::cerr << "verify: radius exceeded\n";
                        return kExitNo;
                    }
            }
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i] != 1) {
                std::cerr << "verify: row " << i + 1 << " clustered " << seen[i] << " times\n";
                return kExitNo;
            }
        std::cout << "verify: witness ok\n";
        return kExitYes;
    }
    ClusteringSolution sol = witness_from_json(parsed.boolean, rep["witness"]);
    auto res = verify_solution(parsed.boolean, sol);
    if (!res) {
        std::cerr << "verify: " << res.violation << '\n';
        return kExitNo;
    }
    std::cout << "verify: witness ok\n";
    return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radius/diameter clustering of incomplete Boolean matrices"};
    app.require_subcommand(1);

    std::string instance_path, out_path, report_path, graph_path, strings_arg, pads_arg;
    bool via_kernel = false, complete_cover = false, pads_complement = false;
    int gen_n = 0, gen_cycle = 0, gen_rows = 8, gen_dim = 8, gen_k = 2, gen_r = 1;
    int miss_rows = 0, miss_cols = 0, miss_count = 0, cs_r = 1;
    std::uint64_t seed = 1;
    std::string variant_arg = "in", sidecar_path;
    SolverBudget budget = budget_from_env();
    std::vector<std::string> bench_paths;
    int jobs = 1;
    (void)complete_cover;

    auto* cover = app.add_subcommand("cover", "covering number and a witnessing (R_M, T_M)");
    cover->add_option("instance", instance_path)->required();
    cover->add_option("--report", report_path, "also write the JSON to a file");

    auto* kern = app.add_subcommand("kernelize", "reduce an instance, emit kernel and report");
    kern->add_option("instance", instance_path)->required();
    kern->add_option("-o,--out", out_path, "kernel instance file")->required();
    kern->add_option("--report", report_path);

    auto* solve = app.add_subcommand("solve", "decide the instance, emit a report");
    solve->add_option("instance", instance_path)->required();
    solve->add_flag("--via-kernel", via_kernel, "kernelize before solving");
    solve->add_option("--budget-completions", budget.max_completions);
    solve->add_option("--budget-centers", budget.max_center_tuples);
    solve->add_option("--time-hint", budget.time_hint_sec, "advisory seconds cap");
    solve->add_option("--report", report_path);

    auto* verify = app.add_subcommand("verify", "re-check a report's witness");
    verify->add_option("instance", instance_path)->required();
    verify->add_option("report", report_path)->required();

    std::string gen_kind;
    auto* gen = app.add_subcommand("gen", "generate instances with known ground truth");
    gen->add_option("generator", gen_kind)
        ->description("coloring | closest-string | incidence | planted")
        ->required();
    gen->add_option("-o,--out", out_path)->required();
    gen->add_option("--sidecar", sidecar_path, "ground-truth JSON sidecar");
    gen->add_option("--complete", gen_n, "use the complete graph K_n");
    gen->add_option("--cycle", gen_cycle, "use the cycle C_n");
    gen->add_option("--graph", graph_path, "graph file: 'n m' then edges, 1-indexed");
    gen->add_option("--strings", strings_arg, "comma-separated Boolean strings");
    gen->add_option("--pads", pads_arg, "comma-separated private-block pad counts");
    gen->add_flag("--pads-complement", pads_complement, "pad each vertex to n-1-deg(v)");
    gen->add_option("--rows", gen_rows);
    gen->add_option("--dim", gen_dim);
    gen->add_option("-k", gen_k);
    gen->add_option("-r", gen_r);
    gen->add_option("--cs-r", cs_r, "radius for closest-string");
    gen->add_option("--variant", variant_arg);
    gen->add_option("--missing-rows", miss_rows);
    gen->add_option("--missing-cols", miss_cols);
    gen->add_option("--missing-count", miss_count);
    gen->add_option("--seed", seed);

    auto* bench = app.add_subcommand("bench", "time a batch of instance files");
    bench->add_option("paths", bench_paths)->required();
    bench->add_flag("--via-kernel", via_kernel);
    bench->add_option("--jobs", jobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cover->parsed()) {
            auto parsed = parse_instance_file(instance_path);
            CoverCertificate cert;
            if (parsed.qary) {
                std::vector<TriVector> rows;
                for (const auto& qr : parsed.qmatrix.rows) {
                    std::string s;
                    for (int e : qr.entries) s += e == kQMissing ? '?' : '0';
                    rows.push_back(TriVector::from_string(s));
                }
                cert = covering_certificate(rows);
            } else {
                cert = covering_certificate(parsed.boolean.rows);
            }
            emit(cover_json(cert), report_path);
            return kExitYes;
        }

        if (kern->parsed()) {
            auto parsed = parse_instance_file(instance_path);
            if (parsed.qary) throw std::runtime_error("kernelize expects a Boolean instance");
            KernelResult kr = kernelize(parsed.boolean);
            json rep = kernel_json(kr);
            if (kr.early_no) {
                rep["decision"] = "NO";
                emit(rep, report_path);
                return kExitNo;
            }
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            Instance padded = kr.reduced;
            if (padded.d == 0) {  // instance files need d >= 1; pad one constant column
                padded.d = 1;
                for (auto& row : padded.rows) row = TriVector::all_zero(1);
                rep["padded_column"] = true;
            }
            out << print_instance(padded);
            emit(rep, report_path);
            return kExitYes;
        }

        if (solve->parsed()) {
            auto outcome = run_solve(instance_path, via_kernel, budget);
            emit(outcome.report, report_path);
            return outcome.exit_code;
        }

        if (verify->parsed()) return cmd_verify(instance_path, report_path);

        if (gen->parsed()) {
            auto graph = [&]() -> Graph {
                if (!graph_path.empty()) return load_graph(graph_path);
                if (gen_cycle > 0) return Graph::cycle(gen_cycle);
                if (gen_n > 0) return Graph::complete(gen_n);
                throw std::runtime_error("gen: need --graph, --complete or --cycle");
            };
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            json sidecar;
            if (gen_kind == "coloring") {
                Graph g = graph();
                auto v = variant_from_name(variant_arg).value_or(Variant::In);
                Instance inst = coloring_completion_instance(g, v);
                out << print_instance(inst);
                if (g.n <= 24) sidecar["decision"] = three_colorable(g) ? "YES" : "NO";
            } else if (gen_kind == "closest-string") {
                std::vector<std::string> strings;
                std::stringstream ss(strings_arg);
                std::string item;
                while (std::getline(ss, item, ',')) strings.push_back(item);
                Instance inst = closest_string_instance(strings, cs_r);
                out << print_instance(inst);
            } else if (gen_kind == "incidence") {
                Graph g = graph();
                std::vector<int> pads(g.n, 0);
                if (pads_complement) {
                    auto deg = g.degrees();
                    for (int i = 0; i < g.n; ++i) pads[i] = g.n - 1 - deg[i];
                } else if (!pads_arg.empty()) {
                    pads = parse_int_list(pads_arg);
                }
                auto rows = incidence_reduction(g, pads);
                Instance inst{rows[0].dim(), gen_k, gen_r,
                              variant_from_name(variant_arg).value_or(Variant::In), rows};
                out << print_instance(inst);
            } else if (gen_kind == "planted") {
                auto v = variant_from_name(variant_arg).value_or(Variant::In);
                MissingSpec spec{miss_rows, miss_cols, miss_count};
                PlantedInstance p = random_planted(gen_rows, gen_dim, gen_k, gen_r, v, spec, seed);
                Instance raw{gen_dim, gen_k, gen_r, v, p.raw_rows};
                out << print_instance(raw);
                sidecar["decision"] = "YES";
                sidecar["witness"] = witness_json(p.instance, p.witness);
            } else {
                throw std::runtime_error("gen: unknown generator '" + gen_kind + "'");
            }
            if (!sidecar_path.empty()) {
                std::ofstream sp(sidecar_path);
                if (!sp) throw std::runtime_error("cannot write " + sidecar_path);
                sp << sidecar.dump(2) << '\n';
            }
            return kExitYes;
        }

        if (bench->parsed()) {
            auto one = [&](const std::string& p) {
                auto t0 = std::chrono::steady_clock::now();
                auto outcome = run_solve(p, via_kernel, budget);
                std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - t0;
                json line = {{"file", p},
                             {"decision", outcome.report["decision"]},
                             {"ms", ms.count()}};
                return line.dump();
            };
            if (jobs <= 1) {
                for (const auto& p : bench_paths) std::cout << one(p) << '\n';
            } else {
                std::vector<std::future<std::string>> futs;
                for (const auto& p : bench_paths)
                    futs.push_back(std::async(std::launch::async, one, p));
                for (auto& f : futs) std::cout << f.get() << '\n';
            }
            return kExitYes;
        }
    } catch (const ParseError& e) {
        std::cerr << "triclust: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "triclust: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
