#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "stw/decomposition.hpp"
#include "stw/dp.hpp"
#include "stw/gadgets.hpp"
#include "stw/io.hpp"
#include "stw/oracle.hpp"
#include "stw/reductions.hpp"

using namespace stw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

Problem parse_problem(const std::string& name) {
    auto p = problem_from_name(name);
    if (!p) throw Error("unknown problem '" + name + "'");
    return *p;
}

NiceTreeDecomposition decomposition_for(const LabeledInstance& inst,
                                        const std::string& td_file, int* width_out) {
    TreeDecomposition td;
    if (!td_file.empty()) {
        td = load_td(read_file(td_file));
        if (auto bad = validate_td(inst.graph, td))
            throw Error("supplied decomposition invalid: " + bad->to_string());
    } else {
        td = heuristic_td(inst.graph);
    }
    if (width_out) *width_out = td.width();
    return nicify(td, inst.graph);
}

int cmd_solve(const std::string& problem_name_str, const std::string& graph_file,
              const std::string& td_file, std::optional<long long> budget,
              const std::string& json_out, int threads) {
    Problem problem = parse_problem(problem_name_str);
    if (problem == Problem::Ect) {
        std::cerr << "no solver is available for ect; use the oracle subcommand at "
                     "small scale\n";
        return kExitUsage;
    }
    LabeledInstance inst = load_instance_file(graph_file);
    inst.problem = problem;
    if (budget) inst.budget = *budget;

    SolveOptions opts;
    opts.threads = threads;
    ResultRecord rec;
    rec.problem = problem_name(problem);
    rec.budget = inst.budget;

    if (problem == Problem::Soct || problem == Problem::Sfvs) {
        int width = -1;
        NiceTreeDecomposition ntd = decomposition_for(inst, td_file, &width);
        SolveResult res =
            problem == Problem::Soct ? solve_soct(inst, ntd, opts) : solve_sfvs(inst, ntd, opts);
        rec.decomposition_width_used = width;
        rec.dp_nodes = res.stats.dp_nodes;
        rec.max_classes_per_bag = res.stats.max_classes_per_bag;
        rec.wall_seconds = res.stats.wall_seconds;
        if (res.infeasible) {
            rec.status = "infeasible";
            rec.message = "forced-keep vertices admit no valid induced graph";
        } else {
            rec.optimum_weight = res.deletion_weight;
            rec.deletion_vertices = res.deletion_set.to_vector();
            if (!vertex_solution_ok(inst, res.kept)) {
                rec.status = "error";
                rec.message = "internal: solution failed re-validation";
            } else {
                rec.status = res.feasible_within_budget ? "optimal" : "budget-exceeded";
            }
        }
    } else {
        TreeDecomposition src_td;
        const TreeDecomposition* src_ptr = nullptr;
        if (!td_file.empty()) {
            src_td = load_td(read_file(td_file));
            src_ptr = &src_td;
        }
        ReductionSolveResult res = solve_via_reduction(inst, src_ptr, opts);
        rec.decomposition_width_used = res.width_used;
        rec.dp_nodes = res.stats.dp_nodes;
        rec.max_classes_per_bag = res.stats.max_classes_per_bag;
        rec.wall_seconds = res.stats.wall_seconds;
        if (res.infeasible) {
            rec.status = "infeasible";
            rec.message = "no deletion set separates the required structure";
        } else {
            rec.optimum_weight = res.optimum_weight;
            bool ok;
            if (problem == Problem::Nmc) {
                rec.deletion_vertices = res.deleted_vertices.to_vector();
                VertexSet kept(inst.n());
                for (int v = 0; v < inst.n(); ++v)
                    if (!res.deleted_vertices.contains(v)) kept.insert(v);
                ok = vertex_solution_ok(inst, kept);
            } else {
                rec.deletion_edges = res.deleted_edges;
                ok = edge_solution_ok(inst, res.deleted_edges);
            }
            if (!ok) {
                rec.status = "error";
                rec.message = "internal: solution failed re-validation";
            } else {
                rec.status = res.feasible_within_budget ? "optimal" : "budget-exceeded";
            }
        }
    }

    std::cout << rec.to_text();
    if (!json_out.empty()) write_file(json_out, rec.to_json());
    if (rec.status == "optimal") return kExitOk;
    if (rec.status == "error") return kExitUsage;
    return kExitInfeasible;
}

int cmd_decompose(const std::string& graph_file, const std::string& out_file) {
    LabeledInstance inst = load_instance_file(graph_file);
    TreeDecomposition td = heuristic_td(inst.graph);
    write_file(out_file, serialize_td(td));
    std::cout << "width: " << td.width() << "\nbags: " << td.node_count << "\n";
    return kExitOk;
}

int cmd_generate(const std::string& problem_name_str, int k, int edges, uint64_t seed,
                 bool plant, bool witness_flag, const std::string& out_prefix) {
    Problem problem = parse_problem(problem_name_str);
    GridVariant variant;
    switch (problem) {
        case Problem::Sfvs:
        case Problem::Soct:
        case Problem::Ect: variant = GridVariant::PermutationIndependentSet; break;
        case Problem::Nmc: variant = GridVariant::IndependentSet; break;
        case Problem::Mwc: variant = GridVariant::PermutationClique; break;
        default:
            std::cerr << "no generator for problem " << problem_name_str << "\n";
            return kExitUsage;
    }
    GridProblemInstance h = gen_grid_instance(k, edges, variant, seed, plant);
    GeneratedInstance gen;
    switch (problem) {
        case Problem::Nmc: gen = construct_nmc_lb(h); break;
        case Problem::Mwc: gen = construct_mwc_lb(h); break;
        default: gen = construct_lb_instance(problem, h); break;
    }

    std::string inst_file = out_prefix + ".grl";
    std::string side_file = out_prefix + ".json";
    std::string wit_file;
    if (gen.witness_pd) {
        wit_file = out_prefix + ".td";
        write_file(wit_file, serialize_td(*gen.witness_pd));
    } else if (witness_flag) {
        TreeDecomposition td = heuristic_td(gen.instance.graph);
        if (auto bad = validate_td(gen.instance.graph, td))
            throw Error("heuristic witness invalid: " + bad->to_string());
        gen.width_constant = double(td.width() + 1) / gen.k;
        wit_file = out_prefix + ".td";
        write_file(wit_file, serialize_td(td));
    }
    write_file(inst_file, serialize_instance(gen.instance));
    write_file(side_file, sidecar_json(gen, inst_file, wit_file, seed));
    std::cout << "n: " << gen.instance.n() << "\nedges: " << gen.instance.graph.edge_count()
              << "\nbudget: " << gen.budget << "\ninstance: " << inst_file << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& graph_file, const std::string& td_file,
               const std::string& solution_file, const std::string& problem_name_str) {
    LabeledInstance inst = load_instance_file(graph_file);
    if (!td_file.empty()) {
        TreeDecomposition td = load_td(read_file(td_file));
        if (auto bad = validate_td(inst.graph, td)) {
            std::cout << "invalid: " << bad->to_string() << "\n";
            return kExitInfeasible;
        }
        std::cout << "valid decomposition, width " << td.width() << "\n";
        return kExitOk;
    }
    if (!solution_file.empty()) {
        if (problem_name_str.empty()) {
            std::cerr << "--solution requires --problem\n";
            return kExitUsage;
        }
        inst.problem = parse_problem(problem_name_str);
        std::istringstream in(read_file(solution_file));
        VertexSet kept(inst.n());
        for (int v = 0; v < inst.n(); ++v) kept.insert(v);
        std::vector<std::pair<int, int>> edges;
        std::string tok;
        while (in >> tok) {
            auto dash = tok.find('-');
            if (dash == std::string::npos) {
                int v = std::stoi(tok);
                if (v < 1 || v > inst.n()) throw Error("solution vertex out of range");
                kept.erase(v - 1);
            } else {
                int u = std::stoi(tok.substr(0, dash));
                int v = std::stoi(tok.substr(dash + 1));
                edges.emplace_back(std::min(u, v) - 1, std::max(u, v) - 1);
            }
        }
        bool ok;
        if (inst.problem == Problem::Mwc || inst.problem == Problem::Resfes)
            ok = edge_solution_ok(inst, edges);
        else
            ok = vertex_solution_ok(inst, kept);
        std::cout << (ok ? "valid solution\n" : "invalid solution\n");
        return ok ? kExitOk : kExitInfeasible;
    }
    std::cerr << "verify needs --td or --solution\n";
    return kExitUsage;
}

int cmd_oracle(const std::string& problem_name_str, const std::string& graph_file,
               std::optional<long long> budget) {
    LabeledInstance inst = load_instance_file(graph_file);
    inst.problem = parse_problem(problem_name_str);
    if (budget) inst.budget = *budget;
    OracleResult res = brute_solve(inst);
    ResultRecord rec;
    rec.problem = problem_name(inst.problem);
    rec.budget = inst.budget;
    if (!res.feasible) {
        rec.status = "infeasible";
    } else {
        rec.optimum_weight = res.optimum_weight;
        rec.deletion_vertices = res.deletion_vertices.to_vector();
        rec.deletion_edges = res.deletion_edges;
        rec.status = (!inst.budget || res.optimum_weight <= *inst.budget)
                         ? "optimal"
                         : "budget-exceeded";
    }
    std::cout << rec.to_text();
    std::cout << "optimal_count: " << res.optimal_count << "\n";
    return rec.status == "optimal" ? kExitOk : kExitInfeasible;
}

int cmd_bench(const std::string& problem_name_str, const std::string& dir, int threads) {
    Problem problem = parse_problem(problem_name_str);
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".grl") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    std::cout << "file,n,m,width,dp_nodes,max_classes,seconds,optimum\n";
    for (const auto& f : files) {
        LabeledInstance inst = load_instance_file(f);
        inst.problem = problem;
        SolveOptions opts;
        opts.threads = threads;
        try {
            if (problem == Problem::Soct || problem == Problem::Sfvs) {
                int width = -1;
                NiceTreeDecomposition ntd = decomposition_for(inst, "", &width);
                SolveResult res = problem == Problem::Soct ? solve_soct(inst, ntd, opts)
                                                           : solve_sfvs(inst, ntd, opts);
                std::cout << f << "," << inst.n() << "," << inst.graph.edge_count() << ","
                          << width << "," << res.stats.dp_nodes << ","
                          << res.stats.max_classes_per_bag << "," << res.stats.wall_seconds
                          << "," << (res.infeasible ? -1 : res.deletion_weight) << "\n";
            } else {
                ReductionSolveResult res = solve_via_reduction(inst, nullptr, opts);
                std::cout << f << "," << inst.n() << "," << inst.graph.edge_count() << ","
                          << res.width_used << "," << res.stats.dp_nodes << ","
                          << res.stats.max_classes_per_bag << "," << res.stats.wall_seconds
                          << "," << (res.infeasible ? -1 : res.optimum_weight) << "\n";
            }
        } catch (const Error& e) {
            std::cout << f << ",error," << e.what() << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solvers, generators and oracles for subset transversal "
                 "problems parameterized by treewidth"};
    app.require_subcommand(1);

    std::string problem, graph_file, td_file, json_out, out_file, out_prefix;
    std::string solution_file, dir;
    std::optional<long long> budget;
    int threads = 1, k = 2, edges = 1;
    uint64_t seed = 1;
    bool plant = false, witness = false;

    auto* solve = app.add_subcommand("solve", "solve an instance exactly");
    solve->add_option("--problem", problem)->required();
    solve->add_option("--graph", graph_file)->required();
    solve->add_option("--td", td_file);
    solve->add_option("--budget", budget);
    solve->add_option("--json", json_out);
    solve->add_option("--threads", threads);

    auto* decompose = app.add_subcommand("decompose", "heuristic tree decomposition");
    decompose->add_option("--graph", graph_file)->required();
    decompose->add_option("--out", out_file)->required();

    auto* generate = app.add_subcommand("generate", "grid-based hard instances");
    generate->add_option("--problem", problem)->required();
    generate->add_option("--k", k)->required();
    generate->add_option("--edges", edges)->required();
    generate->add_option("--seed", seed);
    generate->add_flag("--plant", plant);
    generate->add_flag("--witness", witness);
    generate->add_option("--out", out_prefix)->required();

    auto* verify = app.add_subcommand("verify", "validate a decomposition or solution");
    verify->add_option("--graph", graph_file)->required();
    verify->add_option("--td", td_file);
    verify->add_option("--solution", solution_file);
    verify->add_option("--problem", problem);

    auto* oracle = app.add_subcommand("oracle", "brute-force reference solver");
    oracle->add_option("--problem", problem)->required();
    oracle->add_option("--graph", graph_file)->required();
    oracle->add_option("--budget", budget);

    auto* bench = app.add_subcommand("bench", "timing table over a directory");
    bench->add_option("--problem", problem)->required();
    bench->add_option("--dir", dir)->required();
    bench->add_option("--threads", threads);

    try {
        app.parse(argc, argv);
        if (solve->parsed())
            return cmd_solve(problem, graph_file, td_file, budget, json_out, threads);
        if (decompose->parsed()) return cmd_decompose(graph_file, out_file);
        if (generate->parsed())
            return cmd_generate(problem, k, edges, seed, plant, witness, out_prefix);
        if (verify->parsed())
            return cmd_verify(graph_file, td_file, solution_file, problem);
        if (oracle->parsed()) return cmd_oracle(problem, graph_file, budget);
        if (bench->parsed()) return cmd_bench(problem, dir, threads);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
