// vcsp: solve, generate and benchmark binary CSP instances.
//
// Exit codes: 0 solved / completed, 1 unsatisfiable (solve), 2 timeout (solve),
// 64 usage error, 65 unreadable or malformed input.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcsp/bench.hpp"
#include "vcsp/errors.hpp"
#include "vcsp/generators.hpp"
#include "vcsp/instance_io.hpp"
#include "vcsp/search.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_unsat = 1;
constexpr int exit_timeout = 2;
constexpr int exit_usage = 64;
constexpr int exit_data = 65;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

vcsp::Instance load(const std::string& path) {
    try {
        return vcsp::read_instance_file(path);
    } catch (const vcsp::ParseError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const vcsp::StructuralError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }
}

std::vector<vcsp::BenchInstance> load_all(const std::vector<std::string>& paths) {
    std::vector<vcsp::BenchInstance> out;
    for (const auto& p : paths) out.push_back({p, load(p)});
    return out;
}

vcsp::Heuristic heuristic_or_throw(const std::string& name) {
    auto h = vcsp::parse_heuristic(name);
    if (!h) throw vcsp::UsageError("unknown heuristic '" + name + "' (expected lex, mc, sc, vsc or rand-sc)");
    return *h;
}

// Writes to `path`, or stdout for "-".
template <typename F>
void emit(const std::string& path, F&& write) {
    if (path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write(out);
}

std::string numbered(const std::string& base, std::size_t k, std::size_t count) {
    if (count == 1) return base;
    std::ostringstream os;
    os << base << '-' << std::setw(3) << std::setfill('0') << k << ".csp";
    return os.str();
}

struct SolveOptions {
    std::string file;
    std::string heuristic = "vsc";
    double gamma = vcsp::default_gamma;
    std::uint64_t seed = 1;
    double timeout = vcsp::default_timeout_seconds;
    std::optional<std::uint64_t> budget;
    double rate = 1.0;
    bool json = false;
};

int run_solve(const SolveOptions& o) {
    const auto instance = load(o.file);
    vcsp::RunConfig cfg;
    cfg.heuristic = heuristic_or_throw(o.heuristic);
    cfg.gamma = o.gamma;
    cfg.seed = o.seed;
    cfg.timeout_seconds = o.timeout;
    cfg.estimation_budget = o.budget;
    cfg.estimation_rate = o.rate;
    if (cfg.heuristic == vcsp::Heuristic::rand_sc && !o.budget) cfg = vcsp::match_random_deployment(instance, cfg);
    const auto result = vcsp::search(instance, cfg);

    const auto& st = result.stats;
    if (o.json) {
        std::vector<vcsp::StatsRecord> rec{{o.file, cfg.label(), cfg.heuristic, cfg.gamma, cfg.seed, 0,
                                            result.outcome, st}};
        vcsp::write_records_jsonl(std::cout, rec);
    } else {
        std::cout << "s " << vcsp::to_string(result.outcome) << '\n';
        if (result.solution) {
            std::cout << 'v';
            for (vcsp::VarId v = 0; v < instance.num_variables(); ++v)
                std::cout << ' ' << instance.labels(v)[*(*result.solution)[v]];
            std::cout << '\n';
        }
        std::cout << "c heuristic " << cfg.label() << "\nc search_time " << st.search_time << "\nc heuristic_time "
                  << st.heuristic_time << "\nc nodes " << st.nodes << "\nc backtracks " << st.backtracks
                  << "\nc constraint_checks " << st.constraint_checks << "\nc sc_estimations " << st.sc_estimations
                  << '\n';
    }
    switch (result.outcome) {
        case vcsp::Outcome::solved: return exit_ok;
        case vcsp::Outcome::unsatisfiable: return exit_unsat;
        case vcsp::Outcome::timed_out: return exit_timeout;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Binary CSP solver with rational deployment of solution-count value ordering"};
    app.require_subcommand(1);

    SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
    solve_cmd->add_option("file", solve.file, "Instance file")->required();
    solve_cmd->add_option("--heuristic", solve.heuristic, "lex | mc | sc | vsc | rand-sc")->capture_default_str();
    solve_cmd->add_option("--gamma", solve.gamma, "Estimation cost factor for vsc")->capture_default_str();
    solve_cmd->add_option("--seed", solve.seed, "Seed for randomized heuristics")->capture_default_str();
    solve_cmd->add_option("--timeout", solve.timeout, "Seconds")->capture_default_str();
    solve_cmd->add_option("--budget", solve.budget, "rand-sc: total estimations (default: match vsc)");
    solve_cmd->add_option("--rate", solve.rate, "rand-sc: per-value estimation probability");
    solve_cmd->add_flag("--json", solve.json, "Print the stats record as JSON");

    auto* gen_cmd = app.add_subcommand("generate", "Generate random instances");
    gen_cmd->require_subcommand(1);
    std::string out_path;
    std::size_t count = 1;
    std::uint64_t gen_seed = 1;
    vcsp::RBParams rb;
    std::string preset;
    auto* rb_cmd = gen_cmd->add_subcommand("rb", "Model RB random CSP");
    rb_cmd->add_option("--preset", preset, "easy (30,30,280,220) | hard (40,19,410,90) | desk (25,25,150,254)");
    rb_cmd->add_option("--vars", rb.n_vars);
    rb_cmd->add_option("--values", rb.domain_size);
    rb_cmd->add_option("--constraints", rb.n_constraints);
    rb_cmd->add_option("--nogoods", rb.n_nogoods, "Forbidden pairs per constraint");
    vcsp::SudokuParams sudoku;
    auto* sudoku_cmd = gen_cmd->add_subcommand("sudoku", "Generalized Sudoku with uniformly punched holes");
    sudoku_cmd->add_option("--tile-rows", sudoku.tile_rows)->required();
    sudoku_cmd->add_option("--tile-cols", sudoku.tile_cols)->required();
    sudoku_cmd->add_option("--holes", sudoku.holes)->required();
    for (auto* cmd : {rb_cmd, sudoku_cmd}) {
        cmd->add_option("--seed", gen_seed)->capture_default_str();
        cmd->add_option("-o,--output", out_path, "Output file (prefix when --count > 1)")->required();
        cmd->add_option("--count", count, "Number of instances; seeds seed, seed+1, ...")->capture_default_str();
    }

    std::vector<std::string> files;
    std::vector<std::string> heuristics{"sc", "vsc", "mc"};
    std::vector<double> gammas;
    vcsp::RunConfig base;
    std::size_t jobs = 1;
    std::string csv_path, jsonl_path, summary_path;
    auto* bench_cmd = app.add_subcommand("bench", "Run heuristics over instance files");
    bench_cmd->add_option("files", files, "Instance files")->required();
    bench_cmd->add_option("--heuristics", heuristics)->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--gamma", base.gamma)->capture_default_str();
    bench_cmd->add_option("--repeat", base.repeat)->capture_default_str();
    auto* sweep_cmd = app.add_subcommand("sweep", "Run vsc over a list of gammas against sc");
    sweep_cmd->add_option("files", files, "Instance files")->required();
    sweep_cmd->add_option("--gammas", gammas)->delimiter(',')->required();
    sweep_cmd->add_option("--repeat", base.repeat)->capture_default_str();
    for (auto* cmd : {bench_cmd, sweep_cmd}) {
        cmd->add_option("--seed", base.seed)->capture_default_str();
        cmd->add_option("--timeout", base.timeout_seconds)->capture_default_str();
        cmd->add_option("--jobs", jobs, "Concurrent runs")->capture_default_str();
        cmd->add_option("--csv", csv_path, "Per-run records (CSV; '-' for stdout)");
        cmd->add_option("--jsonl", jsonl_path, "Per-run records (JSON lines)");
        cmd->add_option("--summary", summary_path, "Aggregates (CSV; default stdout)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*solve_cmd) return run_solve(solve);

        if (*rb_cmd || *sudoku_cmd) {
            for (std::size_t k = 0; k < count; ++k) {
                std::optional<vcsp::Instance> inst;
                if (*rb_cmd) {
                    auto p = rb;
                    if (preset == "easy") p = vcsp::rb_easy_preset;
                    else if (preset == "hard") p = vcsp::rb_hard_preset;
                    else if (preset == "desk") p = vcsp::rb_desk_preset;
                    else if (!preset.empty()) throw vcsp::UsageError("unknown preset '" + preset + "'");
                    p.seed = gen_seed + k;
                    inst = vcsp::generate_model_rb(p);
                } else {
                    auto p = sudoku;
                    p.seed = gen_seed + k;
                    inst = vcsp::generate_generalized_sudoku(p);
                }
                vcsp::write_instance_file(numbered(out_path, k, count), *inst);
            }
            return exit_ok;
        }

        const auto instances = load_all(files);
        std::vector<vcsp::StatsRecord> records;
        if (*bench_cmd) {
            std::vector<vcsp::RunConfig> configs;
            for (const auto& h : heuristics) {
                auto cfg = base;
                cfg.heuristic = heuristic_or_throw(h);
                configs.push_back(cfg);
            }
            records = vcsp::run_benchmark(instances, configs, jobs);
            const auto groups = vcsp::summarize(records);
            const auto ratios = vcsp::pairwise_ratios(records);
            emit(summary_path.empty() ? "-" : summary_path, [&](std::ostream& os) {
                vcsp::write_summary_csv(os, groups);
                os << '\n';
                vcsp::write_ratios_csv(os, ratios);
            });
        } else {
            const auto result = vcsp::sweep_gamma(instances, gammas, base, jobs);
            records = result.records;
            emit(summary_path.empty() ? "-" : summary_path,
                 [&](std::ostream& os) { vcsp::write_sweep_csv(os, result.rows); });
        }
        if (!csv_path.empty()) emit(csv_path, [&](std::ostream& os) { vcsp::write_records_csv(os, records); });
        if (!jsonl_path.empty()) emit(jsonl_path, [&](std::ostream& os) { vcsp::write_records_jsonl(os, records); });
        return exit_ok;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const vcsp::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
}
