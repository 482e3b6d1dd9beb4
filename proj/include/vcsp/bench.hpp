#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vcsp/csp.hpp"
#include "vcsp/search.hpp"

namespace vcsp {

struct BenchInstance {
    std::string id;
    Instance instance;
};

/// One search run: the harness's unit of output.
struct StatsRecord {
    std::string instance;
    std::string config;
    Heuristic heuristic = Heuristic::lex;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::size_t repeat = 0;
    Outcome outcome = Outcome::unsatisfiable;
    SearchStats stats;

    bool solved() const { return outcome == Outcome::solved; }
    bool timed_out() const { return outcome == Outcome::timed_out; }
};

struct Moments {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    /// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
    double sd = 0.0;
};

Moments describe(std::vector<double> values);

/// Seed used for repeat r of a config: config.seed + r.
std::uint64_t repeat_seed(const RunConfig& config, std::size_t r);

/// For rand-sc configs without an explicit budget: run vsc at the config's gamma on
/// the instance and copy its estimation count (budget) and estimated fraction (rate).
RunConfig match_random_deployment(const Instance& instance, const RunConfig& config);

/// Every instance x config x repeat, searched independently. Records come back in
/// that nesting order whatever `jobs` is.
std::vector<StatsRecord> run_benchmark(std::span<const BenchInstance> instances, std::span<const RunConfig> configs,
                                       std::size_t jobs = 1);

struct GroupSummary {
    std::string config;
    std::size_t runs = 0;
    std::size_t solved = 0;
    std::size_t unsatisfiable = 0;
    std::size_t timeouts = 0;
    Moments search_time;
    Moments heuristic_time;
    Moments nodes;
    Moments backtracks;
    Moments sc_estimations;
};

/// Per-config aggregates, in order of first appearance.
std::vector<GroupSummary> summarize(std::span<const StatsRecord> records);

/// Distribution over instances of numerator/denominator, where each instance's
/// metric is first averaged over repeats. Instances with a zero denominator are skipped.
struct RatioSummary {
    std::string numerator;
    std::string denominator;
    Moments search_time;
    Moments backtracks;
    Moments sc_estimations;
};

/// One entry per ordered pair of distinct configs.
std::vector<RatioSummary> pairwise_ratios(std::span<const StatsRecord> records);

struct SweepRow {
    double gamma = 0.0;
    std::string config;
    Moments search_time_ratio;  ///< T_VSC / T_SC per instance
    Moments backtrack_ratio;    ///< N_VSC / N_SC
    Moments estimation_ratio;   ///< C_VSC / C_SC
    double mean_search_time = 0.0;
    double mean_estimations = 0.0;
};

struct SweepResult {
    std::vector<StatsRecord> records;
    std::vector<SweepRow> rows;
};

/// Runs sc and vsc at every gamma (base supplies seed, timeout and repeat) and
/// normalizes each vsc run by sc on the same instance.
SweepResult sweep_gamma(std::span<const BenchInstance> instances, std::span<const double> gammas,
                        const RunConfig& base, std::size_t jobs = 1);

void write_records_csv(std::ostream& out, std::span<const StatsRecord> records);
void write_records_jsonl(std::ostream& out, std::span<const StatsRecord> records);
void write_summary_csv(std::ostream& out, std::span<const GroupSummary> groups);
void write_ratios_csv(std::ostream& out, std::span<const RatioSummary> ratios);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace vcsp
