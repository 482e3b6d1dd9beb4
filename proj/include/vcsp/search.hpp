#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vcsp/csp.hpp"
#include "vcsp/heuristics.hpp"
#include "vcsp/propagation.hpp"

namespace vcsp {

/// Value-ordering heuristic selectable from the command line.
enum class Heuristic { lex, mc, sc, vsc, rand_sc };

std::string_view to_string(Heuristic h);
std::optional<Heuristic> parse_heuristic(std::string_view name);

/// 30 minutes.
inline constexpr double default_timeout_seconds = 1800.0;
inline constexpr double default_gamma = 1e-3;

struct RunConfig {
    Heuristic heuristic = Heuristic::vsc;
    double gamma = default_gamma;
    std::uint64_t seed = 1;
    double timeout_seconds = default_timeout_seconds;
    std::size_t repeat = 1;
    /// rand-sc only: total number of estimations allowed over the run (unset: unlimited).
    std::optional<std::uint64_t> estimation_budget;
    /// rand-sc only: probability that any given value is picked for estimation.
    double estimation_rate = 1.0;
    /// Abort after this many assignments (0: no limit). Reported as a timeout.
    std::uint64_t node_limit = 0;

    /// Throws UsageError on negative gamma, zero repeat, or a rate outside [0, 1].
    void validate() const;
    /// Short label such as "vsc@0.001" or "mc".
    std::string label() const;
};

struct SearchStats {
    /// Value assignments attempted (calls to mac_assign).
    std::uint64_t nodes = 0;
    /// Assignments retracted because their propagation or subtree failed.
    std::uint64_t backtracks = 0;
    /// Support tests in revise(), including those made while estimating.
    std::uint64_t constraint_checks = 0;
    std::uint64_t sc_estimations = 0;
    /// Live values presented to the value-ordering heuristic, summed over calls.
    std::uint64_t ordering_candidates = 0;
    /// Wall-clock seconds inside value ordering (and the root estimate).
    double heuristic_time = 0.0;
    /// Wall-clock seconds for the whole run.
    double search_time = 0.0;
};

enum class Outcome { solved, unsatisfiable, timed_out };

std::string_view to_string(Outcome o);

struct SearchResult {
    std::optional<Assignment> solution;
    Outcome outcome = Outcome::unsatisfiable;
    SearchStats stats;
};

/// Variables by descending constraint-graph degree, ties by ascending index.
std::vector<VarId> max_degree_order(const Instance& instance);

/// Produces the value ordering at one search node.
class ValueOrderer {
public:
    virtual ~ValueOrderer() = default;

    struct Result {
        std::vector<ValueIndex> values;
        /// Solution-count estimate handed to the child when values[k] is tried (empty if unused).
        std::vector<double> child_counts;
        std::uint64_t estimations = 0;
    };

    /// Called once after the initial propagation; returns the root solution count (or 0).
    virtual double start(DomainStore& store, const Instance& instance) = 0;
    virtual Result order(DomainStore& store, const Instance& instance, VarId var, double parent_count) = 0;
};

std::unique_ptr<ValueOrderer> make_orderer(const RunConfig& config);

/// Orders live values by a seeded random permutation (used to build Sudoku grids).
std::unique_ptr<ValueOrderer> make_shuffle_orderer(std::uint64_t seed);

struct SearchLimits {
    double timeout_seconds = default_timeout_seconds;
    std::uint64_t node_limit = 0;
};

/// MAC backtracking to the first solution with a static max-degree variable order.
/// Each variable's value ordering is computed once per tree node.
SearchResult search(const Instance& instance, ValueOrderer& orderer, const SearchLimits& limits);

SearchResult search(const Instance& instance, const RunConfig& config);

}  // namespace vcsp
