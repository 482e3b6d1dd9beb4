#pragma once

#include <vector>

#include "vcsp/csp.hpp"
#include "vcsp/propagation.hpp"

namespace vcsp {

/// Order in which the live values of one variable are tried, with a per-value
/// annotation aligned to `values` (conflict score, or solution-count estimate).
struct ValueOrdering {
    VarId var = 0;
    std::vector<ValueIndex> values;
    std::vector<double> scores;
};

struct SolutionCountEstimate {
    ValueIndex value = 0;
    double count = 0.0;
};

/// Live values ascending.
ValueOrdering order_lexicographic(const DomainStore& store, VarId var);

/// Live values by ascending number of live values they rule out in unassigned
/// neighbors; ties by value index. Scores are the conflict counts.
ValueOrdering order_min_conflicts(const DomainStore& store, const Instance& instance, VarId var);

/// Product-of-tightness solution count estimate of the current subproblem:
/// prod over unassigned u of |live(u)| times, for every constraint between two
/// unassigned variables, the fraction of live pairs it allows. Zero on wipeout.
double estimate_current_solution_count(const DomainStore& store, const Instance& instance);

/// Assigns var = value on a checkpoint, runs AC-3, estimates, and restores the store.
SolutionCountEstimate estimate_solution_count(DomainStore& store, const Instance& instance, VarId var,
                                              ValueIndex value);

/// Estimate for the whole instance in its current (propagated) state; supplies the root N.
double estimate_total_solution_count(const Instance& instance, const DomainStore& store);

}  // namespace vcsp
