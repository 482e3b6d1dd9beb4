#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vcsp/csp.hpp"
#include "vcsp/heuristics.hpp"
#include "vcsp/propagation.hpp"
#include "vcsp/rng.hpp"

namespace vcsp {

// ---------------------------------------------------------------------------
// Ordering-time model
//
// Each value i of the variable being ordered carries an expected time T_i to find
// a solution under it (or refute it) and a probability p_i that it has none, in
// which case search moves on to the next value. Times are dimensionless.
// ---------------------------------------------------------------------------

struct ValueEstimate {
    double time = 0.0;
    double backtrack_probability = 0.0;
};

struct OrderingModel {
    std::vector<ValueEstimate> estimates;
    /// Prior parameters assumed for values that have not been estimated.
    double default_time = 0.0;
    double default_backtrack_probability = 0.0;
};

/// Value of one deliberation step: intrinsic value, its cost, and the difference.
struct VoiResult {
    double intrinsic = 0.0;
    double cost = 0.0;
    double net = 0.0;

    static VoiResult of(double intrinsic, double cost) { return {intrinsic, cost, intrinsic - cost}; }
};

/// T_w1 + sum_{i>=2} T_wi * prod_{j<i} p_wj for the ordering w (indices into model.estimates).
double expected_search_time(std::span<const std::size_t> ordering, const OrderingModel& model);

/// Indices sorted by ascending T/(1-p), ties by index; p = 1 values last.
/// This ordering minimizes expected_search_time.
std::vector<std::size_t> optimal_ordering(const OrderingModel& model);

/// Expected time of the prior-optimal ordering when only its first value carries
/// its own parameters and the remaining domain_size - 1 values use the defaults.
/// Throws DomainError if the default backtrack probability is 1.
double default_ordering_time(const OrderingModel& model, std::size_t domain_size);

/// Search-time gain of moving `candidate` in front of `first` under the default model.
/// Throws DomainError if default_backtrack_probability is 1.
double gain(ValueEstimate first, ValueEstimate candidate, double default_time,
            double default_backtrack_probability, std::size_t domain_size);

/// Limit form of gain() for default backtrack probability close to 1: (T_1 - T_i) * |D|.
double gain_approx(double first_time, double candidate_time, std::size_t domain_size);

/// Markov-bound estimate T_i / T_i^all of the backtrack probability, clamped to [0, 1].
/// Throws DomainError if all_solutions_time is not positive.
double markov_backtrack_probability(double time, double all_solutions_time);

// ---------------------------------------------------------------------------
// Solution-count value of information
// ---------------------------------------------------------------------------

/// Poisson probability e^-nu nu^n / n!, evaluated in log space.
double poisson_pmf(std::uint64_t n, double nu);

/// Natural log of the intrinsic value of one more solution-count estimate,
/// |D| e^-nu sum_{n >= ceil(n_max)} (1/n_max - 1/n) nu^n / n!, in units of the
/// per-value all-solutions time. Returns -infinity when the sum is exactly zero.
/// Throws DomainError unless n_max >= 1 and nu >= 0.
double log_intrinsic_voi_sc(double n_max, double nu, std::size_t domain_size);

namespace detail {
/// ln of the bare series (without |D|), by direct summation.
double log_voi_series(double n_max, double nu);
/// ln of the bare series by Euler-Maclaurin and adaptive quadrature; used for very large nu.
double log_voi_quadrature(double n_max, double nu);
}  // namespace detail

/// Intrinsic value, cost gamma, and net value of estimating one more value's solution count.
VoiResult voi_sc(double n_max, double nu, std::size_t domain_size, double gamma);

inline double net_voi_sc(double n_max, double nu, std::size_t domain_size, double gamma) {
    return voi_sc(n_max, nu, domain_size, gamma).net;
}

/// Sign of net_voi_sc decided in log space, so tiny intrinsic values still beat gamma = 0.
bool sc_estimate_worthwhile(double n_max, double nu, std::size_t domain_size, double gamma);

// ---------------------------------------------------------------------------
// Deployment
// ---------------------------------------------------------------------------

/// Estimates the solution count of the subproblem var = value; must leave the store as found.
using SolutionCountEstimator = std::function<double(DomainStore&, const Instance&, VarId, ValueIndex)>;

/// Product-of-tightness estimator from heuristics.hpp.
double default_estimator(DomainStore& store, const Instance& instance, VarId var, ValueIndex value);

/// Working state of one rational value-ordering call.
struct ScDeploymentState {
    double parent_count = 0.0;  ///< N
    double nu = 0.0;            ///< N / |D|
    std::vector<ValueIndex> values;
    std::vector<double> counts;  ///< n_i, aligned with values
    std::vector<bool> estimated;
    double n_max = 1.0;
    double gamma = 0.0;
};

struct ScOrdering {
    /// Values by non-increasing count; scores hold the counts.
    ValueOrdering ordering;
    /// Count of the first value in the ordering: N for the next depth.
    double child_count = 0.0;
    std::size_t estimations = 0;
    ScDeploymentState state;
};

/// Rational value ordering: estimates solution counts one value at a time
/// (lowest index first) while the net VOI of another estimate is positive, then
/// sorts by non-increasing count. Unestimated values keep the default N/|D|.
/// n_max starts at max(N/|D|, 1). Throws UsageError if var has no live value.
ScOrdering value_ordering_sc(DomainStore& store, const Instance& instance, VarId var, double parent_count,
                             double gamma, const SolutionCountEstimator& estimator);

/// Estimates every live value and sorts by non-increasing count.
ScOrdering value_ordering_sc_exhaustive(DomainStore& store, const Instance& instance, VarId var,
                                        double parent_count, const SolutionCountEstimator& estimator);

/// Baseline: estimates a uniformly random subset of `budget` values; the rest keep
/// N/|D| and are ordered randomly among themselves. Throws UsageError if budget > |D|.
ScOrdering random_deployment_ordering(DomainStore& store, const Instance& instance, VarId var,
                                      double parent_count, std::size_t budget, Rng& rng,
                                      const SolutionCountEstimator& estimator);

}  // namespace vcsp
