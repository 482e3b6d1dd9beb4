#include "vcsp/metareasoning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vcsp/errors.hpp"

namespace vcsp {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// (1 - p^k) / (1 - p): expected number of default values tried after the first.
double geometric_sum(double p, std::size_t k) {
    if (p >= 1.0) throw DomainError("default backtrack probability must be below 1");
    if (k == 0) return 0.0;
    return -std::expm1(static_cast<double>(k) * std::log(p)) / (1.0 - p);
}

}  // namespace

double expected_search_time(std::span<const std::size_t> ordering, const OrderingModel& model) {
    double total = 0.0;
    double reach = 1.0;  // probability that every earlier value backtracked
    for (auto i : ordering) {
        if (i >= model.estimates.size()) throw UsageError("ordering index " + std::to_string(i) + " out of range");
        total += reach * model.estimates[i].time;
        reach *= model.estimates[i].backtrack_probability;
    }
    return total;
}

std::vector<std::size_t> optimal_ordering(const OrderingModel& model) {
    const auto& est = model.estimates;
    std::vector<double> key(est.size());
    for (std::size_t i = 0; i < est.size(); ++i)
        key[i] = est[i].backtrack_probability >= 1.0 ? std::numeric_limits<double>::infinity()
                                                     : est[i].time / (1.0 - est[i].backtrack_probability);
    std::vector<std::size_t> order(est.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    return order;
}

double default_ordering_time(const OrderingModel& model, std::size_t domain_size) {
    if (model.estimates.empty()) throw UsageError("ordering model has no values");
    const auto& first = model.estimates[optimal_ordering(model).front()];
    const double tail = domain_size == 0 ? 0.0 : geometric_sum(model.default_backtrack_probability, domain_size - 1);
    return first.time + first.backtrack_probability * model.default_time * tail;
}

double gain(ValueEstimate first, ValueEstimate candidate, double default_time, double default_backtrack_probability,
            std::size_t domain_size) {
    const double tail = domain_size == 0 ? 0.0 : geometric_sum(default_backtrack_probability, domain_size - 1);
    return first.time - candidate.time +
           (first.backtrack_probability - candidate.backtrack_probability) * default_time * tail;
}

double gain_approx(double first_time, double candidate_time, std::size_t domain_size) {
    return (first_time - candidate_time) * static_cast<double>(domain_size);
}

double markov_backtrack_probability(double time, double all_solutions_time) {
    if (!(all_solutions_time > 0.0)) throw DomainError("all-solutions time must be positive");
    return std::clamp(time / all_solutions_time, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Poisson terms
// ---------------------------------------------------------------------------

namespace {

// lgamma(x + 1) - [(x + 1/2) ln x - x + ln(2 pi)/2], the Stirling remainder.
double stirling_error(double x) {
    constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680, s4 = 1.0 / 1188;
    if (x <= 15.0) return std::lgamma(x + 1.0) - (x + 0.5) * std::log(x) + x - 0.5 * std::log(2 * std::numbers::pi);
    const double xx = x * x;
    if (x > 500) return (s0 - s1 / xx) / x;
    if (x > 80) return (s0 - (s1 - s2 / xx) / xx) / x;
    if (x > 35) return (s0 - (s1 - (s2 - s3 / xx) / xx) / xx) / x;
    return (s0 - (s1 - (s2 - (s3 - s4 / xx) / xx) / xx) / xx) / x;
}

// x ln(x / m) + m - x without cancellation when x is close to m.
double deviance(double x, double m) {
    if (std::abs(x - m) < 0.1 * (x + m)) {
        double v = (x - m) / (x + m);
        double s = (x - m) * v;
        double ej = 2 * x * v;
        v *= v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const double next = s + ej / (2 * j + 1);
            if (next == s) return next;
            s = next;
        }
        return s;
    }
    return x * std::log(x / m) + m - x;
}

// ln P(x; nu) for real x >= 0, via the saddle-point form that stays accurate for huge x.
double log_poisson(double x, double nu) {
    if (nu == 0.0) return x == 0.0 ? 0.0 : neg_inf;
    if (x == 0.0) return -nu;
    return -stirling_error(x) - deviance(x, nu) - 0.5 * std::log(2 * std::numbers::pi * x);
}

constexpr double relative_tolerance = 1e-12;
constexpr double quadrature_threshold = 1e5;

// First n contributing a positive term: the smallest integer strictly above n_max.
double first_term(double n_max) { return std::floor(n_max) + 1.0; }

}  // namespace

double poisson_pmf(std::uint64_t n, double nu) {
    if (nu < 0.0) throw DomainError("Poisson rate must be nonnegative");
    return std::exp(log_poisson(static_cast<double>(n), nu));
}

namespace detail {

// ln sum_{n >= first} (1/n_max - 1/n) P(n; nu), summed term by term. The terms are
// tracked relative to P(first; nu) with periodic rescaling, so each step costs one
// multiply.
double log_voi_series(double n_max, double nu) {
    const double start = first_term(n_max);
    const double inv_max = 1.0 / n_max;
    const double cap = n_max + std::ceil(20.0 * nu) + 200.0;
    double rel = 1.0;  // P(n) / P(start) * exp(-shift)
    double shift = 0.0;
    double sum = 0.0;
    for (double n = start; n <= cap; n += 1.0) {
        sum += (inv_max - 1.0 / n) * rel;
        rel *= nu / (n + 1.0);
        if (rel > 1e200) {
            rel *= 1e-200;
            sum *= 1e-200;
            shift += 200.0 * std::numbers::ln10;
        }
        if (n + 2.0 > nu) {
            // Terms after n are below P(n+1) * (1/n_max) * 1 / (1 - nu/(n+2)) in total.
            const double tail = inv_max * rel / (1.0 - nu / (n + 2.0));
            if (tail <= relative_tolerance * sum || rel == 0.0) break;
        }
    }
    if (sum <= 0.0) return neg_inf;
    return log_poisson(start, nu) + shift + std::log(sum);
}

// Same quantity for large nu, where the summand is smooth on the integer scale:
// Euler-Maclaurin with the integral done by adaptive Gauss-Kronrod.
double log_voi_quadrature(double n_max, double nu) {
    const double start = first_term(n_max);
    const double inv_max = 1.0 / n_max;
    const double sd = std::sqrt(nu);
    const double peak = std::max(start, nu);
    const double reference = log_poisson(peak, nu);
    const auto scaled = [&](double x) { return (inv_max - 1.0 / x) * std::exp(log_poisson(x, nu) - reference); };
    const double upper = peak + 40.0 * sd + 50.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(scaled, start, upper, 15, 1e-12);
    // f(a)/2 - f'(a)/12, with d/dx ln P(x) ~ ln(nu / (x + 1/2)).
    const double fa = scaled(start);
    const double slope = fa * std::log(nu / (start + 0.5)) +
                         std::exp(log_poisson(start, nu) - reference) / (start * start);
    const double total = integral + 0.5 * fa - slope / 12.0;
    if (total <= 0.0) return neg_inf;
    return reference + std::log(total);
}

}  // namespace detail

double log_intrinsic_voi_sc(double n_max, double nu, std::size_t domain_size) {
    if (!(n_max >= 1.0)) throw DomainError("n_max must be at least 1");
    if (!(nu >= 0.0)) throw DomainError("nu must be nonnegative");
    if (domain_size == 0 || nu == 0.0) return neg_inf;
    const double log_sum =
        nu > quadrature_threshold ? detail::log_voi_quadrature(n_max, nu) : detail::log_voi_series(n_max, nu);
    return std::log(static_cast<double>(domain_size)) + log_sum;
}

VoiResult voi_sc(double n_max, double nu, std::size_t domain_size, double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("gamma must be nonnegative");
    return VoiResult::of(std::exp(log_intrinsic_voi_sc(n_max, nu, domain_size)), gamma);
}

bool sc_estimate_worthwhile(double n_max, double nu, std::size_t domain_size, double gamma) {
    if (!(n_max >= 1.0)) throw DomainError("n_max must be at least 1");
    if (nu <= 0.0 || domain_size == 0) return false;
    // Every term with n > n_max is positive, so the intrinsic value is positive.
    if (gamma <= 0.0) return true;
    const double d = static_cast<double>(domain_size);
    // Upper bounds: |D| / n_max always; for n_max >= nu also
    // |D| E[(X - nu)+] / n_max^2 <= |D| sqrt(nu) / (2 n_max^2).
    double bound = d / n_max;
    if (n_max >= nu) bound = std::min(bound, d * std::sqrt(nu) / (2.0 * n_max * n_max));
    if (bound <= gamma) return false;
    return log_intrinsic_voi_sc(n_max, nu, domain_size) > std::log(gamma);
}

// ---------------------------------------------------------------------------
// Deployment
// ---------------------------------------------------------------------------

double default_estimator(DomainStore& store, const Instance& instance, VarId var, ValueIndex value) {
    return estimate_solution_count(store, instance, var, value).count;
}

namespace {

ScDeploymentState initial_state(const DomainStore& store, VarId var, double parent_count, double gamma) {
    if (!(parent_count >= 0.0)) throw UsageError("parent solution count must be nonnegative");
    ScDeploymentState s;
    s.values = store.live_values(var);
    if (s.values.empty()) throw UsageError("variable " + std::to_string(var) + " has no live value to order");
    s.parent_count = parent_count;
    s.nu = parent_count / static_cast<double>(s.values.size());
    s.counts.assign(s.values.size(), s.nu);
    s.estimated.assign(s.values.size(), false);
    s.n_max = std::max(s.nu, 1.0);
    s.gamma = gamma;
    return s;
}

void estimate_at(ScOrdering& out, std::size_t k, DomainStore& store, const Instance& instance, VarId var,
                 const SolutionCountEstimator& estimator) {
    auto& s = out.state;
    s.counts[k] = estimator(store, instance, var, s.values[k]);
    s.estimated[k] = true;
    s.n_max = std::max(s.n_max, s.counts[k]);
    ++out.estimations;
}

// Orders positions of `state` by non-increasing count; stable over `positions`.
void finish(ScOrdering& out, VarId var, std::vector<std::size_t> positions) {
    const auto& counts = out.state.counts;
    std::stable_sort(positions.begin(), positions.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
    out.ordering.var = var;
    for (auto k : positions) {
        out.ordering.values.push_back(out.state.values[k]);
        out.ordering.scores.push_back(counts[k]);
    }
    out.child_count = out.ordering.scores.front();
}

std::vector<std::size_t> positions_of(const ScDeploymentState& s) {
    std::vector<std::size_t> p(s.values.size());
    std::iota(p.begin(), p.end(), 0);
    return p;
}

}  // namespace

ScOrdering value_ordering_sc(DomainStore& store, const Instance& instance, VarId var, double parent_count,
                             double gamma, const SolutionCountEstimator& estimator) {
    ScOrdering out;
    out.state = initial_state(store, var, parent_count, gamma);
    auto& s = out.state;
    const auto d = s.values.size();
    for (std::size_t k = 0; k < d && sc_estimate_worthwhile(s.n_max, s.nu, d, gamma); ++k)
        estimate_at(out, k, store, instance, var, estimator);
    finish(out, var, positions_of(s));
    return out;
}

ScOrdering value_ordering_sc_exhaustive(DomainStore& store, const Instance& instance, VarId var,
                                        double parent_count, const SolutionCountEstimator& estimator) {
    ScOrdering out;
    out.state = initial_state(store, var, parent_count, 0.0);
    for (std::size_t k = 0; k < out.state.values.size(); ++k) estimate_at(out, k, store, instance, var, estimator);
    finish(out, var, positions_of(out.state));
    return out;
}

ScOrdering random_deployment_ordering(DomainStore& store, const Instance& instance, VarId var, double parent_count,
                                      std::size_t budget, Rng& rng, const SolutionCountEstimator& estimator) {
    ScOrdering out;
    out.state = initial_state(store, var, parent_count, 0.0);
    const auto d = out.state.values.size();
    if (budget > d) throw UsageError("estimation budget exceeds domain size");
    auto order = positions_of(out.state);
    rng.shuffle(std::span<std::size_t>(order));
    // The first `budget` shuffled positions form a uniform random subset.
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(budget));
    std::sort(chosen.begin(), chosen.end());
    for (auto k : chosen) estimate_at(out, k, store, instance, var, estimator);
    // Stable sort over the shuffled positions leaves equal counts in random order.
    finish(out, var, std::move(order));
    return out;
}

}  // namespace vcsp
