#include "vcsp/search.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "vcsp/errors.hpp"
#include "vcsp/metareasoning.hpp"
#include "vcsp/rng.hpp"

namespace vcsp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr std::pair<Heuristic, std::string_view> heuristic_names[] = {
    {Heuristic::lex, "lex"}, {Heuristic::mc, "mc"}, {Heuristic::sc, "sc"},
    {Heuristic::vsc, "vsc"}, {Heuristic::rand_sc, "rand-sc"},
};

}  // namespace

std::string_view to_string(Heuristic h) {
    for (const auto& [k, name] : heuristic_names)
        if (k == h) return name;
    return "?";
}

std::optional<Heuristic> parse_heuristic(std::string_view name) {
    for (const auto& [k, n] : heuristic_names)
        if (n == name) return k;
    return std::nullopt;
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::solved: return "solved";
        case Outcome::unsatisfiable: return "unsatisfiable";
        case Outcome::timed_out: return "timeout";
    }
    return "?";
}

void RunConfig::validate() const {
    if (!(gamma >= 0.0)) throw UsageError("gamma must be nonnegative");
    if (repeat < 1) throw UsageError("repeat must be at least 1");
    if (!(estimation_rate >= 0.0 && estimation_rate <= 1.0)) throw UsageError("estimation rate must lie in [0, 1]");
    if (!(timeout_seconds > 0.0)) throw UsageError("timeout must be positive");
}

std::string RunConfig::label() const {
    std::ostringstream os;
    os << to_string(heuristic);
    if (heuristic == Heuristic::vsc) os << '@' << gamma;
    return os.str();
}

std::vector<VarId> max_degree_order(const Instance& instance) {
    std::vector<VarId> order(instance.num_variables());
    std::iota(order.begin(), order.end(), VarId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](VarId a, VarId b) { return instance.degree(a) > instance.degree(b); });
    return order;
}

// ---------------------------------------------------------------------------
// Orderers
// ---------------------------------------------------------------------------

namespace {

ValueOrderer::Result from_sc(ScOrdering&& sc) {
    return {std::move(sc.ordering.values), std::move(sc.ordering.scores), sc.estimations};
}

class LexOrderer final : public ValueOrderer {
public:
    double start(DomainStore&, const Instance&) override { return 0.0; }
    Result order(DomainStore& store, const Instance&, VarId var, double) override {
        return {order_lexicographic(store, var).values, {}, 0};
    }
};

class MinConflictsOrderer final : public ValueOrderer {
public:
    double start(DomainStore&, const Instance&) override { return 0.0; }
    Result order(DomainStore& store, const Instance& instance, VarId var, double) override {
        return {order_min_conflicts(store, instance, var).values, {}, 0};
    }
};

class CountingOrderer : public ValueOrderer {
public:
    double start(DomainStore& store, const Instance& instance) override {
        return estimate_total_solution_count(instance, store);
    }
};

class ExhaustiveScOrderer final : public CountingOrderer {
public:
    Result order(DomainStore& store, const Instance& instance, VarId var, double parent_count) override {
        return from_sc(value_ordering_sc_exhaustive(store, instance, var, parent_count, default_estimator));
    }
};

class RationalScOrderer final : public CountingOrderer {
public:
    explicit RationalScOrderer(double gamma) : gamma_(gamma) {}
    Result order(DomainStore& store, const Instance& instance, VarId var, double parent_count) override {
        return from_sc(value_ordering_sc(store, instance, var, parent_count, gamma_, default_estimator));
    }

private:
    double gamma_;
};

// Each value is picked for estimation with probability `rate`, until the run's
// total budget is spent.
class RandomScOrderer final : public CountingOrderer {
public:
    RandomScOrderer(std::uint64_t seed, std::optional<std::uint64_t> budget, double rate)
        : rng_(seed), remaining_(budget), rate_(rate) {}

    Result order(DomainStore& store, const Instance& instance, VarId var, double parent_count) override {
        const auto d = store.live_count(var);
        std::size_t k = 0;
        for (std::size_t i = 0; i < d; ++i)
            if (rng_.unit() < rate_) ++k;
        if (remaining_) {
            k = static_cast<std::size_t>(std::min<std::uint64_t>(k, *remaining_));
            *remaining_ -= k;
        }
        return from_sc(random_deployment_ordering(store, instance, var, parent_count, k, rng_, default_estimator));
    }

private:
    Rng rng_;
    std::optional<std::uint64_t> remaining_;
    double rate_;
};

class ShuffleOrderer final : public ValueOrderer {
public:
    explicit ShuffleOrderer(std::uint64_t seed) : rng_(seed) {}
    double start(DomainStore&, const Instance&) override { return 0.0; }
    Result order(DomainStore& store, const Instance&, VarId var, double) override {
        auto values = store.live_values(var);
        rng_.shuffle(std::span<ValueIndex>(values));
        return {std::move(values), {}, 0};
    }

private:
    Rng rng_;
};

}  // namespace

std::unique_ptr<ValueOrderer> make_orderer(const RunConfig& config) {
    config.validate();
    switch (config.heuristic) {
        case Heuristic::lex: return std::make_unique<LexOrderer>();
        case Heuristic::mc: return std::make_unique<MinConflictsOrderer>();
        case Heuristic::sc: return std::make_unique<ExhaustiveScOrderer>();
        case Heuristic::vsc: return std::make_unique<RationalScOrderer>(config.gamma);
        case Heuristic::rand_sc:
            return std::make_unique<RandomScOrderer>(config.seed, config.estimation_budget, config.estimation_rate);
    }
    throw UsageError("unknown heuristic");
}

std::unique_ptr<ValueOrderer> make_shuffle_orderer(std::uint64_t seed) { return std::make_unique<ShuffleOrderer>(seed); }

// ---------------------------------------------------------------------------
// Backtracking
// ---------------------------------------------------------------------------

namespace {

struct LimitReached {};

class Searcher {
public:
    Searcher(const Instance& instance, ValueOrderer& orderer, const SearchLimits& limits)
        : instance_(instance),
          orderer_(orderer),
          limits_(limits),
          store_(instance),
          order_(max_degree_order(instance)),
          started_(Clock::now()) {}

    SearchResult run() {
        SearchResult result;
        try {
            result.outcome = solve() ? Outcome::solved : Outcome::unsatisfiable;
        } catch (const LimitReached&) {
            result.outcome = Outcome::timed_out;
        }
        if (result.outcome == Outcome::solved) {
            Assignment a(instance_.num_variables());
            for (VarId v = 0; v < instance_.num_variables(); ++v) a.assign(v, *store_.assigned_value(v));
            result.solution = std::move(a);
        }
        stats_.constraint_checks = store_.support_checks();
        stats_.search_time = seconds_since(started_);
        result.stats = stats_;
        return result;
    }

private:
    bool solve() {
        if (ac3(store_, instance_) == Consistency::wipeout) return false;
        const auto t0 = Clock::now();
        const double root_count = orderer_.start(store_, instance_);
        stats_.heuristic_time += seconds_since(t0);
        return descend(0, root_count);
    }

    bool descend(std::size_t depth, double parent_count) {
        if (depth == order_.size()) return true;
        const VarId var = order_[depth];
        const auto t0 = Clock::now();
        const auto ordering = orderer_.order(store_, instance_, var, parent_count);
        stats_.heuristic_time += seconds_since(t0);
        stats_.sc_estimations += ordering.estimations;
        stats_.ordering_candidates += ordering.values.size();

        for (std::size_t k = 0; k < ordering.values.size(); ++k) {
            check_limits();
            ++stats_.nodes;
            const auto [verdict, mark] = mac_assign(store_, instance_, var, ordering.values[k]);
            const double child_count = ordering.child_counts.empty() ? 0.0 : ordering.child_counts[k];
            if (verdict == Consistency::consistent && descend(depth + 1, child_count)) return true;
            store_.undo(mark);
            ++stats_.backtracks;
        }
        return false;
    }

    void check_limits() {
        if (limits_.node_limit != 0 && stats_.nodes >= limits_.node_limit) throw LimitReached{};
        if (seconds_since(started_) > limits_.timeout_seconds) throw LimitReached{};
    }

    const Instance& instance_;
    ValueOrderer& orderer_;
    SearchLimits limits_;
    DomainStore store_;
    std::vector<VarId> order_;
    Clock::time_point started_;
    SearchStats stats_;
};

}  // namespace

SearchResult search(const Instance& instance, ValueOrderer& orderer, const SearchLimits& limits) {
    return Searcher(instance, orderer, limits).run();
}

SearchResult search(const Instance& instance, const RunConfig& config) {
    auto orderer = make_orderer(config);
    return search(instance, *orderer, {config.timeout_seconds, config.node_limit});
}

}  // namespace vcsp
