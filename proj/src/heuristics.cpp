#include "vcsp/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vcsp {

ValueOrdering order_lexicographic(const DomainStore& store, VarId var) {
    ValueOrdering out{var, store.live_values(var), {}};
    out.scores.assign(out.values.size(), 0.0);
    return out;
}

ValueOrdering order_min_conflicts(const DomainStore& store, const Instance& instance, VarId var) {
    const auto live = store.live_values(var);
    std::vector<double> score(live.size(), 0.0);
    for (const auto& arc : instance.neighbors(var)) {
        if (store.is_assigned(arc.neighbor)) continue;
        const auto& con = instance.constraint(arc.constraint);
        const auto other = store.live(arc.neighbor);
        const auto other_count = store.live_count(arc.neighbor);
        for (std::size_t k = 0; k < live.size(); ++k)
            score[k] += static_cast<double>(other_count - bits::count_and(con.row(var, live[k]), other));
    }
    std::vector<std::size_t> idx(live.size());
    std::iota(idx.begin(), idx.end(), 0);
    // live is ascending, so a stable sort breaks ties by value index
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    ValueOrdering out{var, {}, {}};
    for (auto k : idx) {
        out.values.push_back(live[k]);
        out.scores.push_back(score[k]);
    }
    return out;
}

namespace {

// Running product that keeps a separate binary exponent so long products neither
// overflow nor lose the exactness of small integer results.
class ScaledProduct {
public:
    void multiply(double x) {
        mantissa_ *= x;
        int e = 0;
        mantissa_ = std::frexp(mantissa_, &e);
        exponent_ += e;
    }
    double value() const { return std::ldexp(mantissa_, exponent_); }

private:
    double mantissa_ = 1.0;
    int exponent_ = 0;
};

}  // namespace

double estimate_current_solution_count(const DomainStore& store, const Instance& instance) {
    if (store.wiped_out()) return 0.0;
    ScaledProduct count;
    for (VarId u = 0; u < instance.num_variables(); ++u)
        if (!store.is_assigned(u)) count.multiply(static_cast<double>(store.live_count(u)));
    for (const auto& con : instance.constraints()) {
        const VarId u = con.first();
        const VarId w = con.second();
        if (store.is_assigned(u) || store.is_assigned(w)) continue;
        std::size_t supported = 0;
        const auto w_live = store.live(w);
        bits::for_each(store.live(u), [&](std::size_t a) { supported += bits::count_and(con.row(u, a), w_live); });
        if (supported == 0) return 0.0;
        count.multiply(static_cast<double>(supported) /
                       (static_cast<double>(store.live_count(u)) * static_cast<double>(store.live_count(w))));
    }
    return count.value();
}

SolutionCountEstimate estimate_solution_count(DomainStore& store, const Instance& instance, VarId var,
                                              ValueIndex value) {
    const auto [verdict, mark] = mac_assign(store, instance, var, value);
    const double count =
        verdict == Consistency::wipeout ? 0.0 : estimate_current_solution_count(store, instance);
    store.undo(mark);
    return {value, count};
}

double estimate_total_solution_count(const Instance& instance, const DomainStore& store) {
    return estimate_current_solution_count(store, instance);
}

}  // namespace vcsp
