#include <doctest.h>

#include "support/testing.hpp"
#include "vcsp/heuristics.hpp"

using namespace vcsp;
using namespace vcsp::testing;

using Values = std::vector<ValueIndex>;

TEST_CASE("order_lexicographic") {
    const auto inst = uniform_instance(2, 5, {});
    DomainStore store(inst);
    CHECK(order_lexicographic(store, 0).values == Values{0, 1, 2, 3, 4});

    store.remove(0, 3);
    store.remove(0, 4);
    CHECK(order_lexicographic(store, 0).values == Values{0, 1, 2});

    for (ValueIndex a : {0, 1, 2, 4}) store.remove(1, a);
    CHECK(order_lexicographic(store, 1).values == Values{3});
}

TEST_CASE("order_min_conflicts") {
    SUBCASE("constraint-free gives lexicographic order") {
        const auto inst = uniform_instance(2, 4, {});
        DomainStore store(inst);
        const auto o = order_min_conflicts(store, inst, 0);
        CHECK(o.values == Values{0, 1, 2, 3});
        CHECK(o.scores == std::vector<double>{0, 0, 0, 0});
    }
    SUBCASE("only (0,0) forbidden") {
        const auto inst = uniform_instance(2, 2, {make_constraint(0, 1, 2, 2, [](auto a, auto b) { return a || b; })});
        DomainStore store(inst);
        const auto o = order_min_conflicts(store, inst, 0);
        CHECK(o.values == Values{1, 0});
        CHECK(o.scores == std::vector<double>{0, 1});
    }
    SUBCASE("all pairs forbidden: equal scores, index order") {
        const auto inst = uniform_instance(2, 3, {make_constraint(0, 1, 3, 3, [](auto, auto) { return false; })});
        DomainStore store(inst);
        const auto o = order_min_conflicts(store, inst, 0);
        CHECK(o.values == Values{0, 1, 2});
        CHECK(o.scores == std::vector<double>{3, 3, 3});
    }
    SUBCASE("scores match a direct count on random instances") {
        Rng rng(31);
        for (int trial = 0; trial < 200; ++trial) {
            const auto inst = random_instance(rng, 5, 4, 0.7, 0.4);
            DomainStore store(inst);
            if (ac3(store, inst) == Consistency::wipeout) continue;
            const VarId var = rng.below(inst.num_variables());
            const auto o = order_min_conflicts(store, inst, var);
            for (std::size_t k = 0; k < o.values.size(); ++k) {
                std::size_t conflicts = 0;
                for (const auto& c : inst.constraints()) {
                    if (!c.involves(var)) continue;
                    const VarId u = c.other(var);
                    for (ValueIndex b = 0; b < inst.domain_size(u); ++b)
                        conflicts += store.is_live(u, b) && !c.allowed(var, o.values[k], b);
                }
                CHECK(o.scores[k] == doctest::Approx(static_cast<double>(conflicts)));
                if (k > 0) {
                    CHECK(o.scores[k - 1] <= o.scores[k]);
                    if (o.scores[k - 1] == o.scores[k]) CHECK(o.values[k - 1] < o.values[k]);
                }
            }
        }
    }
}

TEST_CASE("estimate_solution_count") {
    SUBCASE("constraint-free remainder is the domain product") {
        const Instance inst({iota_labels(2), iota_labels(3), iota_labels(4)}, {});
        DomainStore store(inst);
        CHECK(estimate_solution_count(store, inst, 0, 1).count == 12.0);
    }
    SUBCASE("wipeout gives zero") {
        const Instance two({iota_labels(2), iota_labels(1)},
                           {make_constraint(0, 1, 2, 1, [](ValueIndex a, ValueIndex) { return a == 1; })});
        DomainStore store(two);
        CHECK(estimate_solution_count(store, two, 0, 0).count == 0.0);
        CHECK(estimate_solution_count(store, two, 0, 1).count == 1.0);
    }
    SUBCASE("X = 0 with Y != Z gives 2") {
        const auto inst = uniform_instance(3, 2, {not_equal(1, 2, 2)});
        DomainStore store(inst);
        CHECK(estimate_solution_count(store, inst, 0, 0).count == 2.0);
        CHECK(count_solutions_exact(inst) == 4);  // two per value of X
    }
}

TEST_CASE("estimate_total_solution_count") {
    {
        const auto inst = uniform_instance(2, 2, {});
        DomainStore store(inst);
        CHECK(estimate_total_solution_count(inst, store) == 4.0);
    }
    {
        const auto inst = uniform_instance(2, 2, {not_equal(0, 1, 2)});
        DomainStore store(inst);
        ac3(store, inst);
        CHECK(estimate_total_solution_count(inst, store) == 2.0);
    }
    {
        const auto inst = uniform_instance(2, 1, {not_equal(0, 1, 1)});
        DomainStore store(inst);
        ac3(store, inst);
        CHECK(estimate_total_solution_count(inst, store) == 0.0);
    }
}

TEST_CASE("estimation leaves the store as found") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = random_instance(rng, 6, 4, 0.6, 0.35);
        DomainStore store(inst);
        if (ac3(store, inst) == Consistency::wipeout) continue;
        const auto trail = store.trail_size();
        const auto open = store.open_checkpoints();
        const DomainStore before = store;
        const VarId var = rng.below(inst.num_variables());
        for (auto a : store.live_values(var)) {
            const auto e = estimate_solution_count(store, inst, var, a);
            CHECK(e.count >= 0.0);
            CHECK(store.same_state(before));
            CHECK(store.trail_size() == trail);
            CHECK(store.open_checkpoints() == open);
        }
    }
}

TEST_CASE("wipeout implies a zero estimate") {
    Rng rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = random_instance(rng, 6, 4, 0.7, 0.5);
        DomainStore store(inst);
        if (ac3(store, inst) == Consistency::wipeout) continue;
        const VarId var = rng.below(inst.num_variables());
        for (auto a : store.live_values(var)) {
            DomainStore probe = store;
            const bool wipeout = mac_assign(probe, inst, var, a).verdict == Consistency::wipeout;
            const auto e = estimate_solution_count(store, inst, var, a);
            if (wipeout) CHECK(e.count == 0.0);
        }
    }
}

TEST_CASE("estimator is exact on constraint-free instances") {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng, 5, 5, 0.0, 0.0);
        DomainStore store(inst);
        CHECK(estimate_total_solution_count(inst, store) == static_cast<double>(count_solutions_exact(inst)));
        const VarId var = rng.below(inst.num_variables());
        const ValueIndex a = rng.below(inst.domain_size(var));
        const auto e = estimate_solution_count(store, inst, var, a);
        CHECK(e.count == static_cast<double>(count_solutions_exact(inst) / inst.domain_size(var)));
    }
}

TEST_CASE("estimator is exact when at most one constraint joins unassigned variables") {
    Rng rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        // One random constraint on a random pair, no others.
        const std::size_t n = 2 + rng.below(4);
        std::vector<std::vector<Label>> domains(n);
        for (auto& d : domains) d = iota_labels(1 + rng.below(4));
        const VarId i = rng.below(n);
        VarId j = rng.below(n - 1);
        if (j >= i) ++j;
        const auto c = make_constraint(i, j, domains[i].size(), domains[j].size(),
                                       [&](auto, auto) { return rng.unit() >= 0.4; });
        const Instance inst(domains, {c});
        DomainStore store(inst);
        if (ac3(store, inst) == Consistency::wipeout) {
            CHECK(count_solutions_exact(inst) == 0);
            continue;
        }
        CHECK(estimate_total_solution_count(inst, store) ==
              doctest::Approx(static_cast<double>(brute_force_count_within(inst, store))));

        // Restricting any variable still leaves at most one such constraint.
        const VarId var = rng.below(n);
        for (auto a : store.live_values(var)) {
            const auto e = estimate_solution_count(store, inst, var, a);
            DomainStore restricted = store;
            const bool ok = mac_assign(restricted, inst, var, a).verdict == Consistency::consistent;
            const auto exact = ok ? brute_force_count_within(inst, restricted) : 0;
            CHECK(e.count == doctest::Approx(static_cast<double>(exact)));
        }
    }
}
