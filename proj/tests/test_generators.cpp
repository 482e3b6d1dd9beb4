#include <doctest.h>

#include <set>

#include "support/testing.hpp"
#include "vcsp/errors.hpp"
#include "vcsp/generators.hpp"
#include "vcsp/instance_io.hpp"
#include "vcsp/search.hpp"

using namespace vcsp;
using namespace vcsp::testing;

// Regression value for the small RB example below, from count_solutions_exact and
// confirmed by brute-force enumeration in the same test.
constexpr std::uint64_t rb_small_seed = 2024;
constexpr std::uint64_t rb_small_solutions = 69;

TEST_CASE("Rng") {
    SUBCASE("raw stream is standard MT19937-64") {
        Rng rng(5489);
        std::uint64_t x = 0;
        for (int i = 0; i < 10000; ++i) x = rng.next();
        CHECK(x == 9981545732273789042ull);
    }
    SUBCASE("below stays in range and hits every value") {
        Rng rng(1);
        std::vector<int> hits(7, 0);
        for (int i = 0; i < 7000; ++i) {
            const auto v = rng.below(7);
            REQUIRE(v < 7);
            ++hits[v];
        }
        for (int h : hits) CHECK(h > 800);
        CHECK(rng.below(1) == 0);
    }
    SUBCASE("unit in [0, 1)") {
        Rng rng(2);
        for (int i = 0; i < 1000; ++i) {
            const double u = rng.unit();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
        }
    }
    SUBCASE("derived seeds differ by stream") {
        std::set<std::uint64_t> seeds;
        for (std::uint64_t s = 0; s < 100; ++s) seeds.insert(Rng::derive_seed(42, s));
        CHECK(seeds.size() == 100);
        CHECK(Rng::derive_seed(42, 3) == Rng::derive_seed(42, 3));
    }
}

TEST_CASE("RBParams validation") {
    CHECK_NOTHROW((RBParams{4, 3, 6, 9, 0}).validate());
    CHECK_THROWS_AS((RBParams{4, 3, 7, 0, 0}).validate(), UsageError);
    CHECK_THROWS_AS((RBParams{4, 3, 2, 10, 0}).validate(), UsageError);
    CHECK_THROWS_AS((RBParams{0, 3, 0, 0, 0}).validate(), UsageError);
    CHECK_THROWS_AS(generate_model_rb(RBParams{4, 3, 7, 0, 0}), UsageError);
    CHECK_NOTHROW(rb_easy_preset.validate());
    CHECK_NOTHROW(rb_hard_preset.validate());
    CHECK_NOTHROW(rb_desk_preset.validate());
}

TEST_CASE("generate_model_rb") {
    SUBCASE("no nogoods: every pair allowed") {
        const auto inst = generate_model_rb({4, 3, 5, 0, 7});
        CHECK(inst.constraints().size() == 5);
        for (const auto& c : inst.constraints()) CHECK(c.forbidden_count() == 0);
        CHECK(count_solutions_exact(inst) == 81);
    }
    SUBCASE("same seed, same instance") {
        const RBParams p{8, 5, 14, 9, 99};
        CHECK(generate_model_rb(p) == generate_model_rb(p));
        CHECK(serialize_instance(generate_model_rb(p)) == serialize_instance(generate_model_rb(p)));
        auto q = p;
        q.seed = 100;
        CHECK_FALSE(generate_model_rb(p) == generate_model_rb(q));
    }
    SUBCASE("small instance regression") {
        const auto inst = generate_model_rb({6, 4, 9, 6, rb_small_seed});
        const auto exact = count_solutions_exact(inst);
        CHECK(exact == brute_force_solutions(inst).size());
        CHECK(exact == rb_small_solutions);
    }
    SUBCASE("exact counts and distinct pairs over many seeds") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const RBParams p{7, 4, 12, 5, seed};
            const auto inst = generate_model_rb(p);
            CHECK(inst.num_variables() == 7);
            CHECK(inst.constraints().size() == 12);
            std::set<std::pair<VarId, VarId>> pairs;
            for (const auto& c : inst.constraints()) {
                CHECK(c.forbidden_count() == 5);
                CHECK(c.first() != c.second());
                pairs.insert(std::minmax(c.first(), c.second()));
            }
            CHECK(pairs.size() == 12);
            for (VarId v = 0; v < 7; ++v) CHECK(inst.domain_size(v) == 4);
        }
    }
    SUBCASE("complete graph and full nogood table") {
        const auto inst = generate_model_rb({4, 2, 6, 4, 1});
        CHECK(inst.constraints().size() == 6);
        CHECK(count_solutions_exact(inst) == 0);
    }
}

TEST_CASE("SudokuParams validation") {
    CHECK_NOTHROW((SudokuParams{2, 2, 16, 0}).validate());
    CHECK_THROWS_AS((SudokuParams{2, 2, 17, 0}).validate(), UsageError);
    CHECK_THROWS_AS((SudokuParams{0, 2, 0, 0}).validate(), UsageError);
}

namespace {

// Checks that a full assignment of labels is a valid Sudoku grid.
bool valid_grid(const SudokuParams& p, const std::vector<Label>& cells) {
    const std::size_t s = p.side();
    auto distinct = [&](auto cell_of) {
        std::set<Label> seen;
        for (std::size_t k = 0; k < s; ++k) seen.insert(cells[cell_of(k)]);
        return seen.size() == s && *seen.begin() == 1 && *seen.rbegin() == static_cast<Label>(s);
    };
    for (std::size_t r = 0; r < s; ++r)
        if (!distinct([&](std::size_t k) { return r * s + k; })) return false;
    for (std::size_t c = 0; c < s; ++c)
        if (!distinct([&](std::size_t k) { return k * s + c; })) return false;
    for (std::size_t br = 0; br < s; br += p.tile_rows)
        for (std::size_t bc = 0; bc < s; bc += p.tile_cols)
            if (!distinct([&](std::size_t k) { return (br + k / p.tile_cols) * s + bc + k % p.tile_cols; }))
                return false;
    return true;
}

}  // namespace

TEST_CASE("generate_generalized_sudoku") {
    SUBCASE("no holes: singleton domains, a valid grid, one solution") {
        const SudokuParams p{2, 3, 0, 5};
        const auto inst = generate_generalized_sudoku(p);
        REQUIRE(inst.num_variables() == 36);
        std::vector<Label> cells;
        for (VarId v = 0; v < 36; ++v) {
            REQUIRE(inst.domain_size(v) == 1);
            cells.push_back(inst.labels(v)[0]);
        }
        CHECK(valid_grid(p, cells));
        CHECK(count_solutions_exact(inst) == 1);
    }
    SUBCASE("2x2 tiles with 4 holes is solvable") {
        const auto inst = generate_generalized_sudoku({2, 2, 4, 17});
        std::size_t open = 0;
        for (VarId v = 0; v < 16; ++v) {
            if (inst.domain_size(v) == 4) {
                ++open;
                const auto labels = inst.labels(v);
                CHECK(std::vector<Label>(labels.begin(), labels.end()) == std::vector<Label>{1, 2, 3, 4});
            } else {
                CHECK(inst.domain_size(v) == 1);
            }
        }
        CHECK(open == 4);
        const auto sol = solve_exhaustive(inst);
        REQUIRE(sol);
        CHECK(is_consistent(inst, *sol));
    }
    SUBCASE("constraint structure") {
        // 4x4: each cell sees 3 in its row, 3 in its column, 1 more in its box.
        const auto inst = generate_generalized_sudoku({2, 2, 16, 3});
        CHECK(inst.constraints().size() == 16 * 7 / 2);
        for (VarId v = 0; v < 16; ++v) CHECK(inst.degree(v) == 7);
        CHECK(count_solutions_exact(inst) == 288);
    }
    SUBCASE("same seed, same instance") {
        const SudokuParams p{3, 2, 20, 8};
        CHECK(serialize_instance(generate_generalized_sudoku(p)) == serialize_instance(generate_generalized_sudoku(p)));
        auto q = p;
        q.seed = 9;
        CHECK(serialize_instance(generate_generalized_sudoku(p)) != serialize_instance(generate_generalized_sudoku(q)));
    }
    SUBCASE("every generated puzzle keeps a solution") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const SudokuParams p{2, 2, seed % 17, seed};
            CHECK(count_solutions_exact(generate_generalized_sudoku(p)) >= 1);
        }
    }
}
