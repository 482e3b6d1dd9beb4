#include "vcsp/generators.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "vcsp/errors.hpp"
#include "vcsp/rng.hpp"
#include "vcsp/search.hpp"

namespace vcsp {

namespace {

// First k entries of a uniform random permutation of 0..n-1 (partial Fisher-Yates from the front).
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace

void RBParams::validate() const {
    if (n_vars == 0 || domain_size == 0) throw UsageError("Model RB needs at least one variable and one value");
    if (n_constraints > n_vars * (n_vars - 1) / 2)
        throw UsageError("Model RB: " + std::to_string(n_constraints) + " constraints exceed the " +
                         std::to_string(n_vars * (n_vars - 1) / 2) + " variable pairs");
    if (n_nogoods > domain_size * domain_size)
        throw UsageError("Model RB: " + std::to_string(n_nogoods) + " nogoods exceed the " +
                         std::to_string(domain_size * domain_size) + " value pairs");
}

Instance generate_model_rb(const RBParams& params) {
    params.validate();
    Rng rng(params.seed);
    const std::size_t n = params.n_vars;
    const std::size_t d = params.domain_size;

    // Pair p enumerates (i, j), i < j, in row-major order.
    std::vector<std::pair<VarId, VarId>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (VarId i = 0; i < n; ++i)
        for (VarId j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    auto chosen = sample_without_replacement(rng, pairs.size(), params.n_constraints);

    std::vector<BinaryConstraint> constraints;
    constraints.reserve(chosen.size());
    for (auto p : chosen) {
        std::vector<bool> allowed(d * d, true);
        for (auto cell : sample_without_replacement(rng, d * d, params.n_nogoods)) allowed[cell] = false;
        constraints.emplace_back(pairs[p].first, pairs[p].second, d, d, allowed);
    }
    std::vector<Label> labels(d);
    std::iota(labels.begin(), labels.end(), Label{0});
    return Instance(std::vector<std::vector<Label>>(n, labels), std::move(constraints));
}

void SudokuParams::validate() const {
    if (tile_rows == 0 || tile_cols == 0) throw UsageError("Sudoku tiles must be at least 1x1");
    if (holes > side() * side())
        throw UsageError("Sudoku: " + std::to_string(holes) + " holes exceed " + std::to_string(side() * side()) +
                         " cells");
}

namespace {

Instance sudoku_instance(const SudokuParams& p, const std::vector<std::vector<Label>>& domains) {
    const std::size_t s = p.side();
    const auto peers = [&](std::size_t a, std::size_t b) {
        const std::size_t ra = a / s, ca = a % s, rb = b / s, cb = b % s;
        return ra == rb || ca == cb || (ra / p.tile_rows == rb / p.tile_rows && ca / p.tile_cols == cb / p.tile_cols);
    };
    std::vector<BinaryConstraint> constraints;
    for (std::size_t a = 0; a < s * s; ++a) {
        for (std::size_t b = a + 1; b < s * s; ++b) {
            if (!peers(a, b)) continue;
            const auto& da = domains[a];
            const auto& db = domains[b];
            constraints.push_back(BinaryConstraint::from_predicate(
                a, b, da.size(), db.size(), [&](ValueIndex x, ValueIndex y) { return da[x] != db[y]; }));
        }
    }
    return Instance(domains, std::move(constraints));
}

constexpr int grid_attempts = 32;
constexpr std::uint64_t grid_node_limit = 200000;

}  // namespace

Instance generate_generalized_sudoku(const SudokuParams& params) {
    params.validate();
    const std::size_t s = params.side();
    std::vector<Label> full(s);
    std::iota(full.begin(), full.end(), Label{1});

    const Instance empty = sudoku_instance(params, std::vector<std::vector<Label>>(s * s, full));
    std::optional<Assignment> grid;
    for (int attempt = 0; attempt < grid_attempts && !grid; ++attempt) {
        auto orderer = make_shuffle_orderer(Rng::derive_seed(params.seed, static_cast<std::uint64_t>(attempt)));
        grid = search(empty, *orderer, {default_timeout_seconds, grid_node_limit}).solution;
    }
    if (!grid) throw std::runtime_error("could not build a complete " + std::to_string(s) + "x" + std::to_string(s) +
                                        " grid");

    Rng rng(Rng::derive_seed(params.seed, grid_attempts));
    std::vector<bool> hole(s * s, false);
    for (auto cell : sample_without_replacement(rng, s * s, params.holes)) hole[cell] = true;

    std::vector<std::vector<Label>> domains(s * s);
    for (std::size_t cell = 0; cell < s * s; ++cell)
        domains[cell] = hole[cell] ? full : std::vector<Label>{full[*(*grid)[cell]]};
    return sudoku_instance(params, domains);
}

}  // namespace vcsp
