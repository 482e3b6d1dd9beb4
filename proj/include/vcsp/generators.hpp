#pragma once

#include <cstddef>
#include <cstdint>

#include "vcsp/csp.hpp"

namespace vcsp {

/// Model RB with explicit counts: n_constraints distinct variable pairs, each
/// forbidding n_nogoods distinct value pairs.
struct RBParams {
    std::size_t n_vars = 0;
    std::size_t domain_size = 0;
    std::size_t n_constraints = 0;
    std::size_t n_nogoods = 0;
    std::uint64_t seed = 0;

    /// Throws UsageError if a count exceeds what the sizes allow.
    void validate() const;
};

/// Instance sizes used for the two random benchmark sets, and a small set for desk runs.
inline constexpr RBParams rb_easy_preset{30, 30, 280, 220, 0};
inline constexpr RBParams rb_hard_preset{40, 19, 410, 90, 0};
/// The desk set sits just below the satisfiability threshold for its size.
inline constexpr RBParams rb_desk_preset{25, 25, 150, 254, 0};

struct SudokuParams {
    std::size_t tile_rows = 0;
    std::size_t tile_cols = 0;
    std::size_t holes = 0;
    std::uint64_t seed = 0;

    std::size_t side() const noexcept { return tile_rows * tile_cols; }
    void validate() const;
};

/// Constraint pairs drawn uniformly without replacement, then nogoods per constraint
/// likewise. Same params (including seed) give the same instance.
Instance generate_model_rb(const RBParams& params);

/// Random complete grid built by MAC search with a seeded value shuffle, then
/// `holes` cells emptied uniformly at random. Cells are variables (row-major) with
/// labels 1..side; filled cells get singleton domains; pairwise != constraints link
/// every row, column and tile_rows x tile_cols box.
/// Throws std::runtime_error if no grid is found within the bounded retries.
Instance generate_generalized_sudoku(const SudokuParams& params);

}  // namespace vcsp
