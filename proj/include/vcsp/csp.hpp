#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vcsp/bits.hpp"

namespace vcsp {

using VarId = std::size_t;
using ValueIndex = std::size_t;
/// External value name as it appears in instance files.
using Label = std::int64_t;

/// Extensional binary constraint over the scope (first, second).
///
/// The allowed-pair matrix is kept as two bitset views: one row per value of
/// `first` over the values of `second`, and one row per value of `second` over
/// the values of `first`. Both are built from the same matrix at construction, so
/// a query from either end sees the same relation.
class BinaryConstraint {
public:
    /// `allowed` is row-major, first_size x second_size.
    BinaryConstraint(VarId first, VarId second, std::size_t first_size, std::size_t second_size,
                     const std::vector<bool>& allowed);

    static BinaryConstraint from_predicate(VarId first, VarId second, std::size_t first_size,
                                           std::size_t second_size,
                                           const std::function<bool(ValueIndex, ValueIndex)>& allow);

    VarId first() const noexcept { return first_; }
    VarId second() const noexcept { return second_; }
    std::size_t first_size() const noexcept { return first_size_; }
    std::size_t second_size() const noexcept { return second_size_; }

    bool involves(VarId v) const noexcept { return v == first_ || v == second_; }
    VarId other(VarId v) const noexcept { return v == first_ ? second_ : first_; }

    /// Is (first = a, second = b) permitted?
    bool allows(ValueIndex a, ValueIndex b) const { return bits::test(row(first_, a), b); }

    /// Directional query: is (var = a, other(var) = b) permitted?
    bool allowed(VarId var, ValueIndex a, ValueIndex b) const { return bits::test(row(var, a), b); }

    /// Values of other(var) compatible with var = a, as a bitset.
    std::span<const bits::Word> row(VarId var, ValueIndex a) const {
        if (var == first_) return {forward_.data() + a * forward_words_, forward_words_};
        return {backward_.data() + a * backward_words_, backward_words_};
    }

    std::size_t forbidden_count() const noexcept { return first_size_ * second_size_ - allowed_count_; }
    std::size_t allowed_count() const noexcept { return allowed_count_; }

    friend bool operator==(const BinaryConstraint& a, const BinaryConstraint& b);

private:
    VarId first_;
    VarId second_;
    std::size_t first_size_;
    std::size_t second_size_;
    std::size_t forward_words_;
    std::size_t backward_words_;
    std::size_t allowed_count_ = 0;
    std::vector<bits::Word> forward_;
    std::vector<bits::Word> backward_;
};

/// Binary CSP: variables with labelled finite domains and extensional constraints.
/// Immutable after construction.
class Instance {
public:
    struct Arc {
        std::size_t constraint;
        VarId neighbor;
    };

    /// Throws StructuralError if a domain is empty, a scope is invalid, a pair of
    /// variables carries two constraints, or matrix dimensions disagree with domains.
    Instance(std::vector<std::vector<Label>> domains, std::vector<BinaryConstraint> constraints);

    std::size_t num_variables() const noexcept { return domains_.size(); }
    std::size_t domain_size(VarId v) const { return domains_[v].size(); }
    std::span<const Label> labels(VarId v) const { return domains_[v]; }
    std::size_t max_domain_size() const noexcept { return max_domain_size_; }

    std::span<const BinaryConstraint> constraints() const noexcept { return constraints_; }
    const BinaryConstraint& constraint(std::size_t c) const { return constraints_[c]; }
    std::span<const Arc> neighbors(VarId v) const { return neighbors_[v]; }
    std::size_t degree(VarId v) const { return neighbors_[v].size(); }

    const BinaryConstraint* constraint_between(VarId a, VarId b) const;

    /// Product of domain sizes, saturating at UINT64_MAX.
    std::uint64_t search_space_size() const noexcept;

    friend bool operator==(const Instance& a, const Instance& b);

private:
    std::vector<std::vector<Label>> domains_;
    std::vector<BinaryConstraint> constraints_;
    std::vector<std::vector<Arc>> neighbors_;
    std::size_t max_domain_size_ = 0;
};

/// Partial map from variables to value indices.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::size_t num_variables) : values_(num_variables) {}

    std::size_t size() const noexcept { return values_.size(); }
    const std::optional<ValueIndex>& operator[](VarId v) const { return values_[v]; }
    void assign(VarId v, ValueIndex a) { values_[v] = a; }
    void unassign(VarId v) { values_[v].reset(); }
    bool complete() const;

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<std::optional<ValueIndex>> values_;
};

/// True iff every constraint whose scope is fully assigned is satisfied.
/// Throws StructuralError on a size mismatch or out-of-domain value.
bool is_consistent(const Instance& instance, const Assignment& assignment);

/// Chronological backtracking in lexicographic variable and value order without
/// propagation. Returns the lexicographically first solution.
std::optional<Assignment> solve_exhaustive(const Instance& instance);

/// Exact number of complete consistent assignments, by plain backtracking enumeration.
std::uint64_t count_solutions_exact(const Instance& instance);

}  // namespace vcsp
