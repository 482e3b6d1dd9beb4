#include "vcsp/csp.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "vcsp/errors.hpp"

namespace vcsp {

BinaryConstraint::BinaryConstraint(VarId first, VarId second, std::size_t first_size,
                                   std::size_t second_size, const std::vector<bool>& allowed)
    : first_(first),
      second_(second),
      first_size_(first_size),
      second_size_(second_size),
      forward_words_(bits::words_for(second_size)),
      backward_words_(bits::words_for(first_size)),
      forward_(first_size * forward_words_, 0),
      backward_(second_size * backward_words_, 0) {
    if (first == second) throw StructuralError("constraint scope repeats variable " + std::to_string(first));
    if (allowed.size() != first_size * second_size)
        throw StructuralError("constraint matrix has " + std::to_string(allowed.size()) + " cells, expected " +
                              std::to_string(first_size * second_size));
    for (ValueIndex a = 0; a < first_size; ++a) {
        for (ValueIndex b = 0; b < second_size; ++b) {
            if (!allowed[a * second_size + b]) continue;
            bits::set({forward_.data() + a * forward_words_, forward_words_}, b);
            bits::set({backward_.data() + b * backward_words_, backward_words_}, a);
            ++allowed_count_;
        }
    }
}

BinaryConstraint BinaryConstraint::from_predicate(VarId first, VarId second, std::size_t first_size,
                                                  std::size_t second_size,
                                                  const std::function<bool(ValueIndex, ValueIndex)>& allow) {
    std::vector<bool> matrix(first_size * second_size);
    for (ValueIndex a = 0; a < first_size; ++a)
        for (ValueIndex b = 0; b < second_size; ++b) matrix[a * second_size + b] = allow(a, b);
    return {first, second, first_size, second_size, matrix};
}

bool operator==(const BinaryConstraint& a, const BinaryConstraint& b) {
    return a.first_ == b.first_ && a.second_ == b.second_ && a.first_size_ == b.first_size_ &&
           a.second_size_ == b.second_size_ && a.forward_ == b.forward_;
}

Instance::Instance(std::vector<std::vector<Label>> domains, std::vector<BinaryConstraint> constraints)
    : domains_(std::move(domains)), constraints_(std::move(constraints)), neighbors_(domains_.size()) {
    const std::size_t n = domains_.size();
    for (VarId v = 0; v < n; ++v) {
        if (domains_[v].empty()) throw StructuralError("variable " + std::to_string(v) + " has an empty domain");
        max_domain_size_ = std::max(max_domain_size_, domains_[v].size());
    }
    for (std::size_t c = 0; c < constraints_.size(); ++c) {
        const auto& con = constraints_[c];
        const auto where = "constraint " + std::to_string(c) + " (" + std::to_string(con.first()) + ", " +
                           std::to_string(con.second()) + ")";
        if (con.first() >= n || con.second() >= n) throw StructuralError(where + ": variable index out of range");
        if (con.first_size() != domains_[con.first()].size() || con.second_size() != domains_[con.second()].size())
            throw StructuralError(where + ": matrix dimensions do not match domain sizes");
        for (const auto& arc : neighbors_[con.first()])
            if (arc.neighbor == con.second()) throw StructuralError(where + ": variable pair already constrained");
        neighbors_[con.first()].push_back({c, con.second()});
        neighbors_[con.second()].push_back({c, con.first()});
    }
}

const BinaryConstraint* Instance::constraint_between(VarId a, VarId b) const {
    for (const auto& arc : neighbors_[a])
        if (arc.neighbor == b) return &constraints_[arc.constraint];
    return nullptr;
}

std::uint64_t Instance::search_space_size() const noexcept {
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 1;
    for (const auto& d : domains_) {
        if (total > cap / d.size()) return cap;
        total *= d.size();
    }
    return total;
}

bool operator==(const Instance& a, const Instance& b) {
    return a.domains_ == b.domains_ && a.constraints_ == b.constraints_;
}

bool Assignment::complete() const {
    return std::all_of(values_.begin(), values_.end(), [](const auto& v) { return v.has_value(); });
}

bool is_consistent(const Instance& instance, const Assignment& assignment) {
    if (assignment.size() != instance.num_variables())
        throw StructuralError("assignment covers " + std::to_string(assignment.size()) + " variables, instance has " +
                              std::to_string(instance.num_variables()));
    for (VarId v = 0; v < assignment.size(); ++v)
        if (assignment[v] && *assignment[v] >= instance.domain_size(v))
            throw StructuralError("value index " + std::to_string(*assignment[v]) + " outside domain of variable " +
                                  std::to_string(v));
    for (const auto& con : instance.constraints()) {
        const auto& a = assignment[con.first()];
        const auto& b = assignment[con.second()];
        if (a && b && !con.allows(*a, *b)) return false;
    }
    return true;
}

namespace {

// Checks var = value against every already-assigned lower-indexed neighbor.
bool compatible_with_prefix(const Instance& instance, const std::vector<ValueIndex>& values, VarId var) {
    for (const auto& arc : instance.neighbors(var)) {
        if (arc.neighbor >= var) continue;
        if (!instance.constraint(arc.constraint).allowed(var, values[var], values[arc.neighbor])) return false;
    }
    return true;
}

// Depth-first enumeration in lexicographic order; visit returns false to stop.
template <typename Visit>
void enumerate(const Instance& instance, Visit&& visit) {
    const std::size_t n = instance.num_variables();
    if (n == 0) {
        visit(std::vector<ValueIndex>{});
        return;
    }
    std::vector<ValueIndex> values(n, 0);
    VarId var = 0;
    bool fresh = true;  // values[var] has not been tested yet
    while (true) {
        if (!fresh) {
            // advance var, retreating while exhausted
            while (++values[var] >= instance.domain_size(var)) {
                values[var] = 0;
                if (var == 0) return;
                --var;
            }
        }
        fresh = false;
        if (!compatible_with_prefix(instance, values, var)) continue;
        if (var + 1 == n) {
            if (!visit(values)) return;
            continue;
        }
        ++var;
        values[var] = 0;
        fresh = true;
    }
}

}  // namespace

std::optional<Assignment> solve_exhaustive(const Instance& instance) {
    std::optional<Assignment> result;
    enumerate(instance, [&](const std::vector<ValueIndex>& values) {
        Assignment a(values.size());
        for (VarId v = 0; v < values.size(); ++v) a.assign(v, values[v]);
        result = std::move(a);
        return false;
    });
    return result;
}

std::uint64_t count_solutions_exact(const Instance& instance) {
    std::uint64_t count = 0;
    enumerate(instance, [&](const std::vector<ValueIndex>&) {
        ++count;
        return true;
    });
    return count;
}

}  // namespace vcsp
