#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vcsp/bits.hpp"
#include "vcsp/csp.hpp"

namespace vcsp {

/// Position in the trail. Only valid while the checkpoint is still open.
struct Checkpoint {
    std::size_t trail_size = 0;
    std::size_t level = 0;
    std::uint64_t serial = 0;
};

/// Live values of every variable plus the trail that undoes prunings.
///
/// Live sets are fixed-capacity bitsets with cached cardinalities. Every removal
/// and every assignment is logged, and undo() to an open checkpoint restores the
/// live sets, counts and assignment flags exactly.
class DomainStore {
public:
    explicit DomainStore(const Instance& instance);

    std::size_t num_variables() const noexcept { return counts_.size(); }
    std::size_t original_size(VarId v) const { return sizes_[v]; }

    bool is_live(VarId v, ValueIndex a) const { return bits::test(live(v), a); }
    std::size_t live_count(VarId v) const { return counts_[v]; }
    std::span<const bits::Word> live(VarId v) const { return {words_.data() + v * stride_, stride_}; }
    std::vector<ValueIndex> live_values(VarId v) const;
    bool wiped_out() const noexcept { return empty_ > 0; }

    bool is_assigned(VarId v) const { return assigned_[v] != no_value; }
    std::optional<ValueIndex> assigned_value(VarId v) const;

    /// Removes a live value and logs it.
    void remove(VarId v, ValueIndex a);
    /// Reduces v's live set to {a} and flags it assigned. Throws UsageError if a is not live.
    void assign(VarId v, ValueIndex a);

    Checkpoint checkpoint();
    /// Restores the state recorded by `mark` and closes it together with every later checkpoint.
    /// Throws UsageError if `mark` was already undone.
    void undo(const Checkpoint& mark);
    std::size_t open_checkpoints() const noexcept { return marks_.size(); }
    std::size_t trail_size() const noexcept { return trail_.size(); }

    /// Support tests performed by revise(); a measure of propagation effort.
    std::uint64_t support_checks() const noexcept { return support_checks_; }
    void add_support_checks(std::uint64_t n) noexcept { support_checks_ += n; }

    /// Compares live sets, counts and assignment flags; the trail is not part of the state.
    bool same_state(const DomainStore& other) const;

private:
    static constexpr std::size_t no_value = static_cast<std::size_t>(-1);

    struct Entry {
        VarId var;
        ValueIndex value;
        bool assignment;  // false: value removal
    };

    std::span<bits::Word> live_mut(VarId v) { return {words_.data() + v * stride_, stride_}; }

    std::size_t stride_;
    std::vector<bits::Word> words_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> assigned_;
    std::size_t empty_ = 0;  // variables with no live value
    std::vector<Entry> trail_;
    std::vector<Checkpoint> marks_;
    std::uint64_t next_serial_ = 1;
    std::uint64_t support_checks_ = 0;
};

enum class Consistency { consistent, wipeout };

/// Arc queue discipline for ac3(). The fixpoint does not depend on it.
enum class QueueOrder { fifo, lifo };

/// Removes every live value of `from` without a live support in `to`.
/// Returns true iff something was removed.
bool revise(DomainStore& store, const BinaryConstraint& constraint, VarId from, VarId to);

/// AC-3 over every arc of the instance.
Consistency ac3(DomainStore& store, const Instance& instance, QueueOrder order = QueueOrder::fifo);

/// AC-3 seeded with the arcs pointing at the given variables.
Consistency ac3_from(DomainStore& store, const Instance& instance, std::span<const VarId> changed,
                     QueueOrder order = QueueOrder::fifo);

struct AssignResult {
    Consistency verdict;
    /// Taken before the assignment; undo it to retract.
    Checkpoint mark;
};

/// Assigns var = value and re-establishes arc consistency.
/// Throws UsageError if value is not live or var is already assigned.
AssignResult mac_assign(DomainStore& store, const Instance& instance, VarId var, ValueIndex value);

inline void undo_to_checkpoint(DomainStore& store, const Checkpoint& mark) { store.undo(mark); }

}  // namespace vcsp
