#include "vcsp/propagation.hpp"

#include <bit>
#include <deque>
#include <string>

#include "vcsp/errors.hpp"

namespace vcsp {

DomainStore::DomainStore(const Instance& instance)
    : stride_(bits::words_for(instance.max_domain_size())),
      words_(instance.num_variables() * stride_, 0),
      counts_(instance.num_variables()),
      sizes_(instance.num_variables()),
      assigned_(instance.num_variables(), no_value) {
    for (VarId v = 0; v < instance.num_variables(); ++v) {
        sizes_[v] = counts_[v] = instance.domain_size(v);
        auto w = live_mut(v);
        for (ValueIndex a = 0; a < sizes_[v]; ++a) bits::set(w, a);
    }
}

std::vector<ValueIndex> DomainStore::live_values(VarId v) const {
    std::vector<ValueIndex> out;
    out.reserve(counts_[v]);
    bits::for_each(live(v), [&](std::size_t a) { out.push_back(a); });
    return out;
}

std::optional<ValueIndex> DomainStore::assigned_value(VarId v) const {
    if (assigned_[v] == no_value) return std::nullopt;
    return assigned_[v];
}

void DomainStore::remove(VarId v, ValueIndex a) {
    if (!is_live(v, a)) return;
    bits::reset(live_mut(v), a);
    if (--counts_[v] == 0) ++empty_;
    trail_.push_back({v, a, false});
}

void DomainStore::assign(VarId v, ValueIndex a) {
    if (v >= num_variables() || a >= sizes_[v] || !is_live(v, a))
        throw UsageError("value " + std::to_string(a) + " is not live for variable " + std::to_string(v));
    if (is_assigned(v)) throw UsageError("variable " + std::to_string(v) + " is already assigned");
    trail_.push_back({v, a, true});
    assigned_[v] = a;
    for (auto b : live_values(v))
        if (b != a) remove(v, b);
}

Checkpoint DomainStore::checkpoint() {
    Checkpoint mark{trail_.size(), marks_.size(), next_serial_++};
    marks_.push_back(mark);
    return mark;
}

void DomainStore::undo(const Checkpoint& mark) {
    if (mark.level >= marks_.size() || marks_[mark.level].serial != mark.serial)
        throw UsageError("checkpoint is stale");
    while (trail_.size() > mark.trail_size) {
        const Entry e = trail_.back();
        trail_.pop_back();
        if (e.assignment) {
            assigned_[e.var] = no_value;
        } else {
            if (counts_[e.var]++ == 0) --empty_;
            bits::set(live_mut(e.var), e.value);
        }
    }
    marks_.resize(mark.level);
}

bool DomainStore::same_state(const DomainStore& other) const {
    return words_ == other.words_ && counts_ == other.counts_ && assigned_ == other.assigned_ &&
           empty_ == other.empty_;
}

bool revise(DomainStore& store, const BinaryConstraint& constraint, VarId from, VarId to) {
    const auto target = store.live(to);
    bool removed = false;
    std::uint64_t checks = 0;
    const auto source = store.live(from);
    for (std::size_t k = 0; k < source.size(); ++k) {
        // Iterate a copy of the word; removals write to the store.
        for (bits::Word x = source[k]; x; x &= x - 1) {
            const ValueIndex a = k * bits::word_bits + static_cast<std::size_t>(std::countr_zero(x));
            ++checks;
            if (!bits::intersects(constraint.row(from, a), target)) {
                store.remove(from, a);
                removed = true;
            }
        }
    }
    store.add_support_checks(checks);
    return removed;
}

namespace {

// Arc id 2c: revise first against second. 2c + 1: revise second against first.
class ArcQueue {
public:
    ArcQueue(std::size_t num_constraints, QueueOrder order) : queued_(2 * num_constraints, 0), order_(order) {}

    void push(std::size_t arc) {
        if (queued_[arc]) return;
        queued_[arc] = 1;
        arcs_.push_back(arc);
    }
    bool empty() const { return arcs_.empty(); }
    std::size_t pop() {
        std::size_t arc;
        if (order_ == QueueOrder::fifo) {
            arc = arcs_.front();
            arcs_.pop_front();
        } else {
            arc = arcs_.back();
            arcs_.pop_back();
        }
        queued_[arc] = 0;
        return arc;
    }

private:
    std::deque<std::size_t> arcs_;
    std::vector<char> queued_;
    QueueOrder order_;
};

// Arc that revises `from` against its neighbor through constraint c.
std::size_t arc_id(const Instance& instance, std::size_t c, VarId from) {
    return 2 * c + (instance.constraint(c).first() == from ? 0 : 1);
}

Consistency run(DomainStore& store, const Instance& instance, ArcQueue& queue) {
    if (store.wiped_out()) return Consistency::wipeout;
    while (!queue.empty()) {
        const auto arc = queue.pop();
        const auto& con = instance.constraint(arc / 2);
        const VarId from = arc % 2 == 0 ? con.first() : con.second();
        const VarId to = con.other(from);
        if (!revise(store, con, from, to)) continue;
        if (store.live_count(from) == 0) return Consistency::wipeout;
        for (const auto& n : instance.neighbors(from))
            if (n.neighbor != to) queue.push(arc_id(instance, n.constraint, n.neighbor));
    }
    return Consistency::consistent;
}

}  // namespace

Consistency ac3(DomainStore& store, const Instance& instance, QueueOrder order) {
    ArcQueue queue(instance.constraints().size(), order);
    for (std::size_t arc = 0; arc < 2 * instance.constraints().size(); ++arc) queue.push(arc);
    return run(store, instance, queue);
}

Consistency ac3_from(DomainStore& store, const Instance& instance, std::span<const VarId> changed,
                     QueueOrder order) {
    ArcQueue queue(instance.constraints().size(), order);
    for (auto v : changed)
        for (const auto& n : instance.neighbors(v)) queue.push(arc_id(instance, n.constraint, n.neighbor));
    return run(store, instance, queue);
}

AssignResult mac_assign(DomainStore& store, const Instance& instance, VarId var, ValueIndex value) {
    if (var >= store.num_variables() || value >= store.original_size(var) || !store.is_live(var, value))
        throw UsageError("cannot assign non-live value " + std::to_string(value) + " to variable " +
                         std::to_string(var));
    const auto mark = store.checkpoint();
    store.assign(var, value);
    const VarId changed[] = {var};
    return {ac3_from(store, instance, changed), mark};
}

}  // namespace vcsp
