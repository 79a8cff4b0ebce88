// Exact scalar-operation counting for semiring arithmetic.
//
// A CountingScope installs a thread-local OpCounters sink; while one is
// active, every semiring-level scalar operation reports itself: each
// multiplication bumps `mults`, each addition bumps `adds`, each order
// comparison (the max in tropical addition) bumps `comparisons`.
// Finite-hbar smoothing evaluates a constant-size transcendental kernel
// per call; that kernel is not itemized beyond its add/comparison.
// Counters are per-thread and unsynchronized; counted runs are expected
// to be single-threaded.

#pragma once

#include <cstdint>

namespace tropical {

struct OpCounters {
    std::uint64_t mults = 0;
    std::uint64_t adds = 0;
    std::uint64_t comparisons = 0;

    std::uint64_t total_scalar_ops() const { return mults + adds + comparisons; }

    void reset() { mults = adds = comparisons = 0; }
};

namespace detail {

inline OpCounters*& active_counters() {
    thread_local OpCounters* active = nullptr;
    return active;
}

inline void count_mul() {
    if (OpCounters* c = active_counters()) ++c->mults;
}
inline void count_add() {
    if (OpCounters* c = active_counters()) ++c->adds;
}
inline void count_cmp() {
    if (OpCounters* c = active_counters()) ++c->comparisons;
}

} // namespace detail

// RAII activation of a counter sink on the current thread. Scopes nest;
// the innermost one receives the counts.
class CountingScope {
public:
    explicit CountingScope(OpCounters& counters) : previous_(detail::active_counters()) {
        detail::active_counters() = &counters;
    }
    ~CountingScope() { detail::active_counters() = previous_; }

    CountingScope(const CountingScope&) = delete;
    CountingScope& operator=(const CountingScope&) = delete;

private:
    OpCounters* previous_;
};

// Double wrapper whose arithmetic reports to the active counters. Running
// a generic algorithm over Counted elements counts exactly the scalar
// work that algorithm performs.
struct Counted {
    double v = 0.0;

    Counted() = default;
    constexpr Counted(double value) : v(value) {}

    friend Counted operator+(Counted a, Counted b) {
        detail::count_add();
        return {a.v + b.v};
    }
    friend Counted operator*(Counted a, Counted b) {
        detail::count_mul();
        return {a.v * b.v};
    }
    // Order comparison: the primitive behind max/min.
    friend bool operator<(Counted a, Counted b) {
        detail::count_cmp();
        return a.v < b.v;
    }
    friend bool operator==(Counted a, Counted b) { return a.v == b.v; }
};

} // namespace tropical
