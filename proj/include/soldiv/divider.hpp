#pragma once

#include <string>
#include <vector>

#include "soldiv/errors.hpp"
#include "soldiv/modulus.hpp"

namespace soldiv {

// v(x) = floor(-x*e / 2^w) = -ceil(x*e / 2^w). Always <= 0 for x >= 0.
inline i64 v_raw(int w, u64 e, u64 x) {
    u128 p = static_cast<u128>(x) * e;
    return -static_cast<i64>((p + low_mask(w)) >> w);
}

inline i64 v_of(const Modulus& m, u64 x) {
    return v_raw(m.w, m.e, x);
}

// f(x) = x + v(x) = x - ceil(x*e / 2^w); the value whose fixed point against
// c = lambda >> w pins the quotient. Nonnegative for all x >= 0 since e < 2^w.
inline i64 f_of(const Modulus& m, u64 x) {
    return static_cast<i64>(x) + v_raw(m.w, m.e, x);
}

struct LoopResult {
    u64 b_star = 0;
    int updates = 0;
};

// Fixed-point refinement: b_0 = c, b_{i+1} = b_i + (c - f(b_i)), stopping at
// f(b_i) = c. The callback sees every iterate, including the terminal one.
// More than 2w updates means the recurrence is not contracting for this
// modulus; that is an internal invariant violation, not a caller error.
template <typename OnIterate>
inline LoopResult fixed_point_scan(const Modulus& m, u64 lambda, OnIterate&& on_iterate) {
    const u64 c = lambda >> m.w;
    const int cap = 2 * m.w;
    u64 b = c;
    for (int n = 0;; ++n) {
        i64 fb = static_cast<i64>(b) + v_raw(m.w, m.e, b);
        i64 delta = static_cast<i64>(c) - fb;
        on_iterate(n, b, fb, delta);
        if (delta == 0) {
            return {b, n};
        }
        if (n == cap) {
            throw InternalError("fixed-point loop exceeded " + std::to_string(cap) +
                                " updates at lambda=" + std::to_string(lambda) +
                                " (" + describe(m) + ")");
        }
        b = static_cast<u64>(static_cast<i64>(b) + delta);
    }
}

inline LoopResult run_loop(const Modulus& m, u64 lambda) {
    return fixed_point_scan(m, lambda, [](int, u64, i64, i64) {});
}

struct TraceStep {
    int index = 0;
    u64 b = 0;
    i64 f_b = 0;
    i64 delta = 0;
};

struct DivisionTrace {
    u64 c = 0;
    std::vector<TraceStep> iterates; // updates + 1 entries, terminal included
    int updates = 0;
    u64 b_star = 0;
};

DivisionTrace fixed_point_quotient(const Modulus& m, u64 lambda);

enum class Branch { NONE, PARITY, MINUS_ONE, PLUS_ONE };

inline const char* to_string(Branch b) {
    switch (b) {
    case Branch::NONE: return "NONE";
    case Branch::PARITY: return "PARITY";
    case Branch::MINUS_ONE: return "MINUS_ONE";
    default: return "PLUS_ONE";
    }
}

struct QuotRem {
    u64 quotient = 0;
    u64 remainder = 0;
    Branch branch = Branch::NONE;
};

// Exact divider for multiples of q: resolves b* to b via the parity of
// lambda (q odd makes lambda and b share parity). Rejects non-multiples.
QuotRem exact_divide(const Modulus& m, u64 lambda);

// General divider: resolves b* with a remainder-window check, r* = lambda -
// b*q adjusted by at most one step in either direction.
QuotRem floor_divide(const Modulus& m, u64 lambda);

// Allocation-free quotient for sweeps and benchmarks.
inline u64 floor_quotient(const Modulus& m, u64 lambda) {
    u64 bs = run_loop(m, lambda).b_star;
    i128 r = static_cast<i128>(lambda) - static_cast<i128>(bs) * m.q;
    if (r < 0) {
        return bs - 1;
    }
    return r >= static_cast<i128>(m.q) ? bs + 1 : bs;
}

std::string format_trace(const Modulus& m, const DivisionTrace& trace);

} // namespace soldiv
