#pragma once

#include "soldiv/errors.hpp"
#include "soldiv/modulus.hpp"

namespace soldiv {

struct DivRem {
    u64 quotient = 0;
    u64 remainder = 0;
};

// Reference semantics: plain hardware division. Every other divider in this
// project is checked against this.
inline DivRem oracle_divrem(u64 q, u64 lambda) {
    if (q == 0) {
        throw ParameterError("oracle_divrem: q must be nonzero");
    }
    return {lambda / q, lambda % q};
}

// Reciprocal baseline: quotient = (lambda * J) >> shift with
// J = floor(2^(3w-1) / q) + 1, shift = 3w - 1, no correction step.
struct BarrettParams {
    u128 J = 0;
    int shift = 0;
};

BarrettParams barrett_setup(const Modulus& m);

u64 barrett_divide(const BarrettParams& p, u64 lambda);

// Multiply-shift baseline: estimate = (a * lambda + b) >> k with a chosen by
// a ceiling rule, then a single +/-1 correction against q.
struct MulShiftParams {
    u64 a = 0;
    u64 b_const = 0;
    int k = 0;
    bool widened = false; // constant needs more than k - w bits
};

// Scans k = w+1 .. 2w, a = ceil(2^k / q), b in {0, a-1}; accepts the first
// candidate whose estimate stays within +/-1 of the oracle. Verification is
// exhaustive for w <= 10, otherwise a fixed boundary set followed by 10^6
// seeded samples.
MulShiftParams mulshift_setup(const Modulus& m);

inline u64 mulshift_estimate(const MulShiftParams& p, u64 lambda) {
    return static_cast<u64>((static_cast<u128>(p.a) * lambda + p.b_const) >> p.k);
}

u64 mulshift_divide_corrected(const Modulus& m, const MulShiftParams& p, u64 lambda);

} // namespace soldiv
