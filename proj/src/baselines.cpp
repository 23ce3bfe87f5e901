#include "soldiv/baselines.hpp"

#include <vector>

namespace soldiv {

BarrettParams barrett_setup(const Modulus& m) {
    BarrettParams p;
    p.shift = 3 * m.w - 1;
    p.J = (u128{1} << p.shift) / m.q + 1;
    return p;
}

u64 barrett_divide(const BarrettParams& p, u64 lambda) {
    if (static_cast<u64>(p.J >> 64) == 0) {
        return static_cast<u64>(static_cast<u128>(lambda) * static_cast<u64>(p.J) >> p.shift);
    }
    // J itself exceeds 64 bits only for q = 2^31 - 1; the product needs a
    // third limb there.
    return shr_to_u64(mul_128x64(p.J, lambda), p.shift);
}

namespace {

bool estimate_within_one(const Modulus& m, u64 a, u64 b, int k, u64 lambda) {
    u64 est = static_cast<u64>((static_cast<u128>(a) * lambda + b) >> k);
    u64 truth = lambda / m.q;
    return est + 1 >= truth && est <= truth + 1;
}

// Worst rows for an over-estimating reciprocal sit at lambda = mq - 1 for
// extreme m, so those are checked before any random sampling.
std::vector<u64> boundary_lambdas(const Modulus& m) {
    const u64 lmax = lambda_max(m);
    const u64 bmax = lmax / m.q;
    std::vector<u64> out = {0, 1, m.q - 1, m.q, m.q + 1, lmax};
    for (u64 mult : {u64{1}, u64{2}, bmax - 1, bmax}) {
        u64 base = mult * m.q;
        if (base > 0 && base - 1 <= lmax) {
            out.push_back(base - 1);
        }
        if (base <= lmax) {
            out.push_back(base);
            out.push_back(base + m.q - 1 <= lmax ? base + m.q - 1 : lmax);
        }
    }
    return out;
}

bool candidate_ok(const Modulus& m, u64 a, u64 b, int k) {
    for (u64 lambda : boundary_lambdas(m)) {
        if (!estimate_within_one(m, a, b, k, lambda)) {
            return false;
        }
    }
    const u64 lmax = lambda_max(m);
    if (m.w <= 10) {
        for (u64 lambda = 0; lambda <= lmax; ++lambda) {
            if (!estimate_within_one(m, a, b, k, lambda)) {
                return false;
            }
        }
        return true;
    }
    const u64 mask = low_mask(2 * m.w);
    for (u64 j = 0; j < 1000000; ++j) {
        if (!estimate_within_one(m, a, b, k, splitmix64_at(0, j) & mask)) {
            return false;
        }
    }
    return true;
}

} // namespace

MulShiftParams mulshift_setup(const Modulus& m) {
    for (int k = m.w + 1; k <= 2 * m.w; ++k) {
        u64 a = static_cast<u64>(((u128{1} << k) + m.q - 1) / m.q);
        for (u64 b : {u64{0}, a - 1}) {
            if (candidate_ok(m, a, b, k)) {
                MulShiftParams p;
                p.a = a;
                p.b_const = b;
                p.k = k;
                p.widened = a > (u64{1} << (k - m.w));
                return p;
            }
        }
    }
    throw SetupError("no multiply-shift constant verified for " + describe(m));
}

u64 mulshift_divide_corrected(const Modulus& m, const MulShiftParams& p, u64 lambda) {
    u64 est = mulshift_estimate(p, lambda);
    i128 rem = static_cast<i128>(lambda) - static_cast<i128>(est) * m.q;
    if (rem < 0) {
        return est - 1;
    }
    return rem >= static_cast<i128>(m.q) ? est + 1 : est;
}

} // namespace soldiv
