#pragma once

#include <string>

#include "soldiv/wide.hpp"

namespace soldiv {

enum class Sign { PLUS, MINUS };

inline const char* to_string(Sign s) {
    return s == Sign::PLUS ? "+1" : "-1";
}

// q = 2^w - 2^u + 1 (PLUS) or 2^w - 2^u - 1 (MINUS), with complement
// e = 2^w - q. Both q and e are odd, and q + e = 2^w exactly; that identity
// is what lets the divider replace a multiply by q with shifts and adds.
struct Modulus {
    int w = 0;
    int u = 0;
    Sign sign = Sign::PLUS;
    u64 q = 0;
    u64 e = 0;
    int t = 0; // predicted pipeline depth, floor(u / (w - u)) + 1
};

// Pipeline-depth predictor. Grows as u approaches w because e approaches
// 2^(w-1) and each refinement step recovers fewer quotient bits.
int compute_t(int w, int u);

// Validates 3 <= w <= 32, 1 <= u <= w - 1 and fills in q, e, t.
Modulus make_modulus(int w, int u, Sign sign);

// Dividends are restricted to double-width: 0 <= lambda <= 2^(2w) - 1.
inline u64 lambda_max(const Modulus& m) {
    return low_mask(2 * m.w);
}

inline std::string describe(const Modulus& m) {
    return "w=" + std::to_string(m.w) + " u=" + std::to_string(m.u) +
           " sign=" + to_string(m.sign) + " q=" + std::to_string(m.q);
}

} // namespace soldiv
