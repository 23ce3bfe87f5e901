#include "soldiv/modulus.hpp"

#include "soldiv/errors.hpp"

namespace soldiv {

namespace {

void check_w_u(int w, int u) {
    if (w < 3 || w > 32) {
        throw ParameterError("w=" + std::to_string(w) + " out of range [3, 32]");
    }
    if (u < 1 || u > w - 1) {
        throw ParameterError("u=" + std::to_string(u) + " out of range [1, w-1=" +
                             std::to_string(w - 1) + "]");
    }
}

} // namespace

int compute_t(int w, int u) {
    check_w_u(w, u);
    return u / (w - u) + 1;
}

Modulus make_modulus(int w, int u, Sign sign) {
    check_w_u(w, u);
    Modulus m;
    m.w = w;
    m.u = u;
    m.sign = sign;
    u64 pw = u64{1} << w;
    u64 pu = u64{1} << u;
    m.q = (sign == Sign::PLUS) ? pw - pu + 1 : pw - pu - 1;
    m.e = pw - m.q;
    m.t = compute_t(w, u);
    return m;
}

} // namespace soldiv
