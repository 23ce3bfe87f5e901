#include "soldiv/divider.hpp"

#include <iomanip>
#include <sstream>

namespace soldiv {

namespace {

void check_lambda(const Modulus& m, u64 lambda) {
    if (lambda > lambda_max(m)) {
        throw ParameterError("lambda=" + std::to_string(lambda) + " exceeds 2^" +
                             std::to_string(2 * m.w) + " - 1 (" + describe(m) + ")");
    }
}

} // namespace

DivisionTrace fixed_point_quotient(const Modulus& m, u64 lambda) {
    check_lambda(m, lambda);
    DivisionTrace trace;
    trace.c = lambda >> m.w;
    LoopResult res = fixed_point_scan(m, lambda, [&](int n, u64 b, i64 fb, i64 delta) {
        trace.iterates.push_back({n, b, fb, delta});
    });
    trace.updates = res.updates;
    trace.b_star = res.b_star;
    return trace;
}

QuotRem exact_divide(const Modulus& m, u64 lambda) {
    check_lambda(m, lambda);
    if (lambda % m.q != 0) {
        throw ParameterError("lambda=" + std::to_string(lambda) + " is not a multiple of q=" +
                             std::to_string(m.q) + "; use floor_divide");
    }
    u64 bs = run_loop(m, lambda).b_star;
    u64 fix = (lambda ^ bs) & 1;
    QuotRem r;
    r.quotient = bs + fix;
    r.remainder = lambda - m.q * r.quotient;
    r.branch = fix ? Branch::PARITY : Branch::NONE;
    return r;
}

QuotRem floor_divide(const Modulus& m, u64 lambda) {
    check_lambda(m, lambda);
    u64 bs = run_loop(m, lambda).b_star;
    i128 rem = static_cast<i128>(lambda) - static_cast<i128>(bs) * m.q;
    QuotRem r;
    if (rem < 0) {
        r.quotient = bs - 1;
        r.branch = Branch::MINUS_ONE;
    } else if (rem >= static_cast<i128>(m.q)) {
        r.quotient = bs + 1;
        r.branch = Branch::PLUS_ONE;
    } else {
        r.quotient = bs;
        r.branch = Branch::NONE;
    }
    r.remainder = lambda - m.q * r.quotient;
    return r;
}

std::string format_trace(const Modulus& m, const DivisionTrace& trace) {
    (void)m;
    std::ostringstream out;
    out << "c = " << trace.c << '\n';
    out << std::setw(5) << "i" << std::setw(13) << "b_i" << std::setw(13) << "f(b_i)"
        << std::setw(13) << "delta" << '\n';
    for (const TraceStep& s : trace.iterates) {
        out << std::setw(5) << s.index << std::setw(13) << s.b << std::setw(13) << s.f_b
            << std::setw(13) << s.delta << '\n';
    }
    out << "updates = " << trace.updates << '\n';
    out << "b* = " << trace.b_star << '\n';
    return out.str();
}

} // namespace soldiv
