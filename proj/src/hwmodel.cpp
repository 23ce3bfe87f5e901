#include "soldiv/hwmodel.hpp"

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

void check_stages(int stages) {
    if (stages < 1) {
        throw ParameterError("stages=" + std::to_string(stages) + " must be >= 1");
    }
}

} // namespace

std::pair<u64, StageRecord> iteration_stage(const Modulus& m, u64 c, u64 b_in) {
    // Multiplier route and shift-add route must agree; e = 2^u -/+ 1 makes
    // the product a single shift and add/subtract in hardware.
    u128 mul = static_cast<u128>(b_in) * m.e;
    u128 shifted = m.sign == Sign::PLUS
                       ? (static_cast<u128>(b_in) << m.u) - b_in
                       : (static_cast<u128>(b_in) << m.u) + b_in;
    if (mul != shifted) {
        throw InternalError("stage product routes disagree at b_in=" + std::to_string(b_in) +
                            " (" + describe(m) + ")");
    }
    StageRecord rec;
    rec.b_in = b_in;
    rec.s = m.sign == Sign::PLUS ? 1 : 0;
    rec.cin = (rec.s == 1 && (b_in & low_mask(m.u)) == 0) ? 1 : 0;
    rec.d = 1;
    rec.b_out = c + static_cast<u64>(mul >> m.w) + rec.d;
    return {rec.b_out, rec};
}

std::pair<u64, DatapathTrace> pipeline_quotient(const Modulus& m, u64 lambda, int stages) {
    check_lambda(m, lambda);
    check_stages(stages);
    DatapathTrace trace;
    trace.c = lambda >> m.w;
    u64 b = trace.c;
    for (int i = 1; i <= stages; ++i) {
        auto [b_out, rec] = iteration_stage(m, trace.c, b);
        rec.stage = i;
        trace.stages.push_back(rec);
        b = b_out;
    }
    return {b, trace};
}

std::pair<u64, AdjustRecord> adjust_unit(const Modulus& m, u64 lambda, u64 b_star,
                                         CheckMode mode) {
    check_lambda(m, lambda);
    if (mode == CheckMode::verification) {
        u64 truth = lambda / m.q;
        i64 gap = static_cast<i64>(b_star) - static_cast<i64>(truth);
        if (gap >= 2 || gap <= -2) {
            throw InternalError("adjust unit cannot correct b*=" + std::to_string(b_star) +
                                " (true quotient " + std::to_string(truth) + ") at lambda=" +
                                std::to_string(lambda) + " (" + describe(m) + ")");
        }
    }
    AdjustRecord rec = window_adjust(m, lambda, b_star);
    return {b_star + rec.decision, rec};
}

std::pair<u64, DatapathTrace> hw_divide(const Modulus& m, u64 lambda, int stages,
                                        CheckMode mode) {
    if (stages < 0) {
        stages = m.t;
    }
    auto [b_star, trace] = pipeline_quotient(m, lambda, stages);
    auto [quotient, adj] = adjust_unit(m, lambda, b_star, mode);
    trace.adjust = adj;
    trace.b_final = quotient;
    return {quotient, trace};
}

std::string format_trace(const Modulus& m, const DatapathTrace& trace) {
    (void)m;
    std::ostringstream out;
    out << "c = " << trace.c << '\n';
    out << std::setw(5) << "stage" << std::setw(13) << "b_in" << std::setw(13) << "b_out"
        << std::setw(3) << "s" << std::setw(5) << "cin" << std::setw(3) << "d" << '\n';
    for (const StageRecord& s : trace.stages) {
        out << std::setw(5) << s.stage << std::setw(13) << s.b_in << std::setw(13) << s.b_out
            << std::setw(3) << s.s << std::setw(5) << s.cin << std::setw(3) << s.d << '\n';
    }
    if (trace.adjust) {
        const AdjustRecord& a = *trace.adjust;
        out << "adjust  addends = [" << a.addends[0] << ", " << a.addends[1] << ", "
            << a.addends[2] << ", " << a.addends[3] << "]  sum = " << a.sum_low
            << "  msb = " << a.msb << "  cmp_ge_q = " << a.cmp_ge_q << "  decision = "
            << (a.decision > 0 ? "+1" : a.decision < 0 ? "-1" : "0") << '\n';
    }
    if (trace.b_final) {
        out << "b_final = " << *trace.b_final << '\n';
    }
    return out.str();
}

} // namespace soldiv
