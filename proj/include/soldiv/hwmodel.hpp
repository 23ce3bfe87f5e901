#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "soldiv/errors.hpp"
#include "soldiv/modulus.hpp"

namespace soldiv {

// One pipeline stage: b_out = c + ((b_in * e) >> w) + d with d = 1. The +1
// absorbs the ceiling whenever 2^w does not divide b_in * e; when it does
// divide (b_in = 0 included), the stage output overshoots the algorithmic
// iterate by exactly one, which the adjust unit's window tolerates.
struct StageRecord {
    int stage = 0;
    u64 b_in = 0;
    u64 b_out = 0;
    int s = 0;   // 1 iff the modulus is the +1 form
    int cin = 0; // carry-in visible above the truncated low bits
    int d = 1;
};

struct AdjustRecord {
    u64 addends[4] = {0, 0, 0, 0};
    u64 sum_low = 0;    // (w+2)-bit window of lambda - b*q
    int msb = 0;        // sign bit of the window
    int cmp_ge_q = 0;   // low w+1 bits >= q
    int decision = 0;   // -1, 0, +1
};

struct DatapathTrace {
    u64 c = 0;
    std::vector<StageRecord> stages;
    std::optional<AdjustRecord> adjust;
    std::optional<u64> b_final;
};

enum class CheckMode { release, verification };

std::pair<u64, StageRecord> iteration_stage(const Modulus& m, u64 c, u64 b_in);

// Runs a fixed number of stages from b = c; no final adjustment.
std::pair<u64, DatapathTrace> pipeline_quotient(const Modulus& m, u64 lambda, int stages);

// The (w+2)-bit window of T = lambda - b*q, assembled from four addends that
// need no multiplier: T = lambda - b*2^w + b*2^u - s*b* (mod 2^(w+2)), with
// -b* supplied as a complement plus carries folded into the top addend.
inline AdjustRecord window_adjust(const Modulus& m, u64 lambda, u64 b_star) {
    const u64 mask = low_mask(m.w + 2);
    AdjustRecord r;
    r.addends[0] = lambda & mask;
    r.addends[1] = ((b_star & low_mask(m.w - m.u + 2)) << m.u) & mask;
    r.addends[2] = (m.sign == Sign::PLUS ? 0 - b_star : b_star) & mask;
    r.addends[3] = ((0 - b_star) & 3) << m.w;
    r.sum_low = (r.addends[0] + r.addends[1] + r.addends[2] + r.addends[3]) & mask;
    r.msb = static_cast<int>(r.sum_low >> (m.w + 1)) & 1;
    r.cmp_ge_q = (r.sum_low & low_mask(m.w + 1)) >= m.q ? 1 : 0;
    r.decision = r.msb ? -1 : (r.cmp_ge_q ? 1 : 0);
    return r;
}

// Final correction: decodes the window into -1/0/+1 and applies it. In
// verification mode the true quotient is recomputed and any |b* - b| >= 2
// state raises, since no single-step decision can recover it.
std::pair<u64, AdjustRecord> adjust_unit(const Modulus& m, u64 lambda, u64 b_star,
                                         CheckMode mode = CheckMode::release);

// Full datapath: t-stage pipeline (by default) followed by the adjust unit.
std::pair<u64, DatapathTrace> hw_divide(const Modulus& m, u64 lambda, int stages = -1,
                                        CheckMode mode = CheckMode::release);

// Allocation-free path for sweeps and benchmarks.
inline u64 hw_quotient(const Modulus& m, u64 lambda, int stages) {
    const u64 c = lambda >> m.w;
    u64 b = c;
    for (int i = 0; i < stages; ++i) {
        b = c + static_cast<u64>((static_cast<u128>(b) * m.e) >> m.w) + 1;
    }
    const u64 mask = low_mask(m.w + 2);
    u64 sum = (lambda & mask) + (((b & low_mask(m.w - m.u + 2)) << m.u) & mask) +
              ((m.sign == Sign::PLUS ? 0 - b : b) & mask) + (((0 - b) & 3) << m.w);
    sum &= mask;
    if ((sum >> (m.w + 1)) & 1) {
        return b - 1;
    }
    return (sum & low_mask(m.w + 1)) >= m.q ? b + 1 : b;
}

std::string format_trace(const Modulus& m, const DatapathTrace& trace);

} // namespace soldiv
