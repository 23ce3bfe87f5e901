#pragma once

#include <string>
#include <vector>

#include "soldiv/divider.hpp"
#include "soldiv/hwmodel.hpp"
#include "soldiv/modulus.hpp"

namespace soldiv {

enum class SweepKind { EXHAUSTIVE, RANDOM };

inline const char* to_string(SweepKind k) {
    return k == SweepKind::EXHAUSTIVE ? "EXHAUSTIVE" : "RANDOM";
}

// EXHAUSTIVE covers every lambda in [0, 2^(2w)); guarded to w <= 12.
// RANDOM evaluates `samples` seeded draws plus the structured edge set.
struct SweepSpec {
    SweepKind kind = SweepKind::EXHAUSTIVE;
    u64 seed = 0;
    u64 samples = 0; // requested random draws; ignored for EXHAUSTIVE
};

// Boundary dividends where adjustment logic is most stressed: around 0, q,
// 2^w and the extreme multiples of q. Sorted, deduplicated, clamped to the
// dividend range.
std::vector<u64> structured_edges(const Modulus& m);

// Worker-thread cap: SOLINAS_DIV_THREADS if set (must parse as a positive
// integer), else hardware concurrency. Shard boundaries never depend on it,
// so results are identical at any thread count.
int thread_cap();

struct CensusRow {
    int w = 0;
    int u = 0;
    Sign sign = Sign::PLUS;
    u64 q = 0;
    int predicted_t = 0;
    int max_updates = 0;
    u64 argmax_lambda = 0;          // smallest lambda attaining max_updates
    int updates_at_lambda_max = 0;  // update count at lambda = 2^(2w) - 1
    int min_stages = 0;             // -1 when no stage count <= 2w suffices
    SweepKind sweep_kind = SweepKind::EXHAUSTIVE;
    u64 seed = 0;
    u64 samples = 0; // lambdas actually evaluated
};

// One row per (u, sign) at the given width, u ascending, +1 before -1.
std::vector<CensusRow> loop_census(int w, const SweepSpec& spec);

// Smallest k such that the k-stage pipeline plus adjust unit reproduces the
// oracle quotient for every swept lambda; -1 if no k <= 2w does.
int min_sufficient_stages(const Modulus& m, const SweepSpec& spec);

struct PropertyResult {
    std::string name;
    bool pass = true;
    bool has_counterexample = false;
    u64 counterexample = 0;
    std::string detail;
};

struct TheoremReport {
    Modulus m;
    SweepSpec spec;
    std::vector<PropertyResult> properties;
    int max_updates = 0;
    int discrepancy = 0; // max_updates - predicted t
    bool all_pass = false;
};

// Sweeps the iteration and checks the claimed structural properties:
// monotone f-chain bounded by c, iterate upper bounds, update count maximal
// at the top dividend, and b* landing within one of the true quotient. A
// strictly-increasing variant of the chain property is reported alongside
// but does not gate all_pass.
TheoremReport check_theorems(const Modulus& m, const SweepSpec& spec);

const PropertyResult* find_property(const TheoremReport& rep, const std::string& name);

std::string census_csv(const std::vector<CensusRow>& rows);

} // namespace soldiv
