#include "soldiv/analysis.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <set>
#include <sstream>
#include <thread>

#include "soldiv/errors.hpp"

namespace soldiv {

namespace {

// Shard count is a fixed constant, not the thread count, so that argmax
// tie-breaking and random draw assignment never depend on the machine.
constexpr int kShards = 8;
constexpr int kExhaustiveMaxW = 12;

void validate_spec(int w, const SweepSpec& spec) {
    if (spec.kind == SweepKind::EXHAUSTIVE && w > kExhaustiveMaxW) {
        throw ResourceLimitError("exhaustive sweep at w=" + std::to_string(w) +
                                 " exceeds the w <= " + std::to_string(kExhaustiveMaxW) +
                                 " guard; use a RANDOM sweep");
    }
}

struct LoopStats {
    int max_updates = -1;
    u64 argmax = 0;
    u64 count = 0;
};

void absorb(LoopStats& s, int updates, u64 lambda) {
    if (updates > s.max_updates ||
        (updates == s.max_updates && lambda < s.argmax)) {
        s.max_updates = updates;
        s.argmax = lambda;
    }
    ++s.count;
}

LoopStats merge(LoopStats a, const LoopStats& b) {
    if (b.max_updates > a.max_updates ||
        (b.max_updates == a.max_updates && b.argmax < a.argmax)) {
        a.max_updates = b.max_updates;
        a.argmax = b.argmax;
    }
    a.count += b.count;
    return a;
}

template <typename Fn>
LoopStats run_shards(Fn&& fn) {
    int threads = std::min(thread_cap(), kShards);
    std::vector<LoopStats> out(kShards);
    if (threads <= 1) {
        for (int i = 0; i < kShards; ++i) {
            out[i] = fn(i);
        }
    } else {
        std::exception_ptr first_error;
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (int i = t; i < kShards; i += threads) {
                        out[i] = fn(i);
                    }
                } catch (...) {
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        if (first_error) {
            std::rethrow_exception(first_error);
        }
    }
    LoopStats total;
    for (const LoopStats& s : out) {
        total = merge(total, s);
    }
    return total;
}

// Applies fn to every lambda of one shard; shard kShards-1 additionally gets
// the structured edges under a RANDOM sweep.
template <typename Fn>
void shard_lambdas(const Modulus& m, const SweepSpec& spec,
                   const std::vector<u64>& edges, int shard, Fn&& fn) {
    if (spec.kind == SweepKind::EXHAUSTIVE) {
        u64 n = lambda_max(m) + 1;
        u64 lo = static_cast<u64>(static_cast<u128>(n) * shard / kShards);
        u64 hi = static_cast<u64>(static_cast<u128>(n) * (shard + 1) / kShards);
        for (u64 lambda = lo; lambda < hi; ++lambda) {
            fn(lambda);
        }
        return;
    }
    const u64 mask = low_mask(2 * m.w);
    u64 n = spec.samples;
    u64 lo = static_cast<u64>(static_cast<u128>(n) * shard / kShards);
    u64 hi = static_cast<u64>(static_cast<u128>(n) * (shard + 1) / kShards);
    for (u64 j = lo; j < hi; ++j) {
        fn(splitmix64_at(spec.seed, j) & mask);
    }
    if (shard == kShards - 1) {
        for (u64 lambda : edges) {
            fn(lambda);
        }
    }
}

} // namespace

std::vector<u64> structured_edges(const Modulus& m) {
    const u64 lmax = lambda_max(m);
    std::set<u64> s;
    auto add = [&](u64 v) {
        if (v <= lmax) {
            s.insert(v);
        }
    };
    add(0);
    add(1);
    add(m.q - 1);
    add(m.q);
    add(m.q + 1);
    add((u64{1} << m.w) - 1);
    add(u64{1} << m.w);
    add(lmax);
    u64 bmax = lmax / m.q;
    for (u64 b : {u64{1}, u64{2}, bmax - 1, bmax}) {
        u64 p = b * m.q;
        add(p - 1);
        add(p);
        add(p + 1);
    }
    return {s.begin(), s.end()};
}

int thread_cap() {
    const char* env = std::getenv("SOLINAS_DIV_THREADS");
    if (env != nullptr) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw ParameterError(std::string("SOLINAS_DIV_THREADS must be a positive integer, got '") +
                                 env + "'");
        }
        return static_cast<int>(std::min(v, long{256}));
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

int min_sufficient_stages(const Modulus& m, const SweepSpec& spec) {
    validate_spec(m.w, spec);
    std::vector<u64> edges = structured_edges(m);
    for (int k = 1; k <= 2 * m.w; ++k) {
        bool ok = true;
        // Edges first: an insufficient k usually dies on one of them.
        for (u64 lambda : edges) {
            if (hw_quotient(m, lambda, k) != lambda / m.q) {
                ok = false;
                break;
            }
        }
        if (ok && spec.kind == SweepKind::EXHAUSTIVE) {
            const u64 lmax = lambda_max(m);
            for (u64 lambda = 0; lambda <= lmax && ok; ++lambda) {
                ok = hw_quotient(m, lambda, k) == lambda / m.q;
            }
        } else if (ok) {
            const u64 mask = low_mask(2 * m.w);
            for (u64 j = 0; j < spec.samples && ok; ++j) {
                u64 lambda = splitmix64_at(spec.seed, j) & mask;
                ok = hw_quotient(m, lambda, k) == lambda / m.q;
            }
        }
        if (ok) {
            return k;
        }
    }
    return -1;
}

std::vector<CensusRow> loop_census(int w, const SweepSpec& spec) {
    validate_spec(w, spec);
    std::vector<CensusRow> rows;
    for (int u = 1; u <= w - 1; ++u) {
        for (Sign sign : {Sign::PLUS, Sign::MINUS}) {
            Modulus m = make_modulus(w, u, sign);
            std::vector<u64> edges = structured_edges(m);
            LoopStats stats = run_shards([&](int shard) {
                LoopStats s;
                shard_lambdas(m, spec, edges, shard, [&](u64 lambda) {
                    absorb(s, run_loop(m, lambda).updates, lambda);
                });
                return s;
            });
            CensusRow row;
            row.w = w;
            row.u = u;
            row.sign = sign;
            row.q = m.q;
            row.predicted_t = m.t;
            row.max_updates = stats.max_updates;
            row.argmax_lambda = stats.argmax;
            row.updates_at_lambda_max = run_loop(m, lambda_max(m)).updates;
            row.min_stages = min_sufficient_stages(m, spec);
            row.sweep_kind = spec.kind;
            row.seed = spec.seed;
            row.samples = stats.count;
            rows.push_back(row);
        }
    }
    return rows;
}

TheoremReport check_theorems(const Modulus& m, const SweepSpec& spec) {
    validate_spec(m.w, spec);
    TheoremReport rep;
    rep.m = m;
    rep.spec = spec;

    struct Tracker {
        bool pass = true;
        bool has_ce = false;
        u64 ce = 0;
        std::string detail;
    };
    Tracker strict, mono, bound, thm3, memb;
    auto fail = [](Tracker& t, u64 lambda, const std::string& detail) {
        if (t.pass) {
            t.pass = false;
            t.has_ce = true;
            t.ce = lambda;
            t.detail = detail;
        }
    };

    const int n_ref = run_loop(m, lambda_max(m)).updates;
    LoopStats stats;

    auto eval = [&](u64 lambda) {
        const u64 truth = lambda / m.q;
        const bool multiple = lambda % m.q == 0;
        const i64 c = static_cast<i64>(lambda >> m.w);
        const u64 iter_cap = multiple ? truth : truth + 1;
        i64 prev_f = 0;
        bool first = true;
        bool strict_ok = true, mono_ok = true, bound_ok = true;
        LoopResult res = fixed_point_scan(m, lambda, [&](int, u64 b, i64 fb, i64) {
            if (fb > c) {
                strict_ok = false;
                mono_ok = false;
            }
            if (!first) {
                if (fb <= prev_f) {
                    strict_ok = false;
                }
                if (fb < prev_f) {
                    mono_ok = false;
                }
            }
            prev_f = fb;
            first = false;
            if (b > iter_cap) {
                bound_ok = false;
            }
        });
        if (!strict_ok) {
            fail(strict, lambda, "f-chain not strictly increasing up to c");
        }
        if (!mono_ok) {
            fail(mono, lambda, "f-chain decreases or exceeds c");
        }
        if (!bound_ok) {
            fail(bound, lambda, "iterate exceeds " + std::to_string(iter_cap));
        }
        if (res.updates > n_ref) {
            fail(thm3, lambda, std::to_string(res.updates) + " updates > " +
                                   std::to_string(n_ref) + " at lambda_max");
        }
        const u64 bs = res.b_star;
        bool memb_ok = bs + 1 == truth || bs == truth || (!multiple && bs == truth + 1);
        if (!memb_ok) {
            fail(memb, lambda, "b* = " + std::to_string(bs) + " vs true quotient " +
                                   std::to_string(truth));
        }
        absorb(stats, res.updates, lambda);
    };

    if (spec.kind == SweepKind::EXHAUSTIVE) {
        const u64 lmax = lambda_max(m);
        for (u64 lambda = 0; lambda <= lmax; ++lambda) {
            eval(lambda);
        }
    } else {
        const u64 mask = low_mask(2 * m.w);
        for (u64 j = 0; j < spec.samples; ++j) {
            eval(splitmix64_at(spec.seed, j) & mask);
        }
        for (u64 lambda : structured_edges(m)) {
            eval(lambda);
        }
    }

    auto push = [&](const char* name, const Tracker& t) {
        rep.properties.push_back({name, t.pass, t.has_ce, t.ce, t.detail});
    };
    push("f_chain_monotone", mono);
    push("f_chain_strict", strict);
    push("iterate_bound", bound);
    push("updates_le_lambda_max", thm3);
    push("b_star_membership", memb);
    rep.max_updates = stats.max_updates;
    rep.discrepancy = stats.max_updates - m.t;
    rep.all_pass = mono.pass && bound.pass && thm3.pass && memb.pass;
    return rep;
}

const PropertyResult* find_property(const TheoremReport& rep, const std::string& name) {
    for (const PropertyResult& p : rep.properties) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

std::string census_csv(const std::vector<CensusRow>& rows) {
    std::ostringstream out;
    out << "w,u,sign,q,predicted_t,max_updates,argmax_lambda,updates_at_lambda_max,"
           "min_stages,sweep_kind,seed,samples\n";
    for (const CensusRow& r : rows) {
        out << r.w << ',' << r.u << ',' << to_string(r.sign) << ',' << r.q << ','
            << r.predicted_t << ',' << r.max_updates << ',' << r.argmax_lambda << ','
            << r.updates_at_lambda_max << ',' << r.min_stages << ',' << to_string(r.sweep_kind)
            << ',' << r.seed << ',' << r.samples << '\n';
    }
    return out.str();
}

} // namespace soldiv
