#include "soldiv/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "soldiv/analysis.hpp"
#include "soldiv/baselines.hpp"
#include "soldiv/divider.hpp"
#include "soldiv/errors.hpp"
#include "soldiv/hwmodel.hpp"
#include "soldiv/modulus.hpp"

namespace soldiv::cli {

namespace {

Sign parse_sign(const std::string& s) {
    if (s == "+1") {
        return Sign::PLUS;
    }
    if (s == "-1") {
        return Sign::MINUS;
    }
    throw ParameterError("sign must be +1 or -1, got '" + s + "'");
}

u64 parse_lambda(const std::string& s) {
    std::string digits = s;
    int base = 10;
    if (digits.size() > 2 && (digits.rfind("0x", 0) == 0 || digits.rfind("0X", 0) == 0)) {
        digits = digits.substr(2);
        base = 16;
    }
    u64 value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
        throw ParameterError("lambda '" + s + "' is not a decimal or 0x-prefixed integer");
    }
    return value;
}

void enforce_exhaustive_guard(int w, SweepKind kind) {
    if (kind == SweepKind::EXHAUSTIVE && w > 12) {
        throw ResourceLimitError("exhaustive sweep at w=" + std::to_string(w) +
                                 " exceeds the w <= 12 guard; use a RANDOM sweep");
    }
}

int do_params(const Modulus& m, std::ostream& out) {
    out << "q = " << m.q << '\n' << "e = " << m.e << '\n' << "t = " << m.t << '\n';
    return 0;
}

int do_div(const Modulus& m, u64 lambda, bool use_hw, bool use_exact, bool want_trace,
           int stages, std::ostream& out) {
    if (use_hw) {
        auto [quot, trace] = hw_divide(m, lambda, stages);
        if (want_trace) {
            out << format_trace(m, trace);
        }
        i128 rem = static_cast<i128>(lambda) - static_cast<i128>(quot) * m.q;
        out << "quotient = " << quot << '\n';
        out << "remainder = " << static_cast<i64>(rem) << '\n';
        return 0;
    }
    if (want_trace) {
        out << format_trace(m, fixed_point_quotient(m, lambda));
    }
    QuotRem r = use_exact ? exact_divide(m, lambda) : floor_divide(m, lambda);
    out << "quotient = " << r.quotient << '\n';
    out << "remainder = " << r.remainder << '\n';
    out << "branch = " << to_string(r.branch) << '\n';
    return 0;
}

struct DividerCheck {
    const char* name;
    bool failed = false;
    u64 first_lambda = 0;
    u64 got = 0;
    u64 want = 0;
};

int do_verify(int w, int u_filter, const std::string& sign_filter, const SweepSpec& spec,
              std::ostream& out) {
    enforce_exhaustive_guard(w, spec.kind);
    int mismatched = 0;
    for (int u = 1; u <= w - 1; ++u) {
        if (u_filter > 0 && u != u_filter) {
            continue;
        }
        for (Sign sign : {Sign::PLUS, Sign::MINUS}) {
            if (!sign_filter.empty() && parse_sign(sign_filter) != sign) {
                continue;
            }
            Modulus m = make_modulus(w, u, sign);
            BarrettParams bp = barrett_setup(m);
            MulShiftParams mp = mulshift_setup(m);
            DividerCheck checks[4] = {{"floor"}, {"hw"}, {"barrett"}, {"mulshift"}};
            auto probe = [&](u64 lambda) {
                u64 want = lambda / m.q;
                u64 got[4] = {floor_quotient(m, lambda), hw_quotient(m, lambda, m.t),
                              barrett_divide(bp, lambda), mulshift_divide_corrected(m, mp, lambda)};
                for (int i = 0; i < 4; ++i) {
                    if (!checks[i].failed && got[i] != want) {
                        checks[i].failed = true;
                        checks[i].first_lambda = lambda;
                        checks[i].got = got[i];
                        checks[i].want = want;
                    }
                }
                return checks[0].failed && checks[1].failed && checks[2].failed &&
                       checks[3].failed;
            };
            if (spec.kind == SweepKind::EXHAUSTIVE) {
                const u64 lmax = lambda_max(m);
                for (u64 lambda = 0; lambda <= lmax; ++lambda) {
                    if (probe(lambda)) {
                        break;
                    }
                }
            } else {
                const u64 mask = low_mask(2 * w);
                bool all_failed = false;
                for (u64 j = 0; j < spec.samples && !all_failed; ++j) {
                    all_failed = probe(splitmix64_at(spec.seed, j) & mask);
                }
                for (u64 lambda : structured_edges(m)) {
                    if (all_failed) {
                        break;
                    }
                    all_failed = probe(lambda);
                }
            }
            out << describe(m) << ":";
            for (int i = 0; i < 4; ++i) {
                out << (i ? ", " : " ") << checks[i].name;
                if (checks[i].failed) {
                    ++mismatched;
                    out << " FAIL at lambda=" << checks[i].first_lambda << " (got "
                        << checks[i].got << ", oracle " << checks[i].want << ")";
                } else {
                    out << " OK";
                }
            }
            out << '\n';
        }
    }
    if (mismatched == 0) {
        out << "verify: all dividers match the oracle\n";
        return 0;
    }
    out << "verify: " << mismatched << " mismatched divider/modulus pairs\n";
    return 1;
}

int do_census(int w, const SweepSpec& spec, const std::string& outpath, std::ostream& out) {
    std::string csv = census_csv(loop_census(w, spec));
    if (!outpath.empty()) {
        std::ofstream file(outpath);
        if (!file) {
            throw ParameterError("cannot open '" + outpath + "' for writing");
        }
        file << csv;
        return 0;
    }
    out << csv;
    return 0;
}

template <typename F>
double ns_per_call(u64 iters, const std::vector<u64>& lams, F&& f) {
    u64 sink = 0;
    const u64 mask = lams.size() - 1;
    for (u64 i = 0; i < (iters >> 4); ++i) {
        sink += f(lams[i & mask]); // warm-up
    }
    auto t0 = std::chrono::steady_clock::now();
    for (u64 i = 0; i < iters; ++i) {
        sink += f(lams[i & mask]);
    }
    auto t1 = std::chrono::steady_clock::now();
    asm volatile("" : : "r"(sink));
    return std::chrono::duration<double, std::nano>(t1 - t0).count() /
           static_cast<double>(iters);
}

int do_bench(const Modulus& m, u64 iters, std::ostream& out) {
    BarrettParams bp = barrett_setup(m);
    MulShiftParams mp = mulshift_setup(m);
    std::vector<u64> lams(4096);
    const u64 mask = low_mask(2 * m.w);
    for (u64 j = 0; j < lams.size(); ++j) {
        lams[j] = splitmix64_at(1, j) & mask;
    }
    struct RowOut {
        const char* name;
        double ns;
    };
    std::vector<RowOut> rows;
    rows.push_back({"proposed", ns_per_call(iters, lams, [&](u64 l) {
                        return floor_quotient(m, l);
                    })});
    rows.push_back({"hw-model", ns_per_call(iters, lams, [&](u64 l) {
                        return hw_quotient(m, l, m.t);
                    })});
    rows.push_back({"barrett", ns_per_call(iters, lams, [&](u64 l) {
                        return barrett_divide(bp, l);
                    })});
    rows.push_back({"mulshift", ns_per_call(iters, lams, [&](u64 l) {
                        return mulshift_divide_corrected(m, mp, l);
                    })});
    rows.push_back({"oracle", ns_per_call(iters, lams, [&](u64 l) { return l / m.q; })});
    out << describe(m) << " iters=" << iters << '\n';
    out << std::left << std::setw(10) << "path" << std::right << std::setw(10) << "ns/div"
        << std::setw(10) << "Mdiv/s" << '\n';
    out << std::fixed;
    for (const RowOut& r : rows) {
        out << std::left << std::setw(10) << r.name << std::right << std::setw(10)
            << std::setprecision(2) << r.ns << std::setw(10) << std::setprecision(1)
            << (r.ns > 0 ? 1000.0 / r.ns : 0.0) << '\n';
    }
    out << "note: silicon latency and area are out of scope; figures are software "
           "throughput on this host.\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Integer division for moduli q = 2^w - 2^u + 1 and 2^w - 2^u - 1"};
    app.require_subcommand(1);

    int w = 0, u = 0, stages = -1;
    std::string sign = "+1", lambda_str, mode = "exhaustive", outpath, verify_sign;
    bool trace = false, use_hw = false, use_exact = false;
    u64 samples = 1000000, seed = 0, iters = 2000000;
    int u_filter = -1;
    int rc = 0;

    auto add_wu = [&](CLI::App* sub) {
        sub->add_option("--w", w, "word width, 3..32")->required();
        sub->add_option("--u", u, "exponent gap, 1..w-1")->required();
        sub->add_option("--sign", sign, "+1 or -1 (default +1)");
    };

    CLI::App* p_params = app.add_subcommand("params", "print q, e and predicted depth t");
    add_wu(p_params);
    p_params->callback([&] { rc = do_params(make_modulus(w, u, parse_sign(sign)), out); });

    CLI::App* p_div = app.add_subcommand("div", "divide one lambda by q");
    add_wu(p_div);
    p_div->add_option("--lambda", lambda_str, "dividend, decimal or 0x hex")->required();
    p_div->add_flag("--trace", trace, "print per-iterate table");
    p_div->add_flag("--hw", use_hw, "use the pipelined datapath model");
    p_div->add_flag("--exact", use_exact, "require lambda to be a multiple of q");
    p_div->add_option("--stages", stages, "pipeline stages for --hw (default: t)");
    p_div->callback([&] {
        rc = do_div(make_modulus(w, u, parse_sign(sign)), parse_lambda(lambda_str), use_hw,
                    use_exact, trace, stages, out);
    });

    CLI::App* p_verify = app.add_subcommand("verify", "check dividers against the oracle");
    p_verify->add_option("--w", w, "word width, 3..32")->required();
    p_verify->add_option("--u", u_filter, "restrict to one exponent gap");
    p_verify->add_option("--sign", verify_sign, "restrict to +1 or -1");
    p_verify->add_option("--mode", mode, "exhaustive or random")
        ->required()
        ->check(CLI::IsMember({"exhaustive", "random"}));
    p_verify->add_option("--samples", samples, "random draws (default 1000000)");
    p_verify->add_option("--seed", seed, "random seed (default 0)");
    p_verify->callback([&] {
        SweepSpec spec{mode == "exhaustive" ? SweepKind::EXHAUSTIVE : SweepKind::RANDOM, seed,
                       samples};
        rc = do_verify(w, u_filter, verify_sign, spec, out);
    });

    CLI::App* p_census = app.add_subcommand("census", "per-modulus iteration statistics CSV");
    p_census->add_option("--w", w, "word width, 3..32")->required();
    p_census->add_option("--mode", mode, "exhaustive (default) or random")
        ->check(CLI::IsMember({"exhaustive", "random"}));
    p_census->add_option("--samples", samples, "random draws (default 1000000)");
    p_census->add_option("--seed", seed, "random seed (default 0)");
    p_census->add_option("--out", outpath, "write CSV to this file instead of stdout");
    p_census->callback([&] {
        SweepSpec spec{mode == "exhaustive" ? SweepKind::EXHAUSTIVE : SweepKind::RANDOM, seed,
                       samples};
        rc = do_census(w, spec, outpath, out);
    });

    CLI::App* p_bench = app.add_subcommand("bench", "software throughput of each divider");
    add_wu(p_bench);
    p_bench->add_option("--iters", iters, "iterations per path (default 2000000)");
    p_bench->callback([&] { rc = do_bench(make_modulus(w, u, parse_sign(sign)), iters, out); });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ResourceLimitError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}

} // namespace soldiv::cli
