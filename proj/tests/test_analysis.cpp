#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "soldiv/analysis.hpp"
#include "soldiv/errors.hpp"

using namespace soldiv;

namespace {

const SweepSpec kExhaustive{SweepKind::EXHAUSTIVE, 0, 0};

struct EnvGuard {
    std::string name;
    explicit EnvGuard(const std::string& n, const std::string& value) : name(n) {
        setenv(name.c_str(), value.c_str(), 1);
    }
    ~EnvGuard() { unsetenv(name.c_str()); }
};

} // namespace

TEST_CASE("structured edges are sorted, unique and in range") {
    Modulus m = make_modulus(8, 3, Sign::PLUS);
    auto edges = structured_edges(m);
    CHECK(std::is_sorted(edges.begin(), edges.end()));
    CHECK(std::adjacent_find(edges.begin(), edges.end()) == edges.end());
    for (u64 v : {u64{0}, u64{1}, m.q - 1, m.q, m.q + 1, u64{255}, u64{256}, u64{65535},
                  263 * m.q, 263 * m.q - 1}) { // 263 = floor(65535 / 249)
        CHECK(std::binary_search(edges.begin(), edges.end(), v));
    }
    CHECK(edges.back() == 65535);
}

TEST_CASE("census matches the frozen exhaustive table at w = 3") {
    CHECK(census_csv(loop_census(3, kExhaustive)) ==
          "w,u,sign,q,predicted_t,max_updates,argmax_lambda,updates_at_lambda_max,"
          "min_stages,sweep_kind,seed,samples\n"
          "3,1,+1,7,1,1,8,1,1,EXHAUSTIVE,0,64\n"
          "3,1,-1,5,1,3,56,3,2,EXHAUSTIVE,0,64\n"
          "3,2,+1,5,3,3,56,3,2,EXHAUSTIVE,0,64\n"
          "3,2,-1,3,3,5,40,5,-1,EXHAUSTIVE,0,64\n");
}

TEST_CASE("census matches the frozen exhaustive table at w = 8") {
    CHECK(census_csv(loop_census(8, kExhaustive)) ==
          "w,u,sign,q,predicted_t,max_updates,argmax_lambda,updates_at_lambda_max,"
          "min_stages,sweep_kind,seed,samples\n"
          "8,1,+1,255,1,1,256,1,1,EXHAUSTIVE,0,65536\n"
          "8,1,-1,253,1,2,21760,2,1,EXHAUSTIVE,0,65536\n"
          "8,2,+1,253,1,2,21760,2,1,EXHAUSTIVE,0,65536\n"
          "8,2,-1,251,1,2,13056,2,1,EXHAUSTIVE,0,65536\n"
          "8,3,+1,249,1,2,9216,2,1,EXHAUSTIVE,0,65536\n"
          "8,3,-1,247,1,2,7168,2,1,EXHAUSTIVE,0,65536\n"
          "8,4,+1,241,2,2,4352,2,1,EXHAUSTIVE,0,65536\n"
          "8,4,-1,239,2,3,57600,2,2,EXHAUSTIVE,0,65536\n"
          "8,5,+1,225,2,3,16896,3,2,EXHAUSTIVE,0,65536\n"
          "8,5,-1,223,2,3,15616,2,2,EXHAUSTIVE,0,65536\n"
          "8,6,+1,193,4,4,16640,4,4,EXHAUSTIVE,0,65536\n"
          "8,6,-1,191,4,5,49664,4,4,EXHAUSTIVE,0,65536\n"
          "8,7,+1,129,8,8,35072,8,8,EXHAUSTIVE,0,65536\n"
          "8,7,-1,127,8,10,65280,10,-1,EXHAUSTIVE,0,65536\n");
}

TEST_CASE("stage sufficiency worked examples") {
    CHECK(min_sufficient_stages(make_modulus(8, 3, Sign::PLUS), kExhaustive) == 1);
    CHECK(min_sufficient_stages(make_modulus(8, 5, Sign::PLUS), kExhaustive) == 2);
    CHECK(min_sufficient_stages(make_modulus(8, 6, Sign::MINUS), kExhaustive) == 4);
    // No stage count up to 2w rescues q = 2^(w-1) - 1: the pipeline parks two
    // short of the quotient for some dividends.
    CHECK(min_sufficient_stages(make_modulus(8, 7, Sign::MINUS), kExhaustive) == -1);
    CHECK(min_sufficient_stages(make_modulus(3, 2, Sign::MINUS), kExhaustive) == -1);
}

TEST_CASE("exhaustive sweeps refuse w > 12") {
    SweepSpec spec = kExhaustive;
    CHECK_THROWS_AS(loop_census(13, spec), ResourceLimitError);
    CHECK_THROWS_AS(min_sufficient_stages(make_modulus(16, 3, Sign::PLUS), spec),
                    ResourceLimitError);
    CHECK_THROWS_AS(check_theorems(make_modulus(16, 3, Sign::PLUS), spec),
                    ResourceLimitError);
    CHECK_NOTHROW(loop_census(3, spec));
}

TEST_CASE("random census is deterministic and counts edge evaluations") {
    SweepSpec spec{SweepKind::RANDOM, 42, 5000};
    auto rows1 = loop_census(16, spec);
    auto rows2 = loop_census(16, spec);
    CHECK(census_csv(rows1) == census_csv(rows2));
    REQUIRE(rows1.size() == 30);
    for (const CensusRow& r : rows1) {
        CHECK(r.sweep_kind == SweepKind::RANDOM);
        CHECK(r.seed == 42);
        CHECK(r.samples > 5000);      // draws plus the structured edges
        CHECK(r.samples <= 5000 + 20);
        CHECK(r.max_updates >= 1);
    }
    CHECK(rows1[0].u == 1);
    CHECK(rows1[0].sign == Sign::PLUS);
    CHECK(rows1[0].q == 65535);
    CHECK(rows1[29].u == 15);
    CHECK(rows1[29].sign == Sign::MINUS);
    CHECK(rows1[29].q == 32767);
}

TEST_CASE("results do not depend on the worker thread cap") {
    std::string base;
    {
        EnvGuard guard("SOLINAS_DIV_THREADS", "1");
        base = census_csv(loop_census(8, kExhaustive));
    }
    {
        EnvGuard guard("SOLINAS_DIV_THREADS", "3");
        CHECK(census_csv(loop_census(8, kExhaustive)) == base);
    }
    {
        EnvGuard guard("SOLINAS_DIV_THREADS", "8");
        CHECK(census_csv(loop_census(8, kExhaustive)) == base);
    }
}

TEST_CASE("malformed thread cap is rejected") {
    {
        EnvGuard guard("SOLINAS_DIV_THREADS", "zero");
        CHECK_THROWS_AS(thread_cap(), ParameterError);
    }
    {
        EnvGuard guard("SOLINAS_DIV_THREADS", "0");
        CHECK_THROWS_AS(thread_cap(), ParameterError);
    }
    {
        EnvGuard guard("SOLINAS_DIV_THREADS", "4");
        CHECK(thread_cap() == 4);
    }
    CHECK(thread_cap() >= 1);
}

TEST_CASE("property report on a fully clean modulus") {
    TheoremReport rep = check_theorems(make_modulus(8, 3, Sign::PLUS), kExhaustive);
    CHECK(rep.all_pass);
    CHECK(rep.max_updates == 2);
    CHECK(rep.discrepancy == 1);
    REQUIRE(rep.properties.size() == 5);
    const PropertyResult* mono = find_property(rep, "f_chain_monotone");
    REQUIRE(mono != nullptr);
    CHECK(mono->pass);
    CHECK(find_property(rep, "iterate_bound")->pass);
    CHECK(find_property(rep, "updates_le_lambda_max")->pass);
    CHECK(find_property(rep, "b_star_membership")->pass);
    // Strict increase is the one structural claim that does not survive:
    // stalls like f = [..., x, x, ...] appear as soon as a delta is small.
    const PropertyResult* strict = find_property(rep, "f_chain_strict");
    REQUIRE(strict != nullptr);
    CHECK(!strict->pass);
    CHECK(strict->has_counterexample);
    CHECK(strict->counterexample == 9216);
}

TEST_CASE("property report records the depth discrepancy at q = 225") {
    TheoremReport rep = check_theorems(make_modulus(8, 5, Sign::PLUS), kExhaustive);
    CHECK(rep.all_pass);
    CHECK(rep.max_updates == 3);
    CHECK(rep.discrepancy == 1); // max updates 3 vs predicted depth 2
    CHECK(find_property(rep, "updates_le_lambda_max")->pass);
}

TEST_CASE("update count is not maximal at the top dividend for q = 239") {
    TheoremReport rep = check_theorems(make_modulus(8, 4, Sign::MINUS), kExhaustive);
    CHECK(!rep.all_pass);
    const PropertyResult* p = find_property(rep, "updates_le_lambda_max");
    REQUIRE(p != nullptr);
    CHECK(!p->pass);
    CHECK(p->counterexample == 57600); // 3 updates vs 2 at lambda = 2^16 - 1
    CHECK(find_property(rep, "b_star_membership")->pass);
    CHECK(find_property(rep, "iterate_bound")->pass);
}

TEST_CASE("membership fails only for the u = w-1 minus family") {
    TheoremReport rep = check_theorems(make_modulus(8, 7, Sign::MINUS), kExhaustive);
    CHECK(!rep.all_pass);
    const PropertyResult* memb = find_property(rep, "b_star_membership");
    REQUIRE(memb != nullptr);
    CHECK(!memb->pass);
    CHECK(memb->counterexample == 254);
    CHECK(find_property(rep, "f_chain_monotone")->pass);
    CHECK(find_property(rep, "iterate_bound")->pass);
    CHECK(find_property(rep, "updates_le_lambda_max")->pass);
    CHECK(rep.max_updates == 10);
}

TEST_CASE("random property sweep stays clean away from the defect family") {
    SweepSpec spec{SweepKind::RANDOM, 0, 20000};
    TheoremReport rep = check_theorems(make_modulus(16, 12, Sign::PLUS), spec);
    CHECK(find_property(rep, "f_chain_monotone")->pass);
    CHECK(find_property(rep, "iterate_bound")->pass);
    CHECK(find_property(rep, "b_star_membership")->pass);
    CHECK(rep.spec.kind == SweepKind::RANDOM);
    CHECK(rep.m.q == 61441);
}
