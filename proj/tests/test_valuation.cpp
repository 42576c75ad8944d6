#include "iirr/valuation.hpp"

#include "iirr/cashflow.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace iirr;

namespace {

AnnualSeries series_dollars(std::initializer_list<long long> dollars) {
    std::vector<MoneyAmount> v;
    for (long long d : dollars) v.push_back(MoneyAmount::from_dollars(d));
    return AnnualSeries(std::move(v));
}

AnnualSeries zeros(int years) {
    return AnnualSeries(std::vector<MoneyAmount>(static_cast<std::size_t>(years)));
}

// The preservation case: 2% interest-only balloon plus a flat rent-gap stream.
struct PreservationCase {
    AnnualSeries financial;
    AnnualSeries impact;
    MoneyAmount c0 = MoneyAmount::from_dollars(1'600'000);
};

PreservationCase preservation_case() {
    PreservationCase c;
    std::vector<MoneyAmount> fin(10, MoneyAmount::from_dollars(32'000));
    fin.back() = MoneyAmount::from_dollars(1'632'000);
    c.financial = AnnualSeries(std::move(fin));
    c.impact = AnnualSeries(std::vector<MoneyAmount>(10, MoneyAmount::from_cents(15'731'460)));
    return c;
}

}  // namespace

TEST_CASE("attribution factors are validated and served per year") {
    auto u = Attribution::uniform(0.6);
    CHECK(u.is_uniform());
    CHECK(u.at_year(1) == doctest::Approx(0.6));
    CHECK(u.at_year(99) == doctest::Approx(0.6));

    auto p = Attribution::per_year({1.0, 0.6, 0.6});
    CHECK_FALSE(p.is_uniform());
    CHECK(p.years() == 3);
    CHECK(p.at_year(2) == doctest::Approx(0.6));
    CHECK_THROWS_AS(p.at_year(0), std::out_of_range);
    CHECK_THROWS_AS(p.at_year(4), std::out_of_range);

    CHECK_THROWS_AS(Attribution::uniform(-0.1), ValidationError);
    CHECK_THROWS_AS(Attribution::uniform(1.1), ValidationError);
    CHECK_THROWS_AS(Attribution::per_year({}), ValidationError);
    CHECK_THROWS_AS(Attribution::per_year({0.5, 1.2}), ValidationError);
    CHECK_NOTHROW(Attribution::uniform(0.0));  // zero share is a valid sweep point
}

TEST_CASE("attribution share is the investment's fraction of tier capital") {
    CHECK(attribution_factor(MoneyAmount::from_dollars(12'000'000),
                             MoneyAmount::from_dollars(20'000'000)) == doctest::Approx(0.6));
    CHECK(attribution_factor(MoneyAmount::from_dollars(5), MoneyAmount::from_dollars(5)) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(attribution_factor(MoneyAmount{}, MoneyAmount::from_dollars(5)),
                    ValidationError);
    CHECK_THROWS_AS(
        attribution_factor(MoneyAmount::from_dollars(6), MoneyAmount::from_dollars(5)),
        ValidationError);
}

TEST_CASE("inpv agrees with a long-double oracle") {
    auto c = preservation_case();
    for (double r : {0.0, 0.02, 0.06, 0.118321625, 0.25, -0.5}) {
        auto got = inpv(c.financial, c.impact, Attribution::uniform(1.0), Rate{r}, c.c0);
        long double want = oracle::npv_cents(c.financial, c.impact, 1.0, r, c.c0);
        CHECK(std::abs(static_cast<long double>(got.cents) - want) <= 1.0L);
    }
    // Frozen: INPV at the 6% opportunity-cost hurdle.
    CHECK(inpv(c.financial, c.impact, Attribution::uniform(1.0), Rate{0.06}, c.c0).cents ==
          68'680'358);
}

TEST_CASE("inpv validates shapes and the rate domain") {
    auto c = preservation_case();
    CHECK_THROWS_AS(inpv(c.financial, zeros(9), Attribution::uniform(1.0), Rate{0.05}, c.c0),
                    ValidationError);
    CHECK_THROWS_AS(
        inpv(c.financial, c.impact, Attribution::per_year({1.0, 1.0}), Rate{0.05}, c.c0),
        ValidationError);
    CHECK_THROWS_AS(inpv(c.financial, c.impact, Attribution::uniform(1.0), Rate{-1.0}, c.c0),
                    ValidationError);
}

TEST_CASE("impact IRR reproduces the frozen roots of the bundled cases") {
    // Preservation case.
    auto c = preservation_case();
    auto r = impact_irr(c.financial, c.impact, Attribution::uniform(1.0), c.c0);
    CHECK_FALSE(r.multiple_roots);
    CHECK(r.headline.value == doctest::Approx(0.1183216251).epsilon(1e-6));
    CHECK(std::abs(inpv_cents_exact(c.financial, c.impact, Attribution::uniform(1.0),
                                    r.headline.value, c.c0)) < 1.0);

    // Senior-housing refinance: 14 annuity payments plus a growing subsidy.
    std::vector<MoneyAmount> imp;
    double base = 83'414'304.0;
    for (int t = 1; t <= 14; ++t) {
        imp.push_back(MoneyAmount{std::llround(base)});
        base *= 1.03;
    }
    AnnualSeries lisc_imp(std::move(imp));
    AnnualSeries lisc_fin(std::vector<MoneyAmount>(14, MoneyAmount::from_cents(24'492'585)));
    auto lisc = impact_irr(lisc_fin, lisc_imp, Attribution::uniform(1.0),
                           MoneyAmount::from_dollars(2'545'000));
    CHECK(lisc.headline.value == doctest::Approx(0.4440803699).epsilon(1e-6));

    // Revenue-based financing tiers (explicit impact rows).
    std::vector<MoneyAmount> dt1_fin(7, MoneyAmount::from_dollars(840'000));
    for (int t = 4; t <= 7; ++t) dt1_fin[static_cast<std::size_t>(t - 1)] =
        MoneyAmount::from_cents(354'273'740);
    auto dt1 = impact_irr(AnnualSeries(dt1_fin),
                          series_dollars({1'200'000, 1'725'000, 2'550'000, 2'835'000, 4'905'000,
                                          5'310'000, 5'715'000}),
                          Attribution::uniform(1.0), MoneyAmount::from_dollars(12'000'000));
    CHECK(dt1.headline.value == doctest::Approx(0.3117495755).epsilon(1e-6));

    auto dt2 = impact_irr(
        AnnualSeries(std::vector<MoneyAmount>(4, MoneyAmount::from_cents(236'182'493))),
        series_dollars({1'890'000, 3'270'000, 3'540'000, 3'810'000}), Attribution::uniform(1.0),
        MoneyAmount::from_dollars(8'000'000));
    CHECK(dt2.headline.value == doctest::Approx(0.5263275388).epsilon(1e-6));

    // Education equity: a 9x exit in year 10 over uplift rows.
    std::vector<MoneyAmount> learn_fin(10);
    learn_fin.back() = MoneyAmount::from_dollars(18'000'000);
    auto learn = impact_irr(AnnualSeries(learn_fin),
                            series_dollars({0, -3'000, -7'000, 11'000, 81'000, 210'000, 411'000,
                                            773'000, 1'332'000, 2'245'000}),
                            Attribution::uniform(1.0), MoneyAmount::from_dollars(2'000'000));
    CHECK(learn.headline.value == doctest::Approx(0.2871565665).epsilon(1e-6));
}

TEST_CASE("financial IRR of a clean balloon equals its coupon") {
    InvestmentSpec spec;
    spec.initial_investment = MoneyAmount::from_dollars(1'600'000);
    spec.term = TermSpec{10};
    spec.instrument = InterestOnlyBalloon{Rate{0.02}};
    spec.tier_total = spec.initial_investment;
    spec.evidence = EvidenceLevel::ScientificConsensus;

    auto r = financial_irr(build_financial_series(spec), spec.initial_investment);
    CHECK(r.headline.value == doctest::Approx(0.02).epsilon(1e-8));
    CHECK_FALSE(r.multiple_roots);

    // A 9x exit over ten years: (1+r)^10 == 9.
    std::vector<MoneyAmount> exit_fin(10);
    exit_fin.back() = MoneyAmount::from_dollars(18'000'000);
    auto exit_irr = financial_irr(AnnualSeries(exit_fin), MoneyAmount::from_dollars(2'000'000));
    CHECK(exit_irr.headline.value == doctest::Approx(std::pow(9.0, 0.1) - 1.0).epsilon(1e-9));
}

TEST_CASE("sign-alternating flows yield both roots, smallest first") {
    // -100, +230, -132: (1+r) roots at 1.1 and 1.2 exactly.
    AnnualSeries fin = series_dollars({230, -132});
    auto r = impact_irr(fin, zeros(2), Attribution::uniform(1.0), MoneyAmount::from_dollars(100));
    REQUIRE(r.roots.size() == 2);
    CHECK(r.multiple_roots);
    CHECK(r.headline.value == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(r.roots[0].value == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(r.roots[1].value == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("IRR failures are SolveErrors with distinct causes") {
    // All flows the same sign: no root can exist.
    CHECK_THROWS_WITH_AS(
        impact_irr(series_dollars({-10, -10}), zeros(2), Attribution::uniform(1.0),
                   MoneyAmount::from_dollars(100)),
        "IRR undefined: cash flows (including the initial investment) never change sign",
        SolveError);

    // Sign change exists but the root lies beyond the domain: -1 + 12/(1+r).
    CHECK_THROWS_AS(impact_irr(series_dollars({12}), zeros(1), Attribution::uniform(1.0),
                               MoneyAmount::from_dollars(1)),
                    SolveError);
}

TEST_CASE("hurdle policies resolve to concrete rates") {
    InvestmentSpec spec;
    spec.initial_investment = MoneyAmount::from_dollars(2'545'000);
    spec.term = TermSpec{14};
    spec.instrument = LevelAmortizing{Rate{0.0425}};
    spec.tier_total = spec.initial_investment;
    spec.capital_type = CapitalType::MIC;
    spec.evidence = EvidenceLevel::ScientificConsensus;

    spec.hurdle = ExplicitHurdle{Rate{0.07}};
    CHECK(resolve_hurdle_rate(spec).value == doctest::Approx(0.07));

    spec.hurdle = BicOpportunityCost{Rate{0.06}};
    CHECK(resolve_hurdle_rate(spec).value == doctest::Approx(0.06));

    // Own-rate capital discounts at the instrument's own financial IRR.
    spec.hurdle = MicOwnRate{};
    CHECK(resolve_hurdle_rate(spec).value == doctest::Approx(0.0425).epsilon(1e-7));
}

TEST_CASE("value_investment assembles a coherent result") {
    auto c = preservation_case();
    ValuationInputs in;
    in.financial = c.financial;
    in.impact = c.impact;
    in.attribution = Attribution::uniform(1.0);
    in.initial_investment = c.c0;
    in.hurdle = Rate{0.06};
    in.declared_attribution = 1.0;

    auto res = value_investment(in);
    CHECK(res.inpv_at_hurdle.cents == 68'680'358);
    CHECK(res.impact_irr_found);
    CHECK(res.financial_irr_found);
    CHECK(res.impact_irr.value == doctest::Approx(0.1183216251).epsilon(1e-6));
    CHECK(res.financial_irr.value == doctest::Approx(0.02).epsilon(1e-7));
    CHECK_FALSE(res.multiple_roots);
    CHECK(res.attribution_share == doctest::Approx(1.0));

    REQUIRE(res.timeline.size() == 10);
    CHECK(res.timeline[0].year == 1);
    CHECK(res.timeline[0].financial.cents == 32'000'00);
    CHECK(res.timeline[0].impact.cents == 15'731'460);
    CHECK(res.timeline[0].total.cents == 32'000'00 + 15'731'460);
    // discounted = total / 1.06
    CHECK(res.timeline[0].discounted.cents ==
          std::llround((32'000'00 + 15'731'460) / 1.06));
    CHECK(res.timeline[9].financial.cents == 1'632'000'00);

    // The PV split re-sums to the INPV up to independent cent rounding.
    CHECK(std::abs((res.pv_financial.cents + res.pv_impact.cents - c.c0.cents) -
                   res.inpv_at_hurdle.cents) <= 1);
    CHECK(res.nominal_financial_total.cents == 1'920'000'00);
    CHECK(res.nominal_impact_total.cents == 157'314'600);

    // Discounting at the impact IRR itself zeroes the INPV.
    in.hurdle = res.impact_irr;
    auto at_root = value_investment(in);
    CHECK(std::abs(at_root.inpv_at_hurdle.cents) <= 1);
}

TEST_CASE("value_investment records solver failures instead of throwing") {
    ValuationInputs in;
    in.financial = series_dollars({-5, -5});
    in.impact = zeros(2);
    in.attribution = Attribution::uniform(1.0);
    in.initial_investment = MoneyAmount::from_dollars(100);
    in.hurdle = Rate{0.05};

    auto res = value_investment(in);
    CHECK_FALSE(res.impact_irr_found);
    CHECK_FALSE(res.financial_irr_found);
    CHECK(!res.impact_irr_note.empty());
    CHECK(!res.financial_irr_note.empty());
    CHECK(res.inpv_at_hurdle.cents < 0);  // the valuation itself still runs
}

TEST_CASE("per-year attribution weights the impact leg year by year") {
    AnnualSeries fin = series_dollars({0, 0});
    AnnualSeries imp = series_dollars({1000, 1000});
    auto a = Attribution::per_year({1.0, 0.5});
    auto v = inpv(fin, imp, a, Rate{0.0}, MoneyAmount::from_dollars(0));
    // No c0 is invalid for attribution_factor but fine for inpv itself.
    CHECK(v.cents == 1000'00 + 500'00);
}

TEST_CASE("solver config is validated") {
    auto c = preservation_case();
    SolverConfig bad;
    bad.scan_step = 0.0;
    CHECK_THROWS_AS(impact_irr(c.financial, c.impact, Attribution::uniform(1.0), c.c0, bad),
                    ValidationError);
    bad = SolverConfig{};
    bad.lo = -1.5;
    CHECK_THROWS_AS(impact_irr(c.financial, c.impact, Attribution::uniform(1.0), c.c0, bad),
                    ValidationError);
}
