#include "iirr/report.hpp"

#include "iirr/run.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace iirr;

namespace {

const std::filesystem::path kScenarioDir = IIRR_SCENARIO_DIR;

Evaluation eval_bundled(const char* name) {
    return run_scenario(load_scenario(kScenarioDir / (std::string(name) + ".scenario")));
}

}  // namespace

TEST_CASE("the due-diligence record mirrors scenario and valuation") {
    auto e = eval_bundled("ff");
    const auto& r = e.record;

    CHECK(r.name == "ff");
    CHECK(r.instrument == "interest_only_balloon");
    CHECK(r.capital_type == "bic");
    CHECK(r.initial_investment.cents == 1'600'000'00);
    CHECK(r.term_years == 10);
    CHECK(r.tier == Tier::Tier1);
    CHECK(r.tier_total.cents == 1'600'000'00);
    CHECK(r.attribution_share == doctest::Approx(1.0));
    CHECK(r.evidence == EvidenceLevel::ScientificConsensus);
    CHECK(r.variability_haircut == doctest::Approx(1.0));
    CHECK(r.capital_class.kind == CapitalClassKind::BelowMarketImpact);
    CHECK(r.capital_class.catalytic);
    CHECK(r.hurdle.value == doctest::Approx(0.06));
    CHECK(r.financial_irr_found);
    CHECK(r.financial_irr.value == doctest::Approx(0.02).epsilon(1e-7));
    CHECK(r.impact_irr_found);
    CHECK(r.impact_irr.value == doctest::Approx(0.1183216251).epsilon(1e-6));
    CHECK_FALSE(r.multiple_irr_roots);
    CHECK(r.inpv_at_hurdle.cents == 68'680'358);
    CHECK(r.timeline.size() == 10);
    CHECK(r.recommendation == Recommendation::ConsiderForInvestment);
    CHECK(r.notes.empty());
}

TEST_CASE("per-unit outcomes divide the attributed impact") {
    auto e = eval_bundled("ff");
    REQUIRE(e.record.outcomes.has_value());
    const auto& o = *e.record.outcomes;
    CHECK(o.unit_count == 42);
    CHECK(o.unit_label == "household");
    CHECK(o.annual_attributed_impact.cents == 15'731'460);
    CHECK(o.per_unit_annual.cents == 374'559);      // 3,745.59 a year
    CHECK(o.per_unit_over_term.cents == 3'745'586); // 37,455.86 over the hold

    // No unit count declared -> no outcome block.
    auto learn = eval_bundled("learn");
    CHECK_FALSE(learn.record.outcomes.has_value());
}

TEST_CASE("recommendation is conservative") {
    // Positive INPV on decision-grade evidence: consider.
    CHECK(eval_bundled("ff").record.recommendation == Recommendation::ConsiderForInvestment);

    // Narrative evidence never clears the bar, whatever the numbers say.
    auto s = load_scenario(kScenarioDir / "ff.scenario");
    s.investment.evidence = EvidenceLevel::Narrative;
    auto narrative = run_scenario(s);
    CHECK(narrative.record.recommendation == Recommendation::InsufficientData);
    bool noted = false;
    for (const auto& n : narrative.record.notes) {
        noted = noted || n.find("narrative") != std::string::npos;
    }
    CHECK(noted);

    // Negative INPV: insufficient, not an automatic decline.
    s = load_scenario(kScenarioDir / "ff.scenario");
    s.investment.hurdle = ExplicitHurdle{Rate{0.15}};  // above the 11.8% impact IRR
    auto under = run_scenario(s);
    CHECK(under.record.inpv_at_hurdle.cents < 0);
    CHECK(under.record.recommendation == Recommendation::InsufficientData);
    CHECK(under.record.recommendation != Recommendation::Decline);
}

TEST_CASE("recommendation tokens round-trip") {
    for (auto r : {Recommendation::ConsiderForInvestment, Recommendation::Decline,
                   Recommendation::InsufficientData})
        CHECK(parse_recommendation(to_string(r)) == r);
    CHECK_THROWS_AS(parse_recommendation("maybe"), ParseError);
}

TEST_CASE("json rendering is invertible") {
    for (const char* name : {"ff", "lisc", "ffcp-dt1", "ffcp-dt2", "learn"}) {
        auto e = eval_bundled(name);
        auto text = render_json(e.record);
        auto back = parse_report_json(text);
        CHECK(back == e.record);
        CHECK(render_json(back) == text);
    }
}

TEST_CASE("json rendering survives missing IRRs") {
    // An all-negative impact stream on a grant-like note: no impact IRR.
    ScenarioFile s;
    s.name = "no-root";
    s.investment.initial_investment = MoneyAmount::from_dollars(1'000'000);
    s.investment.term = TermSpec{3};
    s.investment.instrument = EquityExit{MoneyAmount::from_dollars(1), 3};
    s.investment.tier_total = s.investment.initial_investment;
    s.investment.hurdle = ExplicitHurdle{Rate{0.05}};
    s.investment.evidence = EvidenceLevel::EmpiricalEvidence;
    ExplicitModel m;
    m.values = {MoneyAmount::from_dollars(-10), MoneyAmount::from_dollars(-10),
                MoneyAmount::from_dollars(-10)};
    s.impact_model = m;

    auto e = run_scenario(s);
    CHECK_FALSE(e.record.impact_irr_found);
    CHECK(e.record.recommendation == Recommendation::InsufficientData);
    auto text = render_json(e.record);
    CHECK(text.find("\"impact_irr\": null") != std::string::npos);
    auto back = parse_report_json(text);
    CHECK(back == e.record);
}

TEST_CASE("csv timeline matches the frozen golden rows") {
    auto e = eval_bundled("ff");
    auto csv = render_csv_timeline(e.record);
    std::string want =
        "year,financial,impact_attributed,total,discounted\n"
        "1,32000.00,157314.60,189314.60,178598.68\n";
    CHECK(csv.substr(0, want.size()) == want);
    // Ten data rows plus the header.
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 11);
    CHECK(csv.find("10,1632000.00,157314.60,1789314.60,") != std::string::npos);
}

TEST_CASE("text rendering is deterministic and complete") {
    auto e = eval_bundled("lisc");
    auto a = render_text(e.record);
    auto b = render_text(eval_bundled("lisc").record);
    CHECK(a == b);

    for (const char* needle :
         {"Impact valuation record: lisc", "level_amortizing over 14 years", "4.25%", "44.41%",
          "market_rate_impact, catalytic", "Recommendation: consider_for_investment",
          "year", "$2,545,000"}) {
        INFO("missing: ", needle);
        CHECK(a.find(needle) != std::string::npos);
    }

    // Notes render as bullets when present.
    auto s = load_scenario(kScenarioDir / "ff.scenario");
    s.investment.evidence = EvidenceLevel::Narrative;
    auto narrative_text = render_text(run_scenario(s).record);
    CHECK(narrative_text.find("Notes") != std::string::npos);
}

TEST_CASE("report json parsing is strict") {
    auto e = eval_bundled("ff");
    auto text = render_json(e.record);
    CHECK_THROWS_AS(parse_report_json("{]"), ParseError);
    CHECK_THROWS_AS(parse_report_json("{}"), ParseError);
    auto broken = text;
    broken.replace(broken.find("\"schema_version\": 1"), 19, "\"schema_version\": 3");
    CHECK_THROWS_AS(parse_report_json(broken), ParseError);
}
