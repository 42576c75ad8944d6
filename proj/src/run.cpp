#include "iirr/run.hpp"

#include "iirr/cashflow.hpp"

namespace iirr {

namespace {

HousingParams with_overrides(HousingParams p, const EvaluationOverrides& ov) {
    if (ov.vacancy) {
        if (*ov.vacancy < 0.0 || *ov.vacancy >= 1.0) {
            throw ValidationError("vacancy override must be in [0, 1)");
        }
        p.vacancy_rate = Rate{*ov.vacancy};
    }
    if (ov.growth) {
        if (*ov.growth <= -1.0) throw ValidationError("growth override must exceed -1");
        p.annual_growth = Rate{*ov.growth};
    }
    return p;
}

void reject_housing_overrides(const EvaluationOverrides& ov, const std::string& model) {
    if (ov.vacancy) {
        throw ValidationError("vacancy override requires a housing impact model, not " + model);
    }
    if (ov.growth) {
        throw ValidationError("growth override requires a housing impact model, not " + model);
    }
}

}  // namespace

AnnualSeries model_series(const ScenarioFile& s, const EvaluationOverrides& ov) {
    const TermSpec term = s.investment.term;
    struct Visitor {
        const EvaluationOverrides& ov;
        TermSpec term;
        AnnualSeries operator()(const RentGapModel& m) const {
            return rent_gap_series(m.roll, with_overrides(m.params, ov), term);
        }
        AnnualSeries operator()(const SubsidyModel& m) const {
            return subsidy_series(m.subsidies, with_overrides(m.params, ov), term);
        }
        AnnualSeries operator()(const JobsModel& m) const {
            reject_housing_overrides(ov, "jobs");
            return jobs_series(m.params, term);
        }
        AnnualSeries operator()(const IncomeUpliftModel& m) const {
            reject_housing_overrides(ov, "income_uplift");
            return income_uplift_series(m.params, term);
        }
        AnnualSeries operator()(const ExplicitModel& m) const {
            reject_housing_overrides(ov, "explicit");
            return AnnualSeries(m.values);
        }
    };
    return std::visit(Visitor{ov, term}, s.impact_model);
}

Evaluation run_scenario(const ScenarioFile& s, const EvaluationOverrides& ov) {
    validate(s.investment);

    AnnualSeries financial = build_financial_series(s.investment);
    AnnualSeries impact = apply_variability(model_series(s, ov), s.investment.variability_haircut);

    const double declared =
        attribution_factor(s.investment.initial_investment, s.investment.tier_total);

    Attribution attribution = Attribution::uniform(declared);
    if (ov.attribution) {
        if (*ov.attribution < 0.0 || *ov.attribution > 1.0) {
            throw ValidationError("attribution override must be in [0, 1]");
        }
        attribution = Attribution::uniform(*ov.attribution);
    } else if (const auto* m = std::get_if<ExplicitModel>(&s.impact_model);
               m != nullptr && !m->pre_attribution) {
        // Rows already embed the share; do not apply it twice.
        attribution = Attribution::uniform(1.0);
    } else if (s.attribution_per_year) {
        attribution = Attribution::per_year(*s.attribution_per_year);
    }

    Rate hurdle = ov.hurdle ? Rate{*ov.hurdle} : resolve_hurdle_rate(s.investment);
    if (!(hurdle.value > -1.0 && hurdle.value <= 10.0)) {
        throw ValidationError("hurdle must be in (-1, 10]");
    }

    ValuationInputs inputs{financial, impact, attribution, s.investment.initial_investment,
                           hurdle, declared};
    ValuationResult valuation = value_investment(inputs);

    Thresholds thresholds;
    thresholds.market_rate_floor = s.thresholds.market_rate_floor.value_or(hurdle);
    thresholds.impact_floor = s.thresholds.impact_floor;

    bool meets_floor = true;
    struct FloorVisitor {
        const ValuationResult& v;
        bool operator()(const ImpactFloorMet& f) const { return f.met; }
        bool operator()(const ImpactFloorAnnual& f) const {
            return !v.timeline.empty() && v.timeline.front().impact >= f.min_annual_impact;
        }
        bool operator()(const ImpactFloorIrr& f) const {
            return v.impact_irr_found && v.impact_irr.value >= f.min_impact_irr.value;
        }
    };
    meets_floor = std::visit(FloorVisitor{valuation}, thresholds.impact_floor);

    // A missing financial IRR means the instrument never returns capital;
    // classify it as a full loss.
    Rate projected = valuation.financial_irr_found ? valuation.financial_irr : Rate{-1.0};
    CapitalClass capital_class;
    capital_class.kind = classify_capital(projected, thresholds, meets_floor);
    capital_class.catalytic = catalytic_flag(capital_class.kind, s.investment.mic_first_mover);

    DueDiligenceRecord record = build_report(s, valuation, capital_class);

    return Evaluation{s, std::move(financial), std::move(impact), std::move(valuation),
                      capital_class, std::move(record)};
}

}  // namespace iirr
