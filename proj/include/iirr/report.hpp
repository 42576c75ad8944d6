#pragma once

#include "iirr/classification.hpp"
#include "iirr/core.hpp"
#include "iirr/ingest.hpp"
#include "iirr/valuation.hpp"

#include <optional>

namespace iirr {

enum class Recommendation { ConsiderForInvestment, Decline, InsufficientData };

std::string to_string(Recommendation r);
Recommendation parse_recommendation(std::string_view s);

// Per-unit outcome framing (e.g. per household served), when the scenario
// declares a unit count.
struct OutcomeStats {
    long unit_count = 0;
    std::string unit_label;
    MoneyAmount annual_attributed_impact;  // year 1
    MoneyAmount per_unit_annual;
    MoneyAmount per_unit_over_term;
    bool operator==(const OutcomeStats&) const = default;
};

// One-page due-diligence record: the scenario's facts plus the valuation
// verdict, in a stable machine-readable shape.
struct DueDiligenceRecord {
    std::string name;
    std::string description;
    std::string asset_class;
    std::string instrument;
    std::string capital_type;
    MoneyAmount initial_investment;
    int term_years = 0;
    Tier tier = Tier::Tier1;
    MoneyAmount tier_total;
    double attribution_share = 1.0;
    EvidenceLevel evidence = EvidenceLevel::Narrative;
    double variability_haircut = 1.0;
    CapitalClass capital_class;
    Rate hurdle;
    Rate financial_irr;
    bool financial_irr_found = false;
    Rate impact_irr;
    bool impact_irr_found = false;
    bool multiple_irr_roots = false;
    std::vector<Rate> impact_irr_roots;
    MoneyAmount inpv_at_hurdle;
    MoneyAmount pv_financial;
    MoneyAmount pv_impact;
    MoneyAmount nominal_financial_total;
    MoneyAmount nominal_impact_total;
    std::optional<OutcomeStats> outcomes;
    Recommendation recommendation = Recommendation::InsufficientData;
    std::vector<std::string> notes;
    std::vector<TimelineRow> timeline;

    bool operator==(const DueDiligenceRecord&) const = default;
};

// Assemble the record from the evaluated pieces. The recommendation is
// deliberately conservative: ConsiderForInvestment when INPV clears zero on
// better-than-narrative evidence, InsufficientData otherwise. Decline is
// reserved for human judgement and never emitted automatically.
DueDiligenceRecord build_report(const ScenarioFile& scenario, const ValuationResult& valuation,
                                const CapitalClass& capital_class);

// Renderers. All three are deterministic byte-for-byte in the record.
std::string render_text(const DueDiligenceRecord& record);
std::string render_json(const DueDiligenceRecord& record);
std::string render_csv_timeline(const DueDiligenceRecord& record);

// Inverse of render_json; parse_report_json(render_json(r)) == r.
DueDiligenceRecord parse_report_json(std::string_view text);

}  // namespace iirr
