#pragma once

#include "iirr/ingest.hpp"
#include "iirr/report.hpp"
#include "iirr/valuation.hpp"

#include <optional>

namespace iirr {

// Knobs the CLI can turn without editing the scenario (evaluate --hurdle,
// sweep grids). Vacancy/growth apply to housing models only; the attribution
// override replaces the attribution schedule with one uniform factor,
// treating explicit rows as pre-attribution for the purpose of the sweep.
struct EvaluationOverrides {
    std::optional<double> hurdle;
    std::optional<double> vacancy;
    std::optional<double> growth;
    std::optional<double> attribution;
};

struct Evaluation {
    ScenarioFile scenario;
    AnnualSeries financial;
    AnnualSeries impact;  // post-variability, pre-attribution
    ValuationResult valuation;
    CapitalClass capital_class;
    DueDiligenceRecord record;
};

// Build series, resolve the hurdle, value, classify, and assemble the
// report. Solver failures on either IRR are recorded in the result (found
// flags + notes) rather than thrown, so sweeps can tolerate dead grid
// points; callers that need an IRR check the flags.
Evaluation run_scenario(const ScenarioFile& scenario, const EvaluationOverrides& overrides = {});

// The impact series implied by the scenario's model block (before
// variability and attribution).
AnnualSeries model_series(const ScenarioFile& scenario, const EvaluationOverrides& overrides = {});

}  // namespace iirr
