#pragma once

#include "iirr/classification.hpp"
#include "iirr/core.hpp"
#include "iirr/impact.hpp"

#include <filesystem>
#include <map>
#include <optional>

namespace iirr {

// Declarative impact model blocks as they appear in a scenario document.

struct RentGapModel {
    HousingParams params;
    std::vector<RentRollEntry> roll;
    bool operator==(const RentGapModel&) const = default;
};

struct SubsidyModel {
    HousingParams params;
    std::vector<SubsidyEntry> subsidies;
    bool operator==(const SubsidyModel&) const = default;
};

struct JobsModel {
    JobsParams params;
    bool operator==(const JobsModel&) const = default;
};

struct IncomeUpliftModel {
    IncomeUpliftParams params;
    bool operator==(const IncomeUpliftModel&) const = default;
};

// Pre-monetized annual values. pre_attribution says whether the engine
// should still apply the attribution share (true) or the rows already embed
// it (false, e.g. published case tables).
struct ExplicitModel {
    std::vector<MoneyAmount> values;
    bool pre_attribution = true;
    bool operator==(const ExplicitModel&) const = default;
};

using ImpactModel =
    std::variant<RentGapModel, SubsidyModel, JobsModel, IncomeUpliftModel, ExplicitModel>;

std::string impact_model_name(const ImpactModel& model);

// Classification thresholds as written in the document; a missing market
// floor defaults to the resolved hurdle at evaluation time.
struct ScenarioThresholds {
    std::optional<Rate> market_rate_floor;
    ImpactFloor impact_floor = ImpactFloorMet{true};
    bool operator==(const ScenarioThresholds&) const = default;
};

struct ReportOptions {
    std::optional<long> unit_count;  // e.g. households served
    std::string unit_label = "household";
    bool operator==(const ReportOptions&) const = default;
};

struct ScenarioFile {
    int schema_version = 1;
    std::string name;
    std::string description;
    std::string asset_class;
    InvestmentSpec investment;
    ImpactModel impact_model = ExplicitModel{};
    ScenarioThresholds thresholds;
    std::optional<std::vector<double>> attribution_per_year;
    std::map<EvidenceLevel, double> evidence_haircuts;  // haircut default per level
    ReportOptions report;

    bool operator==(const ScenarioFile&) const = default;
};

// Parse a scenario document (JSON; // comments permitted). Diagnostics name
// the offending field path. The investment block is validated on the way in.
ScenarioFile parse_scenario(std::string_view text);

// Canonical JSON; parse_scenario(serialize_scenario(s)) == s exactly. Money
// is emitted as two-decimal strings, rates as plain numbers.
std::string serialize_scenario(const ScenarioFile& scenario);

// Read and parse a scenario file. Housing models may reference a sibling CSV
// ("rent_roll_csv" / "subsidy_csv") instead of inline rows; it is resolved
// relative to the scenario's directory and inlined into the result.
ScenarioFile load_scenario(const std::filesystem::path& path);

// CSV ingestion. Both expect a header row; columns (any order):
//   rent roll:  income_band,bedrooms,affordable_rent,market_rent,units
//   subsidy:    income_band,bedrooms,monthly_subsidy,units
std::vector<RentRollEntry> parse_rent_roll(std::string_view csv);
std::vector<SubsidyEntry> parse_subsidy_table(std::string_view csv);

// Non-fatal consistency notes (e.g. declared tier vs the tier implied by the
// capital type and instrument). Deterministic in the scenario contents.
std::vector<std::string> scenario_warnings(const ScenarioFile& scenario);

}  // namespace iirr
