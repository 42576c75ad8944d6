#pragma once

#include "iirr/core.hpp"

#include <span>

namespace iirr {

// Income bands used by the housing models. MarketRate rows are the benchmark
// population: they carry no affordability gap and contribute zero impact.
enum class IncomeBand { Ami30, Ami50, Ami60, Ami80, MarketRate };

std::string to_string(IncomeBand b);
IncomeBand parse_income_band(std::string_view s);

struct RentRollEntry {
    IncomeBand band = IncomeBand::Ami30;
    int bedrooms = 0;  // 0 == studio
    MoneyAmount affordable_rent;  // monthly, per unit
    MoneyAmount market_rent;      // monthly, per unit
    int units = 0;
    auto operator<=>(const RentRollEntry&) const = default;
};

struct SubsidyEntry {
    IncomeBand band = IncomeBand::Ami30;
    int bedrooms = 0;
    MoneyAmount monthly_subsidy;  // per unit
    int units = 0;
    auto operator<=>(const SubsidyEntry&) const = default;
};

struct HousingParams {
    Rate vacancy_rate;          // fraction of gross value lost to vacancy
    Rate annual_growth;         // applied from year 2 onward
    auto operator<=>(const HousingParams&) const = default;
};

// Gross monthly affordability gap over a roll: sum of
// (market_rent - affordable_rent) * units for non-market bands. Exact cents.
MoneyAmount rent_gap_gross_monthly(std::span<const RentRollEntry> roll);
MoneyAmount subsidy_gross_monthly(std::span<const SubsidyEntry> table);

// Annual impact from below-market rents. Year t value:
//   gross_monthly * (1 - vacancy) * 12 * (1 + growth)^(t-1)
// with the net monthly amount quantized to cents before annualizing.
// Rejects negative gaps on non-market bands and vacancy outside [0, 1).
AnnualSeries rent_gap_series(std::span<const RentRollEntry> roll,
                             const HousingParams& params, TermSpec term);

// Same shape as rent_gap_series, with the gap given directly as the tenant
// subsidy equivalent per unit (e.g. voucher-style schedules).
AnnualSeries subsidy_series(std::span<const SubsidyEntry> table,
                            const HousingParams& params, TermSpec term);

struct JobsArchetype {
    std::string name;
    int loans_per_year = 0;
    MoneyAmount avg_loan;
    MoneyAmount monetized_value_per_100k;  // annual value per $100k lent
    bool operator==(const JobsArchetype&) const = default;
};

struct JobsParams {
    std::vector<JobsArchetype> archetypes;
    Rate value_growth;  // escalates monetized value per $100k, year 2 onward
    Rate loan_growth;   // escalates loan volume, year 2 onward
    bool operator==(const JobsParams&) const = default;
};

// Year t value:
//   sum over archetypes of
//     loans * avg_loan * (1+loan_growth)^(t-1) / 100k
//       * value_per_100k * (1+value_growth)^(t-1)
// Rejects negative counts, amounts, or growth below -1.
AnnualSeries jobs_series(const JobsParams& params, TermSpec term);

struct IncomeUpliftParams {
    // Per-enrollment-year cohort counts (not cumulative). Entry g covers the
    // cohort that enrols in year g; it completes after course_years and earns
    // from the following year.
    std::vector<long> students;
    std::vector<long> graduates;
    MoneyAmount base_annual_salary;        // counterfactual salary at t=0
    std::vector<double> uplift_vs_base;    // by post-graduation year; last value
                                           // grows at post_uplift_growth after
    Rate post_uplift_growth;
    Rate nongraduate_growth;               // counterfactual salary growth
    int course_years = 2;                  // 0 allowed: income starts year g
    MoneyAmount program_cost;              // total cost per graduate
    double self_financed_share = 0.0;      // of program_cost, paid at completion
    MoneyAmount financed_annual_debt_service;
    int loan_years = 0;
    double resignation_rate = 0.0;         // share of students dropping out
    MoneyAmount resignation_repayment;     // repaid per drop-out at completion
    double scholarship_share = 0.0;        // grads bearing no cost
    Rate cost_growth;                      // escalates costs by enrollment year
    bool operator==(const IncomeUpliftParams&) const = default;
};

// Net earnings uplift of graduate cohorts over the non-graduate
// counterfactual, minus participant-borne costs. May be negative in early
// years while costs precede income.
AnnualSeries income_uplift_series(const IncomeUpliftParams& params, TermSpec term);

// Geometric confidence haircut: value_t * haircut^t. haircut must be in
// [0, 1]; 1.0 is the identity.
AnnualSeries apply_variability(const AnnualSeries& series, double haircut);

}  // namespace iirr
