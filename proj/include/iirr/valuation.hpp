#pragma once

#include "iirr/core.hpp"

namespace iirr {

// Share of tier impact credited to this investment: either one factor for
// every year or an explicit per-year schedule (e.g. a facility whose share
// steps down as co-investors join).
class Attribution {
public:
    static Attribution uniform(double factor);
    static Attribution per_year(std::vector<double> factors);

    bool is_uniform() const { return per_year_.empty(); }
    double at_year(int t) const;
    int years() const { return static_cast<int>(per_year_.size()); }  // 0 == uniform
    double uniform_factor() const { return uniform_; }
    const std::vector<double>& factors() const { return per_year_; }

    bool operator==(const Attribution&) const = default;

private:
    double uniform_ = 1.0;
    std::vector<double> per_year_;
};

// c0 / tier_total. Requires 0 < c0 <= tier_total.
double attribution_factor(MoneyAmount c0, MoneyAmount tier_total);

// Impact net present value:
//   sum over t of (F_t + a_t * I_t) / (1+r)^t, minus c0.
// F and I must cover the same years; r must exceed -1. When the attribution
// schedule is per-year it must cover every year of the series. Result is
// quantized to cents.
MoneyAmount inpv(const AnnualSeries& financial, const AnnualSeries& impact,
                 const Attribution& attribution, Rate r, MoneyAmount c0);

// Same computation without the final quantization; used by the solvers.
double inpv_cents_exact(const AnnualSeries& financial, const AnnualSeries& impact,
                        const Attribution& attribution, double r, MoneyAmount c0);

struct SolverConfig {
    double lo = -0.9999;   // search domain is (lo, hi]
    double hi = 10.0;
    double scan_step = 0.01;
    double value_tol_cents = 0.25;  // |INPV| convergence target
    double rate_tol = 1e-14;        // bracket-width fallback
};

struct IrrResult {
    Rate headline;            // smallest root found
    std::vector<Rate> roots;  // ascending; at least one
    bool multiple_roots = false;
};

// Rate(s) at which INPV is zero. Scans the domain at scan_step for sign
// changes, bisects each bracket, then polishes with Newton steps. Throws
// SolveError when the combined flow has no sign change (no root can exist)
// or when no root lies inside the domain.
IrrResult impact_irr(const AnnualSeries& financial, const AnnualSeries& impact,
                     const Attribution& attribution, MoneyAmount c0,
                     const SolverConfig& config = {});

// IRR of the financial leg alone.
IrrResult financial_irr(const AnnualSeries& financial, MoneyAmount c0,
                        const SolverConfig& config = {});

// Concrete discount rate implied by the investment's hurdle policy.
// MicOwnRate resolves to the instrument's own financial IRR.
Rate resolve_hurdle_rate(const InvestmentSpec& spec);

struct TimelineRow {
    int year = 0;
    MoneyAmount financial;
    MoneyAmount impact;  // attributed
    MoneyAmount total;
    MoneyAmount discounted;  // total / (1+hurdle)^year
    auto operator<=>(const TimelineRow&) const = default;
};

struct ValuationInputs {
    AnnualSeries financial;
    AnnualSeries impact;       // post-variability, pre-attribution
    Attribution attribution;   // applied to `impact`
    MoneyAmount initial_investment;
    Rate hurdle;
    double declared_attribution = 1.0;  // reported c0/tier_total share
};

struct ValuationResult {
    Rate hurdle;
    MoneyAmount inpv_at_hurdle;
    Rate impact_irr;
    std::vector<Rate> impact_irr_roots;
    bool multiple_roots = false;
    bool impact_irr_found = false;  // false when the solver reported no root
    std::string impact_irr_note;    // reason when not found
    Rate financial_irr;
    bool financial_irr_found = false;
    std::string financial_irr_note;
    double attribution_share = 1.0;
    MoneyAmount pv_financial;   // at hurdle
    MoneyAmount pv_impact;      // attributed, at hurdle
    MoneyAmount nominal_impact_total;     // attributed, undiscounted
    MoneyAmount nominal_financial_total;  // undiscounted
    std::vector<TimelineRow> timeline;
};

// Full valuation: timeline, INPV at the hurdle, both IRRs. Solver failures
// for an IRR are recorded in the result rather than thrown, so a report can
// still be produced for e.g. an all-negative impact stream.
ValuationResult value_investment(const ValuationInputs& inputs,
                                 const SolverConfig& config = {});

}  // namespace iirr
