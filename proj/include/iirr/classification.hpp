#pragma once

#include "iirr/core.hpp"

#include <span>
#include <utility>

namespace iirr {

// Impact floor a scenario must clear before its capital counts as
// impact-bearing. Either asserted directly, or checked against the modeled
// annual impact / impact IRR.
struct ImpactFloorMet {
    bool met = true;
    auto operator<=>(const ImpactFloorMet&) const = default;
};
struct ImpactFloorAnnual {
    MoneyAmount min_annual_impact;  // attributed, year 1
    auto operator<=>(const ImpactFloorAnnual&) const = default;
};
struct ImpactFloorIrr {
    Rate min_impact_irr;
    auto operator<=>(const ImpactFloorIrr&) const = default;
};
using ImpactFloor = std::variant<ImpactFloorMet, ImpactFloorAnnual, ImpactFloorIrr>;

struct Thresholds {
    Rate market_rate_floor;
    ImpactFloor impact_floor = ImpactFloorMet{true};
    bool operator==(const Thresholds&) const = default;
};

// Single-tranche classification on the projected financial return. Blended
// is never produced here; it only describes multi-tranche aggregates.
//   impact floor met:   return >= floor -> MarketRateImpact
//                       0 <= return < floor -> BelowMarketImpact
//                       return < 0 -> Grant
//   impact floor unmet: return >= floor -> Traditional, else NonInvestable
CapitalClassKind classify_capital(Rate projected_financial_return, const Thresholds& thresholds,
                                  bool meets_impact_floor);

// Catalytic capital absorbs risk or concession to unlock the stack: BIC-style
// classes always, market-rate impact capital only when it moved first.
bool catalytic_flag(CapitalClassKind kind, bool mic_first_mover);

struct TierInvestment {
    std::string investor;
    MoneyAmount amount;
    bool operator==(const TierInvestment&) const = default;
};

enum class DeadweightPolicy {
    ProRata,        // shares of the tier as funded
    ReduceSurplus,  // attributable pool capped at required capital; the
                    // surplus share earns zero impact
};

// Attribution fraction per investment. ProRata fractions sum to 1;
// ReduceSurplus fractions sum to min(1, required / funded).
std::vector<double> deadweight_adjust(std::span<const TierInvestment> investments,
                                      MoneyAmount required_tier_capital,
                                      DeadweightPolicy policy);

// Amount-weighted average rate across tranches.
Rate blended_wacc(std::span<const std::pair<MoneyAmount, Rate>> tranches);

// Tier implied by the capital's seniority role: concessionary BIC anchors
// tier 1, market-rate equity tier 2, market-rate debt tier 3.
Tier infer_tier(CapitalType capital_type, const InstrumentTerms& instrument);

}  // namespace iirr
