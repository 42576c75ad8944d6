#include "iirr/classification.hpp"

namespace iirr {

CapitalClassKind classify_capital(Rate projected_financial_return, const Thresholds& thresholds,
                                  bool meets_impact_floor) {
    const double r = projected_financial_return.value;
    const double floor = thresholds.market_rate_floor.value;
    if (!meets_impact_floor) {
        return r >= floor ? CapitalClassKind::Traditional : CapitalClassKind::NonInvestable;
    }
    if (r >= floor) return CapitalClassKind::MarketRateImpact;
    if (r >= 0.0) return CapitalClassKind::BelowMarketImpact;
    return CapitalClassKind::Grant;
}

bool catalytic_flag(CapitalClassKind kind, bool mic_first_mover) {
    switch (kind) {
        case CapitalClassKind::BelowMarketImpact:
        case CapitalClassKind::Grant:
            return true;
        case CapitalClassKind::MarketRateImpact:
            return mic_first_mover;
        case CapitalClassKind::Blended:
        case CapitalClassKind::Traditional:
        case CapitalClassKind::NonInvestable:
            return false;
    }
    return false;
}

std::vector<double> deadweight_adjust(std::span<const TierInvestment> investments,
                                      MoneyAmount required_tier_capital,
                                      DeadweightPolicy policy) {
    if (investments.empty()) {
        throw ValidationError("deadweight_adjust: at least one investment required");
    }
    if (required_tier_capital.cents < 0) {
        throw ValidationError("deadweight_adjust: required capital must be non-negative");
    }
    std::int64_t funded = 0;
    for (const auto& inv : investments) {
        if (inv.amount.cents <= 0) {
            throw ValidationError("deadweight_adjust: amounts must be positive");
        }
        funded += inv.amount.cents;
    }
    double scale = 1.0;
    if (policy == DeadweightPolicy::ReduceSurplus && required_tier_capital.cents < funded) {
        scale = static_cast<double>(required_tier_capital.cents) / static_cast<double>(funded);
    }
    std::vector<double> fractions;
    fractions.reserve(investments.size());
    for (const auto& inv : investments) {
        fractions.push_back(static_cast<double>(inv.amount.cents) /
                            static_cast<double>(funded) * scale);
    }
    return fractions;
}

Rate blended_wacc(std::span<const std::pair<MoneyAmount, Rate>> tranches) {
    if (tranches.empty()) {
        throw ValidationError("blended_wacc: at least one tranche required");
    }
    double weighted = 0.0;
    std::int64_t total = 0;
    for (const auto& [amount, rate] : tranches) {
        if (amount.cents < 0) throw ValidationError("blended_wacc: amounts must be non-negative");
        weighted += static_cast<double>(amount.cents) * rate.value;
        total += amount.cents;
    }
    if (total <= 0) throw ValidationError("blended_wacc: total amount must be positive");
    return Rate{weighted / static_cast<double>(total)};
}

Tier infer_tier(CapitalType capital_type, const InstrumentTerms& instrument) {
    if (capital_type == CapitalType::BIC) return Tier::Tier1;
    return std::holds_alternative<EquityExit>(instrument) ? Tier::Tier2 : Tier::Tier3;
}

}  // namespace iirr
