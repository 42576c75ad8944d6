#include "iirr/core.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace iirr {

MoneyAmount money_from_double(double dollars) {
    if (!std::isfinite(dollars)) {
        throw ValidationError("money amount is not finite");
    }
    double cents = dollars * 100.0;
    if (std::fabs(cents) > static_cast<double>(MoneyAmount::kMaxAbsCents)) {
        throw ValidationError("money amount exceeds representable range");
    }
    return MoneyAmount{static_cast<std::int64_t>(std::llround(cents))};
}

MoneyAmount parse_money(std::string_view text) {
    if (text.empty() || text.size() > 24) {
        throw ParseError("invalid money literal: '" + std::string(text) + "'");
    }
    std::size_t i = 0;
    std::int64_t sign = 1;
    if (text[0] == '+' || text[0] == '-') {
        sign = text[0] == '-' ? -1 : 1;
        i = 1;
    }
    std::int64_t dollars = 0;
    std::size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        dollars = dollars * 10 + (text[i] - '0');
        ++digits;
        ++i;
        if (dollars > MoneyAmount::kMaxAbsCents / 100) {
            throw ParseError("money literal out of range: '" + std::string(text) + "'");
        }
    }
    if (digits == 0) {
        throw ParseError("invalid money literal: '" + std::string(text) + "'");
    }
    std::int64_t cents = dollars * 100;
    if (i < text.size()) {
        if (text[i] != '.') {
            throw ParseError("invalid money literal: '" + std::string(text) + "'");
        }
        ++i;
        std::size_t frac_digits = text.size() - i;
        if (frac_digits == 0 || frac_digits > 2) {
            throw ParseError("money literal must have at most two decimal places: '" +
                             std::string(text) + "'");
        }
        std::int64_t frac = 0;
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
                throw ParseError("invalid money literal: '" + std::string(text) + "'");
            }
            frac = frac * 10 + (text[i] - '0');
        }
        if (frac_digits == 1) frac *= 10;
        cents += frac;
    }
    if (cents > MoneyAmount::kMaxAbsCents) {
        throw ParseError("money literal out of range: '" + std::string(text) + "'");
    }
    return MoneyAmount{sign * cents};
}

std::string format_money(MoneyAmount m) {
    std::int64_t c = m.cents;
    std::string out;
    if (c < 0) {
        out.push_back('-');
        c = -c;
    }
    out += std::to_string(c / 100);
    out.push_back('.');
    std::int64_t frac = c % 100;
    out.push_back(static_cast<char>('0' + frac / 10));
    out.push_back(static_cast<char>('0' + frac % 10));
    return out;
}

std::string format_dollars_grouped(MoneyAmount m) {
    std::int64_t c = m.cents;
    bool neg = c < 0;
    if (neg) c = -c;
    std::int64_t dollars = (c + 50) / 100;  // round half up on magnitude
    std::string digits = std::to_string(dollars);
    std::string grouped;
    int count = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (count != 0 && count % 3 == 0) grouped.push_back(',');
        grouped.push_back(*it);
        ++count;
    }
    std::string out = neg ? "-$" : "$";
    out.append(grouped.rbegin(), grouped.rend());
    return out;
}

std::string format_percent(Rate r, int decimals) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << r.value * 100.0 << "%";
    return os.str();
}

std::string to_string(EvidenceLevel e) {
    switch (e) {
        case EvidenceLevel::ScientificConsensus: return "scientific_consensus";
        case EvidenceLevel::EmpiricalEvidence: return "empirical_evidence";
        case EvidenceLevel::ModelBased: return "model_based";
        case EvidenceLevel::Narrative: return "narrative";
    }
    return "narrative";
}

std::string to_string(Tier t) {
    switch (t) {
        case Tier::Tier1: return "tier1";
        case Tier::Tier2: return "tier2";
        case Tier::Tier3: return "tier3";
    }
    return "tier1";
}

std::string to_string(CapitalType c) {
    return c == CapitalType::BIC ? "bic" : "mic";
}

std::string to_string(CapitalClassKind k) {
    switch (k) {
        case CapitalClassKind::MarketRateImpact: return "market_rate_impact";
        case CapitalClassKind::BelowMarketImpact: return "below_market_impact";
        case CapitalClassKind::Blended: return "blended";
        case CapitalClassKind::Traditional: return "traditional";
        case CapitalClassKind::Grant: return "grant";
        case CapitalClassKind::NonInvestable: return "non_investable";
    }
    return "traditional";
}

EvidenceLevel parse_evidence_level(std::string_view s) {
    if (s == "scientific_consensus") return EvidenceLevel::ScientificConsensus;
    if (s == "empirical_evidence") return EvidenceLevel::EmpiricalEvidence;
    if (s == "model_based") return EvidenceLevel::ModelBased;
    if (s == "narrative") return EvidenceLevel::Narrative;
    throw ParseError("unknown evidence level: '" + std::string(s) + "'");
}

Tier parse_tier(std::string_view s) {
    if (s == "tier1") return Tier::Tier1;
    if (s == "tier2") return Tier::Tier2;
    if (s == "tier3") return Tier::Tier3;
    throw ParseError("unknown tier: '" + std::string(s) + "'");
}

CapitalType parse_capital_type(std::string_view s) {
    if (s == "bic") return CapitalType::BIC;
    if (s == "mic") return CapitalType::MIC;
    throw ParseError("unknown capital type: '" + std::string(s) + "'");
}

CapitalClassKind parse_capital_class_kind(std::string_view s) {
    if (s == "market_rate_impact") return CapitalClassKind::MarketRateImpact;
    if (s == "below_market_impact") return CapitalClassKind::BelowMarketImpact;
    if (s == "blended") return CapitalClassKind::Blended;
    if (s == "traditional") return CapitalClassKind::Traditional;
    if (s == "grant") return CapitalClassKind::Grant;
    if (s == "non_investable") return CapitalClassKind::NonInvestable;
    throw ParseError("unknown capital class: '" + std::string(s) + "'");
}

std::string instrument_name(const InstrumentTerms& terms) {
    struct Visitor {
        std::string operator()(const InterestOnlyBalloon&) const { return "interest_only_balloon"; }
        std::string operator()(const LevelAmortizing&) const { return "level_amortizing"; }
        std::string operator()(const InterestOnlyThenAmortizing&) const {
            return "interest_only_then_amortizing";
        }
        std::string operator()(const EquityExit&) const { return "equity_exit"; }
    };
    return std::visit(Visitor{}, terms);
}

Rate instrument_coupon(const InstrumentTerms& terms) {
    struct Visitor {
        Rate operator()(const InterestOnlyBalloon& t) const { return t.rate; }
        Rate operator()(const LevelAmortizing& t) const { return t.rate; }
        Rate operator()(const InterestOnlyThenAmortizing& t) const { return t.rate; }
        Rate operator()(const EquityExit&) const { return Rate{0.0}; }
    };
    return std::visit(Visitor{}, terms);
}

AnnualSeries::AnnualSeries(std::vector<MoneyAmount> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw ValidationError("annual series must cover at least one year");
    }
    if (values_.size() > 100) {
        throw ValidationError("annual series longer than 100 years");
    }
}

MoneyAmount AnnualSeries::at_year(int t) const {
    if (t < 1 || t > years()) {
        throw std::out_of_range("series year out of range: " + std::to_string(t));
    }
    return values_[static_cast<std::size_t>(t - 1)];
}

MoneyAmount AnnualSeries::total() const {
    MoneyAmount sum{};
    for (MoneyAmount v : values_) sum += v;
    return sum;
}

AnnualSeries zip_add(const AnnualSeries& a, const AnnualSeries& b) {
    if (a.years() != b.years()) {
        throw ValidationError("cannot add series of different lengths");
    }
    std::vector<MoneyAmount> out;
    out.reserve(static_cast<std::size_t>(a.years()));
    for (int t = 1; t <= a.years(); ++t) {
        out.push_back(a.at_year(t) + b.at_year(t));
    }
    return AnnualSeries(std::move(out));
}

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

void validate(const InvestmentSpec& spec) {
    require(spec.initial_investment.cents > 0,
            "investment.initial_investment must be positive");
    require(spec.initial_investment.cents <= MoneyAmount::kMaxAbsCents,
            "investment.initial_investment exceeds representable range");
    require(spec.term.years >= 1 && spec.term.years <= 100,
            "investment.term_years must be in [1, 100]");
    require(spec.tier_total.cents > 0, "investment.tier_total must be positive");
    require(spec.tier_total >= spec.initial_investment,
            "investment.tier_total must be at least initial_investment");
    require(spec.variability_haircut >= 0.0 && spec.variability_haircut <= 1.0,
            "investment.variability_haircut must be in [0, 1]");
    require(spec.recovery_multiplier >= 0.0 && spec.recovery_multiplier <= 1.0,
            "investment.recovery_multiplier must be in [0, 1]");

    struct InstrumentVisitor {
        const InvestmentSpec& spec;
        void operator()(const InterestOnlyBalloon& t) const {
            require(t.rate.value >= 0.0 && t.rate.value <= 10.0,
                    "investment.instrument.rate must be in [0, 10]");
        }
        void operator()(const LevelAmortizing& t) const {
            require(t.rate.value >= 0.0 && t.rate.value <= 10.0,
                    "investment.instrument.rate must be in [0, 10]");
        }
        void operator()(const InterestOnlyThenAmortizing& t) const {
            require(t.rate.value >= 0.0 && t.rate.value <= 10.0,
                    "investment.instrument.rate must be in [0, 10]");
            require(t.io_years >= 0 && t.io_years < spec.term.years,
                    "investment.instrument.io_years must be in [0, term_years)");
        }
        void operator()(const EquityExit& t) const {
            require(t.exit_proceeds.cents >= 0,
                    "investment.instrument.exit_proceeds must be non-negative");
            require(t.exit_year >= 1 && t.exit_year <= spec.term.years,
                    "investment.instrument.exit_year must be in [1, term_years]");
        }
    };
    std::visit(InstrumentVisitor{spec}, spec.instrument);

    struct HurdleVisitor {
        void operator()(const ExplicitHurdle& h) const {
            require(h.rate.value > -1.0 && h.rate.value <= 10.0,
                    "investment.hurdle.rate must be in (-1, 10]");
        }
        void operator()(const BicOpportunityCost& h) const {
            require(h.market_rate.value > -1.0 && h.market_rate.value <= 10.0,
                    "investment.hurdle.market_rate must be in (-1, 10]");
        }
        void operator()(const MicOwnRate&) const {}
    };
    std::visit(HurdleVisitor{}, spec.hurdle);
}

}  // namespace iirr
