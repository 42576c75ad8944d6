#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace iirr {

// Error taxonomy. The CLI maps these to exit codes (parse/validation -> 2,
// solver -> 3, I/O -> 4); library code throws and never calls exit().
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Money is an exact count of cents. Doubles appear only inside a single
// operation's arithmetic; results are quantized back to cents at the
// boundary and formatted as dollars only for display.
struct MoneyAmount {
    std::int64_t cents = 0;

    static constexpr std::int64_t kMaxAbsCents = 1'000'000'000'000'000;  // 10^15

    static MoneyAmount from_cents(std::int64_t c) { return MoneyAmount{c}; }
    static MoneyAmount from_dollars(std::int64_t d) { return MoneyAmount{d * 100}; }

    double dollars() const { return static_cast<double>(cents) / 100.0; }

    MoneyAmount operator-() const { return MoneyAmount{-cents}; }
    MoneyAmount& operator+=(MoneyAmount o) { cents += o.cents; return *this; }
    MoneyAmount& operator-=(MoneyAmount o) { cents -= o.cents; return *this; }
    friend MoneyAmount operator+(MoneyAmount a, MoneyAmount b) { return MoneyAmount{a.cents + b.cents}; }
    friend MoneyAmount operator-(MoneyAmount a, MoneyAmount b) { return MoneyAmount{a.cents - b.cents}; }
    auto operator<=>(const MoneyAmount&) const = default;
};

// Quantize a dollar-denominated double to cents, rounding half away from zero.
MoneyAmount money_from_double(double dollars);

// Accepts an optional sign, digits, and at most two decimal places
// ("1250", "-3.5", "834143.04"). Anything else (grouping, %, exponents) is a
// ParseError, as is a magnitude beyond the representable cap.
MoneyAmount parse_money(std::string_view text);

// Canonical form: sign, integer dollars, '.', exactly two decimals.
std::string format_money(MoneyAmount m);

// Display form: dollars rounded to the nearest whole, thousands-grouped,
// e.g. "$1,600,000" / "-$3,000". Used by the text renderer only.
std::string format_dollars_grouped(MoneyAmount m);

// An annual rate as a plain fraction (0.0425 == 4.25%). Deliberately thin:
// the type exists so signatures distinguish rates from haircuts and factors.
struct Rate {
    double value = 0.0;
    auto operator<=>(const Rate&) const = default;
};

std::string format_percent(Rate r, int decimals = 1);

struct TermSpec {
    int years = 1;
    auto operator<=>(const TermSpec&) const = default;
};

enum class EvidenceLevel {
    ScientificConsensus = 1,
    EmpiricalEvidence = 2,
    ModelBased = 3,
    Narrative = 4,
};

enum class Tier { Tier1 = 1, Tier2 = 2, Tier3 = 3 };

enum class CapitalType { BIC, MIC };

enum class CapitalClassKind {
    MarketRateImpact,
    BelowMarketImpact,
    Blended,
    Traditional,
    Grant,
    NonInvestable,
};

struct CapitalClass {
    CapitalClassKind kind = CapitalClassKind::Traditional;
    bool catalytic = false;
    auto operator<=>(const CapitalClass&) const = default;
};

// string <-> enum. to_string is total; the parse_* functions throw ParseError
// naming the offending token.
std::string to_string(EvidenceLevel e);
std::string to_string(Tier t);
std::string to_string(CapitalType c);
std::string to_string(CapitalClassKind k);
EvidenceLevel parse_evidence_level(std::string_view s);
Tier parse_tier(std::string_view s);
CapitalType parse_capital_type(std::string_view s);
CapitalClassKind parse_capital_class_kind(std::string_view s);

// --- Instrument terms -------------------------------------------------------

// Coupon each year, principal returned with the final coupon.
struct InterestOnlyBalloon {
    Rate rate;
    auto operator<=>(const InterestOnlyBalloon&) const = default;
};

// Equal annuity payments that fully amortize the principal over the term.
struct LevelAmortizing {
    Rate rate;
    auto operator<=>(const LevelAmortizing&) const = default;
};

// Coupon-only for io_years, then a level annuity over the remaining years.
struct InterestOnlyThenAmortizing {
    Rate rate;
    int io_years = 0;
    auto operator<=>(const InterestOnlyThenAmortizing&) const = default;
};

// No interim cash flows; a single exit payment in exit_year.
struct EquityExit {
    MoneyAmount exit_proceeds;
    int exit_year = 1;
    auto operator<=>(const EquityExit&) const = default;
};

using InstrumentTerms =
    std::variant<InterestOnlyBalloon, LevelAmortizing, InterestOnlyThenAmortizing, EquityExit>;

std::string instrument_name(const InstrumentTerms& terms);
Rate instrument_coupon(const InstrumentTerms& terms);  // EquityExit -> Rate{0}

// --- Hurdle policy ----------------------------------------------------------

struct ExplicitHurdle {
    Rate rate;
    auto operator<=>(const ExplicitHurdle&) const = default;
};

// Below-market capital is benchmarked against what it could have earned.
struct BicOpportunityCost {
    Rate market_rate;
    auto operator<=>(const BicOpportunityCost&) const = default;
};

// Market-rate capital already earns its hurdle; discount at the instrument's
// own financial return.
struct MicOwnRate {
    auto operator<=>(const MicOwnRate&) const = default;
};

using HurdlePolicy = std::variant<ExplicitHurdle, BicOpportunityCost, MicOwnRate>;

// --- Series -----------------------------------------------------------------

// Cash amounts for years 1..T. Year 0 (the investment itself) is carried
// separately as initial_investment, matching the valuation convention.
class AnnualSeries {
public:
    AnnualSeries() = default;
    explicit AnnualSeries(std::vector<MoneyAmount> values);

    int years() const { return static_cast<int>(values_.size()); }
    MoneyAmount at_year(int t) const;  // 1-based; throws std::out_of_range
    const std::vector<MoneyAmount>& values() const { return values_; }
    MoneyAmount total() const;

    bool operator==(const AnnualSeries&) const = default;

private:
    std::vector<MoneyAmount> values_;
};

AnnualSeries zip_add(const AnnualSeries& a, const AnnualSeries& b);

// --- Investment spec --------------------------------------------------------

struct InvestmentSpec {
    MoneyAmount initial_investment;
    TermSpec term;
    InstrumentTerms instrument = InterestOnlyBalloon{};
    Tier tier = Tier::Tier1;
    MoneyAmount tier_total;
    HurdlePolicy hurdle = MicOwnRate{};
    EvidenceLevel evidence = EvidenceLevel::Narrative;
    double variability_haircut = 1.0;  // multiplies impact by haircut^t
    CapitalType capital_type = CapitalType::BIC;
    bool mic_first_mover = false;
    // Scales contractual receipts; < 1 models expected credit loss.
    double recovery_multiplier = 1.0;

    bool operator==(const InvestmentSpec&) const = default;
};

// Throws ValidationError naming the offending field (schema path names, e.g.
// "investment.tier_total").
void validate(const InvestmentSpec& spec);

}  // namespace iirr
