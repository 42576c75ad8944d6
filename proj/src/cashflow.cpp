#include "iirr/cashflow.hpp"

#include <cmath>

namespace iirr {

namespace {

double level_payment_exact(double principal_cents, double r, int n) {
    if (r == 0.0) return principal_cents / n;
    double v = std::pow(1.0 + r, -n);
    return principal_cents * r / (1.0 - v);
}

std::int64_t scale_cents(std::int64_t cents, double factor) {
    if (factor == 1.0) return cents;
    return std::llround(static_cast<double>(cents) * factor);
}

}  // namespace

MoneyAmount level_payment(MoneyAmount principal, Rate rate, int n_years) {
    if (principal.cents <= 0) {
        throw ValidationError("level_payment: principal must be positive");
    }
    if (n_years <= 0) {
        throw ValidationError("level_payment: n_years must be positive");
    }
    if (rate.value < 0.0) {
        throw ValidationError("level_payment: rate must be non-negative");
    }
    double pay = level_payment_exact(static_cast<double>(principal.cents), rate.value, n_years);
    return MoneyAmount{std::llround(pay)};
}

AnnualSeries build_financial_series(const InvestmentSpec& spec) {
    validate(spec);
    const int T = spec.term.years;
    const std::int64_t c0 = spec.initial_investment.cents;
    std::vector<MoneyAmount> flows(static_cast<std::size_t>(T));

    struct Visitor {
        std::vector<MoneyAmount>& flows;
        std::int64_t c0;
        int T;

        void operator()(const InterestOnlyBalloon& t) const {
            std::int64_t coupon = std::llround(static_cast<double>(c0) * t.rate.value);
            for (int y = 0; y < T; ++y) flows[static_cast<std::size_t>(y)] = MoneyAmount{coupon};
            flows[static_cast<std::size_t>(T - 1)] += MoneyAmount{c0};
        }
        void operator()(const LevelAmortizing& t) const {
            MoneyAmount pay = level_payment(MoneyAmount{c0}, t.rate, T);
            for (int y = 0; y < T; ++y) flows[static_cast<std::size_t>(y)] = pay;
        }
        void operator()(const InterestOnlyThenAmortizing& t) const {
            std::int64_t coupon = std::llround(static_cast<double>(c0) * t.rate.value);
            for (int y = 0; y < t.io_years; ++y) {
                flows[static_cast<std::size_t>(y)] = MoneyAmount{coupon};
            }
            MoneyAmount pay = level_payment(MoneyAmount{c0}, t.rate, T - t.io_years);
            for (int y = t.io_years; y < T; ++y) flows[static_cast<std::size_t>(y)] = pay;
        }
        void operator()(const EquityExit& t) const {
            flows[static_cast<std::size_t>(t.exit_year - 1)] = t.exit_proceeds;
        }
    };
    std::visit(Visitor{flows, c0, T}, spec.instrument);

    if (spec.recovery_multiplier != 1.0) {
        for (auto& f : flows) f.cents = scale_cents(f.cents, spec.recovery_multiplier);
    }
    return AnnualSeries(std::move(flows));
}

}  // namespace iirr
