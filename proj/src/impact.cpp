#include "iirr/impact.hpp"

#include <cmath>

namespace iirr {

std::string to_string(IncomeBand b) {
    switch (b) {
        case IncomeBand::Ami30: return "ami30";
        case IncomeBand::Ami50: return "ami50";
        case IncomeBand::Ami60: return "ami60";
        case IncomeBand::Ami80: return "ami80";
        case IncomeBand::MarketRate: return "market_rate";
    }
    return "market_rate";
}

IncomeBand parse_income_band(std::string_view s) {
    if (s == "ami30") return IncomeBand::Ami30;
    if (s == "ami50") return IncomeBand::Ami50;
    if (s == "ami60") return IncomeBand::Ami60;
    if (s == "ami80") return IncomeBand::Ami80;
    if (s == "market_rate") return IncomeBand::MarketRate;
    throw ParseError("unknown income band: '" + std::string(s) + "'");
}

namespace {

void check_housing_params(const HousingParams& p) {
    if (p.vacancy_rate.value < 0.0 || p.vacancy_rate.value >= 1.0) {
        throw ValidationError("vacancy_rate must be in [0, 1)");
    }
    if (p.annual_growth.value <= -1.0) {
        throw ValidationError("annual_growth must exceed -1");
    }
}

// Net monthly -> annual series with growth from year 2. The net monthly
// amount is a cent quantity; growth factors are applied to the annual base.
AnnualSeries grow_annual(std::int64_t gross_monthly_cents, const HousingParams& p,
                         TermSpec term) {
    if (term.years < 1 || term.years > 100) {
        throw ValidationError("term_years must be in [1, 100]");
    }
    std::int64_t net_monthly =
        std::llround(static_cast<double>(gross_monthly_cents) * (1.0 - p.vacancy_rate.value));
    std::int64_t annual_base = net_monthly * 12;
    std::vector<MoneyAmount> out;
    out.reserve(static_cast<std::size_t>(term.years));
    double factor = 1.0;
    for (int t = 1; t <= term.years; ++t) {
        if (t > 1) factor *= 1.0 + p.annual_growth.value;
        out.push_back(MoneyAmount{std::llround(static_cast<double>(annual_base) * factor)});
    }
    return AnnualSeries(std::move(out));
}

}  // namespace

MoneyAmount rent_gap_gross_monthly(std::span<const RentRollEntry> roll) {
    std::int64_t gross = 0;
    for (const auto& e : roll) {
        if (e.units < 0) throw ValidationError("rent_roll.units must be non-negative");
        if (e.bedrooms < 0 || e.bedrooms > 10) {
            throw ValidationError("rent_roll.bedrooms must be in [0, 10]");
        }
        if (e.band == IncomeBand::MarketRate) continue;
        std::int64_t gap = e.market_rent.cents - e.affordable_rent.cents;
        if (gap < 0) {
            throw ValidationError("rent_roll: market_rent below affordable_rent for band " +
                                  to_string(e.band));
        }
        gross += gap * e.units;
    }
    return MoneyAmount{gross};
}

MoneyAmount subsidy_gross_monthly(std::span<const SubsidyEntry> table) {
    std::int64_t gross = 0;
    for (const auto& e : table) {
        if (e.units < 0) throw ValidationError("subsidies.units must be non-negative");
        if (e.bedrooms < 0 || e.bedrooms > 10) {
            throw ValidationError("subsidies.bedrooms must be in [0, 10]");
        }
        if (e.monthly_subsidy.cents < 0) {
            throw ValidationError("subsidies.monthly_subsidy must be non-negative");
        }
        if (e.band == IncomeBand::MarketRate) continue;
        gross += e.monthly_subsidy.cents * e.units;
    }
    return MoneyAmount{gross};
}

AnnualSeries rent_gap_series(std::span<const RentRollEntry> roll, const HousingParams& params,
                             TermSpec term) {
    check_housing_params(params);
    return grow_annual(rent_gap_gross_monthly(roll).cents, params, term);
}

AnnualSeries subsidy_series(std::span<const SubsidyEntry> table, const HousingParams& params,
                            TermSpec term) {
    check_housing_params(params);
    return grow_annual(subsidy_gross_monthly(table).cents, params, term);
}

AnnualSeries jobs_series(const JobsParams& params, TermSpec term) {
    if (term.years < 1 || term.years > 100) {
        throw ValidationError("term_years must be in [1, 100]");
    }
    if (params.value_growth.value <= -1.0 || params.loan_growth.value <= -1.0) {
        throw ValidationError("jobs growth rates must exceed -1");
    }
    for (const auto& a : params.archetypes) {
        if (a.loans_per_year < 0) throw ValidationError("jobs.loans_per_year must be non-negative");
        if (a.avg_loan.cents < 0) throw ValidationError("jobs.avg_loan must be non-negative");
        if (a.monetized_value_per_100k.cents < 0) {
            throw ValidationError("jobs.monetized_value_per_100k must be non-negative");
        }
    }
    std::vector<MoneyAmount> out;
    out.reserve(static_cast<std::size_t>(term.years));
    double loan_factor = 1.0;
    double value_factor = 1.0;
    for (int t = 1; t <= term.years; ++t) {
        if (t > 1) {
            loan_factor *= 1.0 + params.loan_growth.value;
            value_factor *= 1.0 + params.value_growth.value;
        }
        double dollars = 0.0;
        for (const auto& a : params.archetypes) {
            double lent = a.loans_per_year * a.avg_loan.dollars() * loan_factor;
            dollars += lent / 100'000.0 * a.monetized_value_per_100k.dollars() * value_factor;
        }
        out.push_back(money_from_double(dollars));
    }
    return AnnualSeries(std::move(out));
}

namespace {

void check_uplift_params(const IncomeUpliftParams& p, TermSpec term) {
    if (p.students.size() != p.graduates.size()) {
        throw ValidationError("income_uplift: students and graduates must have equal length");
    }
    if (static_cast<int>(p.students.size()) < term.years) {
        throw ValidationError("income_uplift: cohort sequences must cover the full term");
    }
    for (std::size_t i = 0; i < p.students.size(); ++i) {
        if (p.students[i] < 0 || p.graduates[i] < 0) {
            throw ValidationError("income_uplift: cohort counts must be non-negative");
        }
        if (p.graduates[i] > p.students[i]) {
            throw ValidationError("income_uplift: graduates cannot exceed students in a cohort");
        }
    }
    if (p.base_annual_salary.cents < 0) {
        throw ValidationError("income_uplift.base_annual_salary must be non-negative");
    }
    if (p.uplift_vs_base.empty()) {
        throw ValidationError("income_uplift.uplift_vs_base must not be empty");
    }
    if (p.course_years < 0 || p.course_years > 10) {
        throw ValidationError("income_uplift.course_years must be in [0, 10]");
    }
    if (p.loan_years < 0) throw ValidationError("income_uplift.loan_years must be non-negative");
    if (p.post_uplift_growth.value <= -1.0 || p.nongraduate_growth.value <= -1.0 ||
        p.cost_growth.value <= -1.0) {
        throw ValidationError("income_uplift growth rates must exceed -1");
    }
    auto share_ok = [](double s) { return s >= 0.0 && s <= 1.0; };
    if (!share_ok(p.self_financed_share) || !share_ok(p.resignation_rate) ||
        !share_ok(p.scholarship_share)) {
        throw ValidationError("income_uplift shares must be in [0, 1]");
    }
    if (p.program_cost.cents < 0 || p.financed_annual_debt_service.cents < 0 ||
        p.resignation_repayment.cents < 0) {
        throw ValidationError("income_uplift cost inputs must be non-negative");
    }
}

}  // namespace

AnnualSeries income_uplift_series(const IncomeUpliftParams& p, TermSpec term) {
    if (term.years < 1 || term.years > 100) {
        throw ValidationError("term_years must be in [1, 100]");
    }
    check_uplift_params(p, term);

    const double base = p.base_annual_salary.dollars();
    const int n_uplift = static_cast<int>(p.uplift_vs_base.size());
    std::vector<MoneyAmount> out;
    out.reserve(static_cast<std::size_t>(term.years));

    for (int t = 1; t <= term.years; ++t) {
        double dollars = 0.0;
        for (int g = 1; g <= static_cast<int>(p.students.size()); ++g) {
            const double grads = static_cast<double>(p.graduates[static_cast<std::size_t>(g - 1)]);
            const double studs = static_cast<double>(p.students[static_cast<std::size_t>(g - 1)]);
            const int completion_year = g + p.course_years - 1;
            const int first_income_year = completion_year + 1;
            const double cost_scale = std::pow(1.0 + p.cost_growth.value, g - 1);
            const double paying = grads * (1.0 - p.scholarship_share);

            if (t == completion_year) {
                dollars -= paying * p.program_cost.dollars() * p.self_financed_share * cost_scale;
                dollars -= studs * p.resignation_rate * p.resignation_repayment.dollars() *
                           cost_scale;
            }
            if (t >= first_income_year && t < first_income_year + p.loan_years) {
                dollars -= paying * p.financed_annual_debt_service.dollars() * cost_scale;
            }
            if (t >= first_income_year) {
                const int post = t - first_income_year + 1;  // years since graduation
                double uplift;
                if (post <= n_uplift) {
                    uplift = p.uplift_vs_base[static_cast<std::size_t>(post - 1)];
                } else {
                    uplift = p.uplift_vs_base.back();
                }
                double grad_salary = base * (1.0 + uplift);
                if (post > n_uplift) {
                    grad_salary *= std::pow(1.0 + p.post_uplift_growth.value, post - n_uplift);
                }
                // Counterfactual: the non-graduate salary has grown since
                // enrollment (course years plus working years).
                double nongrad_salary =
                    base * std::pow(1.0 + p.nongraduate_growth.value, p.course_years + post - 1);
                dollars += grads * (grad_salary - nongrad_salary);
            }
        }
        out.push_back(money_from_double(dollars));
    }
    return AnnualSeries(std::move(out));
}

AnnualSeries apply_variability(const AnnualSeries& series, double haircut) {
    if (!(haircut >= 0.0 && haircut <= 1.0)) {
        throw ValidationError("variability haircut must be in [0, 1]");
    }
    if (haircut == 1.0) return series;
    std::vector<MoneyAmount> out;
    out.reserve(static_cast<std::size_t>(series.years()));
    double factor = 1.0;
    for (int t = 1; t <= series.years(); ++t) {
        factor *= haircut;
        out.push_back(MoneyAmount{
            std::llround(static_cast<double>(series.at_year(t).cents) * factor)});
    }
    return AnnualSeries(std::move(out));
}

}  // namespace iirr
