#pragma once

#include "iirr/core.hpp"

namespace iirr {

// Annual annuity payment that amortizes `principal` at `rate` over `n_years`:
//   P * r / (1 - (1+r)^-n), or P / n when r == 0.
// The exact value is rounded to the cent. Throws ValidationError for
// principal <= 0, n_years <= 0, or rate < 0.
MoneyAmount level_payment(MoneyAmount principal, Rate rate, int n_years);

// Investor cash receipts for years 1..term implied by the instrument terms.
// Principal returns are included in the year they occur (balloon at maturity,
// embedded in annuity payments, exit proceeds in exit_year). Each year is
// scaled by spec.recovery_multiplier and quantized to cents.
AnnualSeries build_financial_series(const InvestmentSpec& spec);

}  // namespace iirr
