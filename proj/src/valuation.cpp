#include "iirr/valuation.hpp"

#include "iirr/cashflow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace iirr {

Attribution Attribution::uniform(double factor) {
    if (!(factor >= 0.0 && factor <= 1.0)) {
        throw ValidationError("attribution factor must be in [0, 1]");
    }
    Attribution a;
    a.uniform_ = factor;
    return a;
}

Attribution Attribution::per_year(std::vector<double> factors) {
    if (factors.empty()) {
        throw ValidationError("per-year attribution schedule must not be empty");
    }
    for (double f : factors) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw ValidationError("attribution factors must be in [0, 1]");
        }
    }
    Attribution a;
    a.per_year_ = std::move(factors);
    return a;
}

double Attribution::at_year(int t) const {
    if (per_year_.empty()) return uniform_;
    if (t < 1 || t > static_cast<int>(per_year_.size())) {
        throw std::out_of_range("attribution year out of range: " + std::to_string(t));
    }
    return per_year_[static_cast<std::size_t>(t - 1)];
}

double attribution_factor(MoneyAmount c0, MoneyAmount tier_total) {
    if (c0.cents <= 0) throw ValidationError("attribution: investment must be positive");
    if (tier_total.cents <= 0) throw ValidationError("attribution: tier_total must be positive");
    if (c0 > tier_total) {
        throw ValidationError("attribution: investment cannot exceed tier_total");
    }
    return static_cast<double>(c0.cents) / static_cast<double>(tier_total.cents);
}

namespace {

void check_inpv_inputs(const AnnualSeries& fin, const AnnualSeries& imp,
                       const Attribution& attribution) {
    if (fin.years() != imp.years()) {
        throw ValidationError("financial and impact series must cover the same years");
    }
    if (!attribution.is_uniform() && attribution.years() != fin.years()) {
        throw ValidationError("attribution schedule must cover every year of the term");
    }
}

}  // namespace

double inpv_cents_exact(const AnnualSeries& fin, const AnnualSeries& imp,
                        const Attribution& attribution, double r, MoneyAmount c0) {
    check_inpv_inputs(fin, imp, attribution);
    if (!(r > -1.0)) throw ValidationError("discount rate must exceed -1");
    const double g = 1.0 / (1.0 + r);
    double df = 1.0;
    double acc = 0.0;
    for (int t = 1; t <= fin.years(); ++t) {
        df *= g;
        const double flow = static_cast<double>(fin.at_year(t).cents) +
                            attribution.at_year(t) * static_cast<double>(imp.at_year(t).cents);
        acc += flow * df;
    }
    return acc - static_cast<double>(c0.cents);
}

MoneyAmount inpv(const AnnualSeries& fin, const AnnualSeries& imp, const Attribution& attribution,
                 Rate r, MoneyAmount c0) {
    double cents = inpv_cents_exact(fin, imp, attribution, r.value, c0);
    if (!std::isfinite(cents) ||
        std::fabs(cents) > static_cast<double>(MoneyAmount::kMaxAbsCents)) {
        throw SolveError("INPV is not representable at this rate");
    }
    return MoneyAmount{std::llround(cents)};
}

namespace {

struct NpvFn {
    const AnnualSeries& fin;
    const AnnualSeries& imp;
    const Attribution& attribution;
    MoneyAmount c0;

    double value(double r) const { return inpv_cents_exact(fin, imp, attribution, r, c0); }

    double derivative(double r) const {
        const double g = 1.0 / (1.0 + r);
        double df = 1.0;
        double acc = 0.0;
        for (int t = 1; t <= fin.years(); ++t) {
            df *= g;
            const double flow =
                static_cast<double>(fin.at_year(t).cents) +
                attribution.at_year(t) * static_cast<double>(imp.at_year(t).cents);
            acc += -t * flow * df * g;
        }
        return acc;
    }
};

// Bisect [a, b] (f(a), f(b) of opposite sign), then polish with Newton while
// it improves and stays in the domain. Converges on |f| or bracket width.
double solve_bracket(const NpvFn& f, double a, double b, double fa, const SolverConfig& cfg) {
    double m = 0.5 * (a + b);
    for (int i = 0; i < 200; ++i) {
        m = 0.5 * (a + b);
        double fm = f.value(m);
        if (!std::isfinite(fm)) {
            // Blow-up can only come from the deep-negative side of the domain.
            a = m;
            continue;
        }
        if (std::fabs(fm) <= cfg.value_tol_cents || (b - a) <= cfg.rate_tol) break;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    double best = m;
    double best_abs = std::fabs(f.value(m));
    double x = m;
    for (int i = 0; i < 8 && best_abs > 0.0; ++i) {
        double fx = f.value(x);
        double dx = f.derivative(x);
        if (!std::isfinite(dx) || dx == 0.0) break;
        double next = x - fx / dx;
        if (!std::isfinite(next) || next <= cfg.lo || next > cfg.hi) break;
        double fn = f.value(next);
        if (!std::isfinite(fn) || std::fabs(fn) >= best_abs) break;
        x = next;
        best = next;
        best_abs = std::fabs(fn);
    }
    return best;
}

IrrResult solve_irr(const AnnualSeries& fin, const AnnualSeries& imp,
                    const Attribution& attribution, MoneyAmount c0, const SolverConfig& cfg) {
    check_inpv_inputs(fin, imp, attribution);
    if (!(cfg.lo > -1.0) || !(cfg.hi > cfg.lo) || !(cfg.scan_step > 0.0)) {
        throw ValidationError("solver config: need -1 < lo < hi and scan_step > 0");
    }

    // A root requires at least one sign change across the dated flows.
    bool has_pos = -c0.cents > 0;
    bool has_neg = -c0.cents < 0;
    for (int t = 1; t <= fin.years(); ++t) {
        const double w = static_cast<double>(fin.at_year(t).cents) +
                         attribution.at_year(t) * static_cast<double>(imp.at_year(t).cents);
        has_pos = has_pos || w > 0.0;
        has_neg = has_neg || w < 0.0;
    }
    if (!(has_pos && has_neg)) {
        throw SolveError(
            "IRR undefined: cash flows (including the initial investment) never change sign");
    }

    NpvFn f{fin, imp, attribution, c0};
    std::vector<double> roots;

    double prev_x = cfg.lo;
    double prev_f = f.value(prev_x);
    const int steps = static_cast<int>(std::ceil((cfg.hi - cfg.lo) / cfg.scan_step));
    for (int k = 1; k <= steps; ++k) {
        double x = std::min(cfg.lo + k * cfg.scan_step, cfg.hi);
        double fx = f.value(x);
        if (std::isfinite(prev_f) && std::isfinite(fx)) {
            if (fx == 0.0) {
                roots.push_back(x);
            } else if (prev_f != 0.0 && (prev_f < 0.0) != (fx < 0.0)) {
                roots.push_back(solve_bracket(f, prev_x, x, prev_f, cfg));
            }
        }
        prev_x = x;
        prev_f = fx;
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
                roots.end());
    if (roots.empty()) {
        throw SolveError("no IRR root in (-0.9999, 10]; INPV does not cross zero in the domain");
    }

    IrrResult out;
    out.roots.reserve(roots.size());
    for (double r : roots) out.roots.push_back(Rate{r});
    out.headline = out.roots.front();
    out.multiple_roots = out.roots.size() > 1;
    return out;
}

}  // namespace

IrrResult impact_irr(const AnnualSeries& fin, const AnnualSeries& imp,
                     const Attribution& attribution, MoneyAmount c0, const SolverConfig& cfg) {
    return solve_irr(fin, imp, attribution, c0, cfg);
}

IrrResult financial_irr(const AnnualSeries& fin, MoneyAmount c0, const SolverConfig& cfg) {
    AnnualSeries zeros(std::vector<MoneyAmount>(static_cast<std::size_t>(fin.years())));
    return solve_irr(fin, zeros, Attribution::uniform(0.0), c0, cfg);
}

Rate resolve_hurdle_rate(const InvestmentSpec& spec) {
    struct Visitor {
        const InvestmentSpec& spec;
        Rate operator()(const ExplicitHurdle& h) const { return h.rate; }
        Rate operator()(const BicOpportunityCost& h) const { return h.market_rate; }
        Rate operator()(const MicOwnRate&) const {
            AnnualSeries fin = build_financial_series(spec);
            return financial_irr(fin, spec.initial_investment).headline;
        }
    };
    return std::visit(Visitor{spec}, spec.hurdle);
}

ValuationResult value_investment(const ValuationInputs& in, const SolverConfig& cfg) {
    check_inpv_inputs(in.financial, in.impact, in.attribution);
    if (!(in.hurdle.value > -1.0)) throw ValidationError("hurdle rate must exceed -1");

    ValuationResult out;
    out.hurdle = in.hurdle;
    out.attribution_share = in.declared_attribution;
    out.inpv_at_hurdle = inpv(in.financial, in.impact, in.attribution, in.hurdle,
                              in.initial_investment);

    const double g = 1.0 / (1.0 + in.hurdle.value);
    double df = 1.0;
    double pv_fin = 0.0;
    double pv_imp = 0.0;
    out.timeline.reserve(static_cast<std::size_t>(in.financial.years()));
    for (int t = 1; t <= in.financial.years(); ++t) {
        df *= g;
        const MoneyAmount fin_t = in.financial.at_year(t);
        const MoneyAmount imp_t = MoneyAmount{std::llround(
            in.attribution.at_year(t) * static_cast<double>(in.impact.at_year(t).cents))};
        const MoneyAmount total = fin_t + imp_t;
        pv_fin += static_cast<double>(fin_t.cents) * df;
        pv_imp += in.attribution.at_year(t) * static_cast<double>(in.impact.at_year(t).cents) * df;
        out.timeline.push_back(TimelineRow{
            t, fin_t, imp_t, total,
            MoneyAmount{std::llround(static_cast<double>(total.cents) * df)}});
        out.nominal_impact_total += imp_t;
        out.nominal_financial_total += fin_t;
    }
    out.pv_financial = MoneyAmount{std::llround(pv_fin)};
    out.pv_impact = MoneyAmount{std::llround(pv_imp)};

    try {
        IrrResult r = impact_irr(in.financial, in.impact, in.attribution,
                                 in.initial_investment, cfg);
        out.impact_irr = r.headline;
        out.impact_irr_roots = r.roots;
        out.multiple_roots = r.multiple_roots;
        out.impact_irr_found = true;
    } catch (const SolveError& e) {
        out.impact_irr_note = e.what();
    }
    try {
        IrrResult r = financial_irr(in.financial, in.initial_investment, cfg);
        out.financial_irr = r.headline;
        out.financial_irr_found = true;
    } catch (const SolveError& e) {
        out.financial_irr_note = e.what();
    }
    return out;
}

}  // namespace iirr
