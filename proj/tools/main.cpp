#include <CLI11.hpp>

#include "iirr/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace iirr;

#ifndef IIRR_BUNDLED_SCENARIO_DIR
#define IIRR_BUNDLED_SCENARIO_DIR "scenarios"
#endif

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + out_path);
    out << text;
    if (!out) throw IoError("error writing output file: " + out_path);
}

std::string render(const DueDiligenceRecord& rec, const std::string& format) {
    if (format == "text") return render_text(rec);
    if (format == "json") return render_json(rec);
    if (format == "csv-timeline") return render_csv_timeline(rec);
    throw ParseError("unknown output format '" + format + "' (use text, json, or csv-timeline)");
}

void print_warnings(const ScenarioFile& scenario) {
    for (const auto& w : scenario_warnings(scenario)) {
        std::cerr << "warning: " << w << "\n";
    }
}

int cmd_evaluate(const std::string& path, const std::string& format,
                 const std::optional<double>& hurdle, const std::string& out_path) {
    ScenarioFile scenario = load_scenario(path);
    print_warnings(scenario);
    EvaluationOverrides ov;
    ov.hurdle = hurdle;
    Evaluation ev = run_scenario(scenario, ov);
    if (!ev.valuation.impact_irr_found) {
        throw SolveError(ev.valuation.impact_irr_note);
    }
    write_output(render(ev.record, format), out_path);
    return 0;
}

std::string format_grid_value(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

int cmd_sweep(const std::string& path, const std::string& param, double from, double to,
              double step, const std::string& out_path) {
    static const std::vector<std::string> kParams = {"hurdle", "vacancy", "growth", "attribution"};
    if (std::find(kParams.begin(), kParams.end(), param) == kParams.end()) {
        throw ParseError("unknown sweep parameter '" + param +
                         "' (use hurdle, vacancy, growth, or attribution)");
    }
    if (!(step > 0.0)) throw ValidationError("sweep step must be positive");
    if (to < from) throw ValidationError("sweep range is empty (to < from)");
    const int points = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
    if (points > 10000) throw ValidationError("sweep grid has more than 10000 points");

    ScenarioFile scenario = load_scenario(path);
    print_warnings(scenario);

    std::ostringstream os;
    os << "param,value,inpv,impact_irr,status\n";
    for (int i = 0; i < points; ++i) {
        const double value = from + i * step;
        EvaluationOverrides ov;
        if (param == "hurdle") ov.hurdle = value;
        if (param == "vacancy") ov.vacancy = value;
        if (param == "growth") ov.growth = value;
        if (param == "attribution") ov.attribution = value;
        Evaluation ev = run_scenario(scenario, ov);
        os << param << ',' << format_grid_value(value) << ','
           << format_money(ev.valuation.inpv_at_hurdle) << ',';
        if (ev.valuation.impact_irr_found) {
            os << format_grid_value(ev.valuation.impact_irr.value) << ",ok\n";
        } else {
            os << ",no_irr\n";
        }
    }
    write_output(os.str(), out_path);
    return 0;
}

// --- reproduce ---------------------------------------------------------------
// Compares each bundled case against its published reference figures and
// prints one line per check. Exit 1 when anything drifts outside its band.

struct CaseCheck {
    std::string label;
    std::string shown;
    std::string expected;
    bool pass = false;
};

struct CaseResult {
    std::string name;
    std::string headline;
    std::vector<CaseCheck> checks;
    std::vector<std::string> notes;
};

std::string shown_rate(const Evaluation& ev, bool financial) {
    bool found = financial ? ev.valuation.financial_irr_found : ev.valuation.impact_irr_found;
    Rate r = financial ? ev.valuation.financial_irr : ev.valuation.impact_irr;
    return found ? format_percent(r, 2) : std::string("n/a");
}

CaseCheck check_rate_band(const Evaluation& ev, bool financial, const std::string& label,
                          double lo, double hi, const std::string& published) {
    bool found = financial ? ev.valuation.financial_irr_found : ev.valuation.impact_irr_found;
    double r = (financial ? ev.valuation.financial_irr : ev.valuation.impact_irr).value;
    return CaseCheck{label, shown_rate(ev, financial),
                     format_percent(Rate{lo}, 2) + ".." + format_percent(Rate{hi}, 2) +
                         " (published " + published + ")",
                     found && r >= lo && r <= hi};
}

CaseCheck check_rate_exact(const Evaluation& ev, bool financial, const std::string& label,
                           double target) {
    bool found = financial ? ev.valuation.financial_irr_found : ev.valuation.impact_irr_found;
    double r = (financial ? ev.valuation.financial_irr : ev.valuation.impact_irr).value;
    return CaseCheck{label, shown_rate(ev, financial), format_percent(Rate{target}, 2) + " (coupon)",
                     found && std::fabs(r - target) <= 1e-6};
}

CaseCheck check_money_near(const std::string& label, MoneyAmount actual, std::int64_t target_cents,
                           std::int64_t tol_cents) {
    return CaseCheck{label, format_money(actual),
                     format_money(MoneyAmount{target_cents}) + " +/- " +
                         format_money(MoneyAmount{tol_cents}),
                     std::llabs(actual.cents - target_cents) <= tol_cents};
}

CaseCheck check_money_rel(const std::string& label, MoneyAmount actual, std::int64_t target_cents,
                          double rel_tol, const std::string& band_text) {
    return CaseCheck{label, format_money(actual), band_text,
                     std::fabs(static_cast<double>(actual.cents - target_cents)) <=
                         rel_tol * static_cast<double>(target_cents)};
}

std::string deviation_pct(MoneyAmount actual, std::int64_t target_cents) {
    double dev = std::fabs(static_cast<double>(actual.cents - target_cents)) /
                 static_cast<double>(target_cents) * 100.0;
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << dev << "%";
    return os.str();
}

CaseResult reproduce_case(const std::string& name, const Evaluation& ev) {
    CaseResult res;
    res.name = name;
    res.headline = ev.scenario.description;
    const ValuationResult& v = ev.valuation;

    if (name == "ff") {
        res.checks.push_back(check_rate_exact(ev, true, "financial IRR", 0.02));
        res.checks.push_back(check_rate_band(ev, false, "impact IRR", 0.11, 0.13, "~12%"));
        res.checks.push_back(check_money_near("attributed impact, year 1",
                                              v.timeline.front().impact, 15'731'500, 100));
        res.checks.push_back(check_money_rel("INPV at 6.00%", v.inpv_at_hurdle, 696'000'00LL,
                                             0.02, "within 2% of 696,000.00"));
        res.notes.push_back("engine INPV deviates " +
                            deviation_pct(v.inpv_at_hurdle, 696'000'00LL) +
                            " from the published 696,000, which carries rounded intermediates");
    } else if (name == "lisc") {
        res.checks.push_back(check_money_rel("annual debt service", ev.financial.at_year(1),
                                             244'926'00LL, 0.001, "within 0.1% of 244,926.00"));
        res.checks.push_back(check_money_near("tier outcome, year 1", v.timeline.front().impact,
                                              83'414'300, 100));
        res.checks.push_back(check_rate_band(ev, false, "impact IRR", 0.44, 0.46, "~45%"));
        res.checks.push_back(check_rate_exact(ev, true, "financial IRR", 0.0425));
        res.notes.push_back(
            "published prose rounds outcomes to ~20,000 per household over the hold; the modeled "
            "year-1 outcome is 8,341.43 per household across 100 units");
        res.notes.push_back("nominal 14-year outcome total is " +
                            format_money(v.nominal_impact_total) + "; PV at the 4.25% hurdle is " +
                            format_money(v.pv_impact));
    } else if (name == "ffcp-dt1") {
        res.checks.push_back(check_money_near("amortizing payment (years 4-7)",
                                              ev.financial.at_year(4), 3'543'000'00LL, 100'000));
        res.checks.push_back(check_rate_band(ev, false, "impact IRR", 0.30, 0.32, "31%"));
        res.notes.push_back(
            "impact rows are published post-attribution (60% tier share embedded); the engine "
            "treats them as final");
    } else if (name == "ffcp-dt2") {
        res.checks.push_back(check_money_near("amortizing payment (years 1-4)",
                                              ev.financial.at_year(1), 2'362'000'00LL, 100'000));
        res.checks.push_back(check_rate_band(ev, false, "impact IRR", 0.52, 0.54, "53%"));
        res.notes.push_back(
            "impact rows are published post-attribution (40% tier share embedded); the engine "
            "treats them as final");
    } else if (name == "learn") {
        res.checks.push_back(check_rate_band(ev, true, "financial IRR", 0.245, 0.255, "25%"));
        res.checks.push_back(check_rate_band(ev, false, "impact IRR", 0.28, 0.30, "29%"));
        res.notes.push_back(
            "impact rows are published post-attribution (25% tier share embedded); financial leg "
            "is a single 9x exit in year 10");
    }
    return res;
}

const std::vector<std::string>& bundled_case_names() {
    static const std::vector<std::string> names = {"ff", "lisc", "ffcp-dt1", "ffcp-dt2", "learn"};
    return names;
}

int cmd_reproduce(std::vector<std::string> cases, const std::string& dir) {
    if (cases.empty()) cases = bundled_case_names();
    for (const auto& c : cases) {
        const auto& known = bundled_case_names();
        if (std::find(known.begin(), known.end(), c) == known.end()) {
            throw ParseError("unknown case '" + c +
                             "' (bundled: ff, lisc, ffcp-dt1, ffcp-dt2, learn)");
        }
    }

    std::ostringstream os;
    os << "reproducing published case figures (scenario dir: " << dir << ")\n";
    int failed_cases = 0;
    for (const auto& name : cases) {
        ScenarioFile scenario = load_scenario(std::filesystem::path(dir) / (name + ".scenario"));
        Evaluation ev = run_scenario(scenario);
        CaseResult res = reproduce_case(name, ev);
        bool all_pass = std::all_of(res.checks.begin(), res.checks.end(),
                                    [](const CaseCheck& c) { return c.pass; });
        if (!all_pass) ++failed_cases;
        os << "\ncase " << res.name;
        if (!res.headline.empty()) os << " — " << res.headline;
        os << "\n";
        for (const auto& c : res.checks) {
            os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << std::left << std::setw(32)
               << c.label << std::setw(16) << c.shown << "expected " << c.expected << "\n";
        }
        for (const auto& n : res.notes) os << "  note: " << n << "\n";
    }
    os << "\nsummary: " << (cases.size() - static_cast<std::size_t>(failed_cases)) << "/"
       << cases.size() << " cases reproduced\n";
    std::cout << os.str();
    return failed_cases == 0 ? 0 : 1;
}

std::string default_format_from_env() {
    const char* env = std::getenv("IIRR_FORMAT");
    if (env == nullptr || *env == '\0') return "text";
    std::string format = env;
    if (format != "text" && format != "json" && format != "csv-timeline") {
        throw ParseError("IIRR_FORMAT must be text, json, or csv-timeline (got '" + format + "')");
    }
    return format;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"impact valuation engine: INPV and impact IRR for declarative scenarios"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "iirr 1.0.0");

    std::string scenario_path;
    std::string format;
    std::string out_path;
    double hurdle_override = 0.0;

    CLI::App* evaluate = app.add_subcommand("evaluate", "value one scenario file");
    evaluate->add_option("scenario", scenario_path, "path to a .scenario file")->required();
    CLI::Option* format_opt =
        evaluate->add_option("--format", format, "output format: text, json, csv-timeline");
    CLI::Option* hurdle_opt = evaluate->add_option(
        "--hurdle", hurdle_override, "override the hurdle rate (plain fraction, e.g. 0.06)");
    evaluate->add_option("--out", out_path, "write the report to a file instead of stdout");

    std::vector<std::string> cases;
    std::string scenario_dir = IIRR_BUNDLED_SCENARIO_DIR;
    CLI::App* reproduce =
        app.add_subcommand("reproduce", "re-derive the bundled cases' published figures");
    reproduce->add_option("cases", cases, "subset of: ff lisc ffcp-dt1 ffcp-dt2 learn");
    reproduce->add_option("--scenario-dir", scenario_dir, "directory holding bundled scenarios");

    std::string param;
    double from = 0.0, to = 0.0, step = 0.0;
    CLI::App* sweep = app.add_subcommand("sweep", "re-value a scenario across a parameter grid");
    sweep->add_option("scenario", scenario_path, "path to a .scenario file")->required();
    sweep->add_option("--param", param, "hurdle, vacancy, growth, or attribution")->required();
    sweep->add_option("--from", from, "grid start")->required();
    sweep->add_option("--to", to, "grid end (inclusive)")->required();
    sweep->add_option("--step", step, "grid step (positive)")->required();
    sweep->add_option("--out", out_path, "write the CSV to a file instead of stdout");

    try {
        app.parse(argc, argv);

        if (app.got_subcommand(evaluate)) {
            std::string effective_format = *format_opt ? format : default_format_from_env();
            std::optional<double> hurdle;
            if (*hurdle_opt) hurdle = hurdle_override;
            return cmd_evaluate(scenario_path, effective_format, hurdle, out_path);
        }
        if (app.got_subcommand(reproduce)) {
            return cmd_reproduce(cases, scenario_dir);
        }
        if (app.got_subcommand(sweep)) {
            return cmd_sweep(scenario_path, param, from, to, step, out_path);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolveError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
}
