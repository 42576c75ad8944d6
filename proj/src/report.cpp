#include "iirr/report.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace iirr {

using json = nlohmann::ordered_json;

std::string to_string(Recommendation r) {
    switch (r) {
        case Recommendation::ConsiderForInvestment: return "consider_for_investment";
        case Recommendation::Decline: return "decline";
        case Recommendation::InsufficientData: return "insufficient_data";
    }
    return "insufficient_data";
}

Recommendation parse_recommendation(std::string_view s) {
    if (s == "consider_for_investment") return Recommendation::ConsiderForInvestment;
    if (s == "decline") return Recommendation::Decline;
    if (s == "insufficient_data") return Recommendation::InsufficientData;
    throw ParseError("unknown recommendation: '" + std::string(s) + "'");
}

DueDiligenceRecord build_report(const ScenarioFile& scenario, const ValuationResult& valuation,
                                const CapitalClass& capital_class) {
    DueDiligenceRecord rec;
    rec.name = scenario.name;
    rec.description = scenario.description;
    rec.asset_class = scenario.asset_class;
    rec.instrument = instrument_name(scenario.investment.instrument);
    rec.capital_type = to_string(scenario.investment.capital_type);
    rec.initial_investment = scenario.investment.initial_investment;
    rec.term_years = scenario.investment.term.years;
    rec.tier = scenario.investment.tier;
    rec.tier_total = scenario.investment.tier_total;
    rec.attribution_share = valuation.attribution_share;
    rec.evidence = scenario.investment.evidence;
    rec.variability_haircut = scenario.investment.variability_haircut;
    rec.capital_class = capital_class;
    rec.hurdle = valuation.hurdle;
    rec.financial_irr = valuation.financial_irr;
    rec.financial_irr_found = valuation.financial_irr_found;
    rec.impact_irr = valuation.impact_irr;
    rec.impact_irr_found = valuation.impact_irr_found;
    rec.multiple_irr_roots = valuation.multiple_roots;
    rec.impact_irr_roots = valuation.impact_irr_roots;
    rec.inpv_at_hurdle = valuation.inpv_at_hurdle;
    rec.pv_financial = valuation.pv_financial;
    rec.pv_impact = valuation.pv_impact;
    rec.nominal_financial_total = valuation.nominal_financial_total;
    rec.nominal_impact_total = valuation.nominal_impact_total;
    rec.timeline = valuation.timeline;

    if (scenario.report.unit_count) {
        OutcomeStats stats;
        stats.unit_count = *scenario.report.unit_count;
        stats.unit_label = scenario.report.unit_label;
        stats.annual_attributed_impact =
            valuation.timeline.empty() ? MoneyAmount{} : valuation.timeline.front().impact;
        auto per_unit = [&](MoneyAmount total) {
            return MoneyAmount{std::llround(static_cast<double>(total.cents) /
                                            static_cast<double>(stats.unit_count))};
        };
        stats.per_unit_annual = per_unit(stats.annual_attributed_impact);
        stats.per_unit_over_term = per_unit(valuation.nominal_impact_total);
        rec.outcomes = stats;
    }

    rec.notes = scenario_warnings(scenario);
    if (!valuation.impact_irr_found) {
        rec.notes.push_back("impact IRR not found: " + valuation.impact_irr_note);
    }
    if (!valuation.financial_irr_found) {
        rec.notes.push_back("financial IRR not found: " + valuation.financial_irr_note);
    }
    if (valuation.multiple_roots) {
        std::string all;
        for (Rate r : valuation.impact_irr_roots) {
            if (!all.empty()) all += ", ";
            all += format_percent(r, 2);
        }
        rec.notes.push_back("multiple IRR roots (" + all +
                            "); headline is the smallest — interpret with care");
    }
    if (scenario.investment.evidence == EvidenceLevel::Narrative) {
        rec.notes.push_back(
            "evidence level is narrative: monetized impact is indicative, not decision-grade");
    }

    if (scenario.investment.evidence != EvidenceLevel::Narrative && valuation.impact_irr_found &&
        valuation.inpv_at_hurdle.cents > 0) {
        rec.recommendation = Recommendation::ConsiderForInvestment;
    } else {
        rec.recommendation = Recommendation::InsufficientData;
    }
    return rec;
}

namespace {

std::string grouped(MoneyAmount m) { return format_dollars_grouped(m); }

std::string irr_or_na(Rate r, bool found) {
    return found ? format_percent(r, 2) : std::string("n/a");
}

}  // namespace

std::string render_text(const DueDiligenceRecord& rec) {
    std::ostringstream os;
    os << "Impact valuation record: " << rec.name << "\n";
    os << std::string(25 + rec.name.size(), '=') << "\n\n";
    if (!rec.description.empty()) os << "Description   : " << rec.description << "\n";
    if (!rec.asset_class.empty()) os << "Asset class   : " << rec.asset_class << "\n";
    os << "Instrument    : " << rec.instrument << " over " << rec.term_years << " years\n";
    os << "Investment    : " << grouped(rec.initial_investment) << " (" << rec.capital_type << ", "
       << to_string(rec.tier) << "; tier capital " << grouped(rec.tier_total) << ")\n";
    {
        std::ostringstream share;
        share.setf(std::ios::fixed);
        share.precision(2);
        share << rec.attribution_share * 100.0;
        os << "Attribution   : " << share.str() << "% of tier impact\n";
    }
    os << "Evidence      : " << to_string(rec.evidence);
    {
        std::ostringstream hc;
        hc.setf(std::ios::fixed);
        hc.precision(2);
        hc << rec.variability_haircut;
        os << " (variability haircut " << hc.str() << ")\n";
    }
    os << "Capital class : " << to_string(rec.capital_class.kind)
       << (rec.capital_class.catalytic ? ", catalytic" : "") << "\n\n";

    os << "Valuation\n---------\n";
    os << "Hurdle rate    : " << format_percent(rec.hurdle, 2) << "\n";
    os << "Financial IRR  : " << irr_or_na(rec.financial_irr, rec.financial_irr_found) << "\n";
    os << "Impact IRR     : " << irr_or_na(rec.impact_irr, rec.impact_irr_found);
    if (rec.multiple_irr_roots) os << " (multiple roots)";
    os << "\n";
    os << "INPV at hurdle : " << grouped(rec.inpv_at_hurdle) << "\n";
    os << "PV at hurdle   : financial " << grouped(rec.pv_financial) << ", impact "
       << grouped(rec.pv_impact) << "\n";
    os << "Nominal totals : financial " << grouped(rec.nominal_financial_total) << ", impact "
       << grouped(rec.nominal_impact_total) << "\n";

    if (rec.outcomes) {
        const OutcomeStats& st = *rec.outcomes;
        os << "\nOutcomes\n--------\n";
        os << "Attributed impact, year 1 : " << grouped(st.annual_attributed_impact) << "\n";
        os << "Per " << st.unit_label << " (" << st.unit_count
           << " served)  : " << grouped(st.per_unit_annual) << " per year, "
           << grouped(st.per_unit_over_term) << " over the term\n";
    }

    os << "\nRecommendation: " << to_string(rec.recommendation) << "\n";

    if (!rec.notes.empty()) {
        os << "\nNotes\n-----\n";
        for (const auto& n : rec.notes) os << "- " << n << "\n";
    }

    os << "\nTimeline (attributed, discounted at " << format_percent(rec.hurdle, 2) << ")\n";
    os << "year    financial       impact        total   discounted\n";
    for (const auto& row : rec.timeline) {
        os << std::setw(4) << row.year << std::setw(13) << grouped(row.financial) << std::setw(13)
           << grouped(row.impact) << std::setw(13) << grouped(row.total) << std::setw(13)
           << grouped(row.discounted) << "\n";
    }
    return os.str();
}

std::string render_json(const DueDiligenceRecord& rec) {
    json j;
    j["schema_version"] = 1;
    j["name"] = rec.name;
    j["description"] = rec.description;
    j["asset_class"] = rec.asset_class;
    j["instrument"] = rec.instrument;
    j["capital_type"] = rec.capital_type;
    j["initial_investment"] = format_money(rec.initial_investment);
    j["term_years"] = rec.term_years;
    j["tier"] = to_string(rec.tier);
    j["tier_total"] = format_money(rec.tier_total);
    j["attribution_share"] = rec.attribution_share;
    j["evidence_level"] = to_string(rec.evidence);
    j["variability_haircut"] = rec.variability_haircut;
    j["capital_class"] = {{"kind", to_string(rec.capital_class.kind)},
                          {"catalytic", rec.capital_class.catalytic}};
    j["hurdle"] = rec.hurdle.value;
    j["financial_irr"] = rec.financial_irr_found ? json(rec.financial_irr.value) : json(nullptr);
    j["impact_irr"] = rec.impact_irr_found ? json(rec.impact_irr.value) : json(nullptr);
    j["multiple_irr_roots"] = rec.multiple_irr_roots;
    json roots = json::array();
    for (Rate r : rec.impact_irr_roots) roots.push_back(r.value);
    j["impact_irr_roots"] = std::move(roots);
    j["inpv_at_hurdle"] = format_money(rec.inpv_at_hurdle);
    j["pv_financial"] = format_money(rec.pv_financial);
    j["pv_impact"] = format_money(rec.pv_impact);
    j["nominal_financial_total"] = format_money(rec.nominal_financial_total);
    j["nominal_impact_total"] = format_money(rec.nominal_impact_total);
    if (rec.outcomes) {
        const OutcomeStats& st = *rec.outcomes;
        json o;
        o["unit_count"] = st.unit_count;
        o["unit_label"] = st.unit_label;
        o["annual_attributed_impact"] = format_money(st.annual_attributed_impact);
        o["per_unit_annual"] = format_money(st.per_unit_annual);
        o["per_unit_over_term"] = format_money(st.per_unit_over_term);
        j["outcomes"] = std::move(o);
    } else {
        j["outcomes"] = nullptr;
    }
    j["recommendation"] = to_string(rec.recommendation);
    j["notes"] = rec.notes;
    json timeline = json::array();
    for (const auto& row : rec.timeline) {
        json r;
        r["year"] = row.year;
        r["financial"] = format_money(row.financial);
        r["impact"] = format_money(row.impact);
        r["total"] = format_money(row.total);
        r["discounted"] = format_money(row.discounted);
        timeline.push_back(std::move(r));
    }
    j["timeline"] = std::move(timeline);
    return j.dump(2) + "\n";
}

std::string render_csv_timeline(const DueDiligenceRecord& rec) {
    std::ostringstream os;
    os << "year,financial,impact_attributed,total,discounted\n";
    for (const auto& row : rec.timeline) {
        os << row.year << ',' << format_money(row.financial) << ',' << format_money(row.impact)
           << ',' << format_money(row.total) << ',' << format_money(row.discounted) << "\n";
    }
    return os.str();
}

namespace {

[[noreturn]] void rfail(const std::string& path, const std::string& msg) {
    throw ParseError("report." + path + ": " + msg);
}

const json& rmember(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) rfail(key, "missing field");
    return *it;
}

std::string rstring(const json& obj, const char* key) {
    const json& v = rmember(obj, key);
    if (!v.is_string()) rfail(key, "expected a string");
    return v.get<std::string>();
}

MoneyAmount rmoney(const json& obj, const char* key) {
    const json& v = rmember(obj, key);
    if (!v.is_string()) rfail(key, "expected a decimal money string");
    try {
        return parse_money(v.get<std::string>());
    } catch (const ParseError& e) {
        rfail(key, e.what());
    }
}

double rnumber(const json& obj, const char* key) {
    const json& v = rmember(obj, key);
    if (!v.is_number()) rfail(key, "expected a number");
    return v.get<double>();
}

bool rbool(const json& obj, const char* key) {
    const json& v = rmember(obj, key);
    if (!v.is_boolean()) rfail(key, "expected a boolean");
    return v.get<bool>();
}

}  // namespace

DueDiligenceRecord parse_report_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("report: expected a JSON object");
    if (!j.contains("schema_version") || j["schema_version"] != 1) {
        throw ParseError("report.schema_version: unsupported version (this build reads version 1)");
    }

    DueDiligenceRecord rec;
    rec.name = rstring(j, "name");
    rec.description = rstring(j, "description");
    rec.asset_class = rstring(j, "asset_class");
    rec.instrument = rstring(j, "instrument");
    rec.capital_type = rstring(j, "capital_type");
    rec.initial_investment = rmoney(j, "initial_investment");
    rec.term_years = static_cast<int>(rnumber(j, "term_years"));
    rec.tier = parse_tier(rstring(j, "tier"));
    rec.tier_total = rmoney(j, "tier_total");
    rec.attribution_share = rnumber(j, "attribution_share");
    rec.evidence = parse_evidence_level(rstring(j, "evidence_level"));
    rec.variability_haircut = rnumber(j, "variability_haircut");
    const json& cls = rmember(j, "capital_class");
    if (!cls.is_object()) rfail("capital_class", "expected an object");
    rec.capital_class.kind = parse_capital_class_kind(rstring(cls, "kind"));
    rec.capital_class.catalytic = rbool(cls, "catalytic");
    rec.hurdle = Rate{rnumber(j, "hurdle")};
    const json& fin_irr = rmember(j, "financial_irr");
    rec.financial_irr_found = !fin_irr.is_null();
    if (rec.financial_irr_found) rec.financial_irr = Rate{fin_irr.get<double>()};
    const json& imp_irr = rmember(j, "impact_irr");
    rec.impact_irr_found = !imp_irr.is_null();
    if (rec.impact_irr_found) rec.impact_irr = Rate{imp_irr.get<double>()};
    rec.multiple_irr_roots = rbool(j, "multiple_irr_roots");
    const json& roots = rmember(j, "impact_irr_roots");
    if (!roots.is_array()) rfail("impact_irr_roots", "expected an array");
    for (const json& r : roots) rec.impact_irr_roots.push_back(Rate{r.get<double>()});
    rec.inpv_at_hurdle = rmoney(j, "inpv_at_hurdle");
    rec.pv_financial = rmoney(j, "pv_financial");
    rec.pv_impact = rmoney(j, "pv_impact");
    rec.nominal_financial_total = rmoney(j, "nominal_financial_total");
    rec.nominal_impact_total = rmoney(j, "nominal_impact_total");
    const json& outcomes = rmember(j, "outcomes");
    if (!outcomes.is_null()) {
        if (!outcomes.is_object()) rfail("outcomes", "expected an object or null");
        OutcomeStats st;
        st.unit_count = static_cast<long>(rnumber(outcomes, "unit_count"));
        st.unit_label = rstring(outcomes, "unit_label");
        st.annual_attributed_impact = rmoney(outcomes, "annual_attributed_impact");
        st.per_unit_annual = rmoney(outcomes, "per_unit_annual");
        st.per_unit_over_term = rmoney(outcomes, "per_unit_over_term");
        rec.outcomes = st;
    }
    rec.recommendation = parse_recommendation(rstring(j, "recommendation"));
    const json& notes = rmember(j, "notes");
    if (!notes.is_array()) rfail("notes", "expected an array");
    for (const json& n : notes) {
        if (!n.is_string()) rfail("notes", "expected strings");
        rec.notes.push_back(n.get<std::string>());
    }
    const json& timeline = rmember(j, "timeline");
    if (!timeline.is_array()) rfail("timeline", "expected an array");
    for (const json& row : timeline) {
        if (!row.is_object()) rfail("timeline", "expected row objects");
        TimelineRow tr;
        tr.year = static_cast<int>(rnumber(row, "year"));
        tr.financial = rmoney(row, "financial");
        tr.impact = rmoney(row, "impact");
        tr.total = rmoney(row, "total");
        tr.discounted = rmoney(row, "discounted");
        rec.timeline.push_back(tr);
    }
    return rec;
}

}  // namespace iirr
