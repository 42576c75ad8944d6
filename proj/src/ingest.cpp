#include "iirr/ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace iirr {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ParseError(path + ": " + msg);
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? key : path + "." + key;
}

const json& member(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

const json* member_opt(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return it.key() == k;
            }) == allowed.end()) {
            fail(path, "unknown field '" + it.key() + "'");
        }
    }
}

const json& as_object(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    return v;
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
}

std::int64_t get_int(const json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) fail(path, "expected an integer");
    return v.get<std::int64_t>();
}

double get_fraction(const json& v, const std::string& path, double lo, double hi) {
    if (v.is_string()) {
        fail(path, "expected a plain number (fractions like 0.0425, not strings or percents)");
    }
    if (!v.is_number()) fail(path, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    if (d < lo || d > hi) {
        std::ostringstream os;
        os << "must be in [" << lo << ", " << hi << "]";
        fail(path, os.str());
    }
    return d;
}

Rate get_rate(const json& v, const std::string& path) {
    if (v.is_string()) {
        fail(path, "expected a plain number (fractions like 0.0425, not strings or percents)");
    }
    if (!v.is_number()) fail(path, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d) || d <= -1.0 || d > 10.0) fail(path, "rate must be in (-1, 10]");
    return Rate{d};
}

MoneyAmount get_money(const json& v, const std::string& path) {
    if (v.is_number_integer() || v.is_number_unsigned()) {
        std::int64_t d = v.get<std::int64_t>();
        if (std::llabs(d) > MoneyAmount::kMaxAbsCents / 100) fail(path, "amount out of range");
        return MoneyAmount::from_dollars(d);
    }
    if (v.is_number_float()) {
        double d = v.get<double>();
        double cents = d * 100.0;
        if (!std::isfinite(cents) || std::fabs(cents - std::round(cents)) > 1e-6) {
            fail(path, "money must have at most two decimal places");
        }
        if (std::fabs(cents) > static_cast<double>(MoneyAmount::kMaxAbsCents)) {
            fail(path, "amount out of range");
        }
        return MoneyAmount{std::llround(cents)};
    }
    if (v.is_string()) {
        try {
            return parse_money(v.get<std::string>());
        } catch (const ParseError& e) {
            fail(path, e.what());
        }
    }
    fail(path, "expected a money amount (number or decimal string)");
}

int get_year_count(const json& v, const std::string& path, int lo, int hi) {
    std::int64_t n = get_int(v, path);
    if (n < lo || n > hi) {
        fail(path, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(n);
}

InstrumentTerms parse_instrument(const json& v, const std::string& path) {
    const json& obj = as_object(v, path);
    std::string type = get_string(member(obj, path, "type"), join(path, "type"));
    if (type == "interest_only_balloon") {
        reject_unknown_keys(obj, path, {"type", "rate"});
        return InterestOnlyBalloon{get_rate(member(obj, path, "rate"), join(path, "rate"))};
    }
    if (type == "level_amortizing") {
        reject_unknown_keys(obj, path, {"type", "rate"});
        return LevelAmortizing{get_rate(member(obj, path, "rate"), join(path, "rate"))};
    }
    if (type == "interest_only_then_amortizing") {
        reject_unknown_keys(obj, path, {"type", "rate", "io_years"});
        return InterestOnlyThenAmortizing{
            get_rate(member(obj, path, "rate"), join(path, "rate")),
            get_year_count(member(obj, path, "io_years"), join(path, "io_years"), 0, 99)};
    }
    if (type == "equity_exit") {
        reject_unknown_keys(obj, path, {"type", "exit_proceeds", "exit_year"});
        return EquityExit{
            get_money(member(obj, path, "exit_proceeds"), join(path, "exit_proceeds")),
            get_year_count(member(obj, path, "exit_year"), join(path, "exit_year"), 1, 100)};
    }
    fail(join(path, "type"), "unknown instrument type '" + type + "'");
}

HurdlePolicy parse_hurdle(const json& v, const std::string& path) {
    const json& obj = as_object(v, path);
    std::string policy = get_string(member(obj, path, "policy"), join(path, "policy"));
    if (policy == "explicit") {
        reject_unknown_keys(obj, path, {"policy", "rate"});
        return ExplicitHurdle{get_rate(member(obj, path, "rate"), join(path, "rate"))};
    }
    if (policy == "bic_opportunity_cost") {
        reject_unknown_keys(obj, path, {"policy", "market_rate"});
        return BicOpportunityCost{
            get_rate(member(obj, path, "market_rate"), join(path, "market_rate"))};
    }
    if (policy == "mic_own_rate") {
        reject_unknown_keys(obj, path, {"policy"});
        return MicOwnRate{};
    }
    fail(join(path, "policy"), "unknown hurdle policy '" + policy + "'");
}

template <typename T>
T parse_enum_field(const json& v, const std::string& path, T (*parser)(std::string_view)) {
    std::string s = get_string(v, path);
    try {
        return parser(s);
    } catch (const ParseError& e) {
        fail(path, e.what());
    }
}

HousingParams parse_housing_params(const json& obj, const std::string& path) {
    HousingParams p;
    p.vacancy_rate = Rate{get_fraction(member(obj, path, "vacancy_rate"),
                                       join(path, "vacancy_rate"), 0.0, 0.999999)};
    if (const json* g = member_opt(obj, "annual_growth")) {
        p.annual_growth = get_rate(*g, join(path, "annual_growth"));
    }
    return p;
}

std::vector<RentRollEntry> parse_rent_roll_json(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of rent-roll rows");
    std::vector<RentRollEntry> out;
    out.reserve(v.size());
    int i = 0;
    for (const json& row : v) {
        std::string rp = path + "[" + std::to_string(i++) + "]";
        const json& obj = as_object(row, rp);
        reject_unknown_keys(obj, rp,
                            {"income_band", "bedrooms", "affordable_rent", "market_rent", "units"});
        RentRollEntry e;
        e.band = parse_enum_field(member(obj, rp, "income_band"), join(rp, "income_band"),
                                  &parse_income_band);
        e.bedrooms = get_year_count(member(obj, rp, "bedrooms"), join(rp, "bedrooms"), 0, 10);
        e.affordable_rent =
            get_money(member(obj, rp, "affordable_rent"), join(rp, "affordable_rent"));
        e.market_rent = get_money(member(obj, rp, "market_rent"), join(rp, "market_rent"));
        e.units = get_year_count(member(obj, rp, "units"), join(rp, "units"), 0, 100000);
        out.push_back(e);
    }
    return out;
}

std::vector<SubsidyEntry> parse_subsidies_json(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of subsidy rows");
    std::vector<SubsidyEntry> out;
    out.reserve(v.size());
    int i = 0;
    for (const json& row : v) {
        std::string rp = path + "[" + std::to_string(i++) + "]";
        const json& obj = as_object(row, rp);
        reject_unknown_keys(obj, rp, {"income_band", "bedrooms", "monthly_subsidy", "units"});
        SubsidyEntry e;
        e.band = parse_enum_field(member(obj, rp, "income_band"), join(rp, "income_band"),
                                  &parse_income_band);
        e.bedrooms = get_year_count(member(obj, rp, "bedrooms"), join(rp, "bedrooms"), 0, 10);
        e.monthly_subsidy =
            get_money(member(obj, rp, "monthly_subsidy"), join(rp, "monthly_subsidy"));
        e.units = get_year_count(member(obj, rp, "units"), join(rp, "units"), 0, 100000);
        out.push_back(e);
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error while reading file: " + path.string());
    return buf.str();
}

ImpactModel parse_impact_model(const json& v, const std::string& path, int term_years,
                               const std::optional<std::filesystem::path>& base_dir) {
    const json& obj = as_object(v, path);
    std::string type = get_string(member(obj, path, "type"), join(path, "type"));

    auto resolve_csv = [&](const json& ref, const std::string& ref_path) {
        std::string name = get_string(ref, ref_path);
        if (!base_dir) {
            fail(ref_path, "CSV references require loading the scenario from a file");
        }
        return read_text_file(*base_dir / name);
    };

    if (type == "rent_gap") {
        reject_unknown_keys(obj, path,
                            {"type", "vacancy_rate", "annual_growth", "rent_roll", "rent_roll_csv"});
        RentGapModel m;
        m.params = parse_housing_params(obj, path);
        const json* inline_rows = member_opt(obj, "rent_roll");
        const json* csv_ref = member_opt(obj, "rent_roll_csv");
        if ((inline_rows != nullptr) == (csv_ref != nullptr)) {
            fail(path, "provide exactly one of 'rent_roll' or 'rent_roll_csv'");
        }
        m.roll = inline_rows ? parse_rent_roll_json(*inline_rows, join(path, "rent_roll"))
                             : parse_rent_roll(resolve_csv(*csv_ref, join(path, "rent_roll_csv")));
        return m;
    }
    if (type == "subsidy") {
        reject_unknown_keys(obj, path,
                            {"type", "vacancy_rate", "annual_growth", "subsidies", "subsidy_csv"});
        SubsidyModel m;
        m.params = parse_housing_params(obj, path);
        const json* inline_rows = member_opt(obj, "subsidies");
        const json* csv_ref = member_opt(obj, "subsidy_csv");
        if ((inline_rows != nullptr) == (csv_ref != nullptr)) {
            fail(path, "provide exactly one of 'subsidies' or 'subsidy_csv'");
        }
        m.subsidies = inline_rows
                          ? parse_subsidies_json(*inline_rows, join(path, "subsidies"))
                          : parse_subsidy_table(resolve_csv(*csv_ref, join(path, "subsidy_csv")));
        return m;
    }
    if (type == "jobs") {
        reject_unknown_keys(obj, path, {"type", "value_growth", "loan_growth", "archetypes"});
        JobsModel m;
        if (const json* g = member_opt(obj, "value_growth")) {
            m.params.value_growth = get_rate(*g, join(path, "value_growth"));
        }
        if (const json* g = member_opt(obj, "loan_growth")) {
            m.params.loan_growth = get_rate(*g, join(path, "loan_growth"));
        }
        const json& arch = member(obj, path, "archetypes");
        if (!arch.is_array()) fail(join(path, "archetypes"), "expected an array");
        int i = 0;
        for (const json& row : arch) {
            std::string rp = join(path, "archetypes") + "[" + std::to_string(i++) + "]";
            const json& aobj = as_object(row, rp);
            reject_unknown_keys(aobj, rp,
                                {"name", "loans_per_year", "avg_loan", "monetized_value_per_100k"});
            JobsArchetype a;
            a.name = get_string(member(aobj, rp, "name"), join(rp, "name"));
            a.loans_per_year =
                get_year_count(member(aobj, rp, "loans_per_year"), join(rp, "loans_per_year"), 0,
                               1000000);
            a.avg_loan = get_money(member(aobj, rp, "avg_loan"), join(rp, "avg_loan"));
            a.monetized_value_per_100k = get_money(member(aobj, rp, "monetized_value_per_100k"),
                                                   join(rp, "monetized_value_per_100k"));
            m.params.archetypes.push_back(std::move(a));
        }
        return m;
    }
    if (type == "income_uplift") {
        reject_unknown_keys(
            obj, path,
            {"type", "students", "graduates", "base_annual_salary", "uplift_vs_base",
             "post_uplift_growth", "nongraduate_growth", "course_years", "program_cost",
             "self_financed_share", "financed_annual_debt_service", "loan_years",
             "resignation_rate", "resignation_repayment", "scholarship_share", "cost_growth"});
        IncomeUpliftModel m;
        auto get_counts = [&](const char* key) {
            const json& arr = member(obj, path, key);
            if (!arr.is_array()) fail(join(path, key), "expected an array of counts");
            std::vector<long> out;
            int i = 0;
            for (const json& n : arr) {
                std::string ip = join(path, key) + "[" + std::to_string(i++) + "]";
                std::int64_t v2 = get_int(n, ip);
                if (v2 < 0 || v2 > 100000000) fail(ip, "count out of range");
                out.push_back(static_cast<long>(v2));
            }
            return out;
        };
        m.params.students = get_counts("students");
        m.params.graduates = get_counts("graduates");
        if (m.params.students.size() != m.params.graduates.size()) {
            fail(join(path, "graduates"), "must have the same length as students");
        }
        m.params.base_annual_salary =
            get_money(member(obj, path, "base_annual_salary"), join(path, "base_annual_salary"));
        const json& uplift = member(obj, path, "uplift_vs_base");
        if (!uplift.is_array() || uplift.empty()) {
            fail(join(path, "uplift_vs_base"), "expected a non-empty array of fractions");
        }
        int i = 0;
        for (const json& u : uplift) {
            std::string ip = join(path, "uplift_vs_base") + "[" + std::to_string(i++) + "]";
            m.params.uplift_vs_base.push_back(get_fraction(u, ip, -1.0, 100.0));
        }
        if (const json* g = member_opt(obj, "post_uplift_growth")) {
            m.params.post_uplift_growth = get_rate(*g, join(path, "post_uplift_growth"));
        }
        if (const json* g = member_opt(obj, "nongraduate_growth")) {
            m.params.nongraduate_growth = get_rate(*g, join(path, "nongraduate_growth"));
        }
        if (const json* g = member_opt(obj, "course_years")) {
            m.params.course_years = get_year_count(*g, join(path, "course_years"), 0, 10);
        }
        if (const json* g = member_opt(obj, "program_cost")) {
            m.params.program_cost = get_money(*g, join(path, "program_cost"));
        }
        if (const json* g = member_opt(obj, "self_financed_share")) {
            m.params.self_financed_share = get_fraction(*g, join(path, "self_financed_share"),
                                                        0.0, 1.0);
        }
        if (const json* g = member_opt(obj, "financed_annual_debt_service")) {
            m.params.financed_annual_debt_service =
                get_money(*g, join(path, "financed_annual_debt_service"));
        }
        if (const json* g = member_opt(obj, "loan_years")) {
            m.params.loan_years = get_year_count(*g, join(path, "loan_years"), 0, 100);
        }
        if (const json* g = member_opt(obj, "resignation_rate")) {
            m.params.resignation_rate = get_fraction(*g, join(path, "resignation_rate"), 0.0, 1.0);
        }
        if (const json* g = member_opt(obj, "resignation_repayment")) {
            m.params.resignation_repayment = get_money(*g, join(path, "resignation_repayment"));
        }
        if (const json* g = member_opt(obj, "scholarship_share")) {
            m.params.scholarship_share = get_fraction(*g, join(path, "scholarship_share"), 0.0,
                                                      1.0);
        }
        if (const json* g = member_opt(obj, "cost_growth")) {
            m.params.cost_growth = get_rate(*g, join(path, "cost_growth"));
        }
        if (static_cast<int>(m.params.students.size()) < term_years) {
            fail(join(path, "students"), "cohort sequence must cover all term_years entries");
        }
        return m;
    }
    if (type == "explicit") {
        reject_unknown_keys(obj, path, {"type", "pre_attribution", "values"});
        ExplicitModel m;
        if (const json* g = member_opt(obj, "pre_attribution")) {
            m.pre_attribution = get_bool(*g, join(path, "pre_attribution"));
        }
        const json& values = member(obj, path, "values");
        if (!values.is_array()) fail(join(path, "values"), "expected an array of money amounts");
        int i = 0;
        for (const json& x : values) {
            std::string ip = join(path, "values") + "[" + std::to_string(i++) + "]";
            m.values.push_back(get_money(x, ip));
        }
        if (static_cast<int>(m.values.size()) != term_years) {
            fail(join(path, "values"),
                 "expected exactly term_years (" + std::to_string(term_years) + ") entries, got " +
                     std::to_string(m.values.size()));
        }
        return m;
    }
    fail(join(path, "type"), "unknown impact model type '" + type + "'");
}

ImpactFloor parse_impact_floor(const json& v, const std::string& path) {
    const json& obj = as_object(v, path);
    std::string basis = get_string(member(obj, path, "basis"), join(path, "basis"));
    if (basis == "met") {
        reject_unknown_keys(obj, path, {"basis", "met"});
        return ImpactFloorMet{get_bool(member(obj, path, "met"), join(path, "met"))};
    }
    if (basis == "annual_impact") {
        reject_unknown_keys(obj, path, {"basis", "min_annual_impact"});
        return ImpactFloorAnnual{
            get_money(member(obj, path, "min_annual_impact"), join(path, "min_annual_impact"))};
    }
    if (basis == "impact_irr") {
        reject_unknown_keys(obj, path, {"basis", "min_impact_irr"});
        return ImpactFloorIrr{
            get_rate(member(obj, path, "min_impact_irr"), join(path, "min_impact_irr"))};
    }
    fail(join(path, "basis"), "unknown impact floor basis '" + basis + "'");
}

ScenarioFile parse_scenario_impl(std::string_view text,
                                 const std::optional<std::filesystem::path>& base_dir) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }
    const std::string root = "scenario";
    const json& obj = as_object(doc, "scenario");
    reject_unknown_keys(obj, "scenario",
                        {"schema_version", "name", "description", "asset_class", "investment",
                         "impact_model", "attribution", "evidence_haircuts", "thresholds",
                         "report"});

    ScenarioFile s;
    s.schema_version =
        static_cast<int>(get_int(member(obj, root, "schema_version"), "schema_version"));
    if (s.schema_version != 1) {
        fail("schema_version", "unsupported version " + std::to_string(s.schema_version) +
                                   " (this build reads version 1)");
    }
    s.name = get_string(member(obj, root, "name"), "name");
    if (s.name.empty() ||
        s.name.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") !=
            std::string::npos) {
        fail("name", "must be a non-empty token of [A-Za-z0-9._-]");
    }
    if (const json* d = member_opt(obj, "description")) s.description = get_string(*d, "description");
    if (const json* a = member_opt(obj, "asset_class")) s.asset_class = get_string(*a, "asset_class");

    // Evidence haircut defaults (applied when the investment block does not
    // set variability_haircut itself).
    if (const json* h = member_opt(obj, "evidence_haircuts")) {
        const json& hobj = as_object(*h, "evidence_haircuts");
        for (auto it = hobj.begin(); it != hobj.end(); ++it) {
            EvidenceLevel level;
            try {
                level = parse_evidence_level(it.key());
            } catch (const ParseError& e) {
                fail("evidence_haircuts", e.what());
            }
            s.evidence_haircuts[level] =
                get_fraction(it.value(), "evidence_haircuts." + it.key(), 0.0, 1.0);
        }
    }

    const std::string ipath = "investment";
    const json& inv = as_object(member(obj, root, "investment"), ipath);
    reject_unknown_keys(inv, ipath,
                        {"initial_investment", "term_years", "instrument", "capital_type", "tier",
                         "tier_total", "hurdle", "evidence_level", "variability_haircut",
                         "recovery_multiplier", "mic_first_mover"});
    s.investment.initial_investment =
        get_money(member(inv, ipath, "initial_investment"), join(ipath, "initial_investment"));
    s.investment.term.years =
        get_year_count(member(inv, ipath, "term_years"), join(ipath, "term_years"), 1, 100);
    s.investment.instrument =
        parse_instrument(member(inv, ipath, "instrument"), join(ipath, "instrument"));
    s.investment.capital_type = parse_enum_field(member(inv, ipath, "capital_type"),
                                                 join(ipath, "capital_type"), &parse_capital_type);
    s.investment.tier =
        parse_enum_field(member(inv, ipath, "tier"), join(ipath, "tier"), &parse_tier);
    s.investment.tier_total =
        get_money(member(inv, ipath, "tier_total"), join(ipath, "tier_total"));
    s.investment.hurdle = parse_hurdle(member(inv, ipath, "hurdle"), join(ipath, "hurdle"));
    s.investment.evidence = parse_enum_field(member(inv, ipath, "evidence_level"),
                                             join(ipath, "evidence_level"), &parse_evidence_level);
    if (const json* h = member_opt(inv, "variability_haircut")) {
        s.investment.variability_haircut =
            get_fraction(*h, join(ipath, "variability_haircut"), 0.0, 1.0);
    } else if (auto it = s.evidence_haircuts.find(s.investment.evidence);
               it != s.evidence_haircuts.end()) {
        s.investment.variability_haircut = it->second;
    }
    if (const json* r = member_opt(inv, "recovery_multiplier")) {
        s.investment.recovery_multiplier =
            get_fraction(*r, join(ipath, "recovery_multiplier"), 0.0, 1.0);
    }
    if (const json* m = member_opt(inv, "mic_first_mover")) {
        s.investment.mic_first_mover = get_bool(*m, join(ipath, "mic_first_mover"));
    }
    try {
        validate(s.investment);
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }

    s.impact_model = parse_impact_model(member(obj, root, "impact_model"), "impact_model",
                                        s.investment.term.years, base_dir);

    if (const json* a = member_opt(obj, "attribution")) {
        const json& aobj = as_object(*a, "attribution");
        reject_unknown_keys(aobj, "attribution", {"per_year"});
        const json& arr = member(aobj, "attribution", "per_year");
        if (!arr.is_array()) fail("attribution.per_year", "expected an array of fractions");
        std::vector<double> factors;
        int i = 0;
        for (const json& x : arr) {
            std::string ip = "attribution.per_year[" + std::to_string(i++) + "]";
            factors.push_back(get_fraction(x, ip, 0.0, 1.0));
        }
        if (static_cast<int>(factors.size()) != s.investment.term.years) {
            fail("attribution.per_year", "must cover exactly term_years entries");
        }
        s.attribution_per_year = std::move(factors);
    }

    if (const json* t = member_opt(obj, "thresholds")) {
        const json& tobj = as_object(*t, "thresholds");
        reject_unknown_keys(tobj, "thresholds", {"market_rate_floor", "impact_floor"});
        if (const json* f = member_opt(tobj, "market_rate_floor")) {
            s.thresholds.market_rate_floor = get_rate(*f, "thresholds.market_rate_floor");
        }
        if (const json* f = member_opt(tobj, "impact_floor")) {
            s.thresholds.impact_floor = parse_impact_floor(*f, "thresholds.impact_floor");
        }
    }

    if (const json* r = member_opt(obj, "report")) {
        const json& robj = as_object(*r, "report");
        reject_unknown_keys(robj, "report", {"unit_count", "unit_label"});
        if (const json* c = member_opt(robj, "unit_count")) {
            std::int64_t n = get_int(*c, "report.unit_count");
            if (n <= 0 || n > 1000000000) fail("report.unit_count", "must be a positive count");
            s.report.unit_count = static_cast<long>(n);
        }
        if (const json* l = member_opt(robj, "unit_label")) {
            s.report.unit_label = get_string(*l, "report.unit_label");
            if (s.report.unit_label.empty()) fail("report.unit_label", "must not be empty");
        }
    }
    return s;
}

json money_json(MoneyAmount m) { return json(format_money(m)); }

json instrument_json(const InstrumentTerms& terms) {
    json j;
    j["type"] = instrument_name(terms);
    struct Visitor {
        json& j;
        void operator()(const InterestOnlyBalloon& t) const { j["rate"] = t.rate.value; }
        void operator()(const LevelAmortizing& t) const { j["rate"] = t.rate.value; }
        void operator()(const InterestOnlyThenAmortizing& t) const {
            j["rate"] = t.rate.value;
            j["io_years"] = t.io_years;
        }
        void operator()(const EquityExit& t) const {
            j["exit_proceeds"] = money_json(t.exit_proceeds);
            j["exit_year"] = t.exit_year;
        }
    };
    std::visit(Visitor{j}, terms);
    return j;
}

json hurdle_json(const HurdlePolicy& hurdle) {
    json j;
    struct Visitor {
        json& j;
        void operator()(const ExplicitHurdle& h) const {
            j["policy"] = "explicit";
            j["rate"] = h.rate.value;
        }
        void operator()(const BicOpportunityCost& h) const {
            j["policy"] = "bic_opportunity_cost";
            j["market_rate"] = h.market_rate.value;
        }
        void operator()(const MicOwnRate&) const { j["policy"] = "mic_own_rate"; }
    };
    std::visit(Visitor{j}, hurdle);
    return j;
}

json impact_model_json(const ImpactModel& model) {
    json j;
    struct Visitor {
        json& j;
        void operator()(const RentGapModel& m) const {
            j["type"] = "rent_gap";
            j["vacancy_rate"] = m.params.vacancy_rate.value;
            j["annual_growth"] = m.params.annual_growth.value;
            json rows = json::array();
            for (const auto& e : m.roll) {
                json row;
                row["income_band"] = to_string(e.band);
                row["bedrooms"] = e.bedrooms;
                row["affordable_rent"] = money_json(e.affordable_rent);
                row["market_rent"] = money_json(e.market_rent);
                row["units"] = e.units;
                rows.push_back(std::move(row));
            }
            j["rent_roll"] = std::move(rows);
        }
        void operator()(const SubsidyModel& m) const {
            j["type"] = "subsidy";
            j["vacancy_rate"] = m.params.vacancy_rate.value;
            j["annual_growth"] = m.params.annual_growth.value;
            json rows = json::array();
            for (const auto& e : m.subsidies) {
                json row;
                row["income_band"] = to_string(e.band);
                row["bedrooms"] = e.bedrooms;
                row["monthly_subsidy"] = money_json(e.monthly_subsidy);
                row["units"] = e.units;
                rows.push_back(std::move(row));
            }
            j["subsidies"] = std::move(rows);
        }
        void operator()(const JobsModel& m) const {
            j["type"] = "jobs";
            j["value_growth"] = m.params.value_growth.value;
            j["loan_growth"] = m.params.loan_growth.value;
            json rows = json::array();
            for (const auto& a : m.params.archetypes) {
                json row;
                row["name"] = a.name;
                row["loans_per_year"] = a.loans_per_year;
                row["avg_loan"] = money_json(a.avg_loan);
                row["monetized_value_per_100k"] = money_json(a.monetized_value_per_100k);
                rows.push_back(std::move(row));
            }
            j["archetypes"] = std::move(rows);
        }
        void operator()(const IncomeUpliftModel& m) const {
            j["type"] = "income_uplift";
            j["students"] = m.params.students;
            j["graduates"] = m.params.graduates;
            j["base_annual_salary"] = money_json(m.params.base_annual_salary);
            j["uplift_vs_base"] = m.params.uplift_vs_base;
            j["post_uplift_growth"] = m.params.post_uplift_growth.value;
            j["nongraduate_growth"] = m.params.nongraduate_growth.value;
            j["course_years"] = m.params.course_years;
            j["program_cost"] = money_json(m.params.program_cost);
            j["self_financed_share"] = m.params.self_financed_share;
            j["financed_annual_debt_service"] = money_json(m.params.financed_annual_debt_service);
            j["loan_years"] = m.params.loan_years;
            j["resignation_rate"] = m.params.resignation_rate;
            j["resignation_repayment"] = money_json(m.params.resignation_repayment);
            j["scholarship_share"] = m.params.scholarship_share;
            j["cost_growth"] = m.params.cost_growth.value;
        }
        void operator()(const ExplicitModel& m) const {
            j["type"] = "explicit";
            j["pre_attribution"] = m.pre_attribution;
            json rows = json::array();
            for (MoneyAmount v : m.values) rows.push_back(money_json(v));
            j["values"] = std::move(rows);
        }
    };
    std::visit(Visitor{j}, model);
    return j;
}

json impact_floor_json(const ImpactFloor& floor) {
    json j;
    struct Visitor {
        json& j;
        void operator()(const ImpactFloorMet& f) const {
            j["basis"] = "met";
            j["met"] = f.met;
        }
        void operator()(const ImpactFloorAnnual& f) const {
            j["basis"] = "annual_impact";
            j["min_annual_impact"] = money_json(f.min_annual_impact);
        }
        void operator()(const ImpactFloorIrr& f) const {
            j["basis"] = "impact_irr";
            j["min_impact_irr"] = f.min_impact_irr.value;
        }
    };
    std::visit(Visitor{j}, floor);
    return j;
}

}  // namespace

std::string impact_model_name(const ImpactModel& model) {
    struct Visitor {
        std::string operator()(const RentGapModel&) const { return "rent_gap"; }
        std::string operator()(const SubsidyModel&) const { return "subsidy"; }
        std::string operator()(const JobsModel&) const { return "jobs"; }
        std::string operator()(const IncomeUpliftModel&) const { return "income_uplift"; }
        std::string operator()(const ExplicitModel&) const { return "explicit"; }
    };
    return std::visit(Visitor{}, model);
}

ScenarioFile parse_scenario(std::string_view text) {
    return parse_scenario_impl(text, std::nullopt);
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    auto parent = path.parent_path();
    if (parent.empty()) parent = ".";
    return parse_scenario_impl(text, parent);
}

std::string serialize_scenario(const ScenarioFile& s) {
    json j;
    j["schema_version"] = s.schema_version;
    j["name"] = s.name;
    j["description"] = s.description;
    j["asset_class"] = s.asset_class;

    json inv;
    inv["initial_investment"] = money_json(s.investment.initial_investment);
    inv["term_years"] = s.investment.term.years;
    inv["instrument"] = instrument_json(s.investment.instrument);
    inv["capital_type"] = to_string(s.investment.capital_type);
    inv["tier"] = to_string(s.investment.tier);
    inv["tier_total"] = money_json(s.investment.tier_total);
    inv["hurdle"] = hurdle_json(s.investment.hurdle);
    inv["evidence_level"] = to_string(s.investment.evidence);
    inv["variability_haircut"] = s.investment.variability_haircut;
    inv["recovery_multiplier"] = s.investment.recovery_multiplier;
    inv["mic_first_mover"] = s.investment.mic_first_mover;
    j["investment"] = std::move(inv);

    j["impact_model"] = impact_model_json(s.impact_model);

    if (s.attribution_per_year) {
        json a;
        a["per_year"] = *s.attribution_per_year;
        j["attribution"] = std::move(a);
    }
    if (!s.evidence_haircuts.empty()) {
        json h;
        for (const auto& [level, cut] : s.evidence_haircuts) h[to_string(level)] = cut;
        j["evidence_haircuts"] = std::move(h);
    }

    json t;
    if (s.thresholds.market_rate_floor) {
        t["market_rate_floor"] = s.thresholds.market_rate_floor->value;
    }
    t["impact_floor"] = impact_floor_json(s.thresholds.impact_floor);
    j["thresholds"] = std::move(t);

    json r;
    if (s.report.unit_count) r["unit_count"] = *s.report.unit_count;
    r["unit_label"] = s.report.unit_label;
    j["report"] = std::move(r);

    return j.dump(2) + "\n";
}

namespace {

constexpr const char* kBandHeader = "income_band";

std::vector<std::string> split_csv_line(const std::string& line, const std::string& path) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == '"') throw ParseError(path + ": quoted CSV fields are not supported");
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        auto b = f.find_first_not_of(" \t\r");
        auto e = f.find_last_not_of(" \t\r");
        f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
    }
    return fields;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::string_view csv, const std::vector<std::string>& required,
                  const char* what) {
    CsvTable table;
    std::istringstream in{std::string(csv)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string probe = line;
        auto b = probe.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;  // skip blank lines
        if (probe[b] == '#') continue;         // comment rows
        auto fields = split_csv_line(line, std::string(what) + " line " + std::to_string(lineno));
        if (table.header.empty()) {
            table.header = std::move(fields);
            for (const auto& col : required) {
                if (std::find(table.header.begin(), table.header.end(), col) ==
                    table.header.end()) {
                    throw ParseError(std::string(what) + ": missing required column '" + col +
                                     "'");
                }
            }
            for (const auto& col : table.header) {
                if (std::find(required.begin(), required.end(), col) == required.end()) {
                    throw ParseError(std::string(what) + ": unknown column '" + col + "'");
                }
            }
        } else {
            if (fields.size() != table.header.size()) {
                throw ParseError(std::string(what) + " line " + std::to_string(lineno) +
                                 ": expected " + std::to_string(table.header.size()) +
                                 " fields, got " + std::to_string(fields.size()));
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) {
        throw ParseError(std::string(what) + ": missing header row");
    }
    return table;
}

std::size_t column(const CsvTable& t, const std::string& name) {
    return static_cast<std::size_t>(
        std::find(t.header.begin(), t.header.end(), name) - t.header.begin());
}

int parse_count(const std::string& s, const std::string& path, int lo, int hi) {
    if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError(path + ": expected a non-negative integer, got '" + s + "'");
    }
    long v = std::stol(s);
    if (v < lo || v > hi) {
        throw ParseError(path + ": value " + s + " out of range [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
}

}  // namespace

std::vector<RentRollEntry> parse_rent_roll(std::string_view csv) {
    const std::vector<std::string> cols = {kBandHeader, "bedrooms", "affordable_rent",
                                           "market_rent", "units"};
    CsvTable t = read_csv(csv, cols, "rent roll");
    std::vector<RentRollEntry> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        std::string path = "rent roll row " + std::to_string(i + 1);
        RentRollEntry e;
        try {
            e.band = parse_income_band(row[column(t, kBandHeader)]);
            e.affordable_rent = parse_money(row[column(t, "affordable_rent")]);
            e.market_rent = parse_money(row[column(t, "market_rent")]);
        } catch (const ParseError& err) {
            throw ParseError(path + ": " + err.what());
        }
        e.bedrooms = parse_count(row[column(t, "bedrooms")], path + ".bedrooms", 0, 10);
        e.units = parse_count(row[column(t, "units")], path + ".units", 0, 100000);
        out.push_back(e);
    }
    return out;
}

std::vector<SubsidyEntry> parse_subsidy_table(std::string_view csv) {
    const std::vector<std::string> cols = {kBandHeader, "bedrooms", "monthly_subsidy", "units"};
    CsvTable t = read_csv(csv, cols, "subsidy table");
    std::vector<SubsidyEntry> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        std::string path = "subsidy table row " + std::to_string(i + 1);
        SubsidyEntry e;
        try {
            e.band = parse_income_band(row[column(t, kBandHeader)]);
            e.monthly_subsidy = parse_money(row[column(t, "monthly_subsidy")]);
        } catch (const ParseError& err) {
            throw ParseError(path + ": " + err.what());
        }
        e.bedrooms = parse_count(row[column(t, "bedrooms")], path + ".bedrooms", 0, 10);
        e.units = parse_count(row[column(t, "units")], path + ".units", 0, 100000);
        out.push_back(e);
    }
    return out;
}

std::vector<std::string> scenario_warnings(const ScenarioFile& s) {
    std::vector<std::string> warnings;
    Tier implied = infer_tier(s.investment.capital_type, s.investment.instrument);
    // Catalytic first-mover MIC anchors the concessionary tier alongside BIC,
    // so a tier1 declaration for it is deliberate, not a mismatch.
    if (s.investment.capital_type == CapitalType::MIC && s.investment.mic_first_mover &&
        s.investment.tier == Tier::Tier1) {
        implied = Tier::Tier1;
    }
    if (implied != s.investment.tier) {
        warnings.push_back("investment.tier is " + to_string(s.investment.tier) + " but " +
                           to_string(s.investment.capital_type) + " capital with a " +
                           instrument_name(s.investment.instrument) + " instrument implies " +
                           to_string(implied));
    }
    if (s.investment.capital_type == CapitalType::MIC &&
        std::holds_alternative<BicOpportunityCost>(s.investment.hurdle)) {
        warnings.push_back(
            "bic_opportunity_cost hurdle on mic capital; mic capital usually discounts at its own "
            "rate");
    }
    if (s.investment.capital_type == CapitalType::BIC &&
        std::holds_alternative<MicOwnRate>(s.investment.hurdle)) {
        warnings.push_back(
            "mic_own_rate hurdle on bic capital ignores the opportunity cost of concession");
    }
    if (const auto* m = std::get_if<ExplicitModel>(&s.impact_model)) {
        if (!m->pre_attribution && s.attribution_per_year) {
            warnings.push_back(
                "attribution.per_year is ignored: explicit impact rows already embed attribution");
        }
    }
    return warnings;
}

}  // namespace iirr
