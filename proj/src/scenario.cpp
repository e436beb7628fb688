#include "railrisk/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "csv.hpp"

namespace railrisk {

using detail::lower;

const PodModel& PodModels::get(PodContext ctx) const {
    switch (ctx) {
        case PodContext::MainlineUnit: return mainline_unit;
        case PodContext::MainlineManifest: return mainline_manifest;
        case PodContext::YardManifest: return yard_manifest;
        case PodContext::TerminalUnit: return terminal_unit;
    }
    throw OutOfRange("unknown POD context");
}

const TrainConfig& Scenario::train(TrainType t) const {
    const auto& opt = t == TrainType::Unit ? unit_train : manifest_train;
    if (!opt) {
        throw ValidationError(std::string("train.") + to_string(t), "train option not configured");
    }
    return *opt;
}

bool Scenario::has_train(TrainType t) const {
    return t == TrainType::Unit ? unit_train.has_value() : manifest_train.has_value();
}

namespace {

void validate_train(const TrainConfig& t, const std::string& prefix) {
    if (t.length_cars < 1) throw ValidationError(prefix + ".length_cars", "must be >= 1");
    if (t.gross_tonnage <= 0.0) throw ValidationError(prefix + ".gross_tonnage", "must be > 0");
    if (t.avg_gross_tons_per_car <= 0.0) {
        throw ValidationError(prefix + ".avg_gross_tons_per_car", "must be > 0");
    }
    if (static_cast<int>(t.consist.size()) != t.length_cars) {
        throw ValidationError(prefix + ".consist",
                              "consist has " + std::to_string(t.consist.size()) +
                                  " entries but length_cars is " + std::to_string(t.length_cars));
    }
    const int tanks = static_cast<int>(std::count(t.consist.begin(), t.consist.end(), true));
    if (t.tank_count != tanks) {
        throw ValidationError(prefix + ".tank_count", "does not match consist");
    }
}

}  // namespace

void Scenario::validate() const {
    if (!unit_train && !manifest_train) {
        throw ValidationError("train", "scenario configures no train option");
    }
    if (unit_train) {
        if (unit_train->train_type != TrainType::Unit) {
            throw ValidationError("train.unit.train_type", "must be unit");
        }
        validate_train(*unit_train, "train.unit");
    }
    if (manifest_train) {
        if (manifest_train->train_type != TrainType::Manifest) {
            throw ValidationError("train.manifest.train_type", "must be manifest");
        }
        if (manifest_train->loaded) {
            throw ValidationError("train.manifest.loaded",
                                  "loaded/empty distinction applies to unit trains only");
        }
        validate_train(*manifest_train, "train.manifest");
        // Switching analyzes the tank block as one cut of at most 20 cars.
        if (manifest_train->tank_count < 1 || manifest_train->tank_count > 20) {
            throw ValidationError("train.manifest.consist",
                                  "manifest tank block must hold 1..20 tank cars, got " +
                                      std::to_string(manifest_train->tank_count));
        }
    }
    if (route.empty()) throw ValidationError("route.segments", "route needs at least one segment");
    for (std::size_t i = 0; i < route.size(); ++i) {
        const std::string prefix = "route.segments[" + std::to_string(i) + "]";
        if (route[i].segment_id.empty()) throw ValidationError(prefix + ".segment_id", "empty id");
        if (route[i].length_miles <= 0.0) throw ValidationError(prefix + ".length_miles", "must be > 0");
        if (route[i].derailment_speed_mph <= 0.0) {
            throw ValidationError(prefix + ".derailment_speed_mph", "must be > 0");
        }
    }
    if (yards.intermediate_yards < 0) {
        throw ValidationError("yards.intermediate_yards", "must be >= 0");
    }
    if (yards.ad_events != 2 + 2 * yards.intermediate_yards) {
        throw ValidationError("yards.ad_events", "must equal 2 + 2 * intermediate_yards");
    }
    if (release.cpr < 0.0 || release.cpr > 1.0) {
        throw ValidationError("release.cpr", "must be in [0, 1]");
    }
    if (release.yard_speed_factor < 0.0 || release.yard_speed_factor > 1.0) {
        throw ValidationError("release.yard_speed_factor", "must be in [0, 1]");
    }
    if (release.quantity_table.empty()) {
        throw ValidationError("release.quantity_table", "per-car release quantity table not loaded");
    }
    if (demand.tank_cars_required < 1) {
        throw ValidationError("demand.tank_cars_required", "must be >= 1");
    }
    if (demand.unit_capacity < 1) throw ValidationError("demand.unit_capacity", "must be >= 1");
    if (demand.manifest_capacity < 1) {
        throw ValidationError("demand.manifest_capacity", "must be >= 1");
    }
    if (yard_severity.truncation_cap < 1) {
        throw ValidationError("severity.yard.truncation_cap", "must be >= 1");
    }
    for (const auto& [name, p] : {std::pair{"all", yard_severity.all},
                                  std::pair{"flat", yard_severity.flat},
                                  std::pair{"hump", yard_severity.hump}}) {
        if (p.shape <= 0.0 || p.rate <= 0.0) {
            throw ValidationError(std::string("severity.yard.") + name, "parameters must be > 0");
        }
    }
    for (const auto& [name, p] :
         {std::pair{"mainline_unit", pod_models.mainline_unit},
          std::pair{"mainline_manifest", pod_models.mainline_manifest},
          std::pair{"yard_manifest", pod_models.yard_manifest},
          std::pair{"terminal_unit", pod_models.terminal_unit}}) {
        if (p.alpha <= 0.0 || p.beta <= 0.0) {
            throw ValidationError(std::string("severity.pod.") + name,
                                  "Beta parameters must be strictly positive");
        }
    }
    curves.validate();
}

bool operator==(const Scenario& a, const Scenario& b) {
    auto curves_equal = [](const ConsequenceCurveSet& x, const ConsequenceCurveSet& y) {
        if (x.premixed() != y.premixed() || x.time_grid() != y.time_grid()) return false;
        const auto locs = x.premixed()
                              ? std::vector<LocationClass>{LocationClass::Mixed}
                              : std::vector<LocationClass>{LocationClass::Urban,
                                                           LocationClass::Suburban,
                                                           LocationClass::Rural};
        const auto winds = x.premixed()
                               ? std::vector<WindClass>{WindClass::Mixed}
                               : std::vector<WindClass>{WindClass::Low, WindClass::Medium,
                                                        WindClass::High};
        for (auto loc : locs)
            for (auto wind : winds)
                for (int anchor : ConsequenceCurveSet::kAnchorsGallons)
                    if (x.at(loc, wind, anchor).values != y.at(loc, wind, anchor).values)
                        return false;
        return true;
    };
    auto ge_eq = [](const GeParams& x, const GeParams& y) {
        return x.shape == y.shape && x.rate == y.rate;
    };
    auto pod_eq = [](const PodModel& x, const PodModel& y) {
        return x.alpha == y.alpha && x.beta == y.beta;
    };
    const auto& za = a.z_model;
    const auto& zb = b.z_model;
    const bool z_eq =
        za.mainline.intercept == zb.mainline.intercept &&
        za.mainline.derail_speed == zb.mainline.derail_speed &&
        za.mainline.cars_behind == zb.mainline.cars_behind &&
        za.mainline.tons_per_car == zb.mainline.tons_per_car &&
        za.mainline.empty_unit == zb.mainline.empty_unit &&
        za.mainline.loaded_unit == zb.mainline.loaded_unit &&
        za.yard.intercept == zb.yard.intercept && za.yard.train_length == zb.yard.train_length &&
        za.terminal.intercept == zb.terminal.intercept &&
        za.terminal.train_length == zb.terminal.train_length;
    return a.name == b.name && a.unit_train == b.unit_train &&
           a.manifest_train == b.manifest_train && a.route == b.route && a.yards == b.yards &&
           a.release == b.release && a.demand == b.demand && a.options == b.options &&
           a.curves_path == b.curves_path && z_eq &&
           ge_eq(a.yard_severity.all, b.yard_severity.all) &&
           ge_eq(a.yard_severity.flat, b.yard_severity.flat) &&
           ge_eq(a.yard_severity.hump, b.yard_severity.hump) &&
           a.yard_severity.truncation_cap == b.yard_severity.truncation_cap &&
           pod_eq(a.pod_models.mainline_unit, b.pod_models.mainline_unit) &&
           pod_eq(a.pod_models.mainline_manifest, b.pod_models.mainline_manifest) &&
           pod_eq(a.pod_models.yard_manifest, b.pod_models.yard_manifest) &&
           pod_eq(a.pod_models.terminal_unit, b.pod_models.terminal_unit) &&
           curves_equal(a.curves, b.curves);
}

std::vector<bool> parse_consist(const std::string& text, int expected_length,
                                const std::string& field) {
    std::vector<bool> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        const std::string t = lower(tok);
        if (t == "all_tank") {
            out.assign(static_cast<std::size_t>(expected_length), true);
            continue;
        }
        std::size_t pos = 0;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
        if (pos == 0 || pos + 1 != t.size() || (t[pos] != 't' && t[pos] != 'n')) {
            throw ParseError(field + ": bad consist token '" + tok +
                             "' (expected e.g. 40N 20T 40N or all_tank)");
        }
        const int count = std::stoi(t.substr(0, pos));
        if (count < 1) throw ParseError(field + ": consist run lengths must be >= 1");
        out.insert(out.end(), static_cast<std::size_t>(count), t[pos] == 't');
    }
    if (out.empty()) throw ParseError(field + ": empty consist");
    if (static_cast<int>(out.size()) != expected_length) {
        throw ValidationError(field, "consist has " + std::to_string(out.size()) +
                                         " cars but length_cars is " +
                                         std::to_string(expected_length));
    }
    return out;
}

std::string format_consist(const std::vector<bool>& consist) {
    std::string out;
    std::size_t i = 0;
    while (i < consist.size()) {
        std::size_t j = i;
        while (j < consist.size() && consist[j] == consist[i]) ++j;
        if (!out.empty()) out += ' ';
        out += std::to_string(j - i);
        out += consist[i] ? 'T' : 'N';
        i = j;
    }
    return out;
}

namespace {

struct IniEntry {
    std::string section, key, value;
    int line = 0;
};

std::vector<IniEntry> parse_ini(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<IniEntry> out;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ParseError(path.string() + ":" + std::to_string(lineno) + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected 'key = value'");
        }
        IniEntry e;
        e.section = section;
        e.key = lower(trim(line.substr(0, eq)));
        e.value = trim(line.substr(eq + 1));
        e.line = lineno;
        if (e.section.empty()) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": key outside any [section]");
        }
        out.push_back(std::move(e));
    }
    return out;
}

class IniView {
public:
    IniView(std::vector<IniEntry> entries, std::string path)
        : entries_(std::move(entries)), path_(std::move(path)) {}

    bool has_section(const std::string& s) const {
        return std::any_of(entries_.begin(), entries_.end(),
                           [&](const IniEntry& e) { return e.section == s; });
    }
    const IniEntry* find(const std::string& s, const std::string& k) const {
        const IniEntry* hit = nullptr;
        for (const auto& e : entries_) {
            if (e.section == s && e.key == k) hit = &e;
        }
        return hit;
    }
    std::vector<const IniEntry*> all(const std::string& s, const std::string& k) const {
        std::vector<const IniEntry*> out;
        for (const auto& e : entries_) {
            if (e.section == s && e.key == k) out.push_back(&e);
        }
        return out;
    }
    std::string require(const std::string& s, const std::string& k) const {
        const auto* e = find(s, k);
        if (!e) throw ParseError(path_ + ": missing key '" + k + "' in section [" + s + "]");
        return e->value;
    }
    std::optional<std::string> get(const std::string& s, const std::string& k) const {
        const auto* e = find(s, k);
        if (!e) return std::nullopt;
        return e->value;
    }
    const std::string& path() const { return path_; }

private:
    std::vector<IniEntry> entries_;
    std::string path_;
};

double to_double(const std::string& v, const std::string& where) {
    return detail::parse_double(v, where);
}

int to_int(const std::string& v, const std::string& where) {
    return static_cast<int>(detail::parse_long(v, where));
}

bool to_bool(const std::string& v, const std::string& where) {
    const std::string s = lower(v);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ParseError(where + ": expected boolean, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& v, const std::string& where) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw ParseError(where + ": empty list item");
        out.push_back(to_double(item.substr(a, b - a + 1), where));
    }
    return out;
}

TrainConfig parse_train(const IniView& ini, TrainType type) {
    const std::string sec = std::string("train.") + to_string(type);
    TrainConfig t;
    t.train_type = type;
    t.length_cars = to_int(ini.require(sec, "length_cars"), sec + ".length_cars");
    if (t.length_cars < 1) throw ValidationError(sec + ".length_cars", "must be >= 1");
    t.gross_tonnage = to_double(ini.require(sec, "gross_tonnage"), sec + ".gross_tonnage");
    if (auto gt = ini.get(sec, "avg_gross_tons_per_car")) {
        t.avg_gross_tons_per_car = to_double(*gt, sec + ".avg_gross_tons_per_car");
    } else {
        t.avg_gross_tons_per_car = t.gross_tonnage / t.length_cars;
    }
    if (type == TrainType::Unit) {
        t.loaded = to_bool(ini.require(sec, "loaded"), sec + ".loaded");
    } else if (ini.get(sec, "loaded")) {
        throw ValidationError(sec + ".loaded", "loaded/empty applies to unit trains only");
    }
    t.consist = parse_consist(ini.require(sec, "consist"), t.length_cars, sec + ".consist");
    t.tank_count = static_cast<int>(std::count(t.consist.begin(), t.consist.end(), true));
    return t;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : base / p;
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
    IniView ini(parse_ini(path), path.string());
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");

    Scenario s;
    s.name = ini.get("scenario", "name").value_or(path.stem().string());

    if (ini.has_section("train.unit")) s.unit_train = parse_train(ini, TrainType::Unit);
    if (ini.has_section("train.manifest")) s.manifest_train = parse_train(ini, TrainType::Manifest);

    for (const auto* e : ini.all("route.segments", "segment")) {
        const std::string where = ini.path() + ":" + std::to_string(e->line);
        std::vector<std::string> parts;
        std::string item;
        std::istringstream in(e->value);
        while (std::getline(in, item, ',')) {
            const auto a = item.find_first_not_of(" \t");
            const auto b = item.find_last_not_of(" \t");
            parts.push_back(a == std::string::npos ? "" : item.substr(a, b - a + 1));
        }
        if (parts.size() != 3) {
            throw ParseError(where + ": segment needs 'id, length_miles, derailment_speed_mph'");
        }
        RouteSegment seg;
        seg.segment_id = parts[0];
        seg.length_miles = to_double(parts[1], where);
        seg.derailment_speed_mph = to_double(parts[2], where);
        s.route.push_back(std::move(seg));
    }

    if (ini.has_section("yards")) {
        s.yards.intermediate_yards =
            to_int(ini.get("yards", "intermediate_yards").value_or("0"), "yards.intermediate_yards");
        if (auto yt = ini.get("yards", "yard_type")) {
            const std::string v = lower(*yt);
            if (v == "all") s.yards.yard_type = YardType::All;
            else if (v == "flat") s.yards.yard_type = YardType::Flat;
            else if (v == "hump") s.yards.yard_type = YardType::Hump;
            else throw ParseError("yards.yard_type: expected all|flat|hump, got '" + *yt + "'");
        }
        if (auto sa = ini.get("yards", "switching_approach")) {
            const std::string v = lower(*sa);
            if (v == "switched_alone") s.yards.switching_approach = SwitchingApproach::SwitchedAlone;
            else if (v == "switched_en_masse") {
                s.yards.switching_approach = SwitchingApproach::SwitchedEnMasse;
            } else {
                throw ParseError(
                    "yards.switching_approach: expected switched_alone|switched_en_masse, got '" +
                    *sa + "'");
            }
        }
    }
    s.yards.ad_events = 2 + 2 * s.yards.intermediate_yards;

    s.release.cpr = to_double(ini.require("release", "cpr"), "release.cpr");
    if (auto f = ini.get("release", "yard_speed_factor")) {
        s.release.yard_speed_factor = to_double(*f, "release.yard_speed_factor");
    }
    const auto qpath = resolve(base, ini.require("release", "quantity_table"));
    s.release.quantity_table = load_quantity_table(qpath);
    s.release.quantity_table_path = qpath.lexically_normal().string();

    const auto cpath = resolve(base, ini.require("curves", "file"));
    s.curves = load_consequence_curves(cpath);
    s.curves_path = cpath.lexically_normal().string();

    if (ini.has_section("demand")) {
        s.demand.tank_cars_required =
            to_int(ini.require("demand", "tank_cars_required"), "demand.tank_cars_required");
        s.demand.unit_capacity = to_int(ini.require("demand", "unit_capacity"), "demand.unit_capacity");
        s.demand.manifest_capacity =
            to_int(ini.require("demand", "manifest_capacity"), "demand.manifest_capacity");
    } else {
        // Per-single-shipment defaults: multiplier 1 for whichever options exist.
        s.demand.unit_capacity = s.unit_train ? std::max(1, s.unit_train->tank_count) : 1;
        s.demand.manifest_capacity = s.manifest_train ? std::max(1, s.manifest_train->tank_count) : 1;
        s.demand.tank_cars_required = 1;
    }

    if (ini.has_section("severity.yard")) {
        auto parse_ge = [&](const char* key, GeParams& dst) {
            if (auto v = ini.get("severity.yard", key)) {
                const auto vals = to_doubles(*v, std::string("severity.yard.") + key);
                if (vals.size() != 2) {
                    throw ParseError(std::string("severity.yard.") + key + ": expected 'shape, rate'");
                }
                dst = {vals[0], vals[1]};
            }
        };
        parse_ge("all", s.yard_severity.all);
        parse_ge("flat", s.yard_severity.flat);
        parse_ge("hump", s.yard_severity.hump);
        if (auto cap = ini.get("severity.yard", "truncation_cap")) {
            s.yard_severity.truncation_cap = to_int(*cap, "severity.yard.truncation_cap");
        }
    }
    if (ini.has_section("severity.pod")) {
        auto parse_pod = [&](const char* key, PodModel& dst) {
            if (auto v = ini.get("severity.pod", key)) {
                const auto vals = to_doubles(*v, std::string("severity.pod.") + key);
                if (vals.size() != 2) {
                    throw ParseError(std::string("severity.pod.") + key + ": expected 'alpha, beta'");
                }
                dst = {vals[0], vals[1]};
            }
        };
        parse_pod("mainline_unit", s.pod_models.mainline_unit);
        parse_pod("mainline_manifest", s.pod_models.mainline_manifest);
        parse_pod("yard_manifest", s.pod_models.yard_manifest);
        parse_pod("terminal_unit", s.pod_models.terminal_unit);
    }
    if (ini.has_section("severity.z")) {
        if (auto v = ini.get("severity.z", "mainline")) {
            const auto vals = to_doubles(*v, "severity.z.mainline");
            if (vals.size() != 6) {
                throw ParseError(
                    "severity.z.mainline: expected 'intercept, ds, cars_behind, gt, eut, lut'");
            }
            s.z_model.mainline = {vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]};
        }
        if (auto v = ini.get("severity.z", "yard")) {
            const auto vals = to_doubles(*v, "severity.z.yard");
            if (vals.size() != 2) throw ParseError("severity.z.yard: expected 'intercept, length'");
            s.z_model.yard = {vals[0], vals[1]};
        }
        if (auto v = ini.get("severity.z", "terminal")) {
            const auto vals = to_doubles(*v, "severity.z.terminal");
            if (vals.size() != 2) throw ParseError("severity.z.terminal: expected 'intercept, length'");
            s.z_model.terminal = {vals[0], vals[1]};
        }
    }
    if (ini.has_section("options")) {
        if (auto v = ini.get("options", "multiply_mainline_tc_by_segment_miles")) {
            s.options.multiply_mainline_tc_by_segment_miles =
                to_bool(*v, "options.multiply_mainline_tc_by_segment_miles");
        }
    }

    s.validate();
    return s;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_train(std::ostream& out, const TrainConfig& t) {
    out << "[train." << to_string(t.train_type) << "]\n";
    out << "length_cars = " << t.length_cars << "\n";
    out << "gross_tonnage = " << fmt(t.gross_tonnage) << "\n";
    out << "avg_gross_tons_per_car = " << fmt(t.avg_gross_tons_per_car) << "\n";
    if (t.train_type == TrainType::Unit) {
        out << "loaded = " << (t.loaded ? "true" : "false") << "\n";
    }
    out << "consist = " << format_consist(t.consist) << "\n\n";
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "[scenario]\nname = " << s.name << "\n\n";
    if (s.unit_train) write_train(out, *s.unit_train);
    if (s.manifest_train) write_train(out, *s.manifest_train);
    out << "[route.segments]\n";
    for (const auto& seg : s.route) {
        out << "segment = " << seg.segment_id << ", " << fmt(seg.length_miles) << ", "
            << fmt(seg.derailment_speed_mph) << "\n";
    }
    out << "\n[yards]\n";
    out << "intermediate_yards = " << s.yards.intermediate_yards << "\n";
    out << "yard_type = "
        << (s.yards.yard_type == YardType::All
                ? "all"
                : s.yards.yard_type == YardType::Flat ? "flat" : "hump")
        << "\n";
    out << "switching_approach = "
        << (s.yards.switching_approach == SwitchingApproach::SwitchedAlone ? "switched_alone"
                                                                           : "switched_en_masse")
        << "\n";
    out << "\n[release]\n";
    out << "cpr = " << fmt(s.release.cpr) << "\n";
    out << "yard_speed_factor = " << fmt(s.release.yard_speed_factor) << "\n";
    out << "quantity_table = " << s.release.quantity_table_path << "\n";
    out << "\n[demand]\n";
    out << "tank_cars_required = " << s.demand.tank_cars_required << "\n";
    out << "unit_capacity = " << s.demand.unit_capacity << "\n";
    out << "manifest_capacity = " << s.demand.manifest_capacity << "\n";
    out << "\n[curves]\n";
    out << "file = " << s.curves_path << "\n";
    out << "\n[severity.yard]\n";
    out << "all = " << fmt(s.yard_severity.all.shape) << ", " << fmt(s.yard_severity.all.rate)
        << "\n";
    out << "flat = " << fmt(s.yard_severity.flat.shape) << ", " << fmt(s.yard_severity.flat.rate)
        << "\n";
    out << "hump = " << fmt(s.yard_severity.hump.shape) << ", " << fmt(s.yard_severity.hump.rate)
        << "\n";
    out << "truncation_cap = " << s.yard_severity.truncation_cap << "\n";
    out << "\n[severity.pod]\n";
    auto pod_line = [&](const char* key, const PodModel& p) {
        out << key << " = " << fmt(p.alpha) << ", " << fmt(p.beta) << "\n";
    };
    pod_line("mainline_unit", s.pod_models.mainline_unit);
    pod_line("mainline_manifest", s.pod_models.mainline_manifest);
    pod_line("yard_manifest", s.pod_models.yard_manifest);
    pod_line("terminal_unit", s.pod_models.terminal_unit);
    out << "\n[severity.z]\n";
    out << "mainline = " << fmt(s.z_model.mainline.intercept) << ", "
        << fmt(s.z_model.mainline.derail_speed) << ", " << fmt(s.z_model.mainline.cars_behind)
        << ", " << fmt(s.z_model.mainline.tons_per_car) << ", " << fmt(s.z_model.mainline.empty_unit)
        << ", " << fmt(s.z_model.mainline.loaded_unit) << "\n";
    out << "yard = " << fmt(s.z_model.yard.intercept) << ", " << fmt(s.z_model.yard.train_length)
        << "\n";
    out << "terminal = " << fmt(s.z_model.terminal.intercept) << ", "
        << fmt(s.z_model.terminal.train_length) << "\n";
    out << "\n[options]\n";
    out << "multiply_mainline_tc_by_segment_miles = "
        << (s.options.multiply_mainline_tc_by_segment_miles ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace railrisk
