#include "railrisk/tables.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "csv.hpp"

namespace railrisk {

using detail::lower;
using detail::parse_double;
using detail::parse_long;

const char* to_string(TrainType t) {
    return t == TrainType::Unit ? "unit" : "manifest";
}

const char* to_string(RateGroup g) {
    switch (g) {
        case RateGroup::Unit: return "unit";
        case RateGroup::Manifest: return "manifest";
        case RateGroup::LoadedUnit: return "loaded_unit";
        case RateGroup::FlatYard: return "flat_yard";
        case RateGroup::HumpYard: return "hump_yard";
    }
    return "?";
}

const char* to_string(MetricClass m) {
    switch (m) {
        case MetricClass::TrainMiles: return "train_miles";
        case MetricClass::TonMiles: return "ton_miles";
        case MetricClass::CarMiles: return "car_miles";
        case MetricClass::TrainEvents: return "train_events";
        case MetricClass::CarEvents: return "car_events";
    }
    return "?";
}

const char* to_string(LocationClass c) {
    switch (c) {
        case LocationClass::Urban: return "urban";
        case LocationClass::Suburban: return "suburban";
        case LocationClass::Rural: return "rural";
        case LocationClass::Mixed: return "mixed";
    }
    return "?";
}

const char* to_string(WindClass c) {
    switch (c) {
        case WindClass::Low: return "low";
        case WindClass::Medium: return "medium";
        case WindClass::High: return "high";
        case WindClass::Mixed: return "mixed";
    }
    return "?";
}

const MainlineRates& RateTable::mainline(TrainType t) const {
    auto it = mainline_.find(t);
    if (it == mainline_.end()) {
        throw ValidationError("rates", std::string("no mainline rates for train type ") + to_string(t));
    }
    return it->second;
}

const YardRates& RateTable::yard(RateGroup g) const {
    auto it = yard_.find(g);
    if (it == yard_.end()) {
        throw ValidationError("rates", std::string("no yard/terminal rates for group ") + to_string(g));
    }
    return it->second;
}

const std::vector<CauseRow>& CauseTable::rows(CauseContext ctx, TrainType t) const {
    auto it = rows_.find({ctx, t});
    if (it == rows_.end()) {
        throw ValidationError("causes", std::string("no cause rows for ") +
                                            (ctx == CauseContext::Mainline ? "mainline" : "ad") +
                                            "/" + to_string(t));
    }
    return it->second;
}

void CauseTable::set_rows(CauseContext ctx, TrainType t, std::vector<CauseRow> rows) {
    rows_[{ctx, t}] = std::move(rows);
}

double CauseTable::percent_total(CauseContext ctx, TrainType t) const {
    double s = 0.0;
    for (const auto& r : rows(ctx, t)) s += r.percent;
    return s;
}

namespace {

RateGroup parse_rate_group(const std::string& s, const std::string& where) {
    const std::string v = lower(s);
    if (v == "unit") return RateGroup::Unit;
    if (v == "manifest") return RateGroup::Manifest;
    if (v == "loaded_unit") return RateGroup::LoadedUnit;
    if (v == "flat_yard") return RateGroup::FlatYard;
    if (v == "hump_yard") return RateGroup::HumpYard;
    throw ParseError(where + ": unknown train_type/group '" + s + "'");
}

MetricClass parse_metric_class(const std::string& s, CauseContext ctx, const std::string& where) {
    const std::string v = lower(s);
    if (ctx == CauseContext::Mainline) {
        if (v == "train_miles") return MetricClass::TrainMiles;
        if (v == "ton_miles") return MetricClass::TonMiles;
        if (v == "car_miles") return MetricClass::CarMiles;
        throw ParseError(where + ": metric_class '" + s + "' not valid for mainline causes");
    }
    if (v == "train_events") return MetricClass::TrainEvents;
    if (v == "car_events") return MetricClass::CarEvents;
    throw ParseError(where + ": metric_class '" + s + "' not valid for A/D causes");
}

}  // namespace

RateTable load_rate_tables(const std::filesystem::path& path) {
    const auto csv = detail::read_csv(path);
    const auto c_type = csv.col("train_type");
    const auto c_ctx = csv.col("context");
    const auto c_metric = csv.col("metric");
    const auto c_rate = csv.col("rate");

    RateTable out;
    std::map<TrainType, MainlineRates> main;
    std::map<RateGroup, YardRates> yard;
    std::map<RateGroup, bool> yard_has_ys;

    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = csv.rows[i];
        const std::string where = csv.path + " row " + std::to_string(i + 2);
        const double rate = parse_double(row[c_rate], where);
        if (rate < 0.0) throw ValidationError("rates.rate", where + ": rate must be >= 0");
        const std::string ctx = lower(row[c_ctx]);
        const std::string metric = lower(row[c_metric]);
        if (ctx == "mainline") {
            TrainType t;
            const std::string ts = lower(row[c_type]);
            if (ts == "unit") t = TrainType::Unit;
            else if (ts == "manifest") t = TrainType::Manifest;
            else throw ParseError(where + ": mainline rates accept train_type unit|manifest, got '" + row[c_type] + "'");
            auto& m = main[t];
            if (metric == "per_million_train_miles") m.per_million_train_miles = rate;
            else if (metric == "per_billion_gross_ton_miles") m.per_billion_gross_ton_miles = rate;
            else if (metric == "per_billion_car_miles") m.per_billion_car_miles = rate;
            else throw ParseError(where + ": unknown mainline metric '" + row[c_metric] + "'");
        } else if (ctx == "yard") {
            const RateGroup g = parse_rate_group(row[c_type], where);
            auto& y = yard[g];
            if (metric == "per_million_train_ad") y.per_million_train_ad = rate;
            else if (metric == "per_billion_car_ad") y.per_billion_car_ad = rate;
            else if (metric == "per_million_cars_processed") {
                if (g == RateGroup::Unit || g == RateGroup::LoadedUnit) {
                    throw ValidationError("rates.per_million_cars_processed",
                                          where + ": switching rate is not applicable to unit trains");
                }
                y.per_million_cars_processed = rate;
                yard_has_ys[g] = true;
            } else {
                throw ParseError(where + ": unknown yard metric '" + row[c_metric] + "'");
            }
        } else {
            throw ParseError(where + ": unknown context '" + row[c_ctx] + "'");
        }
    }

    for (const auto& [t, r] : main) out.set_mainline(t, r);
    for (const auto& [g, r] : yard) out.set_yard(g, r);
    return out;
}

CauseTable load_cause_tables(const std::filesystem::path& path) {
    const auto csv = detail::read_csv(path);
    const auto c_ctx = csv.col("context");
    const auto c_type = csv.col("train_type");
    const auto c_group = csv.col("cause_group");
    const auto c_pct = csv.col("percent");
    const auto c_metric = csv.col("metric_class");

    std::map<std::pair<CauseContext, TrainType>, std::vector<CauseRow>> blocks;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = csv.rows[i];
        const std::string where = csv.path + " row " + std::to_string(i + 2);
        CauseContext ctx;
        const std::string cs = lower(row[c_ctx]);
        if (cs == "mainline") ctx = CauseContext::Mainline;
        else if (cs == "ad") ctx = CauseContext::ArrivalDeparture;
        else throw ParseError(where + ": unknown context '" + row[c_ctx] + "'");
        TrainType t;
        const std::string ts = lower(row[c_type]);
        if (ts == "unit") t = TrainType::Unit;
        else if (ts == "manifest") t = TrainType::Manifest;
        else throw ParseError(where + ": unknown train_type '" + row[c_type] + "'");

        CauseRow r;
        r.cause_group = row[c_group];
        r.percent = parse_double(row[c_pct], where);
        if (r.percent < 0.0 || r.percent > 100.0) {
            throw ValidationError("causes.percent", where + ": percent must be in [0, 100]");
        }
        r.metric = parse_metric_class(row[c_metric], ctx, where);
        blocks[{ctx, t}].push_back(std::move(r));
    }

    CauseTable out;
    for (auto& [key, rows] : blocks) {
        double total = 0.0;
        for (const auto& r : rows) total += r.percent;
        if (std::abs(total - 100.0) > 0.1) {
            throw ChecksumError(path.string() + ": cause percents for " +
                                (key.first == CauseContext::Mainline ? "mainline" : "ad") + "/" +
                                to_string(key.second) + " sum to " + std::to_string(total) +
                                ", expected 100 +/- 0.1");
        }
        out.set_rows(key.first, key.second, std::move(rows));
    }
    return out;
}

std::vector<QuantityRow> load_quantity_table(const std::filesystem::path& path) {
    const auto csv = detail::read_csv(path);
    const auto c_gal = csv.col("lading_loss_gallons");
    const auto c_p = csv.col("probability");

    std::vector<QuantityRow> out;
    double sum = 0.0;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = csv.rows[i];
        const std::string where = csv.path + " row " + std::to_string(i + 2);
        QuantityRow r;
        r.lading_loss_gallons = static_cast<int>(parse_long(row[c_gal], where));
        if (r.lading_loss_gallons <= 0 || r.lading_loss_gallons % 750 != 0) {
            throw ValidationError("quantity.lading_loss_gallons",
                                  where + ": lading loss must be a positive multiple of 750");
        }
        r.probability = parse_double(row[c_p], where);
        if (r.probability < 0.0 || r.probability > 1.0) {
            throw ValidationError("quantity.probability", where + ": probability must be in [0, 1]");
        }
        sum += r.probability;
        out.push_back(r);
    }
    if (out.empty()) throw ParseError(path.string() + ": empty quantity table");
    if (sum != 1.0) {
        throw ValidationError("quantity.probability",
                              path.string() + ": probabilities sum to " + std::to_string(sum) +
                                  ", expected exactly 1.0");
    }
    return out;
}

void ConsequenceCurveSet::add_curve(LocationClass loc, WindClass wind, int anchor_gallons,
                                    ConsequenceCurve c) {
    curves_[{loc, wind, anchor_gallons}] = std::move(c);
}

const ConsequenceCurve& ConsequenceCurveSet::at(LocationClass loc, WindClass wind,
                                                int anchor_gallons) const {
    auto it = curves_.find({loc, wind, anchor_gallons});
    if (it == curves_.end()) {
        throw MissingCurve(std::string("missing consequence curve (") + to_string(loc) + ", " +
                           to_string(wind) + ", " + std::to_string(anchor_gallons) + " gal)");
    }
    return it->second;
}

void ConsequenceCurveSet::validate() const {
    if (time_grid_.size() < 2) {
        throw ValidationError("curves.time_grid", "need at least two time samples");
    }
    for (std::size_t i = 1; i < time_grid_.size(); ++i) {
        if (time_grid_[i] <= time_grid_[i - 1]) {
            throw ValidationError("curves.time_grid", "time samples must strictly increase");
        }
    }
    if (time_grid_.front() < 0.0 || time_grid_.back() > 120.0) {
        throw ValidationError("curves.time_grid", "time samples must lie in [0, 120] minutes");
    }
    auto has_time = [&](double t) {
        return std::any_of(time_grid_.begin(), time_grid_.end(),
                           [&](double v) { return v == t; });
    };
    // Table-5 evacuation landmarks must be present on the grid.
    for (double t : {0.0, evacuation_.nearby_minutes, evacuation_.hazard_zone_minutes}) {
        if (!has_time(t)) {
            throw ValidationError("curves.time_grid",
                                  "time grid must include t = " + std::to_string(t) + " minutes");
        }
    }

    const auto locs = premixed_
                          ? std::vector<LocationClass>{LocationClass::Mixed}
                          : std::vector<LocationClass>{LocationClass::Urban, LocationClass::Suburban,
                                                       LocationClass::Rural};
    const auto winds = premixed_ ? std::vector<WindClass>{WindClass::Mixed}
                                 : std::vector<WindClass>{WindClass::Low, WindClass::Medium,
                                                          WindClass::High};
    for (auto loc : locs) {
        for (auto wind : winds) {
            for (int a : kAnchorsGallons) {
                const auto& c = at(loc, wind, a);  // throws MissingCurve when absent
                if (c.values.size() != time_grid_.size()) {
                    throw ValidationError("curves", "curve sample count does not match time grid");
                }
                for (double v : c.values) {
                    if (v < 0.0) throw ValidationError("curves", "casualties must be >= 0");
                }
            }
        }
    }

    const double wt = weights_.urban + weights_.suburban + weights_.rural;
    const double ww = weights_.wind_low + weights_.wind_medium + weights_.wind_high;
    if (std::abs(wt - 1.0) > 1e-9 || std::abs(ww - 1.0) > 1e-9) {
        throw ValidationError("curves.mix_weights", "each weight group must sum to 1");
    }
}

ConsequenceCurveSet load_consequence_curves(const std::filesystem::path& path) {
    const auto csv = detail::read_csv(path);
    const auto c_loc = csv.col("location_class");
    const auto c_wind = csv.col("wind_class");
    const auto c_anchor = csv.col("anchor_gallons");
    const auto c_time = csv.col("time_min");
    const auto c_cas = csv.col("casualties");

    struct Sample {
        double t, v;
    };
    std::map<std::tuple<LocationClass, WindClass, int>, std::vector<Sample>> samples;
    bool saw_mixed = false, saw_plain = false;

    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = csv.rows[i];
        const std::string where = csv.path + " row " + std::to_string(i + 2);
        LocationClass loc;
        const std::string ls = lower(row[c_loc]);
        if (ls == "urban") loc = LocationClass::Urban;
        else if (ls == "suburban") loc = LocationClass::Suburban;
        else if (ls == "rural") loc = LocationClass::Rural;
        else if (ls == "mixed") loc = LocationClass::Mixed;
        else throw ParseError(where + ": unknown location_class '" + row[c_loc] + "'");
        WindClass wind;
        const std::string ws = lower(row[c_wind]);
        if (ws == "low") wind = WindClass::Low;
        else if (ws == "medium") wind = WindClass::Medium;
        else if (ws == "high") wind = WindClass::High;
        else if (ws == "mixed") wind = WindClass::Mixed;
        else throw ParseError(where + ": unknown wind_class '" + row[c_wind] + "'");
        if ((loc == LocationClass::Mixed) != (wind == WindClass::Mixed)) {
            throw ParseError(where + ": 'mixed' must be used for both location and wind");
        }
        (loc == LocationClass::Mixed ? saw_mixed : saw_plain) = true;

        const int anchor = static_cast<int>(parse_long(row[c_anchor], where));
        samples[{loc, wind, anchor}].push_back(
            {parse_double(row[c_time], where), parse_double(row[c_cas], where)});
    }
    if (saw_mixed && saw_plain) {
        throw ParseError(path.string() + ": cannot mix pre-mixed and per-class curve rows");
    }

    ConsequenceCurveSet out;
    out.set_premixed(saw_mixed);
    std::vector<double> grid;
    for (auto& [key, vec] : samples) {
        std::sort(vec.begin(), vec.end(), [](const Sample& a, const Sample& b) { return a.t < b.t; });
        std::vector<double> times, values;
        for (const auto& s : vec) {
            times.push_back(s.t);
            values.push_back(s.v);
        }
        if (grid.empty()) {
            grid = times;
        } else if (times != grid) {
            throw ParseError(path.string() + ": all curves must share one time grid");
        }
        out.add_curve(std::get<0>(key), std::get<1>(key), std::get<2>(key),
                      ConsequenceCurve{std::move(values)});
    }
    out.set_time_grid(std::move(grid));
    out.validate();
    return out;
}

}  // namespace railrisk
