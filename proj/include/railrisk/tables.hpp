#pragma once
#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "railrisk/error.hpp"

namespace railrisk {

enum class TrainType { Unit, Manifest };

// Rows of the yard/terminal rate table. Manifest trains refine by yard type;
// loaded unit trains have their own row.
enum class RateGroup { Unit, Manifest, LoadedUnit, FlatYard, HumpYard };

const char* to_string(TrainType t);
const char* to_string(RateGroup g);

// Mainline derailment rates by traffic metric.
struct MainlineRates {
    double per_million_train_miles = 0.0;      // d_TRM
    double per_billion_gross_ton_miles = 0.0;  // d_TOM
    double per_billion_car_miles = 0.0;        // d_CM
};

// Arrival/departure and switching rates. The cars-processed rate does not
// exist for unit trains.
struct YardRates {
    double per_million_train_ad = 0.0;                    // d_ADTR
    double per_billion_car_ad = 0.0;                      // d_ADCA
    std::optional<double> per_million_cars_processed;     // d_YS
};

class RateTable {
public:
    const MainlineRates& mainline(TrainType t) const;
    const YardRates& yard(RateGroup g) const;
    bool has_yard(RateGroup g) const { return yard_.count(g) != 0; }

    void set_mainline(TrainType t, MainlineRates r) { mainline_[t] = r; }
    void set_yard(RateGroup g, YardRates r) { yard_[g] = r; }

private:
    std::map<TrainType, MainlineRates> mainline_;
    std::map<RateGroup, YardRates> yard_;
};

// Which traffic metric a derailment cause scales with.
enum class MetricClass { TrainMiles, TonMiles, CarMiles, TrainEvents, CarEvents };
enum class CauseContext { Mainline, ArrivalDeparture };

const char* to_string(MetricClass m);

struct CauseRow {
    std::string cause_group;
    double percent = 0.0;  // of all derailments in this (context, train type)
    MetricClass metric = MetricClass::TrainMiles;
};

class CauseTable {
public:
    const std::vector<CauseRow>& rows(CauseContext ctx, TrainType t) const;
    void set_rows(CauseContext ctx, TrainType t, std::vector<CauseRow> rows);

    // Sum of percents for rows of the given metric class.
    double percent_total(CauseContext ctx, TrainType t) const;

private:
    std::map<std::pair<CauseContext, TrainType>, std::vector<CauseRow>> rows_;
};

// One row of the per-car release quantity distribution.
struct QuantityRow {
    int lading_loss_gallons = 0;  // multiple of 750
    double probability = 0.0;

    bool operator==(const QuantityRow&) const = default;
};

enum class LocationClass { Urban, Suburban, Rural, Mixed };
enum class WindClass { Low, Medium, High, Mixed };

const char* to_string(LocationClass c);
const char* to_string(WindClass c);

// Casualties sampled over evacuation response time for one
// (location, wind, release-size) combination. All curves in a set share one
// time grid, which must include the 0/4/120 minute evacuation landmarks.
struct ConsequenceCurve {
    std::vector<double> values;  // aligned with ConsequenceCurveSet::time_grid
};

struct MixWeights {
    double urban = 0.01, suburban = 0.04, rural = 0.95;
    double wind_low = 0.50, wind_medium = 0.49, wind_high = 0.01;
};

struct EvacuationTimes {
    double nearby_minutes = 4.0;
    double hazard_zone_minutes = 120.0;
};

class ConsequenceCurveSet {
public:
    static constexpr std::array<int, 3> kAnchorsGallons{30000, 90000, 150000};

    bool premixed() const { return premixed_; }
    const std::vector<double>& time_grid() const { return time_grid_; }
    const ConsequenceCurve& at(LocationClass loc, WindClass wind, int anchor_gallons) const;

    const MixWeights& weights() const { return weights_; }
    const EvacuationTimes& evacuation() const { return evacuation_; }

    // Validates completeness (every required triple present), curve
    // non-negativity, weight-group sums, and the time-grid landmarks.
    void validate() const;

    // Builder interface used by the loader and tests.
    void set_time_grid(std::vector<double> grid) { time_grid_ = std::move(grid); }
    void add_curve(LocationClass loc, WindClass wind, int anchor_gallons, ConsequenceCurve c);
    void set_premixed(bool premixed) { premixed_ = premixed; }

private:
    std::vector<double> time_grid_;
    std::map<std::tuple<LocationClass, WindClass, int>, ConsequenceCurve> curves_;
    MixWeights weights_;
    EvacuationTimes evacuation_;
    bool premixed_ = false;
};

// CSV loaders. All files are UTF-8 with a header row; '#' lines are comments.
RateTable load_rate_tables(const std::filesystem::path& csv);
CauseTable load_cause_tables(const std::filesystem::path& csv);
std::vector<QuantityRow> load_quantity_table(const std::filesystem::path& csv);
ConsequenceCurveSet load_consequence_curves(const std::filesystem::path& csv);

}  // namespace railrisk
