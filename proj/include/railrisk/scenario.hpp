#pragma once
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "railrisk/severity.hpp"
#include "railrisk/tables.hpp"

namespace railrisk {

// One train service option. `consist[j]` is true iff position j+1 carries a
// tank car; tank_count is derived from it on load.
struct TrainConfig {
    TrainType train_type = TrainType::Unit;
    int length_cars = 0;                  // L, railcars excluding locomotives
    double gross_tonnage = 0.0;           // GW, short tons
    double avg_gross_tons_per_car = 0.0;  // GT; defaults to GW / L
    bool loaded = false;                  // unit trains: LUT=1 when true, EUT=1 when false
    std::vector<bool> consist;
    int tank_count = 0;  // TT

    bool empty_unit() const { return train_type == TrainType::Unit && !loaded; }
    bool loaded_unit() const { return train_type == TrainType::Unit && loaded; }

    TrainSeverityInputs severity_inputs() const {
        return {length_cars, avg_gross_tons_per_car, empty_unit(), loaded_unit()};
    }

    bool operator==(const TrainConfig&) const = default;
};

struct RouteSegment {
    std::string segment_id;
    double length_miles = 0.0;           // L_i
    double derailment_speed_mph = 0.0;   // DS; taken as the segment operating speed

    bool operator==(const RouteSegment&) const = default;
};

enum class SwitchingApproach { SwitchedAlone, SwitchedEnMasse };

struct YardPlan {
    int intermediate_yards = 0;  // m
    YardType yard_type = YardType::All;
    SwitchingApproach switching_approach = SwitchingApproach::SwitchedEnMasse;
    int ad_events = 2;  // n = 2 + 2m

    bool operator==(const YardPlan&) const = default;
};

struct ReleaseConfig {
    double cpr = 0.0;                // base conditional probability of release
    double yard_speed_factor = 0.35; // CPR multiplier in yards/terminals
    std::vector<QuantityRow> quantity_table;
    std::string quantity_table_path;

    bool operator==(const ReleaseConfig&) const = default;
};

struct Demand {
    int tank_cars_required = 1;  // delta
    int unit_capacity = 1;       // c_unit
    int manifest_capacity = 1;   // c_manifest

    bool operator==(const Demand&) const = default;
};

// Fitted POD Beta parameters per context; compiled-in defaults, overridable
// in the scenario file.
struct PodModels {
    PodModel mainline_unit = PodModel::for_context(PodContext::MainlineUnit);
    PodModel mainline_manifest = PodModel::for_context(PodContext::MainlineManifest);
    PodModel yard_manifest = PodModel::for_context(PodContext::YardManifest);
    PodModel terminal_unit = PodModel::for_context(PodContext::TerminalUnit);

    const PodModel& get(PodContext ctx) const;
};

struct ScenarioOptions {
    // Multiply each segment's expected casualties by its mileage again when
    // aggregating demand totals. Off by default: the segment derailment
    // probability already scales with mileage, so the extra factor would
    // double-count it. Kept as a switch for sensitivity analysis.
    bool multiply_mainline_tc_by_segment_miles = false;

    bool operator==(const ScenarioOptions&) const = default;
};

struct Scenario {
    std::string name;
    std::optional<TrainConfig> unit_train;
    std::optional<TrainConfig> manifest_train;
    std::vector<RouteSegment> route;
    YardPlan yards;
    ReleaseConfig release;
    Demand demand;
    ConsequenceCurveSet curves;
    std::string curves_path;
    YardSeverityModel yard_severity;
    PodModels pod_models;
    ZModel z_model;
    ScenarioOptions options;

    const TrainConfig& train(TrainType t) const;
    bool has_train(TrainType t) const;

    // Throws ValidationError naming the first violated invariant.
    void validate() const;
};

bool operator==(const Scenario& a, const Scenario& b);

// Parses the scenario file format (see README), resolves relative data paths
// against the scenario file's directory, loads the referenced quantity table
// and consequence curves, and validates everything.
Scenario load_scenario(const std::filesystem::path& path);

// Canonical text form; load_scenario(serialize -> file) reproduces a
// structurally identical Scenario. Data-file paths are written resolved.
std::string serialize_scenario(const Scenario& s);

// Consist notation: "40N 20T 40N" (run-length), or "all_tank".
std::vector<bool> parse_consist(const std::string& text, int expected_length,
                                const std::string& field);
std::string format_consist(const std::vector<bool>& consist);

}  // namespace railrisk
