#pragma once
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "railrisk/consequence.hpp"
#include "railrisk/derailment.hpp"
#include "railrisk/quantity.hpp"
#include "railrisk/release_count.hpp"
#include "railrisk/scenario.hpp"

namespace railrisk {

// The externally loaded rate and cause tables a run needs besides the
// scenario itself.
struct DataTables {
    RateTable rates;
    CauseTable causes;
};

DataTables load_data_tables(const std::filesystem::path& table_dir);

struct SegmentEvaluation {
    std::string segment_id;
    double derailment_prob = 0.0;              // PTD_i,main
    DiscretePmf conditional_release_counts;    // given a derailment (Poisson-Binomial)
    DiscretePmf per_shipment_release_counts;
    QuantityPmf per_shipment_quantity;
    std::map<double, double> tc_by_time;       // expected casualties per shipment
};

struct YardEvaluation {
    double ad_derailment_prob = 0.0;         // PTD_ADI
    double switching_derailment_prob = 0.0;  // PTD_YSI (manifest only)
    DiscretePmf ad_conditional_release_counts;
    DiscretePmf switching_conditional_release_counts;  // empty for unit trains
    DiscretePmf per_shipment_release_counts;           // terminal (unit) or combined yard pmf
    QuantityPmf per_shipment_quantity;
    std::map<double, double> tc_by_time;
};

struct QuantitySummary {
    double mean_gallons = 0.0;
    double prob_release = 0.0;
    // Quantiles of gallons released conditional on a release; capped at the
    // 150,000-gallon tracking limit.
    double q50 = 0.0, q90 = 0.0, q99 = 0.0;
};

struct OptionEvaluation {
    TrainType train_type = TrainType::Unit;
    int shipment_multiplier = 1;  // ceil(demand / capacity)
    std::vector<SegmentEvaluation> segments;
    YardEvaluation yard;
    // Whole-shipment release quantity across every exposure component
    // (mutually exclusive in the rare-event regime the pipeline assumes).
    QuantityPmf combined_quantity;
    QuantitySummary quantity_summary;
    std::map<double, double> per_shipment_tc;  // Sum of component TCs
    std::map<double, double> demand_total_tc;  // times the shipment multiplier
};

struct RiskReport {
    static constexpr const char* kSchemaVersion = "railrisk-report/1";

    std::string scenario_name;
    std::vector<double> times;
    Demand demand;
    bool mainline_tc_times_miles = false;
    std::optional<OptionEvaluation> unit;
    std::optional<OptionEvaluation> manifest;
};

// Runs the full event chain for every configured service option at the given
// evacuation response times.
RiskReport evaluate_scenario(const Scenario& scenario, const DataTables& tables,
                             std::span<const double> times,
                             ExecPolicy policy = default_policy());

OptionEvaluation evaluate_option(const Scenario& scenario, TrainType option,
                                 const DataTables& tables, std::span<const double> times,
                                 ExecPolicy policy = default_policy());

int shipment_multiplier(int tank_cars_required, int capacity);

}  // namespace railrisk
