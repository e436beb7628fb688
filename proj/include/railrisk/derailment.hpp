#pragma once
#include <map>
#include <string>

#include "railrisk/scenario.hpp"
#include "railrisk/tables.hpp"

namespace railrisk {

// Per-shipment train derailment probabilities for one service option.
struct DerailmentProbabilities {
    std::map<std::string, double> mainline_per_segment;  // segment_id -> PTD_i,main
    double ad_total = 0.0;                               // PTD_ADI
    double switching_total = 0.0;                        // PTD_YSI; 0 for unit trains
};

// Which yard/terminal rate row a train uses: manifest trains refine by yard
// type, loaded unit trains use their own row when the table carries one.
RateGroup ad_rate_group(const TrainConfig& train, const YardPlan& plan, const RateTable& rates);

// Sum over causes of the cause-specific linearized derailment probability on
// one mainline segment. Cause percentages partition the rate across the
// train-mile / ton-mile / car-mile metrics.
double mainline_derailment_prob(const TrainConfig& train, const RouteSegment& segment,
                                const RateTable& rates, const CauseTable& causes);

// Arrival/departure derailment probability over the shipment's n A/D events.
double ad_derailment_prob(const TrainConfig& train, const YardPlan& plan, const RateTable& rates,
                          const CauseTable& causes);

// Yard switching derailment probability: rate per car processed times
// L * (m + 1) switching movements. Manifest trains only.
double switching_derailment_prob(const TrainConfig& train, const YardPlan& plan,
                                 const RateTable& rates);

DerailmentProbabilities derailment_probabilities(const TrainConfig& train,
                                                 const std::vector<RouteSegment>& route,
                                                 const YardPlan& plan, const RateTable& rates,
                                                 const CauseTable& causes);

}  // namespace railrisk
