#include "railrisk/derailment.hpp"

#include <string>

namespace railrisk {

namespace {

// The linear rare-event approximation breaks down past 1; treat that as an
// unphysical scenario instead of clamping.
double checked_probability(double p, const char* what) {
    if (p > 1.0) {
        throw ValidationError(what, "computed probability " + std::to_string(p) +
                                        " exceeds 1; the linearized rare-event model does not "
                                        "apply to this scenario");
    }
    return p;
}

}  // namespace

RateGroup ad_rate_group(const TrainConfig& train, const YardPlan& plan, const RateTable& rates) {
    if (train.train_type == TrainType::Manifest) {
        switch (plan.yard_type) {
            case YardType::All: return RateGroup::Manifest;
            case YardType::Flat: return RateGroup::FlatYard;
            case YardType::Hump: return RateGroup::HumpYard;
        }
    }
    if (train.loaded_unit() && rates.has_yard(RateGroup::LoadedUnit)) {
        return RateGroup::LoadedUnit;
    }
    return RateGroup::Unit;
}

double mainline_derailment_prob(const TrainConfig& train, const RouteSegment& segment,
                                const RateTable& rates, const CauseTable& causes) {
    const MainlineRates& r = rates.mainline(train.train_type);
    const auto& rows = causes.rows(CauseContext::Mainline, train.train_type);
    double total = 0.0;
    for (const auto& row : rows) {
        const double pc = row.percent / 100.0;
        switch (row.metric) {
            case MetricClass::TrainMiles:
                total += r.per_million_train_miles / 1e6 * segment.length_miles * pc;
                break;
            case MetricClass::TonMiles:
                total += r.per_billion_gross_ton_miles / 1e9 * train.gross_tonnage *
                         segment.length_miles * pc;
                break;
            case MetricClass::CarMiles:
                total += r.per_billion_car_miles / 1e9 * train.length_cars * segment.length_miles *
                         pc;
                break;
            default:
                throw ValidationError("causes",
                                      "A/D metric class in a mainline cause table: " +
                                          row.cause_group);
        }
    }
    return checked_probability(total, "mainline_derailment_prob");
}

double ad_derailment_prob(const TrainConfig& train, const YardPlan& plan, const RateTable& rates,
                          const CauseTable& causes) {
    const YardRates& r = rates.yard(ad_rate_group(train, plan, rates));
    const auto& rows = causes.rows(CauseContext::ArrivalDeparture, train.train_type);
    const int n = plan.ad_events;
    double total = 0.0;
    for (const auto& row : rows) {
        const double pc = row.percent / 100.0;
        switch (row.metric) {
            case MetricClass::TrainEvents:
                total += r.per_million_train_ad / 1e6 * n * pc;
                break;
            case MetricClass::CarEvents:
                total += r.per_billion_car_ad / 1e9 * train.length_cars * n * pc;
                break;
            default:
                throw ValidationError(
                    "causes", "mainline metric class in an A/D cause table: " + row.cause_group);
        }
    }
    return checked_probability(total, "ad_derailment_prob");
}

double switching_derailment_prob(const TrainConfig& train, const YardPlan& plan,
                                 const RateTable& rates) {
    if (train.train_type != TrainType::Manifest) {
        throw NotApplicable("yard switching does not apply to unit trains");
    }
    const YardRates& r = rates.yard(ad_rate_group(train, plan, rates));
    if (!r.per_million_cars_processed) {
        throw ValidationError("rates.per_million_cars_processed",
                              "no switching rate for the selected yard group");
    }
    const double p = *r.per_million_cars_processed / 1e6 * train.length_cars *
                     (plan.intermediate_yards + 1);
    return checked_probability(p, "switching_derailment_prob");
}

DerailmentProbabilities derailment_probabilities(const TrainConfig& train,
                                                 const std::vector<RouteSegment>& route,
                                                 const YardPlan& plan, const RateTable& rates,
                                                 const CauseTable& causes) {
    DerailmentProbabilities out;
    for (const auto& seg : route) {
        out.mainline_per_segment[seg.segment_id] =
            mainline_derailment_prob(train, seg, rates, causes);
    }
    out.ad_total = ad_derailment_prob(train, plan, rates, causes);
    out.switching_total = train.train_type == TrainType::Manifest
                              ? switching_derailment_prob(train, plan, rates)
                              : 0.0;
    return out;
}

}  // namespace railrisk
