#include "railrisk/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace railrisk {

DataTables load_data_tables(const std::filesystem::path& table_dir) {
    DataTables t;
    t.rates = load_rate_tables(table_dir / "rates.csv");
    t.causes = load_cause_tables(table_dir / "causes.csv");
    return t;
}

int shipment_multiplier(int tank_cars_required, int capacity) {
    if (tank_cars_required < 1 || capacity < 1) {
        throw OutOfRange("shipment_multiplier: demand and capacity must be >= 1");
    }
    return (tank_cars_required + capacity - 1) / capacity;
}

namespace {

QuantityPmf combine_exclusive(const std::vector<const QuantityPmf*>& parts) {
    std::size_t n = 1;
    for (const auto* p : parts) n = std::max(n, p->lattice.size());
    std::vector<double> masses(n, 0.0);
    double overflow = 0.0;
    double tail = 0.0;
    for (const auto* p : parts) {
        for (std::size_t g = 1; g < p->lattice.size(); ++g) {
            masses[g] += p->lattice[g];
            tail += p->lattice[g];
        }
        overflow += p->overflow;
        tail += p->overflow;
    }
    masses[0] = std::max(0.0, 1.0 - tail);
    QuantityPmf out;
    out.lattice = DiscretePmf(SupportKind::GallonLattice750, std::move(masses));
    out.overflow = overflow;
    return out;
}

QuantitySummary summarize(const QuantityPmf& q) {
    QuantitySummary s;
    s.mean_gallons = q.mean_gallons();
    s.prob_release = q.prob_release();
    if (s.prob_release <= 0.0) return s;
    auto quantile = [&](double level) {
        const double target = level * s.prob_release;
        double acc = 0.0;
        for (std::size_t g = 1; g < q.lattice.size(); ++g) {
            acc += q.lattice[g];
            if (acc >= target) return static_cast<double>(g) * QuantityPmf::kLatticeGallons;
        }
        return static_cast<double>(QuantityPmf::kMaxTrackedIndex * QuantityPmf::kLatticeGallons);
    };
    s.q50 = quantile(0.50);
    s.q90 = quantile(0.90);
    s.q99 = quantile(0.99);
    return s;
}

}  // namespace

OptionEvaluation evaluate_option(const Scenario& scenario, TrainType option,
                                 const DataTables& tables, std::span<const double> times,
                                 ExecPolicy policy) {
    const TrainConfig& train = scenario.train(option);
    // Unit trains bypass intermediate yards: two terminal A/D events, no
    // switching. Manifest trains follow the scenario yard plan.
    YardPlan plan = scenario.yards;
    if (option == TrainType::Unit) {
        plan.intermediate_yards = 0;
        plan.ad_events = 2;
    }

    const CasualtyFunction casualty = mix_curves(scenario.curves);
    const auto& qtable = scenario.release.quantity_table;

    OptionEvaluation out;
    out.train_type = option;
    const int capacity = option == TrainType::Unit ? scenario.demand.unit_capacity
                                                   : scenario.demand.manifest_capacity;
    out.shipment_multiplier = shipment_multiplier(scenario.demand.tank_cars_required, capacity);

    // Mainline segments.
    const PodModel mainline_pod = scenario.pod_models.get(
        option == TrainType::Unit ? PodContext::MainlineUnit : PodContext::MainlineManifest);
    const DiscretePmf pod_main = pod_pmf(mainline_pod, train.length_cars);
    for (const auto& seg : scenario.route) {
        SegmentEvaluation se;
        se.segment_id = seg.segment_id;
        se.derailment_prob = mainline_derailment_prob(train, seg, tables.rates, tables.causes);
        const SeverityFamily fam = linehaul_severity_family(scenario.z_model,
                                                            SeverityContext::Mainline, train, seg,
                                                            policy);
        const PositionProfile profile =
            make_position_profile(pod_main, fam, train.consist, scenario.release.cpr, policy);
        se.conditional_release_counts = release_count_pmf_mainline(profile);
        se.per_shipment_release_counts =
            per_shipment_release_pmf(se.conditional_release_counts, se.derailment_prob);
        se.per_shipment_quantity = total_quantity_pmf(se.per_shipment_release_counts, qtable);
        for (double t : times) {
            se.tc_by_time[t] = expected_casualties(se.per_shipment_quantity, casualty, t);
        }
        out.segments.push_back(std::move(se));
    }

    // Yard / terminal component.
    YardEvaluation& ye = out.yard;
    ye.ad_derailment_prob = ad_derailment_prob(train, plan, tables.rates, tables.causes);
    const PodModel ad_pod = scenario.pod_models.get(
        option == TrainType::Unit ? PodContext::TerminalUnit : PodContext::YardManifest);
    const SeverityContext ad_ctx =
        option == TrainType::Unit ? SeverityContext::Terminal : SeverityContext::Yard;
    // A/D events are mainline-like at reduced speed; the yard/terminal logit
    // does not use the segment speed, so any segment stands in here.
    const RouteSegment dummy{"ad", 1.0, 1.0};
    const SeverityFamily ad_fam =
        linehaul_severity_family(scenario.z_model, ad_ctx, train, dummy, policy);
    const DiscretePmf ad_pod_pmf_v = pod_pmf(ad_pod, train.length_cars);
    const DiscretePmf ad_derail = ad_tank_derail_pmf(ad_pod_pmf_v, ad_fam, train.consist);
    ye.ad_conditional_release_counts =
        thin_release_pmf(ad_derail, scenario.release.cpr, scenario.release.yard_speed_factor);

    if (option == TrainType::Manifest) {
        ye.switching_derailment_prob = switching_derailment_prob(train, plan, tables.rates);
        const SwitchCut cut = SwitchCut::make(plan.switching_approach, train.tank_count);
        const DiscretePmf switch_derail =
            switch_tank_derail_pmf(cut, scenario.yard_severity.for_yard(plan.yard_type),
                                   scenario.yard_severity.truncation_cap);
        ye.switching_conditional_release_counts = thin_release_pmf(
            switch_derail, scenario.release.cpr, scenario.release.yard_speed_factor);
        ye.per_shipment_release_counts = per_shipment_release_pmf(
            ye.ad_conditional_release_counts, ye.ad_derailment_prob,
            ye.switching_conditional_release_counts, ye.switching_derailment_prob);
    } else {
        ye.per_shipment_release_counts =
            per_shipment_release_pmf(ye.ad_conditional_release_counts, ye.ad_derailment_prob);
    }
    ye.per_shipment_quantity = total_quantity_pmf(ye.per_shipment_release_counts, qtable);
    for (double t : times) {
        ye.tc_by_time[t] = expected_casualties(ye.per_shipment_quantity, casualty, t);
    }

    // Aggregate.
    std::vector<const QuantityPmf*> parts;
    for (const auto& se : out.segments) parts.push_back(&se.per_shipment_quantity);
    parts.push_back(&ye.per_shipment_quantity);
    out.combined_quantity = combine_exclusive(parts);
    out.quantity_summary = summarize(out.combined_quantity);

    for (double t : times) {
        double per_shipment = ye.tc_by_time.at(t);
        for (std::size_t i = 0; i < out.segments.size(); ++i) {
            const double miles = scenario.options.multiply_mainline_tc_by_segment_miles
                                     ? scenario.route[i].length_miles
                                     : 1.0;
            per_shipment += out.segments[i].tc_by_time.at(t) * miles;
        }
        out.per_shipment_tc[t] = per_shipment;
        out.demand_total_tc[t] = per_shipment * out.shipment_multiplier;
    }
    return out;
}

RiskReport evaluate_scenario(const Scenario& scenario, const DataTables& tables,
                             std::span<const double> times, ExecPolicy policy) {
    scenario.validate();
    RiskReport report;
    report.scenario_name = scenario.name;
    report.times.assign(times.begin(), times.end());
    report.demand = scenario.demand;
    report.mainline_tc_times_miles = scenario.options.multiply_mainline_tc_by_segment_miles;
    if (scenario.has_train(TrainType::Unit)) {
        report.unit = evaluate_option(scenario, TrainType::Unit, tables, times, policy);
    }
    if (scenario.has_train(TrainType::Manifest)) {
        report.manifest = evaluate_option(scenario, TrainType::Manifest, tables, times, policy);
    }
    return report;
}

}  // namespace railrisk
