#include "railrisk/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace railrisk {

namespace {

using json = nlohmann::ordered_json;

json pmf_json(const DiscretePmf& pmf) {
    json j;
    j["support"] = pmf.kind() == SupportKind::Count ? "count" : "gallons_750";
    j["masses"] = pmf.masses();
    if (pmf.omits_zero_class()) j["omits_zero_class"] = true;
    return j;
}

json quantity_json(const QuantityPmf& q, bool include_pmfs) {
    json j;
    j["mean_gallons"] = q.mean_gallons();
    j["prob_release"] = q.prob_release();
    j["overflow_mass"] = q.overflow;
    if (include_pmfs) j["lattice"] = pmf_json(q.lattice);
    return j;
}

json tc_json(const std::map<double, double>& tc) {
    json j = json::array();
    for (const auto& [t, v] : tc) j.push_back({{"t_min", t}, {"casualties", v}});
    return j;
}

json option_json(const OptionEvaluation& opt, bool include_pmfs) {
    json j;
    j["train_type"] = to_string(opt.train_type);
    j["shipment_multiplier"] = opt.shipment_multiplier;
    j["segments"] = json::array();
    for (const auto& seg : opt.segments) {
        json s;
        s["segment_id"] = seg.segment_id;
        s["derailment_prob"] = seg.derailment_prob;
        s["tc_per_shipment"] = tc_json(seg.tc_by_time);
        if (include_pmfs) {
            s["conditional_release_counts"] = pmf_json(seg.conditional_release_counts);
            s["per_shipment_release_counts"] = pmf_json(seg.per_shipment_release_counts);
            s["per_shipment_quantity"] = quantity_json(seg.per_shipment_quantity, true);
        }
        j["segments"].push_back(std::move(s));
    }
    json y;
    y["ad_derailment_prob"] = opt.yard.ad_derailment_prob;
    y["switching_derailment_prob"] = opt.yard.switching_derailment_prob;
    y["tc_per_shipment"] = tc_json(opt.yard.tc_by_time);
    if (include_pmfs) {
        y["ad_conditional_release_counts"] = pmf_json(opt.yard.ad_conditional_release_counts);
        if (opt.train_type == TrainType::Manifest) {
            y["switching_conditional_release_counts"] =
                pmf_json(opt.yard.switching_conditional_release_counts);
        }
        y["per_shipment_release_counts"] = pmf_json(opt.yard.per_shipment_release_counts);
        y["per_shipment_quantity"] = quantity_json(opt.yard.per_shipment_quantity, true);
    }
    j["yard"] = std::move(y);

    json qs;
    qs["mean_gallons"] = opt.quantity_summary.mean_gallons;
    qs["prob_release"] = opt.quantity_summary.prob_release;
    qs["q50_given_release_gallons"] = opt.quantity_summary.q50;
    qs["q90_given_release_gallons"] = opt.quantity_summary.q90;
    qs["q99_given_release_gallons"] = opt.quantity_summary.q99;
    j["quantity_summary"] = std::move(qs);
    if (include_pmfs) j["combined_quantity"] = quantity_json(opt.combined_quantity, true);

    j["tc_per_shipment"] = tc_json(opt.per_shipment_tc);
    j["tc_per_demand"] = tc_json(opt.demand_total_tc);
    return j;
}

}  // namespace

std::string machine_report(const RiskReport& report, bool include_pmfs) {
    json j;
    j["schema"] = RiskReport::kSchemaVersion;
    j["scenario"] = report.scenario_name;
    j["times_min"] = report.times;
    j["demand"] = {{"tank_cars_required", report.demand.tank_cars_required},
                   {"unit_capacity", report.demand.unit_capacity},
                   {"manifest_capacity", report.demand.manifest_capacity}};
    j["mainline_tc_times_miles"] = report.mainline_tc_times_miles;
    if (report.unit) j["unit"] = option_json(*report.unit, include_pmfs);
    if (report.manifest) j["manifest"] = option_json(*report.manifest, include_pmfs);
    return j.dump(2) + "\n";
}

namespace {

std::string sci(double v) {
    std::ostringstream o;
    o << std::scientific << std::setprecision(6) << v;
    return o.str();
}

void option_table(std::ostringstream& out, const OptionEvaluation& opt) {
    out << "== " << (opt.train_type == TrainType::Unit ? "Unit train" : "Manifest train")
        << " option ==\n";
    out << "shipments for demand: " << opt.shipment_multiplier << "\n";
    out << "  segment        PTD(derail)";
    for (const auto& [t, v] : opt.segments.empty() ? opt.yard.tc_by_time
                                                   : opt.segments.front().tc_by_time) {
        out << "  TC(t=" << t << ")";
        (void)v;
    }
    out << "\n";
    for (const auto& seg : opt.segments) {
        out << "  " << std::left << std::setw(14) << seg.segment_id << std::right
            << sci(seg.derailment_prob);
        for (const auto& [t, v] : seg.tc_by_time) out << "  " << sci(v);
        out << "\n";
    }
    out << "  " << std::left << std::setw(14) << "A/D" << std::right
        << sci(opt.yard.ad_derailment_prob);
    for (const auto& [t, v] : opt.yard.tc_by_time) {
        out << "  " << sci(v);
        (void)t;
    }
    out << "  (A/D";
    if (opt.train_type == TrainType::Manifest) {
        out << " + switching " << sci(opt.yard.switching_derailment_prob);
    }
    out << ")\n";
    out << "  release quantity: P(release) = " << sci(opt.quantity_summary.prob_release)
        << ", mean = " << sci(opt.quantity_summary.mean_gallons)
        << " gal, q50/q90/q99 given release = " << opt.quantity_summary.q50 << "/"
        << opt.quantity_summary.q90 << "/" << opt.quantity_summary.q99 << " gal\n";
    out << "  expected casualties per shipment / per demand:\n";
    for (const auto& [t, v] : opt.per_shipment_tc) {
        out << "    t = " << std::setw(6) << t << " min:  " << sci(v) << "  /  "
            << sci(opt.demand_total_tc.at(t)) << "\n";
    }
    out << "\n";
}

}  // namespace

std::string table_report(const RiskReport& report) {
    std::ostringstream out;
    out << "railrisk report: " << report.scenario_name << "\n";
    out << "demand: " << report.demand.tank_cars_required
        << " tank cars (unit capacity " << report.demand.unit_capacity << ", manifest capacity "
        << report.demand.manifest_capacity << ")\n";
    if (report.mainline_tc_times_miles) {
        out << "note: mainline TC terms scaled by segment miles in aggregation\n";
    }
    out << "\n";
    if (report.unit) option_table(out, *report.unit);
    if (report.manifest) option_table(out, *report.manifest);
    if (report.unit && report.manifest) {
        out << "== Comparison (unit - manifest, per demand) ==\n";
        for (const auto& [t, v] : report.unit->demand_total_tc) {
            const double delta = v - report.manifest->demand_total_tc.at(t);
            out << "  t = " << std::setw(6) << t << " min:  " << sci(delta)
                << (delta < 0 ? "  (unit lower)" : delta > 0 ? "  (manifest lower)" : "") << "\n";
        }
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

}  // namespace railrisk
