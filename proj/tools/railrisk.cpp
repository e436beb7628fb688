// railrisk command-line front end: run scenarios, compare service options,
// validate the analytic pipeline against the Monte Carlo oracle, and echo
// the loaded data tables.
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "railrisk/mc_oracle.hpp"
#include "railrisk/pipeline.hpp"
#include "railrisk/report.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitValidationFailed = 2;

fs::path default_table_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("RAILRISK_TABLES")) return env;
    return "data";
}

railrisk::ExecPolicy parse_policy(const std::string& s) {
    if (s == "serial") return railrisk::ExecPolicy::Serial;
    if (s == "openmp") return railrisk::ExecPolicy::OpenMP;
    throw CLI::ValidationError("--policy", "expected serial|openmp");
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        railrisk::write_file(out_path, content);
    }
}

void write_series(const railrisk::RiskReport& report, const fs::path& dir) {
    fs::create_directories(dir);
    auto dump_option = [&](const railrisk::OptionEvaluation& opt) {
        const std::string base = report.scenario_name + std::string("_") +
                                 railrisk::to_string(opt.train_type);
        {
            std::ostringstream o;
            o << "gallons,probability\n";
            const auto& q = opt.combined_quantity;
            for (std::size_t g = 0; g < q.lattice.size(); ++g) {
                o << g * railrisk::QuantityPmf::kLatticeGallons << "," << std::setprecision(17)
                  << q.lattice[g] << "\n";
            }
            o << ">" << railrisk::QuantityPmf::kMaxTrackedIndex * railrisk::QuantityPmf::kLatticeGallons
              << "," << std::setprecision(17) << q.overflow << "\n";
            railrisk::write_file((dir / (base + "_quantity.csv")).string(), o.str());
        }
        {
            std::ostringstream o;
            o << "t_min,tc_per_shipment,tc_per_demand\n";
            for (const auto& [t, v] : opt.per_shipment_tc) {
                o << t << "," << std::setprecision(17) << v << ","
                  << opt.demand_total_tc.at(t) << "\n";
            }
            railrisk::write_file((dir / (base + "_tc.csv")).string(), o.str());
        }
    };
    if (report.unit) dump_option(*report.unit);
    if (report.manifest) dump_option(*report.manifest);
}

json compare_json(const railrisk::RiskReport& report) {
    const auto& u = *report.unit;
    const auto& m = *report.manifest;
    json j;
    j["schema"] = "railrisk-compare/1";
    j["scenario"] = report.scenario_name;
    auto component_tc = [](const railrisk::OptionEvaluation& opt) {
        json c;
        double mainline_total = 0.0;
        json per_t = json::array();
        for (const auto& [t, total] : opt.per_shipment_tc) {
            double main_t = 0.0;
            for (const auto& seg : opt.segments) main_t += seg.tc_by_time.at(t);
            per_t.push_back({{"t_min", t},
                             {"mainline", main_t},
                             {"yard", opt.yard.tc_by_time.at(t)},
                             {"per_shipment", total},
                             {"per_demand", opt.demand_total_tc.at(t)}});
            mainline_total += main_t;
        }
        c["tc"] = per_t;
        c["shipment_multiplier"] = opt.shipment_multiplier;
        double ptd_main = 0.0;
        for (const auto& seg : opt.segments) ptd_main += seg.derailment_prob;
        c["mainline_derailment_prob"] = ptd_main;
        c["ad_derailment_prob"] = opt.yard.ad_derailment_prob;
        if (opt.train_type == railrisk::TrainType::Manifest) {
            c["switching_derailment_prob"] = opt.yard.switching_derailment_prob;
        }
        return c;
    };
    j["unit"] = component_tc(u);
    j["manifest"] = component_tc(m);
    json deltas = json::array();
    for (const auto& [t, uv] : u.demand_total_tc) {
        deltas.push_back({{"t_min", t},
                          {"per_demand_unit_minus_manifest", uv - m.demand_total_tc.at(t)}});
    }
    j["deltas"] = deltas;
    return j;
}

int run_command(const std::string& scenario_path, const std::string& tables_flag,
                std::vector<double> times, const std::string& out_path, const std::string& format,
                bool dump_pmfs, const std::string& series_dir, railrisk::ExecPolicy policy) {
    const auto scenario = railrisk::load_scenario(scenario_path);
    const auto tables = railrisk::load_data_tables(default_table_dir(tables_flag));
    if (times.empty()) times = {4.0, 120.0};
    for (double t : times) {
        if (t < 0.0 || t > 120.0) {
            throw railrisk::OutOfRange("response times must lie in [0, 120] minutes");
        }
    }
    std::sort(times.begin(), times.end());
    const auto report = railrisk::evaluate_scenario(scenario, tables, times, policy);
    emit(format == "table" ? railrisk::table_report(report)
                           : railrisk::machine_report(report, dump_pmfs),
         out_path);
    if (!series_dir.empty()) write_series(report, series_dir);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"railrisk: unit-vs-manifest hazmat transport risk calculator"};
    app.require_subcommand(1);

    std::string scenario_path, tables_flag, out_path, series_dir;
    std::string format = "machine";
    std::string policy_name = "openmp";
    std::vector<double> times;
    bool dump_pmfs = false;
    std::uint64_t seed = 1;
    std::uint64_t trials = 1000000;
    double threshold = 0.01;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario) {
            cmd->add_option("-s,--scenario", scenario_path, "Scenario file")->required();
        }
        cmd->add_option("--tables", tables_flag,
                        "Table directory (default: $RAILRISK_TABLES or ./data)");
        cmd->add_option("--policy", policy_name, "Execution policy: serial|openmp");
    };

    auto* run = app.add_subcommand("run", "Evaluate a scenario and write a risk report");
    add_common(run, true);
    run->add_option("-t,--times", times, "Evacuation response times in minutes (default 4 120)");
    run->add_option("-o,--out", out_path, "Output file (default stdout)");
    run->add_option("-f,--format", format, "Output format: machine|table")
        ->check(CLI::IsMember({"machine", "table"}));
    run->add_flag("--dump-pmfs", dump_pmfs, "Include intermediate pmfs in the machine report");
    run->add_option("--series", series_dir, "Directory for plot-ready data series");

    auto* compare = app.add_subcommand("compare", "Side-by-side unit vs manifest deltas");
    add_common(compare, true);
    compare->add_option("-t,--times", times, "Evacuation response times in minutes");
    compare->add_option("-o,--out", out_path, "Output file (default stdout)");
    compare->add_option("-f,--format", format, "Output format: machine|table")
        ->check(CLI::IsMember({"machine", "table"}));

    auto* validate = app.add_subcommand("validate", "Monte Carlo cross-validation of the pipeline");
    add_common(validate, true);
    validate->add_option("--seed", seed, "RNG seed (default 1)");
    validate->add_option("--trials", trials, "Trials per distribution (default 1e6)");
    validate->add_option("--threshold", threshold, "Max allowed TV distance (default 0.01)");

    auto* inspect = app.add_subcommand("inspect-tables", "Echo the loaded data tables");
    add_common(inspect, false);

    CLI11_PARSE(app, argc, argv);

    try {
        const railrisk::ExecPolicy policy = parse_policy(policy_name);

        if (run->parsed()) {
            return run_command(scenario_path, tables_flag, times, out_path, format, dump_pmfs,
                               series_dir, policy);
        }

        if (compare->parsed()) {
            const auto scenario = railrisk::load_scenario(scenario_path);
            if (!scenario.has_train(railrisk::TrainType::Unit) ||
                !scenario.has_train(railrisk::TrainType::Manifest)) {
                throw railrisk::ValidationError("train", "compare needs both train options");
            }
            const auto tables = railrisk::load_data_tables(default_table_dir(tables_flag));
            if (times.empty()) times = {4.0, 120.0};
            std::sort(times.begin(), times.end());
            const auto report = railrisk::evaluate_scenario(scenario, tables, times, policy);
            if (format == "table") {
                emit(railrisk::table_report(report), out_path);
            } else {
                emit(compare_json(report).dump(2) + "\n", out_path);
            }
            return kExitOk;
        }

        if (validate->parsed()) {
            const auto scenario = railrisk::load_scenario(scenario_path);
            railrisk::mc::SimConfig cfg;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.policy = policy;
            const auto report = railrisk::mc::validate_scenario(scenario, cfg);
            bool ok = true;
            for (const auto& e : report.entries) {
                const bool pass = e.tv <= threshold;
                ok = ok && pass;
                std::cout << (pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(26)
                          << e.name << " tv=" << std::scientific << std::setprecision(3) << e.tv
                          << "  mean " << e.empirical_mean << " vs " << e.analytic_mean
                          << "  (" << e.trials << " trials)\n";
            }
            std::cout << (ok ? "validation passed" : "validation FAILED") << " (threshold "
                      << threshold << ")\n";
            return ok ? kExitOk : kExitValidationFailed;
        }

        // inspect-tables
        const auto dir = default_table_dir(tables_flag);
        const auto tables = railrisk::load_data_tables(dir);
        std::cout << "rates (" << (dir / "rates.csv").string() << "):\n";
        for (auto t : {railrisk::TrainType::Unit, railrisk::TrainType::Manifest}) {
            const auto& m = tables.rates.mainline(t);
            std::cout << "  mainline " << railrisk::to_string(t)
                      << ": d_TRM=" << m.per_million_train_miles
                      << " per M train-mi, d_TOM=" << m.per_billion_gross_ton_miles
                      << " per B ton-mi, d_CM=" << m.per_billion_car_miles << " per B car-mi\n";
        }
        for (auto g : {railrisk::RateGroup::Manifest, railrisk::RateGroup::FlatYard,
                       railrisk::RateGroup::HumpYard, railrisk::RateGroup::Unit,
                       railrisk::RateGroup::LoadedUnit}) {
            if (!tables.rates.has_yard(g)) continue;
            const auto& y = tables.rates.yard(g);
            std::cout << "  yard " << railrisk::to_string(g)
                      << ": d_ADTR=" << y.per_million_train_ad
                      << " per M train A/D, d_ADCA=" << y.per_billion_car_ad << " per B car A/D";
            if (y.per_million_cars_processed) {
                std::cout << ", d_YS=" << *y.per_million_cars_processed << " per M cars";
            } else {
                std::cout << ", d_YS=N/A";
            }
            std::cout << "\n";
        }
        std::cout << "causes (" << (dir / "causes.csv").string() << "):\n";
        std::cout << std::setprecision(6);
        for (auto ctx : {railrisk::CauseContext::Mainline, railrisk::CauseContext::ArrivalDeparture}) {
            for (auto t : {railrisk::TrainType::Unit, railrisk::TrainType::Manifest}) {
                const auto& rows = tables.causes.rows(ctx, t);
                std::cout << "  " << (ctx == railrisk::CauseContext::Mainline ? "mainline" : "ad")
                          << "/" << railrisk::to_string(t) << ": " << rows.size()
                          << " cause groups, percents sum to "
                          << tables.causes.percent_total(ctx, t) << "\n";
                std::cout << "    top: " << rows.front().cause_group << " ("
                          << rows.front().percent << "%, "
                          << railrisk::to_string(rows.front().metric) << ")\n";
            }
        }
        const auto qpath = dir / "quantity.csv";
        if (fs::exists(qpath)) {
            const auto table = railrisk::load_quantity_table(qpath);
            std::cout << "per-car release quantity (" << qpath.string() << "):\n";
            for (const auto& row : table) {
                std::cout << "  " << std::setw(6) << row.lading_loss_gallons
                          << " gal: " << row.probability << "\n";
            }
        }
        railrisk::MixWeights w;
        railrisk::EvacuationTimes ev;
        std::cout << "consequence mixing: track urban/suburban/rural = " << w.urban << "/"
                  << w.suburban << "/" << w.rural << "; wind low/medium/high = " << w.wind_low
                  << "/" << w.wind_medium << "/" << w.wind_high << "\n";
        std::cout << "evacuation landmarks: nearby " << ev.nearby_minutes << " min, hazard zone "
                  << ev.hazard_zone_minutes << " min\n";
        return kExitOk;
    } catch (const railrisk::Error& e) {
        std::cerr << "railrisk: error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "railrisk: error: " << e.what() << "\n";
        return kExitInputError;
    }
}
