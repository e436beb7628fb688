// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria with budgets are wall-clock timed.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "railrisk/mc_oracle.hpp"
#include "railrisk/pipeline.hpp"
#include "railrisk/report.hpp"
#include "test_paths.hpp"

using namespace railrisk;
namespace fs = std::filesystem;

namespace {

#ifndef RAILRISK_CLI_PATH
#define RAILRISK_CLI_PATH "build/tools/railrisk"
#endif

std::string cli_path() {
    if (const char* env = std::getenv("RAILRISK_CLI")) return env;
    return RAILRISK_CLI_PATH;
}

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<QuantityRow> quantity_table() {
    return load_quantity_table(test_data_dir() / "quantity.csv");
}

// 1. Worked release-quantity example: uniform count 0.05 on {1..20},
//    P(total = 4,500 gal) = 0.003264 +/- 5e-5, under one second.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> counts(21, 0.05);
    counts[0] = 0.0;
    const auto q = total_quantity_pmf(DiscretePmf(SupportKind::Count, counts), quantity_table());
    const double p4500 = q.lattice[6];
    const double elapsed = seconds_since(t0);
    const bool pass = std::abs(p4500 - 0.003264) <= 5e-5 && elapsed < 1.0;
    std::ostringstream d;
    d << "P(4,500 gal) = " << p4500 << ", " << elapsed << " s";
    report(1, pass, "worked 4,500-gallon example", d.str());
}

// 2. Per-car quantity probabilities sum to exactly 1.0.
void criterion_2() {
    const auto table = quantity_table();
    double sum = 0.0;
    for (const auto& row : table) sum += row.probability;
    std::ostringstream d;
    d.precision(17);
    d << "sum = " << sum;
    report(2, sum == 1.0 && table.size() == 5, "per-car quantity table sums to exactly one",
           d.str());
}

// 3. Poisson-Binomial exactness against 2^L enumeration, 200 random
//    profiles, max abs error 1e-12, moment identities, under 30 s.
void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    oracles::TestRng rng(424242);
    double worst = 0.0, worst_mean = 0.0, worst_var = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const int L = rng.uniform_int(1, 20);
        std::vector<double> probs;
        double mean = 0.0, var = 0.0;
        for (int i = 0; i < L; ++i) {
            probs.push_back(rng.uniform());
            mean += probs.back();
            var += probs.back() * (1.0 - probs.back());
        }
        const auto exact = poisson_binomial_pmf(probs);
        const auto brute = oracles::poisson_binomial_enumeration(probs);
        for (std::size_t i = 0; i < brute.size(); ++i) {
            worst = std::max(worst, std::abs(exact[i] - brute[i]));
        }
        worst_mean = std::max(worst_mean, std::abs(exact.mean() - mean));
        worst_var = std::max(worst_var, std::abs(exact.variance() - var));
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 1e-12 && worst_mean <= 1e-12 && worst_var <= 1e-12 && elapsed < 30.0;
    std::ostringstream d;
    d << "max pmf err " << worst << ", mean err " << worst_mean << ", var err " << worst_var
      << ", " << elapsed << " s";
    report(3, pass, "Poisson-Binomial matches exhaustive enumeration", d.str());
}

// 4. Severity normalization over the (z, L_r) grid and the yard truncation.
void criterion_4() {
    double worst_tg = 0.0;
    for (double z = -5.0; z <= 0.0 + 1e-12; z += 0.25) {
        for (int lr = 1; lr <= 200; ++lr) {
            worst_tg = std::max(worst_tg,
                                std::abs(linehaul_severity_pmf(z, lr).total_mass() - 1.0));
        }
    }
    double worst_yard = 0.0;
    const YardSeverityModel model;
    for (int L = 1; L <= 100; ++L) {
        for (int k = 1; k <= L; ++k) {
            worst_yard = std::max(
                worst_yard,
                std::abs(yard_switch_severity_pmf(model.all, L, k).total_mass() - 1.0));
        }
    }
    const bool pass = worst_tg <= 1e-12 && worst_yard <= 1e-9;
    std::ostringstream d;
    d << "truncated-geometric err " << worst_tg << ", yard err " << worst_yard;
    report(4, pass, "severity pmfs normalize over the acceptance grids", d.str());
}

// 5. Exchange-of-sums identity: position marginals total the expected
//    severity, 100 random model instances, 1e-9.
void criterion_5() {
    oracles::TestRng rng(777);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int L = rng.uniform_int(1, 60);
        std::vector<double> pod(static_cast<std::size_t>(L) + 1, 0.0);
        double norm = 0.0;
        for (int k = 1; k <= L; ++k) {
            pod[static_cast<std::size_t>(k)] = rng.uniform() + 1e-3;
            norm += pod[static_cast<std::size_t>(k)];
        }
        for (int k = 1; k <= L; ++k) pod[static_cast<std::size_t>(k)] /= norm;
        SeverityFamily fam;
        for (int k = 1; k <= L; ++k) {
            const int lr = L - k + 1;
            std::vector<double> m(static_cast<std::size_t>(lr) + 1, 0.0);
            double s = 0.0;
            for (int x = 1; x <= lr; ++x) {
                m[static_cast<std::size_t>(x)] = rng.uniform() + 1e-3;
                s += m[static_cast<std::size_t>(x)];
            }
            for (int x = 1; x <= lr; ++x) m[static_cast<std::size_t>(x)] /= s;
            fam.by_pod.emplace_back(SupportKind::Count, std::move(m), true);
        }
        const DiscretePmf pod_pmf_v(SupportKind::Count, pod, true);
        const auto pd = position_derail_probs(pod_pmf_v, fam);
        double lhs = 0.0;
        for (double v : pd) lhs += v;
        const double rhs = oracles::expected_severity(pod_pmf_v.masses(), [&](int k) {
            return fam.by_pod[static_cast<std::size_t>(k - 1)].masses();
        });
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    std::ostringstream d;
    d << "max |sum PD - E[x]| = " << worst;
    report(5, worst <= 1e-9, "position marginals equal expected severity", d.str());
}

// 6. A/D tank-count pmf matches full (pod, severity) enumeration, L <= 12.
void criterion_6() {
    oracles::TestRng rng(314159);
    double worst = 0.0;
    for (int rep = 0; rep < 60; ++rep) {
        const int L = rng.uniform_int(1, 12);
        std::vector<double> pod(static_cast<std::size_t>(L) + 1, 0.0);
        double norm = 0.0;
        for (int k = 1; k <= L; ++k) {
            pod[static_cast<std::size_t>(k)] = rng.uniform() + 1e-3;
            norm += pod[static_cast<std::size_t>(k)];
        }
        for (int k = 1; k <= L; ++k) pod[static_cast<std::size_t>(k)] /= norm;
        SeverityFamily fam;
        for (int k = 1; k <= L; ++k) {
            const int lr = L - k + 1;
            std::vector<double> m(static_cast<std::size_t>(lr) + 1, 0.0);
            double s = 0.0;
            for (int x = 1; x <= lr; ++x) {
                m[static_cast<std::size_t>(x)] = rng.uniform() + 1e-3;
                s += m[static_cast<std::size_t>(x)];
            }
            for (int x = 1; x <= lr; ++x) m[static_cast<std::size_t>(x)] /= s;
            fam.by_pod.emplace_back(SupportKind::Count, std::move(m), true);
        }
        std::vector<bool> consist;
        for (int j = 0; j < L; ++j) consist.push_back(rng.uniform() < 0.5);
        const DiscretePmf pod_pmf_v(SupportKind::Count, pod, true);
        const auto pmf = ad_tank_derail_pmf(pod_pmf_v, fam, consist);
        const auto brute = oracles::block_tank_count_enumeration(
            pod_pmf_v.masses(),
            [&](int k) { return fam.by_pod[static_cast<std::size_t>(k - 1)].masses(); }, consist);
        for (std::size_t i = 0; i < brute.size(); ++i) {
            worst = std::max(worst, std::abs(pmf[i] - brute[i]));
        }
    }
    std::ostringstream d;
    d << "max abs err = " << worst;
    report(6, worst <= 1e-12, "A/D tank counts match brute-force enumeration", d.str());
}

// 7. Switching approaches: buffer 0 reproduces switched-alone bitwise;
//    single-car severity gives mass(1) = TT / (TT + 19) exactly.
void criterion_7() {
    const GeParams params{1.10, 0.40};
    const SwitchSeverityFn fn = [&](int cut_length, int fcd) {
        return yard_switch_severity_pmf(params, cut_length, fcd, 20);
    };
    bool bitwise = true;
    for (int tt = 1; tt <= 20; ++tt) {
        const auto alone =
            switch_tank_derail_pmf(SwitchCut::make(SwitchingApproach::SwitchedAlone, tt), fn);
        const auto forced = railrisk::detail::switch_tank_derail_pmf_with_buffer(tt, 0, fn);
        bitwise = bitwise && alone.masses() == forced.masses();
    }
    bool exact = true;
    for (int tt = 1; tt <= 20; ++tt) {
        const auto pmf = switch_tank_derail_pmf(
            SwitchCut::make(SwitchingApproach::SwitchedEnMasse, tt), [](int, int) {
                return DiscretePmf(SupportKind::Count, {0.0, 1.0}, true);
            });
        exact = exact && pmf[1] == static_cast<double>(tt) / (tt + 19);
    }
    report(7, bitwise && exact, "switching approaches agree on their shared structure",
           bitwise ? (exact ? "buffer-0 bitwise, point-severity mass exact"
                            : "point-severity mass differs")
                   : "buffer-0 output differs");
}

// 8. Monte Carlo oracle agreement on the demo scenario: 1e6 trials per
//    context, TV <= 0.01, all three contexts, under two minutes.
void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario scenario = load_scenario(test_data_dir() / "demo.ini");
    mc::SimConfig cfg;
    cfg.trials = 1000000;
    cfg.seed = 20260809;

    std::vector<std::pair<std::string, double>> tvs;

    {  // mainline context (unit option, first segment)
        const TrainConfig& train = scenario.train(TrainType::Unit);
        const RouteSegment& seg = scenario.route.front();
        const SeverityFamily fam = linehaul_severity_family(
            scenario.z_model, SeverityContext::Mainline, train, seg);
        const PositionProfile profile = make_position_profile(
            pod_pmf(scenario.pod_models.mainline_unit, train.length_cars), fam, train.consist,
            scenario.release.cpr);
        const DiscretePmf analytic = release_count_pmf_mainline(profile);
        const DiscretePmf empirical = mc::simulate_release_counts(
            scenario, TrainType::Unit, mc::SimContext::MainlineSegment, cfg, 0);
        tvs.emplace_back("mainline", tv_distance(analytic, empirical));
    }
    {  // A/D context (manifest option in yards)
        const TrainConfig& train = scenario.train(TrainType::Manifest);
        const RouteSegment dummy{"ad", 1.0, 1.0};
        const SeverityFamily fam =
            linehaul_severity_family(scenario.z_model, SeverityContext::Yard, train, dummy);
        const DiscretePmf derail = ad_tank_derail_pmf(
            pod_pmf(scenario.pod_models.yard_manifest, train.length_cars), fam, train.consist);
        const DiscretePmf analytic =
            thin_release_pmf(derail, scenario.release.cpr, scenario.release.yard_speed_factor);
        const DiscretePmf empirical =
            mc::simulate_release_counts(scenario, TrainType::Manifest, mc::SimContext::AD, cfg);
        tvs.emplace_back("ad", tv_distance(analytic, empirical));
    }
    {  // switching context
        const TrainConfig& train = scenario.train(TrainType::Manifest);
        const SwitchCut cut = SwitchCut::make(scenario.yards.switching_approach, train.tank_count);
        const DiscretePmf derail = switch_tank_derail_pmf(
            cut, scenario.yard_severity.for_yard(scenario.yards.yard_type),
            scenario.yard_severity.truncation_cap);
        const DiscretePmf analytic =
            thin_release_pmf(derail, scenario.release.cpr, scenario.release.yard_speed_factor);
        const DiscretePmf empirical = mc::simulate_release_counts(
            scenario, TrainType::Manifest, mc::SimContext::Switching, cfg);
        tvs.emplace_back("switching", tv_distance(analytic, empirical));
    }

    const double elapsed = seconds_since(t0);
    bool pass = elapsed < 120.0;
    std::ostringstream d;
    for (const auto& [name, tv] : tvs) {
        pass = pass && tv <= 0.01;
        d << name << " tv=" << tv << "  ";
    }
    d << elapsed << " s";
    report(8, pass, "Monte Carlo oracle agrees with the analytic pmfs", d.str());
}

// 9. Rate arithmetic against straight-line spreadsheet expressions,
//    1e-15 relative.
void criterion_9() {
    TrainConfig unit;
    unit.train_type = TrainType::Unit;
    unit.length_cars = 100;
    unit.gross_tonnage = 14000.0;
    unit.avg_gross_tons_per_car = 140.0;
    unit.loaded = false;
    unit.consist.assign(100, true);
    unit.tank_count = 100;
    TrainConfig manifest = unit;
    manifest.train_type = TrainType::Manifest;
    manifest.loaded = false;

    RateTable rates;
    rates.set_mainline(TrainType::Unit, {0.85, 0.10, 8.14});
    rates.set_mainline(TrainType::Manifest, {0.67, 0.14, 11.39});
    rates.set_yard(RateGroup::Unit, {76.95, 0.74, std::nullopt});
    rates.set_yard(RateGroup::Manifest, {61.52, 1.04, 6.43});

    CauseTable causes;
    causes.set_rows(CauseContext::Mainline, TrainType::Unit,
                    {{"A", 50.0, MetricClass::TrainMiles},
                     {"B", 30.0, MetricClass::TonMiles},
                     {"C", 20.0, MetricClass::CarMiles}});
    causes.set_rows(CauseContext::Mainline, TrainType::Manifest,
                    {{"A", 100.0, MetricClass::TrainMiles}});
    causes.set_rows(CauseContext::ArrivalDeparture, TrainType::Unit,
                    {{"T", 100.0, MetricClass::TrainEvents}});
    causes.set_rows(CauseContext::ArrivalDeparture, TrainType::Manifest,
                    {{"T", 60.0, MetricClass::TrainEvents},
                     {"C", 40.0, MetricClass::CarEvents}});

    const RouteSegment seg{"s", 100.0, 40.0};
    const YardPlan unit_plan{0, YardType::All, SwitchingApproach::SwitchedAlone, 2};
    const YardPlan manifest_plan{2, YardType::All, SwitchingApproach::SwitchedAlone, 6};

    struct Check {
        const char* name;
        double got, want;
    };
    const std::array<Check, 5> checks{{
        {"mainline unit",
         mainline_derailment_prob(unit, seg, rates, causes),
         0.85 / 1e6 * 100.0 * 0.5 + 0.10 / 1e9 * 14000.0 * 100.0 * 0.3 +
             8.14 / 1e9 * 100.0 * 100.0 * 0.2},
        {"mainline manifest",
         mainline_derailment_prob(manifest, seg, rates, causes),
         0.67 / 1e6 * 100.0 * 1.0},
        {"ad unit",
         ad_derailment_prob(unit, unit_plan, rates, causes),
         76.95 / 1e6 * 2.0 * 1.0},
        {"ad manifest",
         ad_derailment_prob(manifest, manifest_plan, rates, causes),
         61.52 / 1e6 * 6.0 * 0.6 + 1.04 / 1e9 * 100.0 * 6.0 * 0.4},
        {"switching manifest",
         switching_derailment_prob(manifest, manifest_plan, rates),
         6.43 / 1e6 * 100.0 * 3.0},
    }};
    double worst = 0.0;
    for (const auto& c : checks) {
        worst = std::max(worst, std::abs(c.got - c.want) / std::abs(c.want));
    }
    std::ostringstream d;
    d << "max relative err = " << worst;
    report(9, worst <= 1e-15, "rate arithmetic matches spreadsheet evaluation", d.str());
}

// 10. Aggregation: hand-computed demand totals on a one-segment scenario,
//     ceiling jumps, and the A/D-event count relation.
void criterion_10() {
    Scenario s = load_scenario(test_data_dir() / "demo.ini");
    s.route = {{"only", 100.0, 40.0}};
    const DataTables tables = load_data_tables(test_data_dir());
    const std::vector<double> times{4.0, 120.0};

    bool pass = true;
    std::ostringstream d;

    const RiskReport r = evaluate_scenario(s, tables, times);
    for (const auto* opt : {&*r.unit, &*r.manifest}) {
        for (double t : times) {
            const double hand = (opt->segments[0].tc_by_time.at(t) + opt->yard.tc_by_time.at(t)) *
                                opt->shipment_multiplier;
            if (std::abs(hand - opt->demand_total_tc.at(t)) > 1e-15 * std::max(1.0, hand)) {
                pass = false;
            }
        }
    }
    if (r.unit->shipment_multiplier != 3 || r.manifest->shipment_multiplier != 13) pass = false;

    // ceiling jumps exactly at capacity multiples
    for (int delta = 1; delta <= 400; ++delta) {
        const int m = shipment_multiplier(delta, 100);
        if (m != (delta + 99) / 100) pass = false;
        if (delta % 100 == 1 && delta > 1 &&
            m != shipment_multiplier(delta - 1, 100) + 1) {
            pass = false;
        }
    }
    // n = 2 + 2m
    for (int m = 0; m <= 5; ++m) {
        s.yards.intermediate_yards = m;
        s.yards.ad_events = 2 + 2 * m;
        try {
            s.validate();
        } catch (const Error&) {
            pass = false;
        }
    }
    d << "demand totals, ceiling jumps, and n = 2 + 2m all verified";
    report(10, pass, "aggregation reproduces hand-computed totals", d.str());
}

// 11. Determinism and round-trip: repeated CLI runs byte-identical;
//     serialize -> load reproduces the scenario.
void criterion_11() {
    bool pass = true;
    std::ostringstream d;

    const Scenario s = load_scenario(test_data_dir() / "demo.ini");
    const fs::path rt = fs::temp_directory_path() / "acceptance_roundtrip.ini";
    {
        std::ofstream out(rt);
        out << serialize_scenario(s);
    }
    const Scenario t = load_scenario(rt);
    if (!(s == t)) {
        pass = false;
        d << "scenario round-trip differs; ";
    }
    fs::remove(rt);

    const fs::path out1 = fs::temp_directory_path() / "acceptance_run1.json";
    const fs::path out2 = fs::temp_directory_path() / "acceptance_run2.json";
    const std::string cmd_base = cli_path() + " run -s " +
                                 (test_data_dir() / "demo.ini").string() + " --tables " +
                                 test_data_dir().string() + " -t 4 -t 30 -t 120 -o ";
    const int rc1 = std::system((cmd_base + out1.string()).c_str());
    const int rc2 = std::system((cmd_base + out2.string()).c_str());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(out1);
    if (rc1 != 0 || rc2 != 0 || a.empty() || a != slurp(out2)) {
        pass = false;
        d << "repeated CLI runs differ; ";
    }
    fs::remove(out1);
    fs::remove(out2);
    if (pass) d << "byte-identical reports, structurally identical round-trip";
    report(11, pass, "determinism and round-trip", d.str());
}

}  // namespace

int main() {
    std::printf("railrisk acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures == 0) {
        std::printf("all 11 criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
