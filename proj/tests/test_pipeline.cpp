#include "doctest.h"

#include <cmath>

#include "railrisk/pipeline.hpp"
#include "railrisk/report.hpp"
#include "test_paths.hpp"

using namespace railrisk;

TEST_CASE("shipment multiplier is the demand ceiling") {
    CHECK(shipment_multiplier(250, 100) == 3);
    CHECK(shipment_multiplier(100, 100) == 1);
    CHECK(shipment_multiplier(101, 100) == 2);
    CHECK(shipment_multiplier(1, 100) == 1);
    // jumps exactly at multiples of the capacity
    int prev = shipment_multiplier(1, 20);
    for (int delta = 2; delta <= 200; ++delta) {
        const int cur = shipment_multiplier(delta, 20);
        if ((delta - 1) % 20 == 0) {
            CHECK(cur == prev + 1);
        } else {
            CHECK(cur == prev);
        }
        prev = cur;
    }
    CHECK_THROWS_AS(shipment_multiplier(0, 10), OutOfRange);
}

TEST_CASE("ad events follow the yard count in loaded scenarios") {
    Scenario s = load_scenario(test_data_dir() / "demo.ini");
    for (int m = 0; m <= 5; ++m) {
        s.yards.intermediate_yards = m;
        s.yards.ad_events = 2 + 2 * m;
        CHECK_NOTHROW(s.validate());
        s.yards.ad_events = 2 + 2 * m + 1;
        CHECK_THROWS_AS(s.validate(), ValidationError);
        s.yards.ad_events = 2 + 2 * m;
    }
}

TEST_CASE("full evaluation on the demo scenario") {
    const Scenario scenario = load_scenario(test_data_dir() / "demo.ini");
    const DataTables tables = load_data_tables(test_data_dir());
    const std::vector<double> times{4.0, 120.0};
    const RiskReport report = evaluate_scenario(scenario, tables, times);

    REQUIRE(report.unit.has_value());
    REQUIRE(report.manifest.has_value());
    const auto& unit = *report.unit;
    const auto& manifest = *report.manifest;

    CHECK(unit.shipment_multiplier == 3);       // ceil(250 / 100)
    CHECK(manifest.shipment_multiplier == 13);  // ceil(250 / 20)
    CHECK(unit.segments.size() == 2);
    CHECK(unit.yard.switching_derailment_prob == 0.0);
    CHECK(manifest.yard.switching_derailment_prob > 0.0);

    SUBCASE("probabilities are sane and pmfs normalized") {
        for (const auto* opt : {&unit, &manifest}) {
            for (const auto& seg : opt->segments) {
                CHECK(seg.derailment_prob > 0.0);
                CHECK(seg.derailment_prob < 1.0);
                CHECK(seg.conditional_release_counts.total_mass() ==
                      doctest::Approx(1.0).epsilon(1e-9));
                CHECK(seg.per_shipment_release_counts.total_mass() ==
                      doctest::Approx(1.0).epsilon(1e-9));
                CHECK(std::abs(seg.per_shipment_quantity.total_mass() - 1.0) <= 1e-9);
            }
            CHECK(std::abs(opt->yard.per_shipment_quantity.total_mass() - 1.0) <= 1e-9);
            CHECK(std::abs(opt->combined_quantity.total_mass() - 1.0) <= 1e-9);
        }
    }
    SUBCASE("per-shipment TC sums the components") {
        for (const auto* opt : {&unit, &manifest}) {
            for (double t : times) {
                double sum = opt->yard.tc_by_time.at(t);
                for (const auto& seg : opt->segments) sum += seg.tc_by_time.at(t);
                CHECK(opt->per_shipment_tc.at(t) == doctest::Approx(sum).epsilon(1e-12));
                CHECK(opt->demand_total_tc.at(t) ==
                      doctest::Approx(sum * opt->shipment_multiplier).epsilon(1e-12));
            }
        }
    }
    SUBCASE("casualties grow with response time") {
        CHECK(unit.per_shipment_tc.at(120.0) > unit.per_shipment_tc.at(4.0));
    }
    SUBCASE("serial and parallel evaluations agree bitwise") {
        const RiskReport serial = evaluate_scenario(scenario, tables, times, ExecPolicy::Serial);
        CHECK(machine_report(serial, true) == machine_report(report, true));
    }
}

TEST_CASE("one-segment aggregation reproduces the hand-computed chain") {
    // A scenario small enough to replicate with standalone arithmetic.
    const Scenario base = load_scenario(test_data_dir() / "demo.ini");
    Scenario s = base;
    s.route = {{"only", 100.0, 40.0}};
    s.manifest_train.reset();
    s.demand = {250, 100, 20};
    const DataTables tables = load_data_tables(test_data_dir());
    const std::vector<double> times{4.0};
    const RiskReport report = evaluate_scenario(s, tables, times);
    const auto& opt = *report.unit;

    // Hand composition: TC_total = TC_main + TC_AD, demand multiplies by 3.
    const double tc_main = opt.segments[0].tc_by_time.at(4.0);
    const double tc_ad = opt.yard.tc_by_time.at(4.0);
    CHECK(opt.per_shipment_tc.at(4.0) == doctest::Approx(tc_main + tc_ad).epsilon(1e-13));
    CHECK(opt.demand_total_tc.at(4.0) ==
          doctest::Approx(3.0 * (tc_main + tc_ad)).epsilon(1e-13));

    // TC_main itself is the expectation of casualties over the per-shipment
    // quantity pmf (direct sum).
    const CasualtyFunction f = mix_curves(s.curves);
    double direct = 0.0;
    const auto& q = opt.segments[0].per_shipment_quantity;
    for (std::size_t g = 1; g < q.lattice.size(); ++g) {
        direct += q.lattice[g] * f.at(750.0 * static_cast<double>(g), 4.0);
    }
    direct += q.overflow * f.at(150000.0, 4.0);
    CHECK(tc_main == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("segment-miles toggle scales only the aggregation") {
    Scenario s = load_scenario(test_data_dir() / "demo.ini");
    s.manifest_train.reset();
    s.route = {{"only", 50.0, 40.0}};
    const DataTables tables = load_data_tables(test_data_dir());
    const std::vector<double> times{4.0};
    const RiskReport off = evaluate_scenario(s, tables, times);
    s.options.multiply_mainline_tc_by_segment_miles = true;
    const RiskReport on = evaluate_scenario(s, tables, times);
    const double tc_main = off.unit->segments[0].tc_by_time.at(4.0);
    const double tc_ad = off.unit->yard.tc_by_time.at(4.0);
    CHECK(on.unit->segments[0].tc_by_time.at(4.0) ==
          doctest::Approx(tc_main).epsilon(1e-13));  // per-segment value unscaled
    CHECK(on.unit->per_shipment_tc.at(4.0) ==
          doctest::Approx(50.0 * tc_main + tc_ad).epsilon(1e-12));
}

TEST_CASE("machine report is deterministic and versioned") {
    const Scenario scenario = load_scenario(test_data_dir() / "demo.ini");
    const DataTables tables = load_data_tables(test_data_dir());
    const std::vector<double> times{4.0, 120.0};
    const RiskReport a = evaluate_scenario(scenario, tables, times);
    const RiskReport b = evaluate_scenario(scenario, tables, times);
    const std::string ja = machine_report(a, true);
    CHECK(ja == machine_report(b, true));
    CHECK(ja.find(RiskReport::kSchemaVersion) != std::string::npos);
    // table output carries the same headline numbers, no extra information
    const std::string table = table_report(a);
    CHECK(table.find("Unit train option") != std::string::npos);
    CHECK(table.find("Manifest train option") != std::string::npos);
}
