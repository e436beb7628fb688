#include "doctest.h"

#include "railrisk/consequence.hpp"
#include "test_paths.hpp"

using namespace railrisk;

namespace {

ConsequenceCurveSet flat_set(double urban_low_value, double everything_else) {
    ConsequenceCurveSet set;
    set.set_time_grid({0.0, 4.0, 120.0});
    for (auto loc : {LocationClass::Urban, LocationClass::Suburban, LocationClass::Rural}) {
        for (auto wind : {WindClass::Low, WindClass::Medium, WindClass::High}) {
            for (int anchor : ConsequenceCurveSet::kAnchorsGallons) {
                const double v = (loc == LocationClass::Urban && wind == WindClass::Low)
                                     ? urban_low_value
                                     : everything_else;
                set.add_curve(loc, wind, anchor, ConsequenceCurve{{v, v, v}});
            }
        }
    }
    return set;
}

}  // namespace

TEST_CASE("curve mixing") {
    SUBCASE("identical curves pass through the weights") {
        const auto f = mix_curves(flat_set(7.0, 7.0));
        CHECK(f.at(30000, 4.0) == doctest::Approx(7.0).epsilon(1e-12));
        CHECK(f.at(150000, 120.0) == doctest::Approx(7.0).epsilon(1e-12));
    }
    SUBCASE("single nonzero class contributes its weight product") {
        // Only rural-low carries value v: mixed = 0.95 * 0.50 * v.
        ConsequenceCurveSet set;
        set.set_time_grid({0.0, 4.0, 120.0});
        for (auto loc : {LocationClass::Urban, LocationClass::Suburban, LocationClass::Rural}) {
            for (auto wind : {WindClass::Low, WindClass::Medium, WindClass::High}) {
                for (int anchor : ConsequenceCurveSet::kAnchorsGallons) {
                    const double v =
                        (loc == LocationClass::Rural && wind == WindClass::Low) ? 10.0 : 0.0;
                    set.add_curve(loc, wind, anchor, ConsequenceCurve{{v, v, v}});
                }
            }
        }
        const auto f = mix_curves(set);
        CHECK(f.at(30000, 4.0) == doctest::Approx(0.95 * 0.50 * 10.0).epsilon(1e-12));
    }
    SUBCASE("pre-mixed sets pass through unchanged") {
        ConsequenceCurveSet set;
        set.set_premixed(true);
        set.set_time_grid({0.0, 4.0, 120.0});
        for (int anchor : ConsequenceCurveSet::kAnchorsGallons) {
            const double v = anchor / 30000.0;
            set.add_curve(LocationClass::Mixed, WindClass::Mixed, anchor,
                          ConsequenceCurve{{v, v, v}});
        }
        const auto f = mix_curves(set);
        CHECK(f.at(30000, 4.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.at(90000, 4.0) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(f.at(150000, 4.0) == doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("missing curves are reported") {
        ConsequenceCurveSet set;
        set.set_time_grid({0.0, 4.0, 120.0});
        set.add_curve(LocationClass::Urban, WindClass::Low, 30000, ConsequenceCurve{{1, 1, 1}});
        CHECK_THROWS_AS(mix_curves(set), MissingCurve);
    }
}

TEST_CASE("casualty interpolation") {
    // anchors carry 2, 4, 8 at every time
    ConsequenceCurveSet set;
    set.set_premixed(true);
    set.set_time_grid({0.0, 4.0, 120.0});
    set.add_curve(LocationClass::Mixed, WindClass::Mixed, 30000, ConsequenceCurve{{2, 2, 2}});
    set.add_curve(LocationClass::Mixed, WindClass::Mixed, 90000, ConsequenceCurve{{4, 4, 4}});
    set.add_curve(LocationClass::Mixed, WindClass::Mixed, 150000, ConsequenceCurve{{8, 8, 8}});
    const auto f = mix_curves(set);

    CHECK(f.at(0.0, 4.0) == 0.0);
    CHECK(f.at(15000, 4.0) == doctest::Approx(1.0).epsilon(1e-12));  // halfway to first anchor
    CHECK(f.at(30000, 4.0) == doctest::Approx(2.0).epsilon(1e-12));  // exact at anchor
    CHECK(f.at(60000, 4.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.at(120000, 4.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(f.at(150000, 4.0) == doctest::Approx(8.0).epsilon(1e-12));
    // beyond the largest anchor evaluates at the anchor
    CHECK(f.at(200000, 4.0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK_THROWS_AS(f.at(-1.0, 4.0), OutOfRange);
    CHECK_THROWS_AS(f.at(30000, 121.0), OutOfRange);
    CHECK_THROWS_AS(f.at(30000, -0.5), OutOfRange);
}

TEST_CASE("time interpolation is linear between samples") {
    ConsequenceCurveSet set;
    set.set_premixed(true);
    set.set_time_grid({0.0, 4.0, 120.0});
    for (int anchor : ConsequenceCurveSet::kAnchorsGallons) {
        set.add_curve(LocationClass::Mixed, WindClass::Mixed, anchor,
                      ConsequenceCurve{{0.0, 4.0, 120.0}});  // value == t
    }
    const auto f = mix_curves(set);
    CHECK(f.at(30000, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.at(30000, 62.0) == doctest::Approx(62.0).epsilon(1e-12));
    CHECK(f.at(30000, 120.0) == doctest::Approx(120.0).epsilon(1e-12));
}

TEST_CASE("expected casualties") {
    ConsequenceCurveSet set;
    set.set_premixed(true);
    set.set_time_grid({0.0, 4.0, 120.0});
    set.add_curve(LocationClass::Mixed, WindClass::Mixed, 30000, ConsequenceCurve{{3, 3, 3}});
    set.add_curve(LocationClass::Mixed, WindClass::Mixed, 90000, ConsequenceCurve{{6, 6, 6}});
    set.add_curve(LocationClass::Mixed, WindClass::Mixed, 150000, ConsequenceCurve{{9, 9, 9}});
    const auto f = mix_curves(set);

    SUBCASE("no release, no casualties") {
        QuantityPmf q;
        q.lattice = DiscretePmf::point_mass(SupportKind::GallonLattice750, 0);
        CHECK(expected_casualties(q, f, 4.0) == 0.0);
    }
    SUBCASE("point mass at the first anchor") {
        QuantityPmf q;
        q.lattice = DiscretePmf::point_mass(SupportKind::GallonLattice750, 40);  // 30,000 gal
        CHECK(expected_casualties(q, f, 4.0) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("two-point mixture") {
        QuantityPmf q;
        std::vector<double> m(41, 0.0);
        m[1] = 0.5;   // 750 gal
        m[40] = 0.5;  // 30,000 gal
        q.lattice = DiscretePmf(SupportKind::GallonLattice750, std::move(m));
        const double expected = 0.5 * f.at(750, 4.0) + 0.5 * 3.0;
        CHECK(expected_casualties(q, f, 4.0) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("overflow mass evaluated at the top anchor") {
        QuantityPmf q;
        q.lattice = DiscretePmf(SupportKind::GallonLattice750, {0.25});
        q.overflow = 0.75;
        CHECK(expected_casualties(q, f, 4.0) == doctest::Approx(0.75 * 9.0).epsilon(1e-12));
    }
    SUBCASE("linear in the quantity pmf and monotone in the curve") {
        QuantityPmf q1, q2;
        q1.lattice = DiscretePmf(SupportKind::GallonLattice750, {0.9, 0.1});
        q2.lattice = DiscretePmf(SupportKind::GallonLattice750, {0.4, 0.0, 0.6});
        const double e1 = expected_casualties(q1, f, 4.0);
        const double e2 = expected_casualties(q2, f, 4.0);
        QuantityPmf mix;
        std::vector<double> m(3, 0.0);
        for (std::size_t i = 0; i < 3; ++i) m[i] = 0.5 * q1.lattice[i] + 0.5 * q2.lattice[i];
        mix.lattice = DiscretePmf(SupportKind::GallonLattice750, std::move(m));
        CHECK(expected_casualties(mix, f, 4.0) ==
              doctest::Approx(0.5 * e1 + 0.5 * e2).epsilon(1e-13));
    }
}

TEST_CASE("synthetic shipped curves mix cleanly") {
    const auto set = load_consequence_curves(test_data_dir() / "curves_synthetic.csv");
    const auto f = mix_curves(set);
    // non-decreasing in both gallons and time by construction
    CHECK(f.at(30000, 4.0) <= f.at(90000, 4.0));
    CHECK(f.at(90000, 4.0) <= f.at(150000, 4.0));
    CHECK(f.at(30000, 4.0) <= f.at(30000, 120.0));
    CHECK(f.at(30000, 0.0) > 0.0);
}
