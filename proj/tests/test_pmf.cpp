#include "doctest.h"

#include "railrisk/pmf.hpp"

using namespace railrisk;

TEST_CASE("point mass and moments") {
    const auto p = DiscretePmf::point_mass(SupportKind::Count, 3);
    CHECK(p[3] == 1.0);
    CHECK(p[0] == 0.0);
    CHECK(p[7] == 0.0);  // past the stored support
    CHECK(p.mean() == 3.0);
    CHECK(p.variance() == 0.0);
    CHECK(p.total_mass() == 1.0);
}

TEST_CASE("negative masses rejected, sub-ulp noise clamped") {
    CHECK_THROWS_AS(DiscretePmf(SupportKind::Count, {0.5, -0.5}), ValidationError);
    const DiscretePmf ok(SupportKind::Count, {1.0, -1e-16});
    CHECK(ok[1] == 0.0);
}

TEST_CASE("check_normalized tolerance") {
    const DiscretePmf p(SupportKind::Count, {0.25, 0.75});
    CHECK_NOTHROW(p.check_normalized());
    const DiscretePmf q(SupportKind::Count, {0.25, 0.7});
    CHECK_THROWS_AS(q.check_normalized(), ValidationError);
}

TEST_CASE("tv distance") {
    const DiscretePmf a(SupportKind::Count, {0.5, 0.5});
    SUBCASE("identical pmfs") { CHECK(tv_distance(a, a) == 0.0); }
    SUBCASE("disjoint point masses") {
        const auto p = DiscretePmf::point_mass(SupportKind::Count, 0);
        const auto q = DiscretePmf::point_mass(SupportKind::Count, 5);
        CHECK(tv_distance(p, q) == 1.0);
    }
    SUBCASE("half vs three-quarters") {
        const DiscretePmf b(SupportKind::Count, {0.75, 0.25});
        CHECK(tv_distance(a, b) == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("support mismatch") {
        const DiscretePmf g(SupportKind::GallonLattice750, {0.5, 0.5});
        CHECK_THROWS_AS(tv_distance(a, g), SupportMismatch);
    }
}

TEST_CASE("quantity pmf bookkeeping") {
    QuantityPmf q;
    q.lattice = DiscretePmf(SupportKind::GallonLattice750, {0.4, 0.0, 0.5});
    q.overflow = 0.1;
    CHECK(q.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q.prob_release() == doctest::Approx(0.6).epsilon(1e-15));
    // overflow counts at the 150,000-gallon anchor
    CHECK(q.mean_gallons() == doctest::Approx(0.5 * 1500 + 0.1 * 150000).epsilon(1e-12));
    CHECK_NOTHROW(q.check_normalized());
}
