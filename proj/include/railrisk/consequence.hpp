#pragma once
#include <array>
#include <vector>

#include "railrisk/pmf.hpp"
#include "railrisk/tables.hpp"

namespace railrisk {

// Casualties as a function of (gallons released, evacuation response time),
// assembled by mixing the consequence curves over the route/weather weights.
// Piecewise linear in gallons between the anchors {0, 30k, 90k, 150k} and in
// time between the curve samples; identically zero at zero release.
class CasualtyFunction {
public:
    CasualtyFunction(std::vector<double> time_grid,
                     std::array<std::vector<double>, 3> anchor_values);

    // Throws OutOfRange for negative gallons or response times outside the
    // curve domain. Gallons beyond the largest anchor evaluate at that
    // anchor (the overflow rule); a warning is logged once per function.
    double at(double gallons, double t_minutes) const;

    const std::vector<double>& time_grid() const { return time_grid_; }

    static constexpr std::array<int, 3> kAnchorsGallons = ConsequenceCurveSet::kAnchorsGallons;

private:
    double anchor_value(int anchor_index, double t_minutes) const;

    std::vector<double> time_grid_;
    std::array<std::vector<double>, 3> anchor_values_;  // per anchor, per time sample
    mutable bool warned_overflow_ = false;
};

// Mixes the nine (location, wind) curves with the track/weather weights, per
// anchor. A pre-mixed set passes through unchanged.
CasualtyFunction mix_curves(const ConsequenceCurveSet& set);

double casualties_at(const CasualtyFunction& f, double gallons, double t_minutes);

// Expected total casualties at response time t: sum of quantity mass times
// casualties over the tracked lattice, with overflow mass evaluated at the
// 150,000-gallon anchor.
double expected_casualties(const QuantityPmf& quantity, const CasualtyFunction& f,
                           double t_minutes);

}  // namespace railrisk
