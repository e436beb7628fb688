#include "railrisk/consequence.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace railrisk {

CasualtyFunction::CasualtyFunction(std::vector<double> time_grid,
                                   std::array<std::vector<double>, 3> anchor_values)
    : time_grid_(std::move(time_grid)), anchor_values_(std::move(anchor_values)) {
    if (time_grid_.size() < 2) {
        throw ValidationError("casualty_function", "need at least two time samples");
    }
    for (const auto& v : anchor_values_) {
        if (v.size() != time_grid_.size()) {
            throw ValidationError("casualty_function", "anchor series does not match time grid");
        }
    }
}

double CasualtyFunction::anchor_value(int anchor_index, double t) const {
    const auto& vals = anchor_values_[static_cast<std::size_t>(anchor_index)];
    const auto it = std::lower_bound(time_grid_.begin(), time_grid_.end(), t);
    if (it == time_grid_.begin()) return vals.front();
    if (it == time_grid_.end()) return vals.back();
    const std::size_t hi = static_cast<std::size_t>(it - time_grid_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - time_grid_[lo]) / (time_grid_[hi] - time_grid_[lo]);
    return vals[lo] + w * (vals[hi] - vals[lo]);
}

double CasualtyFunction::at(double gallons, double t) const {
    if (gallons < 0.0) throw OutOfRange("casualties_at: gallons must be >= 0");
    if (t < time_grid_.front() || t > time_grid_.back()) {
        throw OutOfRange("casualties_at: response time outside curve domain");
    }
    const double top = kAnchorsGallons.back();
    if (gallons > top) {
        if (!warned_overflow_) {
            std::cerr << "railrisk: warning: release quantity " << gallons
                      << " gal beyond the largest consequence anchor; evaluating at " << top
                      << " gal\n";
            warned_overflow_ = true;
        }
        gallons = top;
    }
    if (gallons == 0.0) return 0.0;  // no casualties when nothing releases

    // Piecewise linear between {0, 30k, 90k, 150k}; the zero anchor is 0.
    double lo_g = 0.0, lo_v = 0.0;
    for (std::size_t i = 0; i < kAnchorsGallons.size(); ++i) {
        const double hi_g = kAnchorsGallons[i];
        const double hi_v = anchor_value(static_cast<int>(i), t);
        if (gallons <= hi_g) {
            const double w = (gallons - lo_g) / (hi_g - lo_g);
            return lo_v + w * (hi_v - lo_v);
        }
        lo_g = hi_g;
        lo_v = hi_v;
    }
    return lo_v;  // gallons == top after clamping
}

CasualtyFunction mix_curves(const ConsequenceCurveSet& set) {
    set.validate();
    std::array<std::vector<double>, 3> mixed;
    const std::size_t nt = set.time_grid().size();
    for (std::size_t a = 0; a < ConsequenceCurveSet::kAnchorsGallons.size(); ++a) {
        const int anchor = ConsequenceCurveSet::kAnchorsGallons[a];
        auto& out = mixed[a];
        out.assign(nt, 0.0);
        if (set.premixed()) {
            out = set.at(LocationClass::Mixed, WindClass::Mixed, anchor).values;
            continue;
        }
        const MixWeights& w = set.weights();
        const std::array<std::pair<LocationClass, double>, 3> locs{
            {{LocationClass::Urban, w.urban},
             {LocationClass::Suburban, w.suburban},
             {LocationClass::Rural, w.rural}}};
        const std::array<std::pair<WindClass, double>, 3> winds{
            {{WindClass::Low, w.wind_low},
             {WindClass::Medium, w.wind_medium},
             {WindClass::High, w.wind_high}}};
        for (const auto& [loc, wl] : locs) {
            for (const auto& [wind, ww] : winds) {
                const auto& c = set.at(loc, wind, anchor);
                for (std::size_t t = 0; t < nt; ++t) out[t] += wl * ww * c.values[t];
            }
        }
    }
    return CasualtyFunction(set.time_grid(), std::move(mixed));
}

double casualties_at(const CasualtyFunction& f, double gallons, double t_minutes) {
    return f.at(gallons, t_minutes);
}

double expected_casualties(const QuantityPmf& quantity, const CasualtyFunction& f,
                           double t_minutes) {
    double total = 0.0;
    for (std::size_t g = 1; g < quantity.lattice.size(); ++g) {
        const double m = quantity.lattice[g];
        if (m == 0.0) continue;
        total += m * f.at(static_cast<double>(g) * QuantityPmf::kLatticeGallons, t_minutes);
    }
    if (quantity.overflow > 0.0) {
        total += quantity.overflow *
                 f.at(static_cast<double>(CasualtyFunction::kAnchorsGallons.back()), t_minutes);
    }
    return total;
}

}  // namespace railrisk
