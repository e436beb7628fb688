#include "railrisk/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace railrisk {

DiscretePmf::DiscretePmf(SupportKind kind, std::vector<double> masses, bool omits_zero_class)
    : kind_(kind), masses_(std::move(masses)), omits_zero_class_(omits_zero_class) {
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        if (masses_[i] < 0.0) {
            // Tolerate sub-ulp negatives from complement arithmetic.
            if (masses_[i] > -1e-15) {
                masses_[i] = 0.0;
            } else {
                throw ValidationError("pmf[" + std::to_string(i) + "]",
                                      "negative probability mass " + std::to_string(masses_[i]));
            }
        }
    }
}

DiscretePmf DiscretePmf::point_mass(SupportKind kind, std::size_t index) {
    std::vector<double> m(index + 1, 0.0);
    m[index] = 1.0;
    return DiscretePmf(kind, std::move(m));
}

double DiscretePmf::total_mass() const {
    double s = 0.0;
    for (double m : masses_) s += m;
    return s;
}

double DiscretePmf::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) s += static_cast<double>(i) * masses_[i];
    return s;
}

double DiscretePmf::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        const double d = static_cast<double>(i) - mu;
        s += d * d * masses_[i];
    }
    return s;
}

double DiscretePmf::tail_above(std::size_t index) const {
    double s = 0.0;
    for (std::size_t i = index + 1; i < masses_.size(); ++i) s += masses_[i];
    return s;
}

void DiscretePmf::check_normalized(double tol, const char* what) const {
    const double s = total_mass();
    if (std::abs(s - 1.0) > tol) {
        throw ValidationError(what, "masses sum to " + std::to_string(s) + ", expected 1");
    }
}

double QuantityPmf::mean_gallons() const {
    return kLatticeGallons * lattice.mean() +
           overflow * static_cast<double>(kLatticeGallons * kMaxTrackedIndex);
}

double QuantityPmf::prob_release() const {
    return lattice.tail_above(0) + overflow;
}

void QuantityPmf::check_normalized(double tol) const {
    const double s = total_mass();
    if (std::abs(s - 1.0) > tol) {
        throw ValidationError("quantity_pmf",
                              "lattice+overflow mass is " + std::to_string(s) + ", expected 1");
    }
}

double tv_distance(const DiscretePmf& a, const DiscretePmf& b) {
    if (a.kind() != b.kind()) {
        throw SupportMismatch("tv_distance: pmfs index different support kinds");
    }
    const std::size_t n = std::max(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

double tv_distance(const QuantityPmf& a, const QuantityPmf& b) {
    return tv_distance(a.lattice, b.lattice) + 0.5 * std::abs(a.overflow - b.overflow);
}

}  // namespace railrisk
