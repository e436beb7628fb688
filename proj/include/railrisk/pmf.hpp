#pragma once
#include <cstddef>
#include <span>
#include <vector>

#include "railrisk/error.hpp"

namespace railrisk {

// What the integer index of a pmf means.
enum class SupportKind {
    Count,             // index = number of cars (derailed / releasing)
    GallonLattice750,  // index g = 750 * g gallons released
};

// Probability mass function over non-negative integer indices, stored dense
// from index 0. The carrier for every distribution in the pipeline.
//
// Conditional distributions that are defined only for x >= 1 (severity pmfs,
// point-of-derailment pmfs) keep a zero entry at index 0 and set
// omits_zero_class() so consumers and validators know the zero class is
// intentionally absent rather than zero-probability by computation.
class DiscretePmf {
public:
    DiscretePmf() = default;
    DiscretePmf(SupportKind kind, std::vector<double> masses, bool omits_zero_class = false);

    static DiscretePmf point_mass(SupportKind kind, std::size_t index);

    SupportKind kind() const { return kind_; }
    bool omits_zero_class() const { return omits_zero_class_; }

    // Number of stored entries (max index + 1). Indices past the end have
    // zero mass.
    std::size_t size() const { return masses_.size(); }
    std::size_t max_index() const { return masses_.empty() ? 0 : masses_.size() - 1; }

    double operator[](std::size_t i) const { return i < masses_.size() ? masses_[i] : 0.0; }
    const std::vector<double>& masses() const { return masses_; }

    double total_mass() const;
    double mean() const;
    double variance() const;

    // P(X > index).
    double tail_above(std::size_t index) const;

    // Throws ValidationError unless |total_mass - 1| <= tol.
    void check_normalized(double tol = 1e-9, const char* what = "pmf") const;

private:
    SupportKind kind_ = SupportKind::Count;
    std::vector<double> masses_;
    bool omits_zero_class_ = false;
};

// Total release quantity on the 750-gallon lattice. Indices 0..200 track
// 0..150,000 gallons exactly; anything heavier is pooled in `overflow` and
// later evaluated at the 150,000-gallon consequence anchor.
struct QuantityPmf {
    static constexpr int kLatticeGallons = 750;
    static constexpr int kMaxTrackedIndex = 200;  // 150,000 gallons

    DiscretePmf lattice;     // SupportKind::GallonLattice750, size <= 201
    double overflow = 0.0;   // mass beyond 150,000 gallons

    double total_mass() const { return lattice.total_mass() + overflow; }
    // Overflow mass contributes at the 150,000-gallon point.
    double mean_gallons() const;
    double prob_release() const;  // P(quantity > 0)

    void check_normalized(double tol = 1e-9) const;
};

// 0.5 * L1 distance over the union support. Throws SupportMismatch when the
// two pmfs index different things.
double tv_distance(const DiscretePmf& a, const DiscretePmf& b);
double tv_distance(const QuantityPmf& a, const QuantityPmf& b);

}  // namespace railrisk
