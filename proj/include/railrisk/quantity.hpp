#pragma once
#include <span>

#include "railrisk/pmf.hpp"
#include "railrisk/tables.hpp"

namespace railrisk {

// Per-car release quantity as a pmf on the 750-gallon lattice.
DiscretePmf per_car_quantity_pmf(std::span<const QuantityRow> table);

// Total gallons released: mixes the n-fold convolutions of the per-car
// lattice pmf over the release-count distribution. Convolutions are built
// iteratively; mass beyond 150,000 gallons pools in the overflow bucket
// (adding cars never brings it back below the cap, so pooling is exact).
QuantityPmf total_quantity_pmf(const DiscretePmf& count_pmf, std::span<const QuantityRow> table);

}  // namespace railrisk
