#include "railrisk/quantity.hpp"

#include <algorithm>
#include <vector>

namespace railrisk {

DiscretePmf per_car_quantity_pmf(std::span<const QuantityRow> table) {
    if (table.empty()) throw ValidationError("quantity_table", "empty per-car quantity table");
    int max_idx = 0;
    for (const auto& row : table) {
        if (row.lading_loss_gallons <= 0 || row.lading_loss_gallons % QuantityPmf::kLatticeGallons != 0) {
            throw ValidationError("quantity_table",
                                  "lading loss must be a positive multiple of 750 gallons");
        }
        max_idx = std::max(max_idx, row.lading_loss_gallons / QuantityPmf::kLatticeGallons);
    }
    std::vector<double> masses(static_cast<std::size_t>(max_idx) + 1, 0.0);
    for (const auto& row : table) {
        masses[static_cast<std::size_t>(row.lading_loss_gallons / QuantityPmf::kLatticeGallons)] +=
            row.probability;
    }
    return DiscretePmf(SupportKind::GallonLattice750, std::move(masses), true);
}

QuantityPmf total_quantity_pmf(const DiscretePmf& count_pmf, std::span<const QuantityRow> table) {
    if (count_pmf.kind() != SupportKind::Count) {
        throw SupportMismatch("total_quantity_pmf: count_pmf must have Count support");
    }
    const DiscretePmf per_car = per_car_quantity_pmf(table);
    constexpr int cap = QuantityPmf::kMaxTrackedIndex;

    std::vector<double> total(static_cast<std::size_t>(cap) + 1, 0.0);
    double total_overflow = 0.0;

    // conv = per-car pmf convolved n times, truncated at the cap.
    std::vector<double> conv(static_cast<std::size_t>(cap) + 1, 0.0);
    double conv_overflow = 0.0;
    conv[0] = 1.0;  // zero cars release zero gallons

    const std::size_t n_counts = count_pmf.size();
    for (std::size_t n = 0; n < n_counts; ++n) {
        if (n > 0) {
            // One more releasing car: convolve with the per-car pmf.
            std::vector<double> next(static_cast<std::size_t>(cap) + 1, 0.0);
            double next_overflow = conv_overflow;  // already-heavy mass stays heavy
            for (int g = 0; g <= cap; ++g) {
                const double m = conv[static_cast<std::size_t>(g)];
                if (m == 0.0) continue;
                for (std::size_t d = 1; d < per_car.size(); ++d) {
                    const double pd = per_car[d];
                    if (pd == 0.0) continue;
                    const std::size_t idx = static_cast<std::size_t>(g) + d;
                    if (idx <= static_cast<std::size_t>(cap)) {
                        next[idx] += m * pd;
                    } else {
                        next_overflow += m * pd;
                    }
                }
            }
            conv.swap(next);
            conv_overflow = next_overflow;
        }
        const double w = count_pmf[n];
        if (w == 0.0) continue;
        for (int g = 0; g <= cap; ++g) total[static_cast<std::size_t>(g)] += w * conv[static_cast<std::size_t>(g)];
        total_overflow += w * conv_overflow;
    }

    QuantityPmf out;
    out.lattice = DiscretePmf(SupportKind::GallonLattice750, std::move(total));
    out.overflow = total_overflow;
    return out;
}

}  // namespace railrisk
