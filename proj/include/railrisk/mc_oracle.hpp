#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "railrisk/parallel.hpp"
#include "railrisk/pmf.hpp"
#include "railrisk/scenario.hpp"

namespace railrisk {

// Simulation of the full event chain, kept arithmetically independent of the
// analytic modules: PODs come from Johnk beta sampling, severities from
// inversion/rejection sampling, tank counts from positional bookkeeping, and
// releases from per-car Bernoulli draws. Only the loaded model parameters
// are shared.
namespace mc {

// xoshiro256** seeded per trial via SplitMix64 from (seed, trial index).
// Trial streams are independent of thread assignment, so results are
// bit-identical for any thread count.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial_index);

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    // Uniform on (0, 1]: safe to pass to log().
    double uniform_open0();
    bool bernoulli(double p) { return uniform01() < p; }
    // Johnk's algorithm; valid for all shape parameters > 0.
    double beta(double alpha, double beta_param);
    // Geometric on {1, 2, ...} with success probability p, by inversion.
    int geometric(double p);

private:
    std::uint64_t s_[4];
};

enum class SimContext { MainlineSegment, AD, Switching };
enum class Conditioning { PerShipment, GivenDerailment };

struct SimConfig {
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
    Conditioning conditioning = Conditioning::GivenDerailment;
    ExecPolicy policy = default_policy();
    // Bernoulli gate applied before each trial when conditioning is
    // PerShipment; supplied by the caller (typically a derailment
    // probability computed elsewhere).
    double per_shipment_derailment_prob = 0.0;
};

// Empirical distribution of the number of tank cars releasing, for one
// context of one service option. `segment_index` selects the mainline
// segment when context == MainlineSegment.
DiscretePmf simulate_release_counts(const Scenario& scenario, TrainType option, SimContext context,
                                    const SimConfig& cfg, std::size_t segment_index = 0);

// Empirical total-quantity distribution from per-car draws of the quantity
// table, one trial per provided release count.
QuantityPmf simulate_quantity(std::span<const int> count_samples,
                              std::span<const QuantityRow> table, std::uint64_t seed);

// Inverse-CDF samples from a count pmf (used to feed simulate_quantity).
std::vector<int> sample_counts(const DiscretePmf& pmf, std::uint64_t trials, std::uint64_t seed);

struct DistComparison {
    std::string name;
    double tv = 0.0;
    double analytic_mean = 0.0, empirical_mean = 0.0;
    double analytic_variance = 0.0, empirical_variance = 0.0;
    std::uint64_t trials = 0;
};

struct ComparisonReport {
    std::vector<DistComparison> entries;
    double max_tv() const;
};

// Runs the oracle against every analytic conditional distribution the
// scenario exercises: mainline release counts per option, A/D release
// counts, switching release counts, and the quantity convolution.
ComparisonReport validate_scenario(const Scenario& scenario, const SimConfig& cfg);

}  // namespace mc
}  // namespace railrisk
