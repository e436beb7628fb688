#pragma once
#include <functional>
#include <span>
#include <vector>

#include "railrisk/parallel.hpp"
#include "railrisk/pmf.hpp"
#include "railrisk/scenario.hpp"
#include "railrisk/severity.hpp"

namespace railrisk {

// Conditional severity pmfs P(x | POD = k) for every possible point of
// derailment k = 1..L. by_pod[k-1] covers x in {1..L-k+1}.
struct SeverityFamily {
    std::vector<DiscretePmf> by_pod;

    int train_length() const { return static_cast<int>(by_pod.size()); }
};

// Builds the truncated-geometric severity family for a line-haul, yard-A/D,
// or terminal-A/D incident. The mainline logit varies with the cars behind
// the POD, so each k gets its own distribution.
SeverityFamily linehaul_severity_family(const ZModel& z_model, SeverityContext ctx,
                                        const TrainConfig& train, const RouteSegment& segment,
                                        ExecPolicy policy = default_policy());

// PD(j | TD): probability that the car at position j derails, given a
// derailment. Sums pod(k) times the severity tail that reaches position j.
std::vector<double> position_derail_probs(const DiscretePmf& pod, const SeverityFamily& severity,
                                          ExecPolicy policy = default_policy());

// Per-position derail and release probabilities for the mainline chain.
// release_prob[j-1] = PD(j) * CPR on tank positions, 0 elsewhere.
struct PositionProfile {
    std::vector<double> derail_prob;
    std::vector<double> release_prob;
};

PositionProfile make_position_profile(const DiscretePmf& pod, const SeverityFamily& severity,
                                      const std::vector<bool>& consist, double cpr,
                                      ExecPolicy policy = default_policy());

// Exact Poisson-Binomial pmf of independent non-identical Bernoulli trials,
// by dynamic-programming convolution over positions.
DiscretePmf poisson_binomial_pmf(std::span<const double> probs);

// Number of tank cars releasing on a mainline segment given a derailment:
// Poisson-Binomial over the per-position release probabilities.
DiscretePmf release_count_pmf_mainline(const PositionProfile& profile);

// Number of tank cars derailed given an A/D incident: sums pod(k) * P(x|k)
// over every (k, x) outcome, counting tank cars in the derailed block
// k..k+x-1.
DiscretePmf ad_tank_derail_pmf(const DiscretePmf& pod, const SeverityFamily& severity,
                               const std::vector<bool>& consist);

// Binomial thinning: each of y derailed tank cars independently releases
// with probability factor * cpr.
DiscretePmf thin_release_pmf(const DiscretePmf& derail_pmf, double cpr, double factor);

// A cut of cars in one switching movement. Switched alone: the tank block by
// itself. Switched en masse: the block behind 19 non-tank buffer cars.
struct SwitchCut {
    SwitchingApproach approach = SwitchingApproach::SwitchedAlone;
    int tank_count = 0;       // TT, 1..20
    int buffer_noncars = 0;   // 19 for en masse
    int total_considered = 0; // TCC = tank_count + buffer_noncars

    static SwitchCut make(SwitchingApproach approach, int tank_count);
};

// Uniform first-car-of-derailment position over the cut.
DiscretePmf fcd_pmf(const SwitchCut& cut);

// Number of tank cars derailed given a switching incident. The severity
// callback must return the truncated severity pmf for (cut_length, fcd).
using SwitchSeverityFn = std::function<DiscretePmf(int cut_length, int fcd_position)>;

DiscretePmf switch_tank_derail_pmf(const SwitchCut& cut, const GeParams& params,
                                   int truncation_cap = 20);
DiscretePmf switch_tank_derail_pmf(const SwitchCut& cut, const SwitchSeverityFn& severity);

namespace detail {
// Shared core with an explicit buffer size; buffer 0 reproduces the
// switched-alone sums exactly.
DiscretePmf switch_tank_derail_pmf_with_buffer(int tank_count, int buffer,
                                               const SwitchSeverityFn& severity);
}  // namespace detail

// Removes the conditioning: P(x >= 1) = conditional(x) * derailment_prob,
// zero class by complement.
DiscretePmf per_shipment_release_pmf(const DiscretePmf& conditional, double derailment_prob);

// Manifest yard composition: probability-weighted sum of the A/D and
// switching branches.
DiscretePmf per_shipment_release_pmf(const DiscretePmf& ad_conditional, double ad_prob,
                                     const DiscretePmf& switch_conditional, double switch_prob);

}  // namespace railrisk
