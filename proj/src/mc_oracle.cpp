#include "railrisk/mc_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "railrisk/quantity.hpp"
#include "railrisk/release_count.hpp"

namespace railrisk::mc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial_index) {
    std::uint64_t sm = seed ^ (trial_index * kGolden + 1);
    for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t TrialRng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double TrialRng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double TrialRng::uniform_open0() {
    return 1.0 - uniform01();
}

double TrialRng::beta(double alpha, double beta_param) {
    // Johnk: X = U^(1/a), Y = V^(1/b); accept X/(X+Y) when X + Y <= 1.
    for (;;) {
        const double x = std::pow(uniform_open0(), 1.0 / alpha);
        const double y = std::pow(uniform_open0(), 1.0 / beta_param);
        const double s = x + y;
        if (s <= 1.0 && s > 0.0) return x / s;
    }
}

int TrialRng::geometric(double p) {
    if (p >= 1.0) return 1;
    if (p <= 0.0) throw OutOfRange("geometric: p must be positive");
    const double u = uniform_open0();
    return 1 + static_cast<int>(std::floor(std::log(u) / std::log1p(-p)));
}

namespace {

// Histogram accumulation over trials with per-thread bins; counts merge by
// integer addition, so the result is independent of scheduling.
template <typename TrialFn>
std::vector<std::uint64_t> histogram_trials(std::uint64_t trials, std::size_t bins,
                                            ExecPolicy policy, const TrialFn& fn) {
    int lanes = 1;
#ifdef _OPENMP
    if (policy == ExecPolicy::OpenMP) lanes = omp_get_max_threads();
#endif
    std::vector<std::vector<std::uint64_t>> partial(
        static_cast<std::size_t>(lanes), std::vector<std::uint64_t>(bins, 0));
    if (policy == ExecPolicy::OpenMP && lanes > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(trials); ++i) {
            auto& hist = partial[static_cast<std::size_t>(omp_get_thread_num())];
            const std::size_t bin = fn(static_cast<std::uint64_t>(i));
            ++hist[std::min(bin, bins - 1)];
        }
#endif
    } else {
        for (std::uint64_t i = 0; i < trials; ++i) {
            const std::size_t bin = fn(i);
            ++partial[0][std::min(bin, bins - 1)];
        }
    }
    std::vector<std::uint64_t> total(bins, 0);
    for (const auto& h : partial) {
        for (std::size_t b = 0; b < bins; ++b) total[b] += h[b];
    }
    return total;
}

DiscretePmf empirical_pmf(const std::vector<std::uint64_t>& hist, std::uint64_t trials) {
    std::vector<double> masses(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i) {
        masses[i] = static_cast<double>(hist[i]) / static_cast<double>(trials);
    }
    return DiscretePmf(SupportKind::Count, std::move(masses));
}

// Oracle-side severity logit; mirrors the fitted model definitions without
// calling into the analytic modules.
struct OracleSeverity {
    std::vector<double> stop_prob_by_pod;  // p(k), k = 1..L

    static OracleSeverity mainline(const Scenario& sc, const TrainConfig& train,
                                   const RouteSegment& seg) {
        OracleSeverity out;
        const auto& c = sc.z_model.mainline;
        out.stop_prob_by_pod.resize(static_cast<std::size_t>(train.length_cars));
        for (int k = 1; k <= train.length_cars; ++k) {
            const int lr = train.length_cars - k + 1;
            const double z = c.intercept + c.derail_speed * seg.derailment_speed_mph +
                             c.cars_behind * lr + c.tons_per_car * train.avg_gross_tons_per_car +
                             (train.empty_unit() ? c.empty_unit : 0.0) +
                             (train.loaded_unit() ? c.loaded_unit : 0.0);
            out.stop_prob_by_pod[static_cast<std::size_t>(k - 1)] = 1.0 / (1.0 + std::exp(-z));
        }
        return out;
    }

    static OracleSeverity yard_or_terminal(const Scenario& sc, const TrainConfig& train,
                                           bool terminal) {
        OracleSeverity out;
        const double z = terminal
                             ? sc.z_model.terminal.intercept +
                                   sc.z_model.terminal.train_length * train.length_cars
                             : sc.z_model.yard.intercept +
                                   sc.z_model.yard.train_length * train.length_cars;
        out.stop_prob_by_pod.assign(static_cast<std::size_t>(train.length_cars),
                                    1.0 / (1.0 + std::exp(-z)));
        return out;
    }
};

// Truncated geometric via rejection: exact for the lumping-free truncation
// used by line-haul severities.
int sample_truncated_geometric(TrialRng& rng, double stop_prob, int cars_behind) {
    if (cars_behind == 1) return 1;
    for (;;) {
        const int x = rng.geometric(stop_prob);
        if (x <= cars_behind) return x;
    }
}

// Cumulative table of the discretized generalized exponential, built from
// the density definition; sampled by inversion and clamped at the cap
// (clamping realizes the lumped-tail truncation exactly).
struct OracleGeSampler {
    std::vector<double> cdf;  // cdf[i] = P(X <= i+1)

    explicit OracleGeSampler(const GeParams& p) {
        std::vector<double> f;
        double sum = 0.0;
        for (int x = 1; x <= 100000; ++x) {
            const double e = std::exp(-p.rate * x);
            const double v = p.shape * p.rate * e * std::pow(1.0 - e, p.shape - 1.0);
            f.push_back(v);
            sum += v;
            if (x >= 21 && v < 1e-16 * sum) break;
        }
        cdf.resize(f.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            acc += f[i] / sum;
            cdf[i] = acc;
        }
        cdf.back() = 1.0;
    }

    int sample(TrialRng& rng, int cap) const {
        const double u = rng.uniform01();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const int x = static_cast<int>(it - cdf.begin()) + 1;
        return std::min(x, cap);
    }
};

std::vector<int> tank_positions(const std::vector<bool>& consist) {
    std::vector<int> out;
    for (std::size_t j = 0; j < consist.size(); ++j) {
        if (consist[j]) out.push_back(static_cast<int>(j) + 1);
    }
    return out;
}

}  // namespace

DiscretePmf simulate_release_counts(const Scenario& scenario, TrainType option, SimContext context,
                                    const SimConfig& cfg, std::size_t segment_index) {
    if (cfg.trials < 1) throw OutOfRange("simulate_release_counts: trials must be >= 1");
    const TrainConfig& train = scenario.train(option);
    const double cpr = scenario.release.cpr;
    const double yard_q = scenario.release.yard_speed_factor * cpr;
    const bool per_shipment = cfg.conditioning == Conditioning::PerShipment;
    const double gate = cfg.per_shipment_derailment_prob;

    if (context == SimContext::MainlineSegment) {
        if (segment_index >= scenario.route.size()) {
            throw OutOfRange("simulate_release_counts: segment index out of range");
        }
        const RouteSegment& seg = scenario.route[segment_index];
        const PodModel pod = scenario.pod_models.get(option == TrainType::Unit
                                                         ? PodContext::MainlineUnit
                                                         : PodContext::MainlineManifest);
        const OracleSeverity sev = OracleSeverity::mainline(scenario, train, seg);
        const auto tanks = tank_positions(train.consist);
        const int L = train.length_cars;
        const std::size_t bins = tanks.size() + 1;

        // The analytic chain treats each position's release as an
        // independent Bernoulli with the position's marginal probability
        // (the Poisson-Binomial assumption), so each tank position gets its
        // own derailment draw.
        auto hist = histogram_trials(cfg.trials, bins, cfg.policy, [&](std::uint64_t i) {
            TrialRng rng(cfg.seed, i);
            if (per_shipment && !rng.bernoulli(gate)) return std::size_t{0};
            std::size_t count = 0;
            for (const int j : tanks) {
                const double x01 = rng.beta(pod.alpha, pod.beta);
                const int k = std::min(L, static_cast<int>(x01 * L) + 1);
                if (k > j) continue;
                const int lr = L - k + 1;
                const int x = sample_truncated_geometric(
                    rng, sev.stop_prob_by_pod[static_cast<std::size_t>(k - 1)], lr);
                if (x >= j - k + 1 && rng.bernoulli(cpr)) ++count;
            }
            return count;
        });
        return empirical_pmf(hist, cfg.trials);
    }

    if (context == SimContext::AD) {
        const PodModel pod = scenario.pod_models.get(
            option == TrainType::Unit ? PodContext::TerminalUnit : PodContext::YardManifest);
        const OracleSeverity sev =
            OracleSeverity::yard_or_terminal(scenario, train, option == TrainType::Unit);
        const int L = train.length_cars;
        std::vector<int> prefix(static_cast<std::size_t>(L) + 1, 0);
        for (int j = 1; j <= L; ++j) {
            prefix[static_cast<std::size_t>(j)] = prefix[static_cast<std::size_t>(j - 1)] +
                                                  (train.consist[static_cast<std::size_t>(j - 1)] ? 1 : 0);
        }
        const std::size_t bins = static_cast<std::size_t>(train.tank_count) + 1;

        auto hist = histogram_trials(cfg.trials, bins, cfg.policy, [&](std::uint64_t i) {
            TrialRng rng(cfg.seed, i);
            if (per_shipment && !rng.bernoulli(gate)) return std::size_t{0};
            const double x01 = rng.beta(pod.alpha, pod.beta);
            const int k = std::min(L, static_cast<int>(x01 * L) + 1);
            const int lr = L - k + 1;
            const int x = sample_truncated_geometric(
                rng, sev.stop_prob_by_pod[static_cast<std::size_t>(k - 1)], lr);
            const int derailed_tanks = prefix[static_cast<std::size_t>(k + x - 1)] -
                                       prefix[static_cast<std::size_t>(k - 1)];
            std::size_t releases = 0;
            for (int c = 0; c < derailed_tanks; ++c) {
                if (rng.bernoulli(yard_q)) ++releases;
            }
            return releases;
        });
        return empirical_pmf(hist, cfg.trials);
    }

    // Switching.
    if (option != TrainType::Manifest) {
        throw NotApplicable("yard switching simulation applies to manifest trains only");
    }
    const int tt = train.tank_count;
    const int buffer = scenario.yards.switching_approach == SwitchingApproach::SwitchedEnMasse
                           ? 19
                           : 0;
    const int tcc = tt + buffer;
    const int cap_limit = scenario.yard_severity.truncation_cap;
    const OracleGeSampler ge(scenario.yard_severity.for_yard(scenario.yards.yard_type));
    const std::size_t bins = static_cast<std::size_t>(std::min(tt, cap_limit)) + 1;

    auto hist = histogram_trials(cfg.trials, bins, cfg.policy, [&](std::uint64_t i) {
        TrialRng rng(cfg.seed, i);
        if (per_shipment && !rng.bernoulli(gate)) return std::size_t{0};
        const int k = std::min(tcc, static_cast<int>(rng.uniform01() * tcc) + 1);
        const int cap = std::min(cap_limit, tcc - k + 1);
        const int x = ge.sample(rng, cap);
        // Tank cars occupy positions buffer+1..tcc within the cut.
        const int lo = std::max(k, buffer + 1);
        const int hi = k + x - 1;
        const int derailed_tanks = std::max(0, hi - lo + 1);
        std::size_t releases = 0;
        for (int c = 0; c < derailed_tanks; ++c) {
            if (rng.bernoulli(yard_q)) ++releases;
        }
        return releases;
    });
    return empirical_pmf(hist, cfg.trials);
}

std::vector<int> sample_counts(const DiscretePmf& pmf, std::uint64_t trials, std::uint64_t seed) {
    std::vector<double> cdf(pmf.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        cdf[i] = acc;
    }
    if (!cdf.empty()) cdf.back() = std::max(cdf.back(), 1.0);
    std::vector<int> out(trials);
    for (std::uint64_t i = 0; i < trials; ++i) {
        TrialRng rng(seed, i);
        const double u = rng.uniform01();
        out[i] = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    }
    return out;
}

QuantityPmf simulate_quantity(std::span<const int> count_samples,
                              std::span<const QuantityRow> table, std::uint64_t seed) {
    if (count_samples.empty()) throw OutOfRange("simulate_quantity: no count samples");
    std::vector<double> cdf(table.size());
    std::vector<int> lattice_step(table.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        acc += table[i].probability;
        cdf[i] = acc;
        lattice_step[i] = table[i].lading_loss_gallons / QuantityPmf::kLatticeGallons;
    }
    cdf.back() = 1.0;

    constexpr int cap = QuantityPmf::kMaxTrackedIndex;
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(cap) + 1, 0);
    std::uint64_t overflow = 0;
    for (std::size_t i = 0; i < count_samples.size(); ++i) {
        TrialRng rng(seed, static_cast<std::uint64_t>(i) + 0x51ab5f1ull);
        long total = 0;
        for (int c = 0; c < count_samples[i]; ++c) {
            const double u = rng.uniform01();
            const std::size_t pick =
                static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            total += lattice_step[pick];
        }
        if (total > cap) {
            ++overflow;
        } else {
            ++hist[static_cast<std::size_t>(total)];
        }
    }
    const double n = static_cast<double>(count_samples.size());
    std::vector<double> masses(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i) masses[i] = static_cast<double>(hist[i]) / n;
    QuantityPmf out;
    out.lattice = DiscretePmf(SupportKind::GallonLattice750, std::move(masses));
    out.overflow = static_cast<double>(overflow) / n;
    return out;
}

double ComparisonReport::max_tv() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.tv);
    return m;
}

namespace {

DistComparison compare(std::string name, const DiscretePmf& analytic, const DiscretePmf& empirical,
                       std::uint64_t trials) {
    DistComparison c;
    c.name = std::move(name);
    c.tv = tv_distance(analytic, empirical);
    c.analytic_mean = analytic.mean();
    c.empirical_mean = empirical.mean();
    c.analytic_variance = analytic.variance();
    c.empirical_variance = empirical.variance();
    c.trials = trials;
    return c;
}

}  // namespace

ComparisonReport validate_scenario(const Scenario& scenario, const SimConfig& cfg) {
    ComparisonReport report;
    SimConfig ctx_cfg = cfg;
    ctx_cfg.conditioning = Conditioning::GivenDerailment;

    for (TrainType option : {TrainType::Unit, TrainType::Manifest}) {
        if (!scenario.has_train(option)) continue;
        const TrainConfig& train = scenario.train(option);
        const char* opt_name = to_string(option);

        // Mainline: Poisson-Binomial release counts on the first segment.
        {
            const RouteSegment& seg = scenario.route.front();
            const PodModel pod = scenario.pod_models.get(option == TrainType::Unit
                                                             ? PodContext::MainlineUnit
                                                             : PodContext::MainlineManifest);
            const SeverityFamily fam = linehaul_severity_family(
                scenario.z_model, SeverityContext::Mainline, train, seg, cfg.policy);
            const PositionProfile profile =
                make_position_profile(pod_pmf(pod, train.length_cars), fam, train.consist,
                                      scenario.release.cpr, cfg.policy);
            const DiscretePmf analytic = release_count_pmf_mainline(profile);
            const DiscretePmf empirical =
                simulate_release_counts(scenario, option, SimContext::MainlineSegment, ctx_cfg, 0);
            report.entries.push_back(compare(std::string("mainline/") + opt_name + "/" +
                                                 seg.segment_id,
                                             analytic, empirical, cfg.trials));
        }

        // A/D: block chain plus binomial thinning.
        {
            const PodModel pod = scenario.pod_models.get(
                option == TrainType::Unit ? PodContext::TerminalUnit : PodContext::YardManifest);
            const SeverityContext ctx =
                option == TrainType::Unit ? SeverityContext::Terminal : SeverityContext::Yard;
            const RouteSegment dummy{"ad", 1.0, 1.0};
            const SeverityFamily fam =
                linehaul_severity_family(scenario.z_model, ctx, train, dummy, cfg.policy);
            const DiscretePmf derail =
                ad_tank_derail_pmf(pod_pmf(pod, train.length_cars), fam, train.consist);
            const DiscretePmf analytic = thin_release_pmf(derail, scenario.release.cpr,
                                                          scenario.release.yard_speed_factor);
            const DiscretePmf empirical =
                simulate_release_counts(scenario, option, SimContext::AD, ctx_cfg);
            report.entries.push_back(
                compare(std::string("ad/") + opt_name, analytic, empirical, cfg.trials));
        }

        // Switching (manifest only).
        if (option == TrainType::Manifest) {
            const SwitchCut cut =
                SwitchCut::make(scenario.yards.switching_approach, train.tank_count);
            const DiscretePmf derail = switch_tank_derail_pmf(
                cut, scenario.yard_severity.for_yard(scenario.yards.yard_type),
                scenario.yard_severity.truncation_cap);
            const DiscretePmf analytic = thin_release_pmf(derail, scenario.release.cpr,
                                                          scenario.release.yard_speed_factor);
            const DiscretePmf empirical =
                simulate_release_counts(scenario, option, SimContext::Switching, ctx_cfg);
            report.entries.push_back(
                compare(std::string("switching/") + opt_name, analytic, empirical, cfg.trials));
        }

        // Quantity convolution fed by the A/D conditional count distribution.
        {
            const PodModel pod = scenario.pod_models.get(
                option == TrainType::Unit ? PodContext::TerminalUnit : PodContext::YardManifest);
            const SeverityContext ctx =
                option == TrainType::Unit ? SeverityContext::Terminal : SeverityContext::Yard;
            const RouteSegment dummy{"ad", 1.0, 1.0};
            const SeverityFamily fam =
                linehaul_severity_family(scenario.z_model, ctx, train, dummy, cfg.policy);
            const DiscretePmf counts = thin_release_pmf(
                ad_tank_derail_pmf(pod_pmf(pod, train.length_cars), fam, train.consist),
                scenario.release.cpr, scenario.release.yard_speed_factor);
            const QuantityPmf analytic =
                total_quantity_pmf(counts, scenario.release.quantity_table);
            const auto samples = sample_counts(counts, cfg.trials, cfg.seed);
            const QuantityPmf empirical =
                simulate_quantity(samples, scenario.release.quantity_table, cfg.seed);
            DistComparison c;
            c.name = std::string("quantity/") + opt_name;
            c.tv = tv_distance(analytic, empirical);
            c.analytic_mean = analytic.mean_gallons();
            c.empirical_mean = empirical.mean_gallons();
            c.analytic_variance = 0.0;
            c.empirical_variance = 0.0;
            c.trials = cfg.trials;
            report.entries.push_back(std::move(c));
        }
    }
    return report;
}

}  // namespace railrisk::mc
