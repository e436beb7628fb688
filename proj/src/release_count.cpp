#include "railrisk/release_count.hpp"

#include <algorithm>
#include <cmath>

namespace railrisk {

SeverityFamily linehaul_severity_family(const ZModel& z_model, SeverityContext ctx,
                                        const TrainConfig& train, const RouteSegment& segment,
                                        ExecPolicy policy) {
    const int L = train.length_cars;
    SeverityFamily fam;
    fam.by_pod.resize(static_cast<std::size_t>(L));
    const TrainSeverityInputs inputs = train.severity_inputs();
    parallel_for(L, policy, [&](std::int64_t idx) {
        const int k = static_cast<int>(idx) + 1;
        const int cars_behind = L - k + 1;
        const double z =
            z_value(z_model, ctx, inputs, segment.derailment_speed_mph, cars_behind);
        fam.by_pod[static_cast<std::size_t>(idx)] = linehaul_severity_pmf(z, cars_behind);
    });
    return fam;
}

std::vector<double> position_derail_probs(const DiscretePmf& pod, const SeverityFamily& severity,
                                          ExecPolicy policy) {
    const int L = severity.train_length();
    if (static_cast<int>(pod.max_index()) != L) {
        throw ValidationError("pod", "pod pmf support does not match severity family length");
    }
    // suffix[k-1][d] = P(x >= d | POD = k), d = 1..Lr+1
    std::vector<std::vector<double>> suffix(static_cast<std::size_t>(L));
    parallel_for(L, policy, [&](std::int64_t idx) {
        const int k = static_cast<int>(idx) + 1;
        const int lr = L - k + 1;
        const auto& pmf = severity.by_pod[static_cast<std::size_t>(idx)];
        auto& s = suffix[static_cast<std::size_t>(idx)];
        s.assign(static_cast<std::size_t>(lr) + 2, 0.0);
        for (int d = lr; d >= 1; --d) {
            s[static_cast<std::size_t>(d)] =
                s[static_cast<std::size_t>(d) + 1] + pmf[static_cast<std::size_t>(d)];
        }
    });

    std::vector<double> pd(static_cast<std::size_t>(L), 0.0);
    parallel_for(L, policy, [&](std::int64_t idx) {
        const int j = static_cast<int>(idx) + 1;
        double acc = 0.0;
        for (int k = 1; k <= j; ++k) {
            acc += pod[static_cast<std::size_t>(k)] * suffix[static_cast<std::size_t>(k - 1)]
                                                            [static_cast<std::size_t>(j - k + 1)];
        }
        pd[static_cast<std::size_t>(idx)] = acc;
    });
    return pd;
}

PositionProfile make_position_profile(const DiscretePmf& pod, const SeverityFamily& severity,
                                      const std::vector<bool>& consist, double cpr,
                                      ExecPolicy policy) {
    PositionProfile p;
    p.derail_prob = position_derail_probs(pod, severity, policy);
    if (consist.size() != p.derail_prob.size()) {
        throw ValidationError("consist", "consist length does not match train length");
    }
    p.release_prob.resize(p.derail_prob.size());
    for (std::size_t j = 0; j < consist.size(); ++j) {
        p.release_prob[j] = consist[j] ? p.derail_prob[j] * cpr : 0.0;
    }
    return p;
}

DiscretePmf poisson_binomial_pmf(std::span<const double> probs) {
    for (double p : probs) {
        if (p < 0.0 || p > 1.0) {
            throw OutOfRange("poisson_binomial_pmf: Bernoulli parameter outside [0, 1]");
        }
    }
    std::vector<double> pmf{1.0};
    for (double p : probs) {
        if (p == 0.0) continue;
        pmf.push_back(0.0);
        for (std::size_t i = pmf.size() - 1; i > 0; --i) {
            pmf[i] = pmf[i] * (1.0 - p) + pmf[i - 1] * p;
        }
        pmf[0] *= 1.0 - p;
    }
    return DiscretePmf(SupportKind::Count, std::move(pmf));
}

DiscretePmf release_count_pmf_mainline(const PositionProfile& profile) {
    return poisson_binomial_pmf(profile.release_prob);
}

DiscretePmf ad_tank_derail_pmf(const DiscretePmf& pod, const SeverityFamily& severity,
                               const std::vector<bool>& consist) {
    const int L = severity.train_length();
    if (static_cast<int>(consist.size()) != L) {
        throw ValidationError("consist", "consist length does not match severity family length");
    }
    std::vector<int> prefix(static_cast<std::size_t>(L) + 1, 0);
    for (int j = 1; j <= L; ++j) {
        prefix[static_cast<std::size_t>(j)] =
            prefix[static_cast<std::size_t>(j - 1)] + (consist[static_cast<std::size_t>(j - 1)] ? 1 : 0);
    }
    const int tank_total = prefix[static_cast<std::size_t>(L)];

    std::vector<double> masses(static_cast<std::size_t>(tank_total) + 1, 0.0);
    for (int k = 1; k <= L; ++k) {
        const double pk = pod[static_cast<std::size_t>(k)];
        const auto& sev = severity.by_pod[static_cast<std::size_t>(k - 1)];
        const int lr = L - k + 1;
        for (int x = 1; x <= lr; ++x) {
            // Derailed block spans exactly x cars: positions k..k+x-1.
            const int tanks = prefix[static_cast<std::size_t>(k + x - 1)] -
                              prefix[static_cast<std::size_t>(k - 1)];
            masses[static_cast<std::size_t>(tanks)] += pk * sev[static_cast<std::size_t>(x)];
        }
    }
    return DiscretePmf(SupportKind::Count, std::move(masses));
}

DiscretePmf thin_release_pmf(const DiscretePmf& derail_pmf, double cpr, double factor) {
    if (cpr < 0.0 || cpr > 1.0 || factor < 0.0 || factor > 1.0) {
        throw OutOfRange("thin_release_pmf: cpr and factor must be in [0, 1]");
    }
    const double q = factor * cpr;
    const std::size_t n = derail_pmf.size();
    std::vector<double> out(n, 0.0);
    std::vector<double> row;
    for (std::size_t y = 0; y < n; ++y) {
        const double w = derail_pmf[y];
        if (w == 0.0) continue;
        // Binomial(y, q) row via stable multiplicative recurrence, built from
        // the high-probability end.
        row.assign(y + 1, 0.0);
        if (q == 0.0) {
            row[0] = 1.0;
        } else if (q == 1.0) {
            row[y] = 1.0;
        } else if (q <= 0.5) {
            row[0] = std::pow(1.0 - q, static_cast<double>(y));
            const double ratio = q / (1.0 - q);
            for (std::size_t x = 0; x + 1 <= y; ++x) {
                row[x + 1] = row[x] * ratio * static_cast<double>(y - x) /
                             static_cast<double>(x + 1);
            }
        } else {
            row[y] = std::pow(q, static_cast<double>(y));
            const double ratio = (1.0 - q) / q;
            for (std::size_t x = y; x >= 1; --x) {
                row[x - 1] = row[x] * ratio * static_cast<double>(x) /
                             static_cast<double>(y - x + 1);
            }
        }
        for (std::size_t x = 0; x <= y; ++x) out[x] += w * row[x];
    }
    return DiscretePmf(derail_pmf.kind(), std::move(out));
}

SwitchCut SwitchCut::make(SwitchingApproach approach, int tank_count) {
    if (tank_count < 1 || tank_count > 20) {
        throw ValidationError("switch_cut.tank_count",
                              "switching analyzes tank blocks of 1..20 cars, got " +
                                  std::to_string(tank_count));
    }
    SwitchCut cut;
    cut.approach = approach;
    cut.tank_count = tank_count;
    cut.buffer_noncars = approach == SwitchingApproach::SwitchedEnMasse ? 19 : 0;
    cut.total_considered = tank_count + cut.buffer_noncars;
    return cut;
}

DiscretePmf fcd_pmf(const SwitchCut& cut) {
    std::vector<double> masses(static_cast<std::size_t>(cut.total_considered) + 1, 0.0);
    const double u = 1.0 / cut.total_considered;
    for (int k = 1; k <= cut.total_considered; ++k) masses[static_cast<std::size_t>(k)] = u;
    return DiscretePmf(SupportKind::Count, std::move(masses), true);
}

namespace detail {

DiscretePmf switch_tank_derail_pmf_with_buffer(int tank_count, int buffer,
                                               const SwitchSeverityFn& severity) {
    const int tcc = tank_count + buffer;
    std::vector<DiscretePmf> sev(static_cast<std::size_t>(tcc));
    for (int k = 1; k <= tcc; ++k) sev[static_cast<std::size_t>(k - 1)] = severity(tcc, k);

    std::vector<double> masses(static_cast<std::size_t>(tank_count) + 1, 0.0);
    for (int x = 1; x <= tank_count; ++x) {
        double acc = 0.0;
        // First car of derailment among the buffer cars: the rest of the
        // buffer plus exactly x tank cars derail.
        for (int k = x; k <= buffer; ++k) {
            acc += sev[static_cast<std::size_t>(k - 1)]
                      [static_cast<std::size_t>(buffer + 1 - k + x)];
        }
        // First car of derailment inside the tank block.
        for (int k = buffer + 1; k <= tcc - x + 1; ++k) {
            acc += sev[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(x)];
        }
        masses[static_cast<std::size_t>(x)] = acc / tcc;
    }
    double tail = 0.0;
    for (int x = 1; x <= tank_count; ++x) tail += masses[static_cast<std::size_t>(x)];
    masses[0] = std::max(0.0, 1.0 - tail);
    return DiscretePmf(SupportKind::Count, std::move(masses));
}

}  // namespace detail

DiscretePmf switch_tank_derail_pmf(const SwitchCut& cut, const SwitchSeverityFn& severity) {
    return detail::switch_tank_derail_pmf_with_buffer(cut.tank_count, cut.buffer_noncars, severity);
}

DiscretePmf switch_tank_derail_pmf(const SwitchCut& cut, const GeParams& params,
                                   int truncation_cap) {
    return switch_tank_derail_pmf(cut, [&](int cut_length, int fcd) {
        return yard_switch_severity_pmf(params, cut_length, fcd, truncation_cap);
    });
}

DiscretePmf per_shipment_release_pmf(const DiscretePmf& conditional, double derailment_prob) {
    if (derailment_prob < 0.0 || derailment_prob > 1.0) {
        throw OutOfRange("per_shipment_release_pmf: derailment_prob outside [0, 1]");
    }
    std::vector<double> out(std::max<std::size_t>(conditional.size(), 1), 0.0);
    double tail = 0.0;
    for (std::size_t x = 1; x < out.size(); ++x) {
        out[x] = conditional[x] * derailment_prob;
        tail += out[x];
    }
    out[0] = 1.0 - tail;
    return DiscretePmf(conditional.kind(), std::move(out));
}

DiscretePmf per_shipment_release_pmf(const DiscretePmf& ad_conditional, double ad_prob,
                                     const DiscretePmf& switch_conditional, double switch_prob) {
    if (ad_prob < 0.0 || ad_prob > 1.0 || switch_prob < 0.0 || switch_prob > 1.0) {
        throw OutOfRange("per_shipment_release_pmf: branch probabilities outside [0, 1]");
    }
    const std::size_t n = std::max({ad_conditional.size(), switch_conditional.size(),
                                    static_cast<std::size_t>(1)});
    std::vector<double> out(n, 0.0);
    double tail = 0.0;
    for (std::size_t x = 1; x < n; ++x) {
        out[x] = ad_conditional[x] * ad_prob + switch_conditional[x] * switch_prob;
        tail += out[x];
    }
    out[0] = 1.0 - tail;
    return DiscretePmf(ad_conditional.kind(), std::move(out));
}

}  // namespace railrisk
