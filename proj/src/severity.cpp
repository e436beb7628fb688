#include "railrisk/severity.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

namespace railrisk {

PodModel PodModel::for_context(PodContext ctx) {
    switch (ctx) {
        case PodContext::MainlineUnit: return {0.7549, 0.9582};
        case PodContext::MainlineManifest: return {0.7842, 1.1002};
        case PodContext::YardManifest: return {0.5350, 0.9121};
        case PodContext::TerminalUnit: return {0.7729, 0.9034};
    }
    throw OutOfRange("unknown POD context");
}

double beta_cdf(double alpha, double beta, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(alpha, beta, x);
}

DiscretePmf pod_pmf(const PodModel& model, int train_length) {
    if (train_length < 1) throw OutOfRange("pod_pmf: train_length must be >= 1");
    if (model.alpha <= 0.0 || model.beta <= 0.0) {
        throw ValidationError("pod_model", "Beta parameters must be strictly positive");
    }
    std::vector<double> masses(static_cast<std::size_t>(train_length) + 1, 0.0);
    double prev = 0.0;
    for (int k = 1; k <= train_length; ++k) {
        const double cur = k == train_length
                               ? 1.0
                               : beta_cdf(model.alpha, model.beta,
                                          static_cast<double>(k) / train_length);
        masses[static_cast<std::size_t>(k)] = cur - prev;
        prev = cur;
    }
    return DiscretePmf(SupportKind::Count, std::move(masses), /*omits_zero_class=*/true);
}

double z_value(const ZModel& m, SeverityContext ctx, const TrainSeverityInputs& train,
               double derailment_speed_mph, int cars_behind_pod) {
    switch (ctx) {
        case SeverityContext::Mainline:
            return m.mainline.intercept + m.mainline.derail_speed * derailment_speed_mph +
                   m.mainline.cars_behind * cars_behind_pod +
                   m.mainline.tons_per_car * train.avg_gross_tons_per_car +
                   m.mainline.empty_unit * (train.empty_unit ? 1.0 : 0.0) +
                   m.mainline.loaded_unit * (train.loaded_unit ? 1.0 : 0.0);
        case SeverityContext::Yard:
            return m.yard.intercept + m.yard.train_length * train.length_cars;
        case SeverityContext::Terminal:
            return m.terminal.intercept + m.terminal.train_length * train.length_cars;
    }
    throw OutOfRange("unknown severity context");
}

DiscretePmf linehaul_severity_pmf(double z, int cars_behind) {
    if (cars_behind < 1) throw OutOfRange("linehaul_severity_pmf: cars_behind must be >= 1");
    const double ez = std::exp(z);
    const double p = ez / (1.0 + ez);  // stop probability
    const double q = 1.0 - p;

    std::vector<double> masses(static_cast<std::size_t>(cars_behind) + 1, 0.0);
    if (cars_behind == 1 || q == 0.0) {
        // Truncation forces the only outcome.
        masses[1] = 1.0;
        return DiscretePmf(SupportKind::Count, std::move(masses), true);
    }
    // Running power keeps numerator and denominator errors correlated, so
    // the masses sum to 1 within a few ulp.
    double qpow = 1.0;  // q^(x-1)
    for (int x = 1; x <= cars_behind; ++x) {
        masses[static_cast<std::size_t>(x)] = p * qpow;
        qpow *= q;
    }
    const double denom = 1.0 - qpow;  // 1 - q^Lr
    for (int x = 1; x <= cars_behind; ++x) masses[static_cast<std::size_t>(x)] /= denom;
    return DiscretePmf(SupportKind::Count, std::move(masses), true);
}

const GeParams& YardSeverityModel::for_yard(YardType t) const {
    switch (t) {
        case YardType::All: return all;
        case YardType::Flat: return flat;
        case YardType::Hump: return hump;
    }
    throw OutOfRange("unknown yard type");
}

DiscretePmf discretized_gen_exponential_pmf(const GeParams& params) {
    if (params.shape <= 0.0 || params.rate <= 0.0) {
        throw ValidationError("severity.yard", "generalized-exponential parameters must be > 0");
    }
    std::vector<double> vals{0.0};
    double sum = 0.0;
    for (int x = 1; x <= 1000000; ++x) {
        const double e = std::exp(-params.rate * x);
        const double v = params.shape * params.rate * e * std::pow(1.0 - e, params.shape - 1.0);
        vals.push_back(v);
        sum += v;
        // Remaining tail is bounded by a geometric series with ratio e^-rate.
        const double tail_bound = params.shape * params.rate * e / (std::exp(params.rate) - 1.0);
        if (x >= 21 && tail_bound < 1e-16 * sum) break;
    }
    for (double& v : vals) v /= sum;
    return DiscretePmf(SupportKind::Count, std::move(vals), true);
}

DiscretePmf yard_switch_severity_pmf(const GeParams& params, int cut_length, int fcd_position,
                                     int truncation_cap) {
    if (fcd_position < 1 || fcd_position > cut_length) {
        throw OutOfRange("yard_switch_severity_pmf: need 1 <= fcd_position <= cut_length");
    }
    const DiscretePmf f = discretized_gen_exponential_pmf(params);
    const int cap = std::min(truncation_cap, cut_length - fcd_position + 1);
    std::vector<double> masses(static_cast<std::size_t>(cap) + 1, 0.0);
    double below = 0.0;
    for (int x = 1; x < cap; ++x) {
        masses[static_cast<std::size_t>(x)] = f[static_cast<std::size_t>(x)];
        below += f[static_cast<std::size_t>(x)];
    }
    masses[static_cast<std::size_t>(cap)] = 1.0 - below;  // lumped tail
    return DiscretePmf(SupportKind::Count, std::move(masses), true);
}

DiscretePmf yard_switch_severity_pmf(const YardSeverityModel& model, YardType yard, int cut_length,
                                     int fcd_position) {
    return yard_switch_severity_pmf(model.for_yard(yard), cut_length, fcd_position,
                                    model.truncation_cap);
}

}  // namespace railrisk
