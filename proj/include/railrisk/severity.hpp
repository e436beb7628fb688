#pragma once
#include "railrisk/pmf.hpp"

namespace railrisk {

// The four point-of-derailment contexts with fitted Beta parameters.
enum class PodContext { MainlineUnit, MainlineManifest, YardManifest, TerminalUnit };

struct PodModel {
    double alpha = 0.0;
    double beta = 0.0;

    static PodModel for_context(PodContext ctx);
};

// Probability that the derailment starts at position k in a train of
// `train_length` cars: consecutive differences of the Beta CDF evaluated on
// the normalized position grid. Masses telescope to exactly F(1) - F(0) = 1.
DiscretePmf pod_pmf(const PodModel& model, int train_length);

// Regularized incomplete beta I_x(a, b); exposed so callers can evaluate the
// underlying CDF directly.
double beta_cdf(double alpha, double beta, double x);

enum class SeverityContext { Mainline, Yard, Terminal };

// Linear predictor coefficients of the severity logit per derailment
// location. Defaults are the fitted values; all overridable via scenario
// configuration.
struct ZModel {
    struct {
        double intercept = -0.952;
        double derail_speed = -0.0306;
        double cars_behind = -0.0018;
        double tons_per_car = -0.00239;
        double empty_unit = 0.119;
        double loaded_unit = -0.339;
    } mainline;
    struct {
        double intercept = -1.595;
        double train_length = -0.0029;
    } yard;
    struct {
        double intercept = -1.574;
        double train_length = -0.0016;
    } terminal;
};

// Train attributes the severity logit depends on. Manifest trains carry
// empty_unit = loaded_unit = false (the fit's reference class).
struct TrainSeverityInputs {
    int length_cars = 0;
    double avg_gross_tons_per_car = 0.0;  // GT
    bool empty_unit = false;              // EUT
    bool loaded_unit = false;             // LUT
};

double z_value(const ZModel& model, SeverityContext ctx, const TrainSeverityInputs& train,
               double derailment_speed_mph, int cars_behind_pod);

// Truncated geometric severity: P(x) = p (1-p)^(x-1) / (1 - (1-p)^Lr) over
// x in {1..cars_behind}, with stop probability p = e^z / (1 + e^z).
DiscretePmf linehaul_severity_pmf(double z, int cars_behind);

enum class YardType { All, Flat, Hump };

// Discretized generalized exponential family for yard-switching severity:
// f(x) proportional to shape * rate * e^(-rate x) * (1 - e^(-rate x))^(shape-1)
// at integer x >= 1, renormalized.
struct GeParams {
    double shape = 0.0;
    double rate = 0.0;
};

struct YardSeverityModel {
    // Defaults keep P(X > 20) below 1e-3, consistent with the observation
    // that switching incidents rarely derail more than 20 cars.
    GeParams all{1.10, 0.40};
    GeParams flat{1.05, 0.42};
    GeParams hump{1.15, 0.38};
    int truncation_cap = 20;

    const GeParams& for_yard(YardType t) const;
};

// Normalized pmf of the untruncated discretized family over x >= 1; entry 0
// is zero. Extends until the remaining tail is negligible.
DiscretePmf discretized_gen_exponential_pmf(const GeParams& params);

// Severity of a switching incident whose first derailed car sits at position
// `fcd_position` in a cut of `cut_length` cars: f(x) below the cap, with all
// tail mass lumped at cap = min(truncation_cap, cut_length - fcd_position + 1).
DiscretePmf yard_switch_severity_pmf(const GeParams& params, int cut_length, int fcd_position,
                                     int truncation_cap = 20);
DiscretePmf yard_switch_severity_pmf(const YardSeverityModel& model, YardType yard, int cut_length,
                                     int fcd_position);

}  // namespace railrisk
