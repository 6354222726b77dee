#pragma once

#include "qnet/coincidence.hpp"

namespace qnet {

struct QkdParams {
    double q = 0.5;     // BBM92 basis reconciliation
    double f_e = 1.11;  // error-correction efficiency

    void validate() const;
};

// CAR from the correlated pair number mu_c, arm transmittances and
// singles. mu_c and both singles must be expressed per the same time slot
// (per pulse for a pulsed source); with rates per second the ratio is off by
// the repetition rate.
double analytic_car(double mu_c, double alpha_s, double alpha_i, double c_s, double c_i);

// N multiplexed channels at the same total flux: n (car_single - 1) + 1.
double mux_car(double car_single, int n);

struct Visibility {
    double value = 0.0;
    bool clamped = false;  // car < 2 produced a negative visibility, reported as 0
};

// (car - 2) / (car - 1), clamped to [0, 1].
Visibility visibility(double car);

double qber(double v);

// -x log2 x - (1 - x) log2 (1 - x), with 0 log 0 = 0.
double binary_entropy(double x);

struct KeyRate {
    double raw = 0.0;
    double clamped = 0.0;
};

// Asymptotic BBM92 key per pulse: q Q [1 - (1 + f_e) H2(QBER)].
KeyRate skr(const QkdParams& params, double gain, double qber);

struct MetricsRecord {
    double car = 0.0;
    double car_error = 0.0;
    CarFlag car_flag = CarFlag::Undefined;
    double visibility = 0.0;
    bool visibility_clamped = false;
    double qber = 0.0;
    double gain = 0.0;  // matched coincidences per pump pulse
    double skr_per_pulse = 0.0;
    double skr_raw_per_pulse = 0.0;
    double skr_per_second = 0.0;
};

// Full chain CAR -> V -> QBER -> SKR for one link. Infinite CAR yields V = 1;
// undefined CAR yields NaN quality figures and zero key.
MetricsRecord metrics_from_car(const CarResult& car, double n_pulses, double rep_rate_hz,
                               const QkdParams& params = {});

}  // namespace qnet
