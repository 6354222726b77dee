#include "qnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qnet/error.hpp"

namespace qnet {

void QkdParams::validate() const {
    require(q > 0.0 && q <= 1.0, "must be in (0, 1]", "qkd.q");
    require(f_e >= 1.0, "must be >= 1", "qkd.f_e");
}

double analytic_car(double mu_c, double alpha_s, double alpha_i, double c_s, double c_i) {
    require(c_s > 0.0 && c_i > 0.0, "singles rates must be > 0");
    require(mu_c >= 0.0, "pair number must be >= 0");
    return mu_c * alpha_s * alpha_i / (c_s * c_i) + 1.0;
}

double mux_car(double car_single, int n) {
    require(car_single >= 1.0, "single-channel CAR must be >= 1");
    require(n >= 1, "channel count must be >= 1");
    return n * (car_single - 1.0) + 1.0;
}

Visibility visibility(double car) {
    require(car > 1.0, "visibility needs CAR > 1");
    if (std::isinf(car)) return {1.0, false};
    const double v = (car - 2.0) / (car - 1.0);
    if (v < 0.0) return {0.0, true};
    return {std::min(v, 1.0), false};
}

double qber(double v) {
    require(v >= 0.0 && v <= 1.0, "visibility must be in [0, 1]");
    return (1.0 - v) / 2.0;
}

double binary_entropy(double x) {
    require(x >= 0.0 && x <= 1.0, "argument must be in [0, 1]");
    auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
    return term(x) + term(1.0 - x);
}

KeyRate skr(const QkdParams& params, double gain, double qber) {
    params.validate();
    require(gain >= 0.0, "gain must be >= 0");
    require(qber >= 0.0 && qber <= 0.5, "QBER must be in [0, 0.5]");
    const double raw = params.q * gain * (1.0 - (1.0 + params.f_e) * binary_entropy(qber));
    return {raw, std::max(raw, 0.0)};
}

MetricsRecord metrics_from_car(const CarResult& car, double n_pulses, double rep_rate_hz, const QkdParams& params) {
    MetricsRecord m;
    m.car = car.car;
    m.car_error = car.car_error;
    m.car_flag = car.flag;
    m.gain = n_pulses > 0.0 ? static_cast<double>(car.matched) / n_pulses : 0.0;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (car.flag == CarFlag::Undefined || !(car.car > 1.0)) {
        // No usable interference estimate: CAR <= 1 or nothing counted.
        m.visibility = car.flag == CarFlag::Undefined ? nan : 0.0;
        m.visibility_clamped = car.flag != CarFlag::Undefined;
        m.qber = car.flag == CarFlag::Undefined ? nan : 0.5;
    } else {
        const Visibility v = visibility(car.car);
        m.visibility = v.value;
        m.visibility_clamped = v.clamped;
        m.qber = qber(v.value);
    }
    if (std::isfinite(m.qber)) {
        const KeyRate k = skr(params, m.gain, m.qber);
        m.skr_per_pulse = k.clamped;
        m.skr_raw_per_pulse = k.raw;
    }
    m.skr_per_second = m.skr_per_pulse * rep_rate_hz;
    return m;
}

}  // namespace qnet
