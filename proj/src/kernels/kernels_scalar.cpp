#include "qnet/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace qnet::kernels {
namespace {

double pump_amplitude(std::span<const PumpSegment> segments, double pump_thz) {
    double amplitude = 0.0;
    for (const auto& seg : segments) {
        const double d = std::max({seg.lo_thz - pump_thz, pump_thz - seg.hi_thz, 0.0});
        amplitude += std::exp(-d * d / (2.0 * seg.edge_sigma_thz * seg.edge_sigma_thz));
    }
    return amplitude;
}

void jsi_row_scalar(const JsiRowParams& p, double signal_thz, std::span<const double> idler_thz,
                    std::span<double> out) {
    const double inv_two_var = 1.0 / (2.0 * p.pm_sigma_thz * p.pm_sigma_thz);
    for (std::size_t j = 0; j < idler_thz.size(); ++j) {
        const double a = pump_amplitude(p.segments, signal_thz + idler_thz[j]);
        const double x = signal_thz - idler_thz[j] - p.pm_center_thz;
        out[j] = a * a * std::exp(-x * x * inv_two_var);
    }
}

double sum_scalar(std::span<const double> values) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

void scale_scalar(std::span<double> values, double factor) {
    for (double& v : values) v *= factor;
}

void exp_scalar(std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] < -708.0 ? 0.0 : std::exp(x[i]);
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", &jsi_row_scalar, &sum_scalar, &scale_scalar, &exp_scalar};
    return table;
}

}  // namespace qnet::kernels
