#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

// Data-parallel inner loops of the joint-spectrum calculator. Every kernel has
// a scalar reference implementation; wider variants are selected at runtime and
// must agree with the reference (see tests/test_kernels.cpp).
namespace qnet::kernels {

// One flat-top pump segment in optical frequency (THz). Outside [lo, hi] the
// amplitude falls off as exp(-d^2 / (2 edge_sigma^2)), d = distance to the edge.
struct PumpSegment {
    double lo_thz = 0.0;
    double hi_thz = 0.0;
    double edge_sigma_thz = 0.0;
};

// Parameters shared by every row of a JSI evaluation.
//   intensity = |sum_k segment_k(fs + fi)|^2 * exp(-(fs - fi - pm_center)^2 / (2 pm_sigma^2))
struct JsiRowParams {
    std::span<const PumpSegment> segments;
    double pm_center_thz = 0.0;
    double pm_sigma_thz = 1.0;
};

struct KernelTable {
    std::string_view name;
    // out[j] = intensity(signal_thz, idler_thz[j])
    void (*jsi_row)(const JsiRowParams& params, double signal_thz,
                    std::span<const double> idler_thz, std::span<double> out);
    double (*sum)(std::span<const double> values);
    void (*scale)(std::span<double> values, double factor);
    // out[i] = exp(x[i]); inputs below -708 flush to 0.
    void (*exp)(std::span<const double> x, std::span<double> out);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table();

// Best table for this CPU. QNET_SIMD=scalar in the environment forces the
// reference path.
const KernelTable& active();

// All tables usable on this machine, reference first.
std::vector<const KernelTable*> available();

}  // namespace qnet::kernels
