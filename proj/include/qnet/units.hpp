#pragma once

#include <cmath>
#include <cstdint>

namespace qnet {

// Time is carried as integer picoseconds throughout the event pipeline.
using Picoseconds = std::int64_t;

namespace units {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPsPerSecond = 1e12;
inline constexpr double kPsPerNs = 1e3;

// Optical frequency in THz for a vacuum wavelength in nm, and back.
inline double nm_to_thz(double wavelength_nm) { return kSpeedOfLight / wavelength_nm * 1e-3; }
inline double thz_to_nm(double frequency_thz) { return kSpeedOfLight / frequency_thz * 1e-3; }

// Wavelength of the partner photon fixed by energy conservation with the pump.
inline double partner_wavelength_nm(double pump_nm, double photon_nm) {
    return 1.0 / (1.0 / pump_nm - 1.0 / photon_nm);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace units
}  // namespace qnet
