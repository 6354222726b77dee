#include "qnet/transport.hpp"

#include <cmath>
#include <random>

#include "qnet/error.hpp"
#include "qnet/random.hpp"

namespace qnet {

void ChannelSpec::validate() const {
    require(loss_db >= 0.0, "must be >= 0", "loss_db");
    require(extra_jitter_ps >= 0.0, "must be >= 0", "extra_jitter_ps");
    require(ftm_delay_ps >= 0.0, "must be >= 0", "ftm_delay_ps");
}

void FtmSpec::validate() const {
    require(n_gratings >= 1, "must be >= 1", "ftm.n_gratings");
    require(segment_length_m > 0.0, "must be > 0", "ftm.segment_length_m");
    require(group_index > 0.0, "must be > 0", "ftm.group_index");
}

double db_to_transmittance(double loss_db) {
    require(loss_db >= 0.0, "loss must be >= 0 dB");
    return std::pow(10.0, -loss_db / 10.0);
}

double ftm_delay(int channel_index, const FtmSpec& ftm) {
    ftm.validate();
    require(channel_index >= 0 && channel_index < ftm.n_gratings, "grating index out of range");
    const double round_trip_s = 2.0 * ftm.segment_length_m * ftm.group_index / units::kSpeedOfLight;
    return channel_index * round_trip_s * units::kPsPerSecond;
}

std::vector<Photon> propagate(std::span<const Photon> photons, const ChannelSpec& ch, std::uint64_t seed) {
    ch.validate();
    const double survive = db_to_transmittance(ch.loss_db);
    Rng rng(seed);
    std::bernoulli_distribution keep(survive);
    std::normal_distribution<double> jitter(0.0, ch.extra_jitter_ps > 0.0 ? ch.extra_jitter_ps : 1.0);

    std::vector<Photon> out;
    out.reserve(static_cast<std::size_t>(photons.size() * survive * 1.1) + 16);
    for (const Photon& p : photons) {
        if (survive < 1.0 && !keep(rng)) continue;
        double t = static_cast<double>(p.time_ps) + ch.propagation_delay_ps + p.channel * ch.ftm_delay_ps;
        if (ch.extra_jitter_ps > 0.0) t += jitter(rng);
        out.push_back({static_cast<Picoseconds>(std::llround(t)), p.channel, p.wavelength_nm});
    }
    return out;
}

}  // namespace qnet
