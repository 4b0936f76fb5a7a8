#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uwb/grid.hpp"

namespace uwb {

// IEEE 802.15.3a Saleh-Valenzuela parameter set.
struct ChannelProfile {
    std::string name;            // "CM1".."CM4"
    double cluster_rate;         // Lambda, 1/ns
    double ray_rate;             // lambda, 1/ns
    double cluster_decay;        // Gamma, ns
    double ray_decay;            // gamma, ns
    double sigma1_db = 3.3941;   // cluster lognormal std
    double sigma2_db = 3.3941;   // ray lognormal std
    double shadowing_db = 3.0;   // total-energy lognormal std

    void validate() const;

    // Built-in CM1..CM4 values; same numbers as data/channel_profiles.cfg.
    static ChannelProfile standard(const std::string& cm_id);
};

struct ChannelTap {
    double delay;      // seconds, nonnegative, sorted ascending
    double amplitude;  // real, signed
};

struct ChannelRealization {
    std::vector<ChannelTap> taps;
    double sample_rate;  // Hz; delays are multiples of 1/sample_rate

    double total_energy() const;
    double rms_delay_spread() const;
    double mean_excess_delay() const;
};

// Deterministic S-V realization: Poisson clusters/rays, double-exponential
// decay, lognormal fading, +-1 polarity, unit multipath energy before
// lognormal shadowing. Taps are quantized to the 1/sample_rate grid.
ChannelRealization generate_channel(const ChannelProfile& profile, std::uint64_t seed,
                                    double sample_rate = 28e9);

// |sum_k a_k exp(-j 2 pi f tau_k)|^2 per grid point, peak-normalized to 1.
std::vector<double> channel_psd(const ChannelRealization& channel, const FrequencyGrid& grid);

}  // namespace uwb
