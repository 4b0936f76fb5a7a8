#include "uwb/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace uwb {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Distribution sampling is done by hand on top of the mt19937_64 word stream
// so realizations are bit-identical across standard libraries.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    double normal(double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return sigma * spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return sigma * radius * std::cos(angle);
    }

    double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// One sub-stream per stochastic component of the model.
enum StreamTag : std::uint64_t {
    kClusterArrivals = 1,
    kRayArrivals = 2,
    kFading = 3,
    kPolarity = 4,
    kShadowing = 5,
};

Stream make_stream(std::uint64_t seed, StreamTag tag) {
    return Stream(splitmix64(seed ^ (0x5bf0'3635'dee3'9d21ULL * tag)));
}

}  // namespace

void ChannelProfile::validate() const {
    if (cluster_rate <= 0.0 || ray_rate <= 0.0 || cluster_decay <= 0.0 || ray_decay <= 0.0)
        throw std::invalid_argument("ChannelProfile: rates and decay constants must be positive");
}

ChannelProfile ChannelProfile::standard(const std::string& cm_id) {
    static const std::map<std::string, ChannelProfile> table = {
        {"CM1", {"CM1", 0.0233, 2.5, 7.1, 4.3}},
        {"CM2", {"CM2", 0.4, 0.5, 5.5, 6.7}},
        {"CM3", {"CM3", 0.0667, 2.1, 14.0, 7.9}},
        {"CM4", {"CM4", 0.0667, 2.1, 24.0, 12.0}},
    };
    auto it = table.find(cm_id);
    if (it == table.end()) throw std::invalid_argument("unknown channel model: " + cm_id);
    return it->second;
}

double ChannelRealization::total_energy() const {
    double e = 0.0;
    for (const auto& t : taps) e += t.amplitude * t.amplitude;
    return e;
}

double ChannelRealization::mean_excess_delay() const {
    double e = 0.0, m = 0.0;
    for (const auto& t : taps) {
        const double p = t.amplitude * t.amplitude;
        e += p;
        m += p * t.delay;
    }
    return m / e;
}

double ChannelRealization::rms_delay_spread() const {
    double e = 0.0, m1 = 0.0, m2 = 0.0;
    for (const auto& t : taps) {
        const double p = t.amplitude * t.amplitude;
        e += p;
        m1 += p * t.delay;
        m2 += p * t.delay * t.delay;
    }
    m1 /= e;
    m2 /= e;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

ChannelRealization generate_channel(const ChannelProfile& profile, std::uint64_t seed,
                                    double sample_rate) {
    profile.validate();
    if (sample_rate <= 0.0) throw std::invalid_argument("generate_channel: sample rate must be positive");

    Stream cluster_rng = make_stream(seed, kClusterArrivals);
    Stream ray_rng = make_stream(seed, kRayArrivals);
    Stream fading_rng = make_stream(seed, kFading);
    Stream polarity_rng = make_stream(seed, kPolarity);
    Stream shadow_rng = make_stream(seed, kShadowing);

    const double sigma_total =
        std::sqrt(profile.sigma1_db * profile.sigma1_db + profile.sigma2_db * profile.sigma2_db);
    const double ln10_20 = std::numbers::ln10 / 20.0;

    // Cluster arrivals on [0, 10*Gamma]; ray window 10*gamma within each cluster.
    const double cluster_window = 10.0 * profile.cluster_decay;
    const double ray_window = 10.0 * profile.ray_decay;

    struct Ray {
        double t_ns;
        double amplitude;
    };
    std::vector<Ray> rays;

    double cluster_time = 0.0;  // first cluster at t = 0
    while (cluster_time <= cluster_window) {
        const double cluster_fade_db = fading_rng.normal(profile.sigma1_db);
        double ray_time = 0.0;  // first ray coincides with the cluster arrival
        while (ray_time <= ray_window) {
            // E[beta^2] = exp(-T/Gamma - tau/gamma) with 20 log10(beta) normal;
            // the sigma term keeps the lognormal mean power on the decay curve.
            const double mean_db = -10.0 * std::log10(std::numbers::e) *
                                       (cluster_time / profile.cluster_decay +
                                        ray_time / profile.ray_decay) -
                                   sigma_total * sigma_total * ln10_20;
            const double fade_db = cluster_fade_db + fading_rng.normal(profile.sigma2_db);
            const double amplitude =
                std::pow(10.0, (mean_db + fade_db) / 20.0) * polarity_rng.sign();
            rays.push_back({cluster_time + ray_time, amplitude});
            ray_time += ray_rng.exponential(1.0 / profile.ray_rate);
        }
        cluster_time += cluster_rng.exponential(1.0 / profile.cluster_rate);
    }

    // Drop rays more than 40 dB below the strongest.
    double peak = 0.0;
    for (const auto& r : rays) peak = std::max(peak, std::abs(r.amplitude));
    const double floor_amp = peak * 1e-2;  // -40 dB in power
    std::erase_if(rays, [&](const Ray& r) { return std::abs(r.amplitude) < floor_amp; });

    // Quantize to the sample grid, merging rays that land in the same bin.
    const double ts_ns = 1e9 / sample_rate;
    std::map<std::int64_t, double> bins;
    for (const auto& r : rays) {
        const auto bin = static_cast<std::int64_t>(std::llround(r.t_ns / ts_ns));
        bins[bin] += r.amplitude;
    }

    ChannelRealization out;
    out.sample_rate = sample_rate;
    out.taps.reserve(bins.size());
    for (const auto& [bin, amp] : bins)
        out.taps.push_back({static_cast<double>(bin) * ts_ns * 1e-9, amp});

    // Unit multipath energy, then lognormal shadowing on top.
    const double energy = out.total_energy();
    if (energy <= 0.0) throw std::runtime_error("generate_channel: degenerate realization");
    const double shadow = std::pow(10.0, shadow_rng.normal(profile.shadowing_db) / 20.0);
    const double scale = shadow / std::sqrt(energy);
    for (auto& t : out.taps) t.amplitude *= scale;
    return out;
}

std::vector<double> channel_psd(const ChannelRealization& channel, const FrequencyGrid& grid) {
    if (channel.taps.empty()) throw std::invalid_argument("channel_psd: no taps");
    bool any_nonzero = false;
    for (const auto& t : channel.taps)
        if (t.amplitude != 0.0) any_nonzero = true;
    if (!any_nonzero) throw std::domain_error("channel_psd: degenerate all-zero channel");

    std::vector<double> psd(grid.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = 2.0 * std::numbers::pi * grid.frequency(i);
        double re = 0.0, im = 0.0;
        for (const auto& t : channel.taps) {
            re += t.amplitude * std::cos(w * t.delay);
            im -= t.amplitude * std::sin(w * t.delay);
        }
        psd[i] = re * re + im * im;
        peak = std::max(peak, psd[i]);
    }
    for (auto& v : psd) v /= peak;
    return psd;
}

}  // namespace uwb
