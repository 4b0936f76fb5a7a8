#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uwb/channel.hpp"
#include "uwb/metrics.hpp"
#include "uwb/spectra.hpp"

namespace uwb {

// Minimal INI-style config: [section] headers, key = value lines, '#'
// comments. Repeated keys are preserved in order (used for mask segments).
class IniFile {
public:
    static IniFile parse(const std::string& text);
    static IniFile load(const std::string& path);

    bool has(const std::string& section) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    std::vector<std::string> get_all(const std::string& section, const std::string& key) const;
    std::vector<std::string> sections() const;

private:
    // section -> ordered (key, value) pairs
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> data_;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mask from a config file: a [mask] section with `reference` and repeated
// `segment = f_lo_hz f_hi_hz level_db` lines.
SpectralMask load_mask(const std::string& path);
SpectralMask mask_by_name_or_path(const std::string& name_or_path, double f_max);

// Channel profiles from a config file with one [CMn] section per profile.
std::map<std::string, ChannelProfile> load_channel_profiles(const std::string& path);

// Everything cmd_design / cmd_campaign need; defaults reproduce the stock
// simulation setup (L=30, fs=28 GHz, first-derivative Gaussian with
// sigma=0.10 ns, differentiator RF, tight mask).
struct RunConfig {
    std::size_t taps = 30;
    double fs = 28e9;
    std::size_t grid_points = 2048;
    std::size_t verify_factor = 8;
    std::size_t fft_size = 1 << 14;
    PulseModel pulse{1, 0.1e-9};
    std::string rf_kind = "differentiator";
    std::string mask = "tight";
    std::optional<std::string> channel_cm;
    std::vector<std::uint64_t> seeds;
    std::string output_dir = "out";
    std::string profiles_path;  // empty -> built-in CM table

    static RunConfig from_file(const std::string& path);
    static RunConfig from_ini(const IniFile& ini);

    RfResponse make_rf() const;
    SpectralMask make_mask() const;
    FrequencyGrid make_grid() const;
    ChannelProfile make_profile() const;  // requires channel_cm
    DesignParams design_params() const;

    // Stable FNV-1a hash of the canonical serialization, for provenance.
    std::string hash() const;
    std::string canonical() const;
};

}  // namespace uwb
