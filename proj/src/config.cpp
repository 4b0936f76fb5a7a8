#include "uwb/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uwb {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + what + ": '" + s + "'");
    }
}

std::size_t parse_size(const std::string& s, const std::string& what) {
    const double v = parse_double(s, what);
    if (v < 0 || v != std::floor(v)) throw ConfigError("expected nonnegative integer for " + what);
    return static_cast<std::size_t>(v);
}

}  // namespace

IniFile IniFile::parse(const std::string& text) {
    IniFile ini;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            ini.data_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        ini.data_[section].emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return ini;
}

IniFile IniFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

bool IniFile::has(const std::string& section) const { return data_.count(section) > 0; }

std::optional<std::string> IniFile::get(const std::string& section, const std::string& key) const {
    auto it = data_.find(section);
    if (it == data_.end()) return std::nullopt;
    for (const auto& [k, v] : it->second)
        if (k == key) return v;
    return std::nullopt;
}

std::vector<std::string> IniFile::get_all(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    auto it = data_.find(section);
    if (it == data_.end()) return out;
    for (const auto& [k, v] : it->second)
        if (k == key) out.push_back(v);
    return out;
}

std::vector<std::string> IniFile::sections() const {
    std::vector<std::string> out;
    for (const auto& [s, _] : data_) out.push_back(s);
    return out;
}

SpectralMask load_mask(const std::string& path) {
    const auto ini = IniFile::load(path);
    if (!ini.has("mask")) throw ConfigError(path + ": missing [mask] section");
    const double reference = parse_double(ini.get("mask", "reference").value_or("1.0"), "reference");
    std::vector<SpectralMask::Segment> segments;
    for (const auto& line : ini.get_all("mask", "segment")) {
        std::istringstream is(line);
        SpectralMask::Segment seg{};
        if (!(is >> seg.f_lo >> seg.f_hi >> seg.level_db))
            throw ConfigError(path + ": segment needs 'f_lo_hz f_hi_hz level_db': " + line);
        segments.push_back(seg);
    }
    if (segments.empty()) throw ConfigError(path + ": mask has no segments");
    try {
        return SpectralMask(std::move(segments), reference);
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

SpectralMask mask_by_name_or_path(const std::string& name_or_path, double f_max) {
    if (name_or_path == "tight") return SpectralMask::tight(f_max);
    if (name_or_path == "fcc_normalized") return SpectralMask::fcc_normalized(f_max);
    return load_mask(name_or_path);
}

std::map<std::string, ChannelProfile> load_channel_profiles(const std::string& path) {
    const auto ini = IniFile::load(path);
    std::map<std::string, ChannelProfile> out;
    for (const auto& section : ini.sections()) {
        ChannelProfile p;
        p.name = section;
        auto need = [&](const char* key) {
            auto v = ini.get(section, key);
            if (!v) throw ConfigError(path + ": [" + section + "] missing " + key);
            return parse_double(*v, key);
        };
        p.cluster_rate = need("cluster_rate");
        p.ray_rate = need("ray_rate");
        p.cluster_decay = need("cluster_decay");
        p.ray_decay = need("ray_decay");
        if (auto v = ini.get(section, "sigma1_db")) p.sigma1_db = parse_double(*v, "sigma1_db");
        if (auto v = ini.get(section, "sigma2_db")) p.sigma2_db = parse_double(*v, "sigma2_db");
        if (auto v = ini.get(section, "shadowing_db"))
            p.shadowing_db = parse_double(*v, "shadowing_db");
        p.validate();
        out[section] = p;
    }
    if (out.empty()) throw ConfigError(path + ": no channel profiles found");
    return out;
}

RunConfig RunConfig::from_file(const std::string& path) { return from_ini(IniFile::load(path)); }

RunConfig RunConfig::from_ini(const IniFile& ini) {
    RunConfig c;
    if (auto v = ini.get("design", "taps")) c.taps = parse_size(*v, "taps");
    if (auto v = ini.get("design", "fs")) c.fs = parse_double(*v, "fs");
    if (auto v = ini.get("design", "grid")) c.grid_points = parse_size(*v, "grid");
    if (auto v = ini.get("design", "verify_factor")) c.verify_factor = parse_size(*v, "verify_factor");
    if (auto v = ini.get("design", "fft")) c.fft_size = parse_size(*v, "fft");
    int order = c.pulse.order;
    double sigma = c.pulse.shape_factor;
    if (auto v = ini.get("pulse", "order")) order = static_cast<int>(parse_size(*v, "order"));
    if (auto v = ini.get("pulse", "shape_factor")) sigma = parse_double(*v, "shape_factor");
    try {
        c.pulse = PulseModel(order, sigma);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("[pulse]: ") + e.what());
    }
    if (auto v = ini.get("rf", "kind")) c.rf_kind = *v;
    if (auto v = ini.get("mask", "name")) c.mask = *v;
    if (auto v = ini.get("channel", "cm")) c.channel_cm = *v;
    if (auto v = ini.get("channel", "profiles")) c.profiles_path = *v;
    if (auto v = ini.get("channel", "seeds")) {
        std::istringstream is(*v);
        std::string tok;
        while (std::getline(is, tok, ','))
            c.seeds.push_back(static_cast<std::uint64_t>(parse_size(trim(tok), "seeds")));
    } else if (auto nv = ini.get("channel", "n")) {
        const std::size_t n = parse_size(*nv, "n");
        std::uint64_t seed0 = 1;
        if (auto sv = ini.get("channel", "seed0"))
            seed0 = static_cast<std::uint64_t>(parse_size(*sv, "seed0"));
        for (std::size_t i = 0; i < n; ++i) c.seeds.push_back(seed0 + i);
    }
    if (auto v = ini.get("output", "dir")) c.output_dir = *v;
    if (c.taps < 1) throw ConfigError("taps must be >= 1");
    if (c.grid_points < 2) throw ConfigError("grid must be >= 2");
    return c;
}

RfResponse RunConfig::make_rf() const {
    if (rf_kind == "differentiator") return RfResponse::differentiator();
    if (rf_kind == "unity") return RfResponse::unity();
    throw ConfigError("unknown rf kind: " + rf_kind);
}

SpectralMask RunConfig::make_mask() const { return mask_by_name_or_path(mask, fs / 2.0); }

FrequencyGrid RunConfig::make_grid() const { return FrequencyGrid(fs, grid_points); }

ChannelProfile RunConfig::make_profile() const {
    if (!channel_cm) throw ConfigError("no channel configured");
    if (!profiles_path.empty()) {
        auto profiles = load_channel_profiles(profiles_path);
        auto it = profiles.find(*channel_cm);
        if (it == profiles.end())
            throw ConfigError(profiles_path + ": no profile named " + *channel_cm);
        return it->second;
    }
    try {
        return ChannelProfile::standard(*channel_cm);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

DesignParams RunConfig::design_params() const {
    DesignParams p;
    p.taps = taps;
    p.grid = make_grid();
    p.pulse = pulse;
    p.rf = make_rf();
    p.mask = make_mask();
    p.fft_size = fft_size;
    return p;
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "taps=" << taps << ";fs=" << fs << ";grid=" << grid_points
       << ";verify=" << verify_factor << ";fft=" << fft_size << ";pulse=" << pulse.order << ","
       << pulse.shape_factor << ";rf=" << rf_kind << ";mask=" << mask
       << ";cm=" << channel_cm.value_or("") << ";seeds=";
    for (auto s : seeds) os << s << ",";
    return os.str();
}

std::string RunConfig::hash() const {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace uwb
