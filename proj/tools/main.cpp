#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "uwb/config.hpp"
#include "uwb/factorize.hpp"
#include "uwb/lp.hpp"
#include "uwb/metrics.hpp"
#include "uwb/spectra.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitFactorize = 4;
constexpr int kExitVerify = 5;

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FactorizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string provenance_header(const uwb::RunConfig& cfg) {
    std::ostringstream os;
    os << "# config_hash=" << cfg.hash() << "\n# seeds=";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        os << (i ? "," : "") << cfg.seeds[i];
    os << "\n";
    return os.str();
}

std::string spectrum_csv(const uwb::RunConfig& cfg, const uwb::FrequencyGrid& grid,
                         const std::vector<double>& values) {
    std::ostringstream os;
    os << provenance_header(cfg) << "frequency_hz,power_linear\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        os << fmt(grid.frequency(i)) << "," << fmt(values[i]) << "\n";
    return os.str();
}

// Max overshoot of s_tr above the mask, in dB, on the given grid.
double mask_overshoot_db(const std::vector<double>& s_tr, const uwb::FrequencyGrid& grid,
                         const uwb::SpectralMask& mask) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double m = mask.eval(grid.frequency(i));
        if (s_tr[i] > m && m > 0.0) worst = std::max(worst, 10.0 * std::log10(s_tr[i] / m));
    }
    return worst;
}

std::vector<double> load_taps_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open taps file: " + path);
    std::vector<double> taps;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("index,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed taps line: " + line);
        taps.push_back(std::stod(line.substr(comma + 1)));
    }
    if (taps.empty()) throw std::runtime_error("taps file has no data rows: " + path);
    return taps;
}

int cmd_design(const uwb::RunConfig& cfg) {
    const auto grid = cfg.make_grid();
    const auto mask = cfg.make_mask();
    const auto rf = cfg.make_rf();
    const auto out_dir = std::filesystem::path(cfg.output_dir);
    std::filesystem::create_directories(out_dir);

    std::vector<double> psd;
    std::optional<uwb::ChannelRealization> realization;
    if (cfg.channel_cm) {
        if (cfg.seeds.empty()) throw uwb::ConfigError("channel configured but no seeds given");
        realization = uwb::generate_channel(cfg.make_profile(), cfg.seeds[0], cfg.fs);
        psd = uwb::channel_psd(*realization, grid);
    }

    const auto problem = uwb::assemble_problem(grid, mask, cfg.pulse, rf, cfg.taps,
                                               psd.empty() ? nullptr : &psd);
    const auto report = uwb::solve(problem);
    if (report.status != uwb::SolveStatus::optimal)
        throw SolverError("LP solve did not reach optimality");

    uwb::FilterDesign design;
    try {
        design = uwb::spectral_factorize(report.r_opt, cfg.fft_size);
    } catch (const std::exception& e) {
        throw FactorizeError(e.what());
    }

    const auto s_tx = uwb::transmitted_spectrum(design.taps, cfg.pulse, rf, grid);

    // Refined-grid feasibility of both the autocorrelation and the taps.
    const auto refined = grid.refined(cfg.verify_factor);
    const auto refined_f = refined.frequencies();
    std::vector<double> refined_psd;
    if (realization) refined_psd = uwb::channel_psd(*realization, refined);
    const auto refined_ub = uwb::constraint_bounds(refined_f, mask, cfg.pulse, rf,
                                                   realization ? &refined_psd : nullptr);
    const double r_violation =
        uwb::verify_feasibility(report.r_opt, grid.sample_interval(), refined_f, refined_ub);
    const auto s_tx_refined = uwb::transmitted_spectrum(design.taps, cfg.pulse, rf, refined);
    const double overshoot_db = mask_overshoot_db(s_tx_refined, refined, mask);

    std::ostringstream taps_csv;
    taps_csv << provenance_header(cfg) << "index,tap\n";
    for (std::size_t i = 0; i < design.taps.size(); ++i)
        taps_csv << i << "," << fmt(design.taps[i]) << "\n";
    write_file(out_dir / "taps.csv", taps_csv.str());
    write_file(out_dir / "spectrum_tx.csv", spectrum_csv(cfg, grid, s_tx));

    if (!psd.empty()) {
        std::vector<double> s_rx(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) s_rx[i] = s_tx[i] * psd[i];
        write_file(out_dir / "spectrum_rx.csv", spectrum_csv(cfg, grid, s_rx));
    }

    nlohmann::json j;
    j["config_hash"] = cfg.hash();
    j["seeds"] = cfg.seeds;
    j["nesp"] = uwb::nesp(s_tx, mask, grid);
    j["objective"] = report.objective_value;
    j["iterations"] = report.iterations;
    j["r_refined_violation"] = r_violation;
    j["mask_overshoot_db"] = overshoot_db;
    j["roundtrip_error"] = design.roundtrip_error;
    j["variant"] = psd.empty() ? "plain" : "channel_aware";
    write_file(out_dir / "report.json", j.dump(2) + "\n");

    std::cout << "design written to " << out_dir.string() << " (NESP "
              << uwb::nesp(s_tx, mask, grid) << ", mask overshoot " << overshoot_db << " dB)\n";
    return 0;
}

int cmd_campaign(const uwb::RunConfig& cfg, const std::vector<std::string>& cms) {
    if (cfg.seeds.empty())
        throw uwb::ConfigError("campaign needs a channel seed list (--seeds or --n)");
    std::vector<std::string> cm_list = cms;
    if (cm_list.empty()) {
        if (!cfg.channel_cm) throw uwb::ConfigError("campaign needs --cm or a [channel] section");
        cm_list.push_back(*cfg.channel_cm);
    }

    const auto out_dir = std::filesystem::path(cfg.output_dir);
    std::filesystem::create_directories(out_dir);
    const auto params = cfg.design_params();

    nlohmann::json all = nlohmann::json::array();
    std::ostringstream csv;
    csv << provenance_header(cfg) << "cm,n,eta_ave1_pct,eta_ave2_pct,beta_pct\n";
    for (const auto& cm : cm_list) {
        uwb::RunConfig cm_cfg = cfg;
        cm_cfg.channel_cm = cm;
        const auto profile = cm_cfg.make_profile();
        const auto result = uwb::run_campaign(profile, cfg.seeds, params);
        all.push_back(nlohmann::json::parse(result.to_json()));
        csv << result.cm_id << "," << result.n_realizations << "," << fmt(result.eta_ave1_pct)
            << "," << fmt(result.eta_ave2_pct) << "," << fmt(result.beta_pct) << "\n";
        std::cout << result.cm_id << ": eta_ave1 " << result.eta_ave1_pct << "% eta_ave2 "
                  << result.eta_ave2_pct << "% beta " << result.beta_pct << "%\n";
    }
    nlohmann::json j;
    j["config_hash"] = cfg.hash();
    j["campaigns"] = all;
    write_file(out_dir / "campaign.json", j.dump(2) + "\n");
    write_file(out_dir / "campaign.csv", csv.str());
    return 0;
}

int cmd_verify(const uwb::RunConfig& cfg, const std::string& taps_path, double tol_db) {
    const auto taps = load_taps_csv(taps_path);
    const auto mask = cfg.make_mask();
    const auto rf = cfg.make_rf();
    const auto refined = cfg.make_grid().refined(cfg.verify_factor);
    const auto s_tr = uwb::transmitted_spectrum(taps, cfg.pulse, rf, refined);
    const double overshoot_db = mask_overshoot_db(s_tr, refined, mask);
    const double n = uwb::nesp(s_tr, mask, refined);
    std::cout << "taps: " << taps.size() << "\nnesp: " << n
              << "\nmask_overshoot_db: " << overshoot_db << "\n";
    if (overshoot_db > tol_db)
        throw VerifyError("mask violated by " + fmt(overshoot_db) + " dB (tolerance " +
                          fmt(tol_db) + " dB)");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mask-constrained UWB pulse-shaping filter design"};
    app.require_subcommand(1);

    std::string config_path, mask_arg, out_dir, seeds_arg, taps_path;
    std::vector<std::string> cms;
    std::size_t grid_n = 0, fft_n = 0, n_seeds = 0;
    double tol_db = 0.1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Config file (INI-style)");
        sub->add_option("--mask", mask_arg, "Mask name (tight|fcc_normalized) or file path");
        sub->add_option("--cm", cms, "Channel model id(s), e.g. CM4");
        sub->add_option("--seeds", seeds_arg, "Comma-separated channel seeds");
        sub->add_option("--n", n_seeds, "Number of sequential seeds starting at 1");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--grid", grid_n, "Constraint grid points");
        sub->add_option("--fft", fft_n, "Factorization FFT size (power of two)");
    };

    auto* design = app.add_subcommand("design", "Solve, factorize, and export one design");
    add_common(design);
    auto* campaign = app.add_subcommand("campaign", "Monte-Carlo eta campaign over channel seeds");
    add_common(campaign);
    auto* verify = app.add_subcommand("verify", "Check a taps file against the mask");
    add_common(verify);
    verify->add_option("taps", taps_path, "taps.csv produced by design")->required();
    verify->add_option("--tol-db", tol_db, "Allowed mask overshoot in dB");

    CLI11_PARSE(app, argc, argv);

    try {
        uwb::RunConfig cfg =
            config_path.empty() ? uwb::RunConfig{} : uwb::RunConfig::from_file(config_path);
        if (!mask_arg.empty()) cfg.mask = mask_arg;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (grid_n) cfg.grid_points = grid_n;
        if (fft_n) cfg.fft_size = fft_n;
        if (cms.size() == 1) cfg.channel_cm = cms[0];
        if (!seeds_arg.empty()) {
            cfg.seeds.clear();
            std::istringstream is(seeds_arg);
            std::string tok;
            while (std::getline(is, tok, ','))
                cfg.seeds.push_back(std::stoull(tok));
        } else if (n_seeds) {
            cfg.seeds.clear();
            for (std::size_t i = 0; i < n_seeds; ++i) cfg.seeds.push_back(i + 1);
        }

        if (design->parsed()) return cmd_design(cfg);
        if (campaign->parsed()) return cmd_campaign(cfg, cms);
        if (verify->parsed()) return cmd_verify(cfg, taps_path, tol_db);
    } catch (const uwb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const FactorizeError& e) {
        std::cerr << "factorization error: " << e.what() << "\n";
        return kExitFactorize;
    } catch (const VerifyError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerify;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
