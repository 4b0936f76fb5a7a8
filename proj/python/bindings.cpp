#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uwb/channel.hpp"
#include "uwb/factorize.hpp"
#include "uwb/grid.hpp"
#include "uwb/lp.hpp"
#include "uwb/metrics.hpp"
#include "uwb/spectra.hpp"

namespace py = pybind11;
using namespace uwb;

PYBIND11_MODULE(_uwbshape, m) {
    m.doc() = "Mask-constrained UWB pulse-shaping filter design";

    py::class_<FrequencyGrid>(m, "FrequencyGrid")
        .def(py::init<double, std::size_t, double, double>(), py::arg("fs"), py::arg("n_points"),
             py::arg("passband_lo") = 3.1e9, py::arg("passband_hi") = 10.6e9)
        .def_property_readonly("fs", &FrequencyGrid::fs)
        .def("__len__", &FrequencyGrid::size)
        .def("frequency", &FrequencyGrid::frequency)
        .def("frequencies", &FrequencyGrid::frequencies)
        .def("refined", &FrequencyGrid::refined);

    py::class_<PulseModel>(m, "PulseModel")
        .def(py::init<int, double>(), py::arg("order") = 1, py::arg("shape_factor") = 0.1e-9)
        .def_readonly("order", &PulseModel::order)
        .def_readonly("shape_factor", &PulseModel::shape_factor)
        .def("time_domain", &PulseModel::time_domain);

    py::class_<RfResponse>(m, "RfResponse")
        .def_static("unity", &RfResponse::unity)
        .def_static("differentiator", &RfResponse::differentiator)
        .def_static("tabulated", &RfResponse::tabulated)
        .def("gain", &RfResponse::gain);

    py::class_<SpectralMask>(m, "SpectralMask")
        .def_static("tight", &SpectralMask::tight, py::arg("f_max") = 14e9)
        .def_static("fcc_normalized", &SpectralMask::fcc_normalized, py::arg("f_max") = 14e9)
        .def("eval", &SpectralMask::eval);

    py::class_<ChannelProfile>(m, "ChannelProfile")
        .def_static("standard", &ChannelProfile::standard)
        .def_readonly("name", &ChannelProfile::name)
        .def_readonly("cluster_rate", &ChannelProfile::cluster_rate)
        .def_readonly("ray_rate", &ChannelProfile::ray_rate)
        .def_readonly("cluster_decay", &ChannelProfile::cluster_decay)
        .def_readonly("ray_decay", &ChannelProfile::ray_decay);

    py::class_<ChannelTap>(m, "ChannelTap")
        .def_readonly("delay", &ChannelTap::delay)
        .def_readonly("amplitude", &ChannelTap::amplitude);

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def_readonly("taps", &ChannelRealization::taps)
        .def_readonly("sample_rate", &ChannelRealization::sample_rate)
        .def("total_energy", &ChannelRealization::total_energy)
        .def("rms_delay_spread", &ChannelRealization::rms_delay_spread)
        .def("mean_excess_delay", &ChannelRealization::mean_excess_delay);

    py::class_<AutocorrVector>(m, "AutocorrVector")
        .def(py::init([](std::vector<double> r) { return AutocorrVector{std::move(r)}; }))
        .def_readonly("r", &AutocorrVector::r);

    py::class_<LpProblem>(m, "LpProblem")
        .def_readonly("taps", &LpProblem::taps)
        .def_readonly("objective", &LpProblem::objective)
        .def_readonly("frequencies", &LpProblem::frequencies)
        .def_readonly("upper_bound", &LpProblem::upper_bound)
        .def("dump_json", &LpProblem::dump_json)
        .def_static("load_json", &LpProblem::load_json);

    py::enum_<SolveStatus>(m, "SolveStatus")
        .value("optimal", SolveStatus::optimal)
        .value("iteration_limit", SolveStatus::iteration_limit)
        .value("numerical_failure", SolveStatus::numerical_failure);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("r_opt", &SolveReport::r_opt)
        .def_readonly("objective_value", &SolveReport::objective_value)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("max_constraint_violation", &SolveReport::max_constraint_violation)
        .def_readonly("status", &SolveReport::status);

    py::class_<FilterDesign>(m, "FilterDesign")
        .def_readonly("taps", &FilterDesign::taps)
        .def_readonly("fft_size", &FilterDesign::fft_size)
        .def_readonly("roundtrip_error", &FilterDesign::roundtrip_error);

    py::class_<CampaignSample>(m, "CampaignSample")
        .def_readonly("seed", &CampaignSample::seed)
        .def_readonly("eta1_pct", &CampaignSample::eta1_pct)
        .def_readonly("eta2_pct", &CampaignSample::eta2_pct);

    py::class_<CampaignResult>(m, "CampaignResult")
        .def_readonly("cm_id", &CampaignResult::cm_id)
        .def_readonly("n_realizations", &CampaignResult::n_realizations)
        .def_readonly("eta_ave1_pct", &CampaignResult::eta_ave1_pct)
        .def_readonly("eta_ave2_pct", &CampaignResult::eta_ave2_pct)
        .def_readonly("beta_pct", &CampaignResult::beta_pct)
        .def_readonly("samples", &CampaignResult::samples)
        .def("to_json", &CampaignResult::to_json)
        .def("to_csv", &CampaignResult::to_csv);

    m.def("fourier_vector", &fourier_vector, py::arg("f"), py::arg("taps"), py::arg("t0"));
    m.def("cosine_vector", &cosine_vector, py::arg("f"), py::arg("taps"), py::arg("t0"));
    m.def("pulse_spectrum", &pulse_spectrum);
    m.def("rf_gain", &rf_gain);
    m.def("mask_eval", &mask_eval);
    m.def(
        "transmitted_spectrum",
        [](const std::vector<double>& taps, const PulseModel& pulse, const RfResponse& rf,
           const FrequencyGrid& grid) { return transmitted_spectrum(taps, pulse, rf, grid); },
        py::arg("taps"), py::arg("pulse"), py::arg("rf"), py::arg("grid"));
    m.def("generate_channel", &generate_channel, py::arg("profile"), py::arg("seed"),
          py::arg("sample_rate") = 28e9);
    m.def("channel_psd", &channel_psd);
    m.def(
        "assemble_problem",
        [](const FrequencyGrid& grid, const SpectralMask& mask, const PulseModel& pulse,
           const RfResponse& rf, std::size_t taps, std::optional<std::vector<double>> weight) {
            return assemble_problem(grid, mask, pulse, rf, taps, weight ? &*weight : nullptr);
        },
        py::arg("grid"), py::arg("mask"), py::arg("pulse"), py::arg("rf"), py::arg("taps"),
        py::arg("channel_weight") = std::nullopt);
    m.def("solve", [](const LpProblem& p) { return solve(p); });
    m.def("autocorrelation",
          [](const std::vector<double>& taps) { return autocorrelation(taps); });
    m.def(
        "spectral_factorize",
        [](const AutocorrVector& r, std::size_t fft_size) {
            return spectral_factorize(r, fft_size);
        },
        py::arg("r"), py::arg("fft_size") = std::size_t{1} << 14);
    m.def("check_min_phase",
          [](const std::vector<double>& taps) { return check_min_phase(taps); });
    m.def(
        "nesp",
        [](const std::vector<double>& s_tr, const SpectralMask& mask, const FrequencyGrid& grid) {
            return nesp(s_tr, mask, grid);
        });
    m.def("eta", [](const std::vector<double>& s_tr, const std::vector<double>& s_h,
                    const FrequencyGrid& grid) { return eta(s_tr, s_h, grid); });
    m.def(
        "run_campaign",
        [](const ChannelProfile& profile, const std::vector<std::uint64_t>& seeds,
           std::size_t taps, std::size_t grid_points, double fs) {
            DesignParams params;
            params.taps = taps;
            params.grid = FrequencyGrid(fs, grid_points);
            return run_campaign(profile, seeds, params);
        },
        py::arg("profile"), py::arg("seeds"), py::arg("taps") = 30,
        py::arg("grid_points") = 2048, py::arg("fs") = 28e9);
}
