#include "uwb/factorize.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace uwb {

namespace {

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

// In-place complex FFT; sign -1 forward, +1 inverse (inverse divides by N).
void fft(std::vector<std::complex<double>>& data, int sign) {
    const auto n = static_cast<int>(data.size());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, sign == -1 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    if (sign == 1)
        for (auto& v : data) v /= static_cast<double>(n);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

AutocorrVector autocorrelation(std::span<const double> taps) {
    if (taps.empty()) throw std::invalid_argument("autocorrelation: empty tap vector");
    AutocorrVector out;
    out.r.assign(taps.size(), 0.0);
    for (std::size_t m = 0; m < taps.size(); ++m)
        for (std::size_t k = 0; k + m < taps.size(); ++k)
            out.r[m] += taps[k] * taps[k + m];
    return out;
}

FilterDesign spectral_factorize(const AutocorrVector& r, std::size_t fft_size,
                                const FactorizeOptions& options) {
    const std::size_t L = r.size();
    if (L == 0) throw std::invalid_argument("spectral_factorize: empty autocorrelation");
    if (!is_power_of_two(fft_size) || fft_size < 16 * L)
        throw std::invalid_argument("spectral_factorize: fft_size must be a power of two >= 16 L");

    const std::size_t N = fft_size;

    // R(e^{jw}) on the FFT grid: forward transform of the symmetric extension.
    std::vector<std::complex<double>> spec(N, 0.0);
    spec[0] = r.r[0];
    for (std::size_t m = 1; m < L; ++m) {
        spec[m] = r.r[m];
        spec[N - m] = r.r[m];
    }
    fft(spec, -1);

    double smax = 0.0, smin = 0.0;
    for (const auto& v : spec) {
        smax = std::max(smax, v.real());
        smin = std::min(smin, v.real());
    }
    if (smax <= 0.0 || smin < -options.negativity_tolerance * smax)
        throw std::domain_error("spectral_factorize: spectrum is not nonnegative, cannot factor");

    const double floor = options.floor_relative * smax;
    std::vector<std::complex<double>> logspec(N);
    for (std::size_t k = 0; k < N; ++k)
        logspec[k] = 0.5 * std::log(std::max(spec[k].real(), floor));

    // Causal-cepstrum fold: zero the anticausal half, double the strictly
    // causal part. The resulting imaginary part is the Hilbert-transform phase.
    fft(logspec, +1);
    for (std::size_t n1 = 1; n1 < N / 2; ++n1) logspec[n1] *= 2.0;
    for (std::size_t n1 = N / 2 + 1; n1 < N; ++n1) logspec[n1] = 0.0;
    fft(logspec, -1);

    for (auto& v : logspec) v = std::exp(v);
    fft(logspec, +1);

    FilterDesign design;
    design.fft_size = fft_size;
    design.source_r = r;
    design.taps.resize(L);
    double gmax = 0.0, imax = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
        design.taps[k] = logspec[k].real();
        gmax = std::max(gmax, std::abs(logspec[k].real()));
        imax = std::max(imax, std::abs(logspec[k].imag()));
    }
    if (gmax == 0.0 || imax > options.imaginary_tolerance * gmax)
        throw std::runtime_error(
            "spectral_factorize: imaginary residue too large, increase fft_size");

    if (design.taps[0] < 0.0)
        for (auto& g : design.taps) g = -g;

    const auto check = autocorrelation(design.taps);
    double err = 0.0;
    for (std::size_t m = 0; m < L; ++m) err = std::max(err, std::abs(check.r[m] - r.r[m]));
    design.roundtrip_error = err / r.r[0];
    if (design.roundtrip_error > options.roundtrip_tolerance)
        throw std::runtime_error(
            "spectral_factorize: round-trip error too large, increase fft_size");
    return design;
}

double check_min_phase(std::span<const double> taps) {
    if (taps.empty()) throw std::invalid_argument("check_min_phase: empty tap vector");
    std::size_t lead = 0;
    while (lead < taps.size() && taps[lead] == 0.0) ++lead;
    if (lead == taps.size()) throw std::invalid_argument("check_min_phase: all-zero tap vector");
    const std::size_t deg = taps.size() - lead - 1;
    if (deg == 0) return 0.0;

    // Companion matrix of g[lead] z^deg + ... + g[L-1].
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg),
                                                 static_cast<Eigen::Index>(deg));
    for (std::size_t i = 0; i < deg; ++i)
        comp(0, static_cast<Eigen::Index>(i)) = -taps[lead + 1 + i] / taps[lead];
    for (std::size_t i = 1; i < deg; ++i)
        comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;

    const auto eigs = comp.eigenvalues();
    double max_mod = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        max_mod = std::max(max_mod, std::abs(eigs(i)));
    return max_mod;
}

}  // namespace uwb
