#include "uwb/spectra.hpp"

#include "uwb/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uwb {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Hermite-polynomial recurrence for d^n/dt^n exp(-t^2/(2 sigma^2)).
// q_n(t) = He_n-style polynomial / sigma^n times the Gaussian.
double gaussian_derivative(double t, double sigma, int order) {
    const double u = t / sigma;
    const double g = std::exp(-0.5 * u * u);
    // p_n(u) with q_n(t) = p_n(u) * g / sigma^n, p_0 = 1, p_{n+1} = -u p_n + p_n'.
    std::vector<double> p{1.0};
    for (int n = 0; n < order; ++n) {
        std::vector<double> next(p.size() + 1, 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) {
            next[k + 1] -= p[k];                       // -u * p_n term
            if (k >= 1) next[k - 1] += static_cast<double>(k) * p[k];  // p_n'
        }
        p = std::move(next);
    }
    double poly = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) poly = poly * u + p[k];
    return poly * g / std::pow(sigma, order);
}
}  // namespace

double PulseModel::time_domain(double t) const {
    if (kind == Kind::delta)
        throw std::logic_error("PulseModel: delta pulse has no sampled time-domain form");
    return gaussian_derivative(t, shape_factor, order);
}

RfResponse RfResponse::tabulated(std::vector<double> freqs_hz, std::vector<double> gain) {
    if (freqs_hz.size() != gain.size() || freqs_hz.size() < 2)
        throw std::invalid_argument("RfResponse: table needs >= 2 matching samples");
    for (std::size_t i = 1; i < freqs_hz.size(); ++i)
        if (freqs_hz[i] <= freqs_hz[i - 1])
            throw std::invalid_argument("RfResponse: table frequencies must increase");
    for (double g : gain)
        if (g < 0.0) throw std::invalid_argument("RfResponse: gains must be nonnegative");
    RfResponse r(Kind::Tabulated);
    r.tab_f_ = std::move(freqs_hz);
    r.tab_g_ = std::move(gain);
    return r;
}

double RfResponse::gain(double f) const {
    switch (kind_) {
        case Kind::Unity:
            return 1.0;
        case Kind::Differentiator: {
            const double w = kTwoPi * f;
            return w * w;
        }
        case Kind::Tabulated: {
            if (f < tab_f_.front() || f > tab_f_.back())
                throw std::out_of_range("RfResponse: frequency outside table range");
            auto it = std::upper_bound(tab_f_.begin(), tab_f_.end(), f);
            if (it == tab_f_.end()) return tab_g_.back();
            const std::size_t hi = static_cast<std::size_t>(it - tab_f_.begin());
            const std::size_t lo = hi - 1;
            const double w = (f - tab_f_[lo]) / (tab_f_[hi] - tab_f_[lo]);
            return tab_g_[lo] + w * (tab_g_[hi] - tab_g_[lo]);
        }
    }
    return 0.0;
}

SpectralMask::SpectralMask(std::vector<Segment> segments, double reference)
    : segments_(std::move(segments)), reference_(reference) {
    if (segments_.empty()) throw std::invalid_argument("SpectralMask: no segments");
    if (reference_ <= 0.0) throw std::invalid_argument("SpectralMask: reference must be positive");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (segments_[i].f_lo >= segments_[i].f_hi)
            throw std::invalid_argument("SpectralMask: empty segment");
        if (!std::isfinite(segments_[i].level_db))
            throw std::invalid_argument("SpectralMask: level must be finite");
        if (i > 0 && segments_[i].f_lo != segments_[i - 1].f_hi)
            throw std::invalid_argument("SpectralMask: segments must partition the domain");
    }
}

double SpectralMask::eval(double f) const {
    if (f < domain_lo() || f > domain_hi())
        throw std::out_of_range("SpectralMask: frequency outside mask domain");
    for (const auto& s : segments_)
        if (f >= s.f_lo && f < s.f_hi)
            return reference_ * std::pow(10.0, s.level_db / 10.0);
    // f == domain_hi lands here; it belongs to the last segment.
    return reference_ * std::pow(10.0, segments_.back().level_db / 10.0);
}

SpectralMask SpectralMask::tight(double f_max) {
    return SpectralMask({{0.0, 3.1e9, -40.0}, {3.1e9, 10.6e9, 0.0}, {10.6e9, f_max, -15.0}});
}

SpectralMask SpectralMask::fcc_normalized(double f_max) {
    return SpectralMask({{0.0, 0.96e9, -10.0},
                         {0.96e9, 1.61e9, -65.3},
                         {1.61e9, 1.99e9, -53.3},
                         {1.99e9, 3.1e9, -34.3},
                         {3.1e9, 10.6e9, 0.0},
                         {10.6e9, f_max, -34.3}});
}

std::vector<std::complex<double>> fourier_vector(double f, std::size_t taps, double t0) {
    if (taps == 0) throw std::invalid_argument("fourier_vector: need at least one tap");
    if (t0 <= 0.0) throw std::invalid_argument("fourier_vector: T0 must be positive");
    std::vector<std::complex<double>> v(taps);
    for (std::size_t k = 0; k < taps; ++k) {
        const double phase = kTwoPi * f * static_cast<double>(k) * t0;
        v[k] = std::polar(1.0, phase);
    }
    return v;
}

std::vector<double> cosine_vector(double f, std::size_t taps, double t0) {
    if (taps == 0) throw std::invalid_argument("cosine_vector: need at least one tap");
    if (t0 <= 0.0) throw std::invalid_argument("cosine_vector: T0 must be positive");
    std::vector<double> w(taps);
    w[0] = 1.0;
    for (std::size_t k = 1; k < taps; ++k)
        w[k] = 2.0 * std::cos(kTwoPi * f * static_cast<double>(k) * t0);
    return w;
}

double pulse_spectrum(const PulseModel& pulse, double f) {
    if (pulse.kind == PulseModel::Kind::delta) return 1.0;
    const double sigma = pulse.shape_factor;
    const double w = kTwoPi * f;
    const double ws = w * sigma;
    return std::pow(w * w, pulse.order) * kTwoPi * sigma * sigma * std::exp(-ws * ws);
}

double tap_spectrum(std::span<const double> taps, double f, double t0) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < taps.size(); ++k)
        acc += taps[k] * std::polar(1.0, -kTwoPi * f * static_cast<double>(k) * t0);
    return std::norm(acc);
}

std::vector<double> transmitted_spectrum(std::span<const double> taps, const PulseModel& pulse,
                                         const RfResponse& rf, const FrequencyGrid& grid) {
    if (taps.empty()) throw std::invalid_argument("transmitted_spectrum: empty tap vector");
    const double t0 = grid.sample_interval();
    std::vector<double> s(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid.frequency(i);
        s[i] = tap_spectrum(taps, f, t0) * pulse_spectrum(pulse, f) * rf.gain(f);
    }
    return s;
}

std::vector<double> transmitted_spectrum(const AutocorrVector& r, double t0,
                                         const PulseModel& pulse, const RfResponse& rf,
                                         const FrequencyGrid& grid) {
    if (r.size() == 0) throw std::invalid_argument("transmitted_spectrum: empty autocorrelation");
    std::vector<double> s(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid.frequency(i);
        long double acc = r.r[0];
        for (std::size_t m = 1; m < r.size(); ++m)
            acc += 2.0L * static_cast<long double>(r.r[m]) *
                   std::cos(2.0L * std::numbers::pi_v<long double> * f * t0 *
                            static_cast<long double>(m));
        s[i] = std::max(static_cast<double>(acc), 0.0) * pulse_spectrum(pulse, f) * rf.gain(f);
    }
    return s;
}

}  // namespace uwb
