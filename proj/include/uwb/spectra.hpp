#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "uwb/grid.hpp"

namespace uwb {

// Gaussian-derivative elementary pulse: q(t) = d^n/dt^n exp(-t^2 / (2 sigma^2)).
// The delta kind (S_q == 1) exists for tests and closed-form oracles.
struct PulseModel {
    enum class Kind { gaussian_derivative, delta };

    Kind kind = Kind::gaussian_derivative;
    int order = 1;                    // derivative order n >= 0
    double shape_factor = 0.1e-9;     // sigma, seconds

    PulseModel() = default;
    PulseModel(int order_, double shape_factor_) : order(order_), shape_factor(shape_factor_) {
        if (order < 0) throw std::invalid_argument("PulseModel: order must be >= 0");
        if (shape_factor <= 0.0) throw std::invalid_argument("PulseModel: shape factor must be positive");
    }

    static PulseModel delta() {
        PulseModel p;
        p.kind = Kind::delta;
        return p;
    }

    // Nominal pulse duration used for bookkeeping; the spectrum is closed-form.
    double duration() const { return 8.0 * shape_factor; }

    // Time-domain q(t), used by the FFT oracle tests and waveform export.
    double time_domain(double t) const;
};

// |R(f)|^2 of the transmitter RF chain.
class RfResponse {
public:
    enum class Kind { Unity, Differentiator, Tabulated };

    static RfResponse unity() { return RfResponse(Kind::Unity); }
    static RfResponse differentiator() { return RfResponse(Kind::Differentiator); }
    static RfResponse tabulated(std::vector<double> freqs_hz, std::vector<double> gain);

    Kind kind() const { return kind_; }

    // Magnitude-squared gain at f. Tabulated responses interpolate linearly
    // and throw std::out_of_range outside the table.
    double gain(double f) const;

private:
    explicit RfResponse(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<double> tab_f_, tab_g_;
};

// Piecewise-constant emission mask, dB levels relative to a linear reference.
class SpectralMask {
public:
    struct Segment {
        double f_lo, f_hi;   // half-open [f_lo, f_hi)
        double level_db;
    };

    SpectralMask(std::vector<Segment> segments, double reference = 1.0);

    // Linear power bound at f; segment boundaries belong to the left-closed
    // segment. Throws std::out_of_range outside the mask domain.
    double eval(double f) const;

    double domain_lo() const { return segments_.front().f_lo; }
    double domain_hi() const { return segments_.back().f_hi; }
    double reference() const { return reference_; }
    const std::vector<Segment>& segments() const { return segments_; }

    // The tighter simulation mask: 0 dB in 3.1-10.6 GHz, -40 dB below,
    // -15 dB above, up to `f_max`.
    static SpectralMask tight(double f_max = 14e9);

    // FCC 02-48 indoor levels shifted so the 3.1-10.6 GHz limit is 0 dB.
    static SpectralMask fcc_normalized(double f_max = 14e9);

private:
    std::vector<Segment> segments_;
    double reference_;
};

// v(f, L): element k is exp(j 2 pi f k T0).
std::vector<std::complex<double>> fourier_vector(double f, std::size_t taps, double t0);

// w(f, L): [1, 2cos(2 pi f T0), ..., 2cos(2 pi f (L-1) T0)].
// Satisfies w(f)^T autocorr(g) = |v(f)^H g|^2.
std::vector<double> cosine_vector(double f, std::size_t taps, double t0);

// S_q(f) = |Q(f)|^2 for the Gaussian-derivative pulse, closed form:
// (2 pi f)^(2n) * 2 pi sigma^2 * exp(-(2 pi sigma f)^2).
double pulse_spectrum(const PulseModel& pulse, double f);

inline double rf_gain(const RfResponse& rf, double f) { return rf.gain(f); }

inline double mask_eval(const SpectralMask& mask, double f) { return mask.eval(f); }

// S_tr(f) = |v^H g|^2 S_q(f) |R(f)|^2 sampled on the grid.
std::vector<double> transmitted_spectrum(std::span<const double> taps, const PulseModel& pulse,
                                         const RfResponse& rf, const FrequencyGrid& grid);

// |G(e^{j 2 pi f T0})|^2 for a tap vector.
double tap_spectrum(std::span<const double> taps, double f, double t0);

}  // namespace uwb
