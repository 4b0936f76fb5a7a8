#pragma once

#include <span>
#include <vector>

#include "uwb/lp.hpp"

namespace uwb {

struct FilterDesign {
    std::vector<double> taps;     // g, length L, g[0] > 0
    AutocorrVector source_r;
    std::size_t fft_size = 0;
    double roundtrip_error = 0.0; // max |autocorr(g) - r| / r[0]
};

struct FactorizeOptions {
    // Spectrum floor relative to its grid maximum, applied before the log.
    // The mask's stopbands force near-zeros that the log cannot take raw.
    double floor_relative = 1e-10;
    double roundtrip_tolerance = 1e-6;
    double imaginary_tolerance = 1e-9;
    // Most-negative spectrum value tolerated before declaring r
    // non-factorizable, relative to the spectrum's grid maximum. Solutions of
    // the discretized program are nonnegative only at the constraint
    // frequencies; between them a degree L-1 polynomial can dip by roughly
    // (L * grid spacing)^2 of its maximum, which the floor then absorbs.
    double negativity_tolerance = 1e-5;
};

AutocorrVector autocorrelation(std::span<const double> taps);

// Minimum-phase taps from the autocorrelation via the cepstral Hilbert
// method: log magnitude on an FFT grid, causal-cepstrum fold for the phase,
// inverse transform, first L coefficients.
FilterDesign spectral_factorize(const AutocorrVector& r, std::size_t fft_size,
                                const FactorizeOptions& options = {});

// Largest root modulus of the tap polynomial (companion-matrix eigenvalues).
double check_min_phase(std::span<const double> taps);

}  // namespace uwb
