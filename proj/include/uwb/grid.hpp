#pragma once

#include <stdexcept>
#include <vector>

namespace uwb {

// Uniform frequency grid on [0, fs/2] with a designated passband sub-range.
class FrequencyGrid {
public:
    FrequencyGrid(double fs_hz, std::size_t n_points,
                  double passband_lo_hz = 3.1e9, double passband_hi_hz = 10.6e9)
        : fs_(fs_hz), n_(n_points), pb_lo_(passband_lo_hz), pb_hi_(passband_hi_hz) {
        if (fs_hz <= 0.0) throw std::invalid_argument("FrequencyGrid: fs must be positive");
        if (n_points < 2) throw std::invalid_argument("FrequencyGrid: need at least 2 points");
        if (pb_lo_ < 0.0 || pb_hi_ > fs_hz / 2.0 || pb_lo_ >= pb_hi_)
            throw std::invalid_argument("FrequencyGrid: passband must lie inside [0, fs/2]");
    }

    double fs() const { return fs_; }
    double sample_interval() const { return 1.0 / fs_; }
    std::size_t size() const { return n_; }
    double nyquist() const { return fs_ / 2.0; }

    double frequency(std::size_t i) const { return nyquist() * static_cast<double>(i) / static_cast<double>(n_ - 1); }
    double spacing() const { return nyquist() / static_cast<double>(n_ - 1); }

    double passband_lo() const { return pb_lo_; }
    double passband_hi() const { return pb_hi_; }
    // Half-open interval; when the passband runs to Nyquist the endpoint is
    // included so full-band integrals cover [0, fs/2] exactly.
    bool in_passband(double f) const {
        return f >= pb_lo_ && (f < pb_hi_ || (pb_hi_ == nyquist() && f <= pb_hi_));
    }

    std::vector<double> frequencies() const {
        std::vector<double> f(n_);
        for (std::size_t i = 0; i < n_; ++i) f[i] = frequency(i);
        return f;
    }

    // Indices of grid points inside the passband interval.
    std::vector<std::size_t> passband_indices() const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n_; ++i)
            if (in_passband(frequency(i))) idx.push_back(i);
        return idx;
    }

    // Same fs and passband, n points scaled by `factor`.
    FrequencyGrid refined(std::size_t factor) const {
        return FrequencyGrid(fs_, (n_ - 1) * factor + 1, pb_lo_, pb_hi_);
    }

    bool operator==(const FrequencyGrid& o) const {
        return fs_ == o.fs_ && n_ == o.n_ && pb_lo_ == o.pb_lo_ && pb_hi_ == o.pb_hi_;
    }

private:
    double fs_;
    std::size_t n_;
    double pb_lo_, pb_hi_;
};

}  // namespace uwb
