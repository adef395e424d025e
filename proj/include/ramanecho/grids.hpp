#ifndef RAMANECHO_GRIDS_HPP
#define RAMANECHO_GRIDS_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace ramanecho {

using cplx = std::complex<double>;

// Uniform time grid, n a power of two. All envelopes of one run share it.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t n = 0;

    TimeGrid() = default;
    TimeGrid(double t0_, double dt_, std::size_t n_);

    double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    double span() const { return dt * static_cast<double>(n); }
    // index of the sample nearest to t, clamped to the grid
    std::size_t index_of(double t) const;

    bool operator==(const TimeGrid& o) const
    {
        return t0 == o.t0 && dt == o.dt && n == o.n;
    }
};

// Dual of exactly one TimeGrid; frequencies in centered order
// omega_k = (k - n/2) * domega, k = 0..n-1.
struct FrequencyGrid {
    double domega = 0.0;
    std::size_t n = 0;

    explicit FrequencyGrid(const TimeGrid& g);
    FrequencyGrid() = default;

    double omega(std::size_t k) const
    {
        return domega * (static_cast<double>(k) - static_cast<double>(n) / 2.0);
    }
    std::size_t index_of(double omega) const;
};

// Complex slowly-varying envelope sampled on a TimeGrid.
struct FieldEnvelope {
    TimeGrid grid;
    std::vector<cplx> samples;

    FieldEnvelope() = default;
    explicit FieldEnvelope(const TimeGrid& g) : grid(g), samples(g.n, cplx{0.0, 0.0}) {}

    // E = sum |A|^2 dt
    double energy() const;
};

struct Spectrum {
    FrequencyGrid grid;
    TimeGrid time_grid; // the dual grid, kept for the inverse transform
    std::vector<cplx> samples;

    double energy() const; // sum |A~|^2 domega
};

// A~(omega) = int exp(-i omega tau) A(tau) dtau, evaluated as the Riemann sum
// dt * sum_j exp(-i omega t_j) A_j on the centered FrequencyGrid.
Spectrum forward_transform(const FieldEnvelope& f);

// A(tau) = (1/2pi) int exp(+i omega tau) A~(omega) domega; exact inverse of
// forward_transform on the shared grids.
FieldEnvelope inverse_transform(const Spectrum& s);

// Same kernel as forward_transform but at one arbitrary frequency (O(n) sum).
cplx transform_at(const FieldEnvelope& f, double omega);

// In-place radix-2 FFT helper used by the transforms and by metrics.
// sign = -1: sum_j x_j exp(-2 pi i jk/n); sign = +1: conjugate kernel.
void fft_pow2(std::vector<cplx>& x, int sign);

} // namespace ramanecho

#endif
