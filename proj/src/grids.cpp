#include "ramanecho/grids.hpp"

#include "ramanecho/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ramanecho {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }
} // namespace

TimeGrid::TimeGrid(double t0_, double dt_, std::size_t n_) : t0(t0_), dt(dt_), n(n_)
{
    if (dt <= 0.0)
        throw GridTooCoarse("TimeGrid: dt must be positive");
    if (n < 8 || !is_pow2(n))
        throw GridTooCoarse("TimeGrid: n must be a power of two >= 8");
}

std::size_t TimeGrid::index_of(double t) const
{
    const double x = (t - t0) / dt;
    const long i = std::lround(x);
    if (i < 0)
        return 0;
    if (static_cast<std::size_t>(i) >= n)
        return n - 1;
    return static_cast<std::size_t>(i);
}

FrequencyGrid::FrequencyGrid(const TimeGrid& g)
  : domega(kTwoPi / (g.dt * static_cast<double>(g.n))), n(g.n)
{
}

std::size_t FrequencyGrid::index_of(double om) const
{
    const double x = om / domega + static_cast<double>(n) / 2.0;
    const long i = std::lround(x);
    if (i < 0)
        return 0;
    if (static_cast<std::size_t>(i) >= n)
        return n - 1;
    return static_cast<std::size_t>(i);
}

double FieldEnvelope::energy() const
{
    double e = 0.0;
    for (const cplx& a : samples)
        e += std::norm(a);
    return e * grid.dt;
}

double Spectrum::energy() const
{
    double e = 0.0;
    for (const cplx& a : samples)
        e += std::norm(a);
    return e * grid.domega;
}

void fft_pow2(std::vector<cplx>& x, int sign)
{
    const std::size_t n = x.size();
    if (!is_pow2(n))
        throw GridTooCoarse("fft_pow2: size must be a power of two");

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = x[i + k];
                const cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

Spectrum forward_transform(const FieldEnvelope& f)
{
    const TimeGrid& g = f.grid;
    const std::size_t n = g.n;
    Spectrum out;
    out.grid = FrequencyGrid(g);
    out.time_grid = g;
    out.samples.assign(n, cplx{});

    // dt * sum_j A_j exp(-i omega_k t_j), omega_k centered. Splitting
    // t_j = t0 + j dt gives a plain DFT times per-bin phase factors; the
    // (-1)^j factor re-centers the DFT output.
    std::vector<cplx> work(n);
    for (std::size_t j = 0; j < n; ++j)
        work[j] = (j & 1) ? -f.samples[j] : f.samples[j];
    fft_pow2(work, -1);

    const double half = static_cast<double>(n) / 2.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double om = out.grid.domega * (static_cast<double>(k) - half);
        const cplx phase(std::cos(om * g.t0), -std::sin(om * g.t0));
        out.samples[k] = g.dt * phase * work[k];
    }
    return out;
}

FieldEnvelope inverse_transform(const Spectrum& s)
{
    const TimeGrid& g = s.time_grid;
    const std::size_t n = g.n;
    if (s.samples.size() != n)
        throw GridTooCoarse("inverse_transform: spectrum/grid size mismatch");

    FieldEnvelope out(g);
    std::vector<cplx> work(n);
    const double half = static_cast<double>(n) / 2.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double om = s.grid.domega * (static_cast<double>(k) - half);
        const cplx phase(std::cos(om * g.t0), std::sin(om * g.t0));
        work[k] = s.samples[k] * phase;
    }
    fft_pow2(work, +1);
    const double scale = 1.0 / (g.dt * static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const cplx v = work[j] * scale;
        out.samples[j] = (j & 1) ? -v : v;
    }
    return out;
}

cplx transform_at(const FieldEnvelope& f, double omega)
{
    cplx acc{};
    const TimeGrid& g = f.grid;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double ph = omega * g.time(j);
        acc += f.samples[j] * cplx(std::cos(ph), -std::sin(ph));
    }
    return acc * g.dt;
}

} // namespace ramanecho
