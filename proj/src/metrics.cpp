#include "ramanecho/metrics.hpp"

#include "ramanecho/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ramanecho {

namespace {

struct Correlation {
    std::vector<cplx> c; // C_s = dt * sum_j echo_j conj(in_{j-s}), circular
    double dt = 0.0;

    // Echo delays are non-negative by construction, so the circular shift is
    // unwrapped into [-n/4, 3n/4).
    double shift_of(std::size_t s) const
    {
        const std::size_t n = c.size();
        const double idx = (s < 3 * n / 4)
                               ? static_cast<double>(s)
                               : static_cast<double>(s) - static_cast<double>(n);
        return idx;
    }
};

Correlation cross_correlate(const FieldEnvelope& in, const FieldEnvelope& echo)
{
    const std::size_t n = in.grid.n;
    std::vector<cplx> x(echo.samples), y(in.samples);
    fft_pow2(x, -1);
    fft_pow2(y, -1);
    for (std::size_t k = 0; k < n; ++k)
        x[k] *= std::conj(y[k]);
    fft_pow2(x, +1);
    Correlation out;
    out.dt = in.grid.dt;
    out.c.resize(n);
    const double scale = in.grid.dt / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s)
        out.c[s] = x[s] * scale;
    return out;
}

FidelityDelay extract(const FieldEnvelope& in, const FieldEnvelope& echo)
{
    const double e_in = in.energy();
    const double e_echo = echo.energy();
    if (e_in <= 0.0 || e_echo <= 0.0)
        throw ZeroInput("fidelity_and_delay: zero-energy field");

    const Correlation corr = cross_correlate(in, echo);
    const std::size_t n = corr.c.size();
    std::size_t s0 = 0;
    double best = -1.0;
    for (std::size_t s = 0; s < n; ++s) {
        const double m = std::abs(corr.c[s]);
        if (m > best) {
            best = m;
            s0 = s;
        }
    }
    const std::size_t sm = (s0 + n - 1) % n;
    const std::size_t sp = (s0 + 1) % n;
    const double ym = std::abs(corr.c[sm]);
    const double y0 = std::abs(corr.c[s0]);
    const double yp = std::abs(corr.c[sp]);
    const double den = ym - 2.0 * y0 + yp;
    double frac = 0.0;
    if (den < 0.0)
        frac = 0.5 * (ym - yp) / den;
    frac = std::clamp(frac, -0.5, 0.5);

    const double peak = y0 - 0.25 * (ym - yp) * frac;
    // complex value at the refined peak, linear between the bracketing bins
    cplx cstar;
    if (frac >= 0.0)
        cstar = corr.c[s0] + frac * (corr.c[sp] - corr.c[s0]);
    else
        cstar = corr.c[s0] + (-frac) * (corr.c[sm] - corr.c[s0]);

    FidelityDelay out;
    out.delay = (corr.shift_of(s0) + frac) * corr.dt;
    out.fidelity = std::min(1.0 + 1e-9, peak / std::sqrt(e_in * e_echo));
    out.phase = std::arg(cstar);
    return out;
}
} // namespace

double efficiency(const FieldEnvelope& in, const FieldEnvelope& echo)
{
    const double e_in = in.energy();
    if (e_in <= 0.0)
        throw ZeroInput("efficiency: zero-energy input");
    return echo.energy() / e_in;
}

FidelityDelay fidelity_and_delay(const FieldEnvelope& in, const FieldEnvelope& echo)
{
    if (in.grid.n != echo.grid.n || in.grid.dt != echo.grid.dt)
        throw ZeroInput("fidelity_and_delay: fields must share one grid");
    return extract(in, echo);
}

// The delay argument is accepted for interface symmetry but both fidelities
// re-align by correlation search, so the score is insensitive to it. Plain
// (unconjugated) time reversal flips every spectral component omega -> -omega;
// inputs whose pulses carry distinct carrier offsets therefore discriminate
// sharply between a replica and a reversed replica.
double reversal_score(const FieldEnvelope& in, const FieldEnvelope& echo, double)
{
    FieldEnvelope reversed(in.grid);
    const std::size_t n = in.grid.n;
    for (std::size_t j = 0; j < n; ++j)
        reversed.samples[j] = in.samples[n - 1 - j];

    const double f_same = extract(in, echo).fidelity;
    const double f_rev = extract(reversed, echo).fidelity;
    if (f_same + f_rev <= 0.0)
        throw ZeroInput("reversal_score: degenerate correlation");
    return (f_same - f_rev) / (f_same + f_rev);
}

} // namespace ramanecho
