#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramanecho/ensemble.hpp"
#include "ramanecho/errors.hpp"

#include <cmath>
#include <random>

using namespace ramanecho;

namespace {
// independent oracle: composite Simpson quadrature of f against the density
double simpson_avg(const Distribution& d, const std::function<double(double)>& f,
                   std::size_t n = 200001)
{
    if (n % 2 == 0)
        ++n;
    const double a = d.support_min, b = d.support_max;
    const double h = (b - a) / static_cast<double>(n - 1);
    double s = d.density(a) * f(a) + d.density(b) * f(b);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = a + h * i;
        s += d.density(x) * f(x) * ((i % 2) ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}
} // namespace

TEST_CASE("gaussian ensemble reproduces the distribution moments")
{
    EnsembleGrid e = make_ensemble(Distribution::gaussian(), 128);
    CHECK(std::abs(e.weight_sum() - 1.0) <= 1e-8);
    CHECK(std::abs(e.mean()) <= 1e-8);
    CHECK(std::abs(e.second_moment() - 1.0) <= 1e-6);

    const Distribution d = Distribution::gaussian();
    const double oracle = simpson_avg(d, [](double x) { return x * x; });
    CHECK(e.second_moment() == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("tabulated spike collapses to one node of weight one")
{
    Distribution d = Distribution::tabulated({0.0}, {1.0});
    EnsembleGrid e = make_ensemble(d, 64);
    REQUIRE(e.count() == 1);
    CHECK(e.nodes[0] == 0.0);
    CHECK(e.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("tabulated text ingestion tolerates comments and trailing newline")
{
    Distribution d = Distribution::tabulated_from_text(
        "# delta G\n-2.0 0.0\n-1.0 1.0\n0.0 2.0\n1.0 1.0\n2.0 0.0\n\n");
    CHECK(d.support_min == -2.0);
    CHECK(d.support_max == 2.0);
    EnsembleGrid e = make_ensemble(d, 64);
    CHECK(std::abs(e.weight_sum() - 1.0) <= 1e-10);
    CHECK(std::abs(e.mean()) <= 1e-10); // symmetric table
}

TEST_CASE("chi of a single node is 1/Delta_1")
{
    Distribution d = Distribution::tabulated({0.0}, {1.0});
    EnsembleGrid e = make_ensemble(d, 64);
    const cplx c = chi(e, 20.0);
    CHECK(c.real() == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
    CHECK(std::abs(c.imag()) < 1e-16);
}

TEST_CASE("chi matches the series expansion and the quadrature oracle")
{
    const double delta1 = 20.0;
    EnsembleGrid e = make_ensemble(Distribution::gaussian(), 128);
    const cplx c = chi(e, delta1);
    // <1/(Delta1+Delta)> ~ (1/Delta1)(1 + sigma^2/Delta1^2)
    const double series = (1.0 / delta1) * (1.0 + 1.0 / (delta1 * delta1));
    CHECK(c.real() == doctest::Approx(series).epsilon(1e-4));

    const double oracle =
        simpson_avg(e.dist, [&](double x) { return 1.0 / (delta1 + x); });
    CHECK(c.real() == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(std::abs(c.imag()) < 1e-10);
}

TEST_CASE("chi scales as 1/Delta_1 at leading order")
{
    EnsembleGrid e = make_ensemble(Distribution::gaussian(), 128);
    const cplx c1 = chi(e, 20.0);
    const cplx c2 = chi(e, 200.0);
    CHECK(std::abs(c2.real() - c1.real() / 10.0) <= 0.01 * std::abs(c1.real() / 10.0));
}

TEST_CASE("chi converges under quadrature refinement")
{
    const Distribution d = Distribution::gaussian();
    const cplx c1 = chi(make_ensemble(d, 128), 20.0);
    const cplx c2 = chi(make_ensemble(d, 256), 20.0);
    const cplx c3 = chi(make_ensemble(d, 1280), 20.0);
    CHECK(std::abs(c1 - c2) <= 1e-8);
    CHECK(std::abs(c1 - c3) <= 1e-8);
}

TEST_CASE("chi rejects a pole inside the support")
{
    EnsembleGrid e = make_ensemble(Distribution::gaussian(), 64);
    CHECK_THROWS_AS(chi(e, 3.0), PoleInSupport);
}

TEST_CASE("two-photon shift closed forms")
{
    RamanMap m{20.0, 1.8, 6.0};
    // at Delta = 0 the shift sits at the line peak
    CHECK(two_photon_shift(0.0, m) ==
          doctest::Approx(m.delta21 - m.omega1 * m.omega1 / m.delta1).epsilon(1e-15));
    // large Delta: approaches Delta_21 from below
    const double far = two_photon_shift(1e9, m);
    CHECK(far < m.delta21);
    CHECK(m.delta21 - far < 1e-7);
    // no control, no Stark structure
    RamanMap off{20.0, 1.8, 0.0};
    for (double d : {-3.0, 0.0, 2.0})
        CHECK(two_photon_shift(d, off) == doctest::Approx(1.8));
}

TEST_CASE("two-photon shift is strictly monotone across the ensemble")
{
    RamanMap m{20.0, 1.8, 6.0};
    EnsembleGrid e = make_ensemble(Distribution::gaussian(), 128);
    for (std::size_t k = 0; k + 1 < e.count(); ++k)
        CHECK(two_photon_shift(e.nodes[k], m) < two_photon_shift(e.nodes[k + 1], m));
}

TEST_CASE("effective Raman linewidth scaling")
{
    // image of [-sigma, sigma] has half-widths sigma |Omega/Delta1|^2 (1 +- 2 sigma/Delta1)
    for (double delta1 : {10.0, 20.0, 50.0}) {
        RamanMap m{delta1, 0.0, 4.0};
        const double j0 = m.omega1 * m.omega1 / (delta1 * delta1);
        const double up = two_photon_shift(1.0, m) - two_photon_shift(0.0, m);
        const double down = two_photon_shift(0.0, m) - two_photon_shift(-1.0, m);
        for (double w : {up, down}) {
            CHECK(w >= j0 * (1.0 - 2.0 / delta1));
            CHECK(w <= j0 * (1.0 + 2.0 / delta1));
        }
    }
}

TEST_CASE("rephase shift mirrors the storage shift at equal amplitudes")
{
    RamanMap m{20.0, 1.8, 6.0};
    EnsembleGrid e = make_ensemble(Distribution::gaussian(), 128);
    for (double d : e.nodes) {
        const double storage = two_photon_shift(d, m) - m.delta21;
        const double reph = rephase_shift(d, m.omega1, m) - m.delta21;
        CHECK(std::abs(storage + reph) <= 1e-14 * std::max(1.0, std::abs(storage)));
    }
    // no rephasing field: free dark-storage precession
    CHECK(rephase_shift(1.3, 0.0, m) == doctest::Approx(m.delta21));
    CHECK(rephase_shift(0.0, 3.0, m) ==
          doctest::Approx(m.delta21 + 9.0 / m.delta1).epsilon(1e-15));
}

TEST_CASE("detuning_of_frequency inverts the shift map")
{
    RamanMap m{20.0, 1.8, 6.0};
    CHECK(std::abs(detuning_of_frequency(two_photon_shift(0.0, m), m)) < 1e-12);

    std::mt19937_64 rng(42);
    const double lo = two_photon_shift(-5.9, m), hi = two_photon_shift(5.9, m);
    std::uniform_real_distribution<double> omegas(lo, hi);
    for (int i = 0; i < 100; ++i) {
        const double om = omegas(rng);
        const double round = two_photon_shift(detuning_of_frequency(om, m), m);
        CHECK(std::abs(round - om) <= 1e-12 * std::max(1.0, std::abs(om)));
    }

    CHECK_THROWS_AS(detuning_of_frequency(m.delta21, m), AtAsymptote);
    // monotone divergence towards the asymptote
    double prev = detuning_of_frequency(m.delta21 - 1e-3, m);
    for (double eps : {1e-4, 1e-5, 1e-6}) {
        const double cur = detuning_of_frequency(m.delta21 - eps, m);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("make_ensemble guards")
{
    CHECK_THROWS_AS(make_ensemble(Distribution::gaussian(), 8),
                    UnnormalizableDistribution);
}
