#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramanecho/errors.hpp"
#include "ramanecho/grids.hpp"
#include "ramanecho/pulses.hpp"

#include <cmath>
#include <random>

using namespace ramanecho;

namespace {
constexpr double kPi = 3.14159265358979323846;

// independent oracle: plain Riemann sum of the transform kernel
cplx direct_transform(const FieldEnvelope& f, double omega)
{
    cplx acc{};
    for (std::size_t j = 0; j < f.grid.n; ++j) {
        const double t = f.grid.time(j);
        acc += f.samples[j] * cplx(std::cos(omega * t), -std::sin(omega * t));
    }
    return acc * f.grid.dt;
}

double trapezoid_energy(const FieldEnvelope& f)
{
    double e = 0.0;
    for (std::size_t j = 0; j < f.grid.n; ++j) {
        const double w = (j == 0 || j + 1 == f.grid.n) ? 0.5 : 1.0;
        e += w * std::norm(f.samples[j]);
    }
    return e * f.grid.dt;
}
} // namespace

TEST_CASE("zero envelope has zero energy")
{
    TimeGrid g(-10.0, 0.05, 1024);
    FieldEnvelope f = make_gaussian_pulse(0.0, 1.0, cplx{0.0, 0.0}, g);
    CHECK(f.energy() == 0.0);
}

TEST_CASE("gaussian pulse energy matches the analytic integral")
{
    TimeGrid g(-102.4, 0.05, 4096);
    FieldEnvelope f = make_gaussian_pulse(0.0, 1.0, cplx{1.0, 0.0}, g);
    const double expected = std::sqrt(kPi); // int exp(-t^2/w^2) dt = w sqrt(pi)
    CHECK(f.energy() == doctest::Approx(expected).epsilon(1e-6));
    CHECK(trapezoid_energy(f) == doctest::Approx(f.energy()).epsilon(1e-9));
}

TEST_CASE("doubling the amplitude quadruples the energy")
{
    TimeGrid g(-51.2, 0.05, 2048);
    FieldEnvelope f1 = make_gaussian_pulse(0.0, 1.5, cplx{1.0, 0.5}, g);
    FieldEnvelope f2 = make_gaussian_pulse(0.0, 1.5, cplx{2.0, 1.0}, g);
    CHECK(f2.energy() == doctest::Approx(4.0 * f1.energy()).epsilon(1e-14));
}

TEST_CASE("pulse construction guards")
{
    TimeGrid g(-10.0, 0.05, 512);
    CHECK_THROWS_AS(make_gaussian_pulse(0.0, 0.1, cplx{1.0, 0.0}, g), GridTooCoarse);
    CHECK_THROWS_AS(make_gaussian_pulse(12.0, 1.0, cplx{1.0, 0.0}, g), PulseClipped);
}

TEST_CASE("impulse has a flat magnitude spectrum")
{
    TimeGrid g(0.0, 0.1, 256);
    FieldEnvelope f(g);
    f.samples[37] = cplx{0.7, -0.2};
    Spectrum s = forward_transform(f);
    const double expected = std::abs(f.samples[37]) * g.dt;
    for (std::size_t k = 0; k < s.samples.size(); ++k)
        CHECK(std::abs(s.samples[k]) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("forward transform matches the direct kernel sum")
{
    TimeGrid g(-20.0, 0.04, 1024);
    FieldEnvelope f = make_gaussian_pulse(1.3, 2.0, cplx{0.8, 0.3}, g);
    Spectrum s = forward_transform(f);
    for (std::size_t k : {100u, 400u, 512u, 700u, 1000u}) {
        const cplx oracle = direct_transform(f, s.grid.omega(k));
        CHECK(std::abs(s.samples[k] - oracle) < 1e-10 * (1.0 + std::abs(oracle)));
    }
}

TEST_CASE("gaussian transforms to a gaussian of reciprocal width")
{
    // A = exp(-t^2/(2w^2)) -> A~ = w sqrt(2 pi) exp(-w^2 omega^2 / 2)
    const double w = 2.0;
    TimeGrid g(-204.8, 0.1, 4096);
    FieldEnvelope f = make_gaussian_pulse(0.0, w, cplx{1.0, 0.0}, g);
    Spectrum s = forward_transform(f);
    const double peak = w * std::sqrt(2.0 * kPi);
    CHECK(std::abs(s.samples[s.grid.index_of(0.0)]) ==
          doctest::Approx(peak).epsilon(1e-6));
    for (double om : {0.1, 0.25, 0.5, 1.0}) {
        const double om_bin = s.grid.omega(s.grid.index_of(om));
        const double expected = peak * std::exp(-0.5 * w * w * om_bin * om_bin);
        CHECK(std::abs(s.samples[s.grid.index_of(om)]) ==
              doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("round trip is the identity across grid sizes")
{
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (std::size_t n : {256u, 1024u, 4096u, 16384u, 65536u}) {
        TimeGrid g(-3.0, 0.01, n);
        FieldEnvelope f(g);
        for (auto& v : f.samples)
            v = cplx(dist(rng), dist(rng));
        FieldEnvelope back = inverse_transform(forward_transform(f));
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            num += std::norm(back.samples[j] - f.samples[j]);
            den += std::norm(f.samples[j]);
        }
        CHECK(std::sqrt(num / den) < 1e-12);
    }
}

TEST_CASE("parseval identity on random envelopes")
{
    std::mt19937_64 rng(777);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        TimeGrid g(-1.0, 0.02, 2048);
        FieldEnvelope f(g);
        for (auto& v : f.samples)
            v = cplx(dist(rng), dist(rng));
        Spectrum s = forward_transform(f);
        const double lhs = s.energy();
        const double rhs = 2.0 * kPi * f.energy();
        CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
    }
}

TEST_CASE("transform_at agrees with the binned transform on bin frequencies")
{
    TimeGrid g(-25.0, 0.05, 1024);
    FieldEnvelope f = make_gaussian_pulse(-2.0, 1.7, cplx{0.3, 0.9}, g);
    Spectrum s = forward_transform(f);
    for (std::size_t k : {10u, 255u, 512u, 800u}) {
        const cplx v = transform_at(f, s.grid.omega(k));
        CHECK(std::abs(v - s.samples[k]) < 1e-10);
    }
}
