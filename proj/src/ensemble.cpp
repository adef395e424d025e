#include "ramanecho/ensemble.hpp"

#include "ramanecho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ramanecho {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
} // namespace

Distribution Distribution::gaussian(double width, double center,
                                    double support_half_width)
{
    if (!(width > 0.0) || !(support_half_width > 0.0))
        throw UnnormalizableDistribution("gaussian: width and support must be positive");
    Distribution d;
    d.kind = Kind::Gaussian;
    d.width = width;
    d.center = center;
    d.support_min = center - support_half_width * width;
    d.support_max = center + support_half_width * width;
    d.normalize();
    return d;
}

Distribution Distribution::lorentzian(double hwhm, double center, double support_min,
                                      double support_max)
{
    if (!(hwhm > 0.0) || !(support_max > support_min))
        throw UnnormalizableDistribution("lorentzian: bad width or support");
    Distribution d;
    d.kind = Kind::LorentzianTruncated;
    d.width = hwhm;
    d.center = center;
    d.support_min = support_min;
    d.support_max = support_max;
    d.normalize();
    return d;
}

Distribution Distribution::tabulated(std::vector<double> x, std::vector<double> y)
{
    if (x.size() != y.size() || x.empty())
        throw UnnormalizableDistribution("tabulated: need matching non-empty columns");
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i + 1] > x[i]))
            throw UnnormalizableDistribution("tabulated: abscissae must increase");
    for (double v : y)
        if (v < 0.0 || !std::isfinite(v))
            throw UnnormalizableDistribution("tabulated: G(Delta) must be finite and >= 0");
    Distribution d;
    d.kind = Kind::Tabulated;
    d.table_x = std::move(x);
    d.table_y = std::move(y);
    d.support_min = d.table_x.front();
    d.support_max = d.table_x.back();
    d.center = 0.5 * (d.support_min + d.support_max);
    d.width = std::max(1e-300, 0.25 * (d.support_max - d.support_min));
    d.normalize();
    return d;
}

Distribution Distribution::tabulated_from_text(const std::string& text)
{
    std::vector<double> x, y;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream row(line);
        double a, b;
        if (row >> a >> b) {
            x.push_back(a);
            y.push_back(b);
        }
    }
    return tabulated(std::move(x), std::move(y));
}

double Distribution::raw_density(double delta) const
{
    if (delta < support_min || delta > support_max)
        return 0.0;
    switch (kind) {
    case Kind::Gaussian: {
        const double u = (delta - center) / width;
        return std::exp(-0.5 * u * u);
    }
    case Kind::LorentzianTruncated: {
        const double u = delta - center;
        return width / (u * u + width * width);
    }
    case Kind::Tabulated: {
        const auto it = std::upper_bound(table_x.begin(), table_x.end(), delta);
        if (it == table_x.begin())
            return table_y.front();
        if (it == table_x.end())
            return table_y.back();
        const std::size_t i = static_cast<std::size_t>(it - table_x.begin());
        const double t = (delta - table_x[i - 1]) / (table_x[i] - table_x[i - 1]);
        return (1.0 - t) * table_y[i - 1] + t * table_y[i];
    }
    }
    return 0.0;
}

void Distribution::normalize()
{
    double integral = 0.0;
    switch (kind) {
    case Kind::Gaussian: {
        const double a = (support_min - center) / (width * kSqrt2);
        const double b = (support_max - center) / (width * kSqrt2);
        integral = width * std::sqrt(0.5 * kPi) * (std::erf(b) - std::erf(a));
        break;
    }
    case Kind::LorentzianTruncated: {
        integral = std::atan((support_max - center) / width) -
                   std::atan((support_min - center) / width);
        break;
    }
    case Kind::Tabulated: {
        for (std::size_t i = 0; i + 1 < table_x.size(); ++i)
            integral += 0.5 * (table_y[i] + table_y[i + 1]) * (table_x[i + 1] - table_x[i]);
        if (table_x.size() == 1)
            integral = 1.0; // degenerate spike, treated as a point mass
        break;
    }
    }
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw UnnormalizableDistribution("distribution has non-positive integral");
    norm_ = integral;
}

double Distribution::density(double delta) const { return raw_density(delta) / norm_; }

double EnsembleGrid::weight_sum() const
{
    double s = 0.0;
    for (double w : weights)
        s += w;
    return s;
}

double EnsembleGrid::mean() const
{
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        s += weights[k] * nodes[k];
    return s;
}

double EnsembleGrid::second_moment() const
{
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        s += weights[k] * nodes[k] * nodes[k];
    return s;
}

void gauss_legendre(std::size_t m, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    const std::size_t half = (m + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Newton from the Chebyshev-like initial guess
        double z = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15)
                break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[m - 1 - i] = w[i];
    }
}

EnsembleGrid make_ensemble(const Distribution& d, std::size_t m)
{
    if (m < 16)
        throw UnnormalizableDistribution("make_ensemble: need at least 16 nodes");

    EnsembleGrid e;
    e.dist = d;

    if (d.kind == Distribution::Kind::Tabulated && d.table_x.size() == 1) {
        // point mass
        e.nodes = {d.table_x.front()};
        e.weights = {1.0};
        return e;
    }
    if (d.kind == Distribution::Kind::Tabulated &&
        d.support_max - d.support_min < 1e-12) {
        e.nodes = {0.5 * (d.support_min + d.support_max)};
        e.weights = {1.0};
        return e;
    }

    if (d.kind == Distribution::Kind::Tabulated) {
        // composite 2-point panels per table segment: exact for the
        // piecewise-linear density times polynomials up to cubic
        std::vector<double> gx, gw;
        gauss_legendre(2, gx, gw);
        const double total = d.support_max - d.support_min;
        for (std::size_t i = 0; i + 1 < d.table_x.size(); ++i) {
            const double a = d.table_x[i], b = d.table_x[i + 1];
            const auto panels = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil((b - a) / total *
                                                      static_cast<double>(m) / 2.0)));
            for (std::size_t pnl = 0; pnl < panels; ++pnl) {
                const double pa = a + (b - a) * static_cast<double>(pnl) / panels;
                const double pb = a + (b - a) * static_cast<double>(pnl + 1) / panels;
                for (std::size_t q = 0; q < 2; ++q) {
                    const double node = 0.5 * (pa + pb) + 0.5 * (pb - pa) * gx[q];
                    e.nodes.push_back(node);
                    e.weights.push_back(0.5 * (pb - pa) * gw[q] * d.density(node));
                }
            }
        }
        return e;
    }

    std::vector<double> gx, gw;
    gauss_legendre(m, gx, gw);
    e.nodes.resize(m);
    e.weights.resize(m);
    const double a = d.support_min, b = d.support_max;
    for (std::size_t k = 0; k < m; ++k) {
        e.nodes[k] = 0.5 * (a + b) + 0.5 * (b - a) * gx[k];
        e.weights[k] = 0.5 * (b - a) * gw[k] * d.density(e.nodes[k]);
    }
    return e;
}

cplx chi(const EnsembleGrid& e, double delta1)
{
    if (-delta1 >= e.dist.support_min && -delta1 <= e.dist.support_max)
        throw PoleInSupport("chi: support contains Delta = -Delta_1");
    cplx s{};
    for (std::size_t k = 0; k < e.count(); ++k) {
        const double den = delta1 + e.nodes[k];
        if (den == 0.0)
            throw PoleInSupport("chi: node at Delta = -Delta_1");
        s += e.weights[k] / den;
    }
    return s;
}

double stark_structure(double delta, double delta1)
{
    return 1.0 / delta1 - 1.0 / (delta1 + delta);
}

double two_photon_shift(double delta, const RamanMap& m)
{
    const double den = m.delta1 + delta;
    if (den == 0.0)
        throw PoleHit("two_photon_shift: Delta_1 + Delta = 0");
    return m.delta21 - m.omega1 * m.omega1 / den;
}

double rephase_shift(double delta, double omega_r, const RamanMap& m)
{
    const double den = m.delta1 + delta;
    if (den == 0.0)
        throw PoleHit("rephase_shift: Delta_1 + Delta = 0");
    return m.delta21 + omega_r * omega_r / den;
}

double detuning_of_frequency(double omega, const RamanMap& m)
{
    const double den = m.delta21 - omega;
    if (den == 0.0)
        throw AtAsymptote("detuning_of_frequency: omega = Delta_21");
    return m.omega1 * m.omega1 / den - m.delta1;
}

} // namespace ramanecho
