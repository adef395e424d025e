#ifndef RAMANECHO_ENSEMBLE_HPP
#define RAMANECHO_ENSEMBLE_HPP

#include "ramanecho/grids.hpp"

#include <string>
#include <vector>

namespace ramanecho {

// Inhomogeneous detuning distribution G(Delta) on the optical transition,
// normalized to 1 over its truncated support. Width is the frequency unit
// of the whole toolkit (normalized units).
struct Distribution {
    enum class Kind { Gaussian, LorentzianTruncated, Tabulated };

    Kind kind = Kind::Gaussian;
    double width = 1.0;  // sigma (gaussian) or HWHM (lorentzian)
    double center = 0.0;
    double support_min = -6.0;
    double support_max = 6.0;
    // tabulated kind only: sorted sample points and (unnormalized) values
    std::vector<double> table_x, table_y;

    static Distribution gaussian(double width = 1.0, double center = 0.0,
                                 double support_half_width = 6.0);
    static Distribution lorentzian(double hwhm, double center, double support_min,
                                   double support_max);
    static Distribution tabulated(std::vector<double> x, std::vector<double> y);
    // two-column text (Delta, G); '#' comments and trailing newline tolerated
    static Distribution tabulated_from_text(const std::string& text);

    double density(double delta) const; // normalized G(delta)

private:
    double norm_ = 1.0;
    double raw_density(double delta) const;
    void normalize();
};

// Quadrature discretization of <...> = int dDelta G(Delta) ...
// Weights carry G, so sum w_k f(Delta_k) approximates the ensemble average.
struct EnsembleGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    Distribution dist; // kept for continuum quadratures (susceptibility kernel)

    std::size_t count() const { return nodes.size(); }
    double weight_sum() const;
    double mean() const;          // <Delta>
    double second_moment() const; // <Delta^2>
};

// Physical map parameters of the Raman transition: control detuning Delta_1,
// two-photon offset Delta_21 and write amplitude Omega_1.
struct RamanMap {
    double delta1 = 20.0;
    double delta21 = 1.8;
    double omega1 = 6.0;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(std::size_t m, std::vector<double>& x, std::vector<double>& w);

EnsembleGrid make_ensemble(const Distribution& d, std::size_t m);

// chi = <1/(Delta_1 + Delta)> over the discrete ensemble.
cplx chi(const EnsembleGrid& e, double delta1);

// f_1(Delta) = 1/Delta_1 - 1/(Delta_1 + Delta); zero at Delta = 0.
double stark_structure(double delta, double delta1);

// Two-photon shift while the write control is on:
// deltaomega_1(Delta) = Delta_21 - |Omega_1|^2/(Delta_1 + Delta).
double two_photon_shift(double delta, const RamanMap& m);

// Shift under the rephasing control: Delta_21 + |Omega_R|^2/(Delta_1 + Delta).
// Note the opposite sign of the Stark term versus two_photon_shift.
double rephase_shift(double delta, double omega_r, const RamanMap& m);

// Inverse of two_photon_shift: Delta(omega) = |Omega_1|^2/(Delta_21 - omega) - Delta_1.
double detuning_of_frequency(double omega, const RamanMap& m);

} // namespace ramanecho

#endif
