#pragma once

#include <cmath>

#include "cvef/common.hpp"

namespace cvef {

/// Physical constants of the model together with the power-law pressure
/// P(rho) = A rho^g.  The viscosities must satisfy the strong ellipticity
/// conditions mu > 0, 3 lambda + 2 mu > 0 (which force lambda + mu > mu/3 > 0),
/// the elasticity coefficient kappa must be positive, and P'(1) = A g > 0.
struct SimParams {
    double mu = 1.0;            ///< shear viscosity
    double lambda = 0.5;        ///< bulk viscosity
    double kappa = 1.0;         ///< elasticity coefficient
    double pressure_amp = 1.0;  ///< A
    double pressure_exp = 1.4;  ///< g (default gives P'(1) = 1.4)

    double p_prime_1() const { return pressure_amp * pressure_exp; }

    /// Long-wave phase speed of the compressible branch, sqrt(P'(1) + kappa).
    double sound_speed() const { return std::sqrt(p_prime_1() + kappa); }
    /// Long-wave phase speed of the shear branch, sqrt(kappa).
    double shear_speed() const { return std::sqrt(kappa); }

    // Per-block coefficients of the two Hodge-reduced mode systems.
    double visc_compressible() const { return lambda + mu; }
    double visc_solenoidal() const { return mu; }
    double stiff_compressible() const { return p_prime_1() + kappa; }
    double stiff_solenoidal() const { return kappa; }

    double pressure(double rho) const { return pressure_amp * std::pow(rho, pressure_exp); }
    double pressure_d1(double rho) const {
        return pressure_amp * pressure_exp * std::pow(rho, pressure_exp - 1.0);
    }
    double pressure_d2(double rho) const {
        return pressure_amp * pressure_exp * (pressure_exp - 1.0) * std::pow(rho, pressure_exp - 2.0);
    }

    void validate() const {
        if (!(mu > 0.0) || !(3.0 * lambda + 2.0 * mu > 0.0))
            throw Error(ErrorKind::invalid_argument,
                        "SimParams: need mu > 0 and 3*lambda + 2*mu > 0");
        if (!(kappa > 0.0)) throw Error(ErrorKind::invalid_argument, "SimParams: need kappa > 0");
        if (!(p_prime_1() > 0.0))
            throw Error(ErrorKind::invalid_argument, "SimParams: need P'(1) = A*g > 0");
    }
};

}  // namespace cvef
