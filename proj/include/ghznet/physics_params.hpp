// Copyright 2026 The ghznet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ghznet/error.hpp"

/// Physical constants and the principal-quantum-number dependent
/// extrapolations for Yb Rydberg levels.
///
/// Everything is stored in SI units. Atomic-unit coefficients are converted
/// exactly once, when a RydbergConfig is built.
///
/// Notes on validity (not modelled):
///  - reaching the extrapolated Rydberg lifetimes near n~100 requires a
///    cooled black-body environment;
///  - photoionization in the trapping field is an order of magnitude below
///    the spontaneous rate and is not included in gamma.
namespace ghznet {

struct PhysicalConstants {
    double hbar = 1.054571817e-34;        ///< J s
    double atomic_unit_C6 = 9.573e-80;    ///< J m^6 (E_h a_0^6)
    double atomic_unit_C3 = 6.460e-49;    ///< J m^3 (E_h a_0^3)
    double speed_of_light = 299792458.0;  ///< m/s

    void validate() const {
        detail::require(hbar > 0 && atomic_unit_C6 > 0 && atomic_unit_C3 > 0 && speed_of_light > 0,
                        "physical constants must be strictly positive");
    }
};

/// Rydberg loss rate gamma = gamma_1 = gamma_2 in 1/s.
inline double rydberg_gamma(double n_tilde) {
    detail::require(n_tilde >= 5.0, "rydberg_gamma: n_tilde must be >= 5 (denominator n-4.279 must be positive)");
    const double d = n_tilde - 4.279;
    return 8.403e8 / (d * d * d);
}

/// |C11^(6)| in atomic units; zero at the prefactor root n = 0.116/0.0339.
inline double c11_coefficient_au(double n_tilde) {
    const double prefactor = -0.116 + 0.0339 * n_tilde;
    detail::require(prefactor >= 0.0 && n_tilde > 0.0,
                    "c11_coefficient: n_tilde below the positivity threshold of the prefactor (~3.422)");
    return prefactor * std::pow(n_tilde, 11);
}

/// van der Waals r1-r1 coefficient in J m^6.
inline double c11_coefficient(double n_tilde, const PhysicalConstants &pc = {}) {
    return c11_coefficient_au(n_tilde) * pc.atomic_unit_C6;
}

inline double c12_coefficient_au(double n_tilde) {
    detail::require(n_tilde >= 1.0, "c12_coefficient: n_tilde must be >= 1");
    return (0.149 + 0.00077 * n_tilde) * std::pow(n_tilde, 4);
}

/// Dipole-dipole r1-r2 coefficient in J m^3.
inline double c12_coefficient(double n_tilde, const PhysicalConstants &pc = {}) {
    return c12_coefficient_au(n_tilde) * pc.atomic_unit_C3;
}

/// Rydberg level data for one principal quantum number.
///
/// n_tilde is real-valued so that smooth optimizers can probe between
/// integers; the command line restricts it to integers.
struct RydbergConfig {
    double n_tilde = 0;
    double gamma = 0; ///< 1/s
    double c11_6 = 0; ///< J m^6
    double c12_3 = 0; ///< J m^3

    static constexpr double min_n_tilde = 50.0;
    static constexpr double max_n_tilde = 150.0;

    static RydbergConfig for_level(double n_tilde, const PhysicalConstants &pc = {}) {
        detail::require(n_tilde >= min_n_tilde && n_tilde <= max_n_tilde,
                        "RydbergConfig: n_tilde must lie in [50, 150], got " + std::to_string(n_tilde));
        return RydbergConfig{n_tilde, rydberg_gamma(n_tilde), c11_coefficient(n_tilde, pc),
                             c12_coefficient(n_tilde, pc)};
    }
};

/// Rates and geometry of the lower (non-Rydberg) levels and the photonic
/// channel.
struct LowerLevelRates {
    double gamma_s = 0.069;                               ///< 3P2 shelving decay, 1/s
    double gamma_e = 1.8e8;                               ///< 1P1 decay, 1/s
    double gamma_dark = 10.0;                             ///< detector dark counts, 1/s
    double link_length_L = 1.0e4;                         ///< m
    double lattice_a = 275.75e-9;                         ///< m
    double k_e = 2.0 * std::numbers::pi / 1.4e-6;         ///< 1/m
    double finesse_f = 100.0;

    static constexpr double max_link_length = 1.0e4;

    /// Throws on non-physical values; returns advisory warnings.
    ///
    /// gamma_dark and link_length_L may be zero (ideal detectors, co-located
    /// stations); everything else must be strictly positive.
    std::vector<std::string> validate() const {
        detail::require(gamma_s > 0 && gamma_e > 0 && lattice_a > 0 && k_e > 0 && finesse_f > 0,
                        "lower-level rates, lattice constant, k_e and finesse must be strictly positive");
        detail::require(gamma_dark >= 0 && link_length_L >= 0, "gamma_dark and link_length_L must be non-negative");
        std::vector<std::string> warnings;
        if (link_length_L > max_link_length) {
            warnings.emplace_back("link_length_L exceeds 10 km; fibre loss is not modelled");
        }
        return warnings;
    }
};

struct InteractionStrengths {
    double delta11 = 0; ///< C11 / (hbar a^6 gamma)
    double delta12 = 0; ///< C12 / (hbar a^3 gamma)
};

inline InteractionStrengths dimensionless_deltas(double c11_6, double c12_3, double hbar, double a, double gamma) {
    detail::require(a > 0, "dimensionless_deltas: lattice constant must be positive");
    detail::require(hbar > 0 && gamma > 0, "dimensionless_deltas: hbar and gamma must be positive");
    const double a3 = a * a * a;
    return {c11_6 / (hbar * a3 * a3 * gamma), c12_3 / (hbar * a3 * gamma)};
}

inline InteractionStrengths dimensionless_deltas(const RydbergConfig &cfg, double a, const PhysicalConstants &pc = {}) {
    return dimensionless_deltas(cfg.c11_6, cfg.c12_3, pc.hbar, a, cfg.gamma);
}

} // namespace ghznet
