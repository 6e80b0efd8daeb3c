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

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "ghznet/config.hpp"
#include "ghznet/error.hpp"
#include "ghznet/geometry.hpp"
#include "ghznet/physics_params.hpp"

/// Per-atom error budget of the entangling protocol.
///
/// Local terms (ensemble GHZ growth) are divided by the ensemble size n;
/// non-local terms (one photonic link per clock) are divided by the number
/// of atoms per clock. Geometry prefactors come from the pair averages
/// I and J: 0.02818 = I_2D / (4 pi^3), 0.06079 = 9 I_3D / (64 pi^2), etc.
namespace ghznet {

enum class Variant { photonic, messenger };

inline std::string_view to_string(Variant v) { return v == Variant::photonic ? "photonic" : "messenger"; }

inline Variant parse_variant(std::string_view text) {
    if (text == "photonic") {
        return Variant::photonic;
    }
    if (text == "messenger") {
        return Variant::messenger;
    }
    throw InvalidInput("variant must be photonic or messenger, got '" + std::string(text) + "'");
}

struct ErrorInputs {
    int n = 1;            ///< atoms per ensemble
    double omega = 1e5;   ///< Rabi frequency in units of gamma
    Dim dim = Dim::three_d;
    RydbergConfig rydberg;
    LowerLevelRates rates;
    PhysicalConstants constants;
    double atoms_per_clock = 2500.0;
    Variant variant = Variant::photonic;

    static ErrorInputs make(double n_tilde, double omega, int n, Dim dim, const ModelParameters &params = {},
                            Variant variant = Variant::photonic) {
        ErrorInputs in;
        in.n = n;
        in.omega = omega;
        in.dim = dim;
        in.rydberg = RydbergConfig::for_level(n_tilde, params.constants);
        in.rates = params.rates;
        in.constants = params.constants;
        in.atoms_per_clock = params.atoms_per_clock;
        in.variant = variant;
        in.validate();
        return in;
    }

    void validate() const {
        detail::require(n >= 1, "ErrorInputs: n must be >= 1");
        detail::require(omega > 0 && std::isfinite(omega), "ErrorInputs: omega must be positive");
        detail::require(atoms_per_clock >= 1, "ErrorInputs: atoms_per_clock must be >= 1");
        rates.validate();
        constants.validate();
    }

    InteractionStrengths deltas() const { return dimensionless_deltas(rydberg, rates.lattice_a, constants); }
};

struct ErrorBudget {
    std::array<double, 7> e{}; ///< e1..e7 at indices 0..6
    double eps_local = 0;      ///< un-normalised local error of one ensemble
    double eps_nonlocal = 0;   ///< un-normalised error of one photonic link
    double E = 0;              ///< error per atom
    double tau_pulse = 0;      ///< s
    double p_double = 0;

    double share(int i) const { return E > 0 ? e.at(static_cast<std::size_t>(i)) / E : 0.0; }
};

inline constexpr std::array<std::string_view, 7> error_term_names = {
    "imperfect blockade", "Rydberg decay",   "self-blockade",    "r2 decay (non-local)",
    "photon detection",   "memory error",    "photon collection",
};

inline double e1_imperfect_blockade(const ErrorInputs &in) {
    const double n = in.n;
    const double ratio = in.omega / in.deltas().delta12;
    const double geom = in.dim == Dim::two_d ? 0.02818 * n * n * n * n : 0.06079 * n * n * n;
    return ratio * ratio * geom;
}

inline double e2_rydberg_decay(const ErrorInputs &in) {
    return 6.0 * std::numbers::pi / (std::sqrt(static_cast<double>(in.n)) * in.omega);
}

inline double e3_self_blockade(const ErrorInputs &in) {
    const double n = in.n;
    const double ratio = in.omega / in.deltas().delta11;
    const double geom = in.dim == Dim::two_d ? 0.01594 * std::pow(n, 7) : 0.05544 * std::pow(n, 5);
    return ratio * ratio * geom;
}

/// Width of the smooth photon-step pulse, saturating tau <= sqrt(2)/Delta_12.
inline double pulse_width_tau(const ErrorInputs &in) {
    const double n = in.n;
    const double a = in.rates.lattice_a;
    const double unit = in.constants.hbar * a * a * a / in.rydberg.c12_3;
    return in.dim == Dim::two_d ? 2.0 * std::pow(n, 1.5) * unit : 2.7 * n * unit;
}

/// Smallest r1-r2 shift in the ensemble, C12 / (hbar (2R)^3), in rad/s.
inline double minimal_cross_shift(const ErrorInputs &in) {
    const double R = LatticeGeometry{in.dim, in.n, in.rates.lattice_a}.radius();
    const double d = 2 * R;
    return in.rydberg.c12_3 / (in.constants.hbar * d * d * d);
}

/// Probability that a Gaussian pi pulse of width tau excites r1 despite the
/// r2 blockade: (pi^2/4) exp(-(Delta_12 tau)^2 / 2).
inline double p_double_excitation(double delta12_min, double tau) {
    const double x = delta12_min * tau;
    return std::numbers::pi * std::numbers::pi / 4.0 * std::exp(-0.5 * x * x);
}

inline double e4_r2_decay_nonlocal(const ErrorInputs &in) {
    const double n = in.n;
    const double geom = in.dim == Dim::two_d ? 8.0 * std::pow(n, 1.5) : 10.8 * n;
    return geom / (in.deltas().delta12 * in.atoms_per_clock);
}

/// Dark counts during the detector open time T = 5 / (n gamma_e), four pulses per link.
inline double e5_dark_counts(const ErrorInputs &in) {
    return in.rates.gamma_dark * 20.0 / (in.n * in.rates.gamma_e) / in.atoms_per_clock;
}

/// Decay of the s memory during one round trip 2L/c, four times per link.
inline double e6_memory_loss(const ErrorInputs &in) {
    return 8.0 * in.rates.link_length_L * in.rates.gamma_s / in.constants.speed_of_light / in.atoms_per_clock;
}

inline double e7_photon_collection(const ErrorInputs &in) {
    const double ka = in.rates.k_e * in.rates.lattice_a;
    const double f = in.rates.finesse_f;
    if (in.dim == Dim::two_d) {
        return ka * ka / (3.0 * std::numbers::pi * f) / in.atoms_per_clock;
    }
    const double shape = std::pow(3.0 / (4.0 * std::numbers::pi), 2.0 / 3.0);
    return ka * ka / (3.0 * std::cbrt(static_cast<double>(in.n)) * f) * shape / in.atoms_per_clock;
}

/// All seven terms and their aggregates. The messenger variant has no
/// photonic link, so e4..e7 are zero and E = e1 + e2 + e3.
inline ErrorBudget total_error_per_atom(const ErrorInputs &in) {
    in.validate();
    ErrorBudget b;
    b.e[0] = e1_imperfect_blockade(in);
    b.e[1] = e2_rydberg_decay(in);
    b.e[2] = e3_self_blockade(in);
    b.tau_pulse = pulse_width_tau(in);
    b.p_double = p_double_excitation(minimal_cross_shift(in), b.tau_pulse);
    if (in.variant == Variant::photonic) {
        b.e[3] = e4_r2_decay_nonlocal(in);
        b.e[4] = e5_dark_counts(in);
        b.e[5] = e6_memory_loss(in);
        b.e[6] = e7_photon_collection(in);
    }
    b.eps_local = in.n * (b.e[0] + b.e[1] + b.e[2]);
    b.eps_nonlocal = in.atoms_per_clock * (b.e[3] + b.e[4] + b.e[5] + b.e[6]);
    b.E = 0;
    for (double t : b.e) {
        b.E += t;
    }
    return b;
}

struct ClockErrorSplit {
    double eps_tot = 0;         ///< (K-1) eps_nonlocal + K M eps_local
    double N_times_E = 0;       ///< the linearised N * E estimate
    double relative_difference = 0;
    bool within_bound = true;   ///< relative_difference <= 1/K
};

inline ClockErrorSplit clock_error_split(const ErrorBudget &budget, int K, int M, int n) {
    detail::require(K >= 1 && M >= 1 && n >= 1, "clock_error_split: K, M, n must be >= 1");
    ClockErrorSplit s;
    s.eps_tot = (K - 1) * budget.eps_nonlocal + static_cast<double>(K) * M * budget.eps_local;
    s.N_times_E = static_cast<double>(K) * M * n * budget.E;
    s.relative_difference = s.eps_tot > 0 ? std::abs(s.eps_tot - s.N_times_E) / s.eps_tot : 0.0;
    s.within_bound = s.relative_difference <= 1.0 / K;
    return s;
}

} // namespace ghznet
