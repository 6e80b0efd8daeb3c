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
#include <optional>
#include <vector>

#include "ghznet/error.hpp"
#include "ghznet/geometry.hpp"

/// Parity readout statistics, Fisher information and clock stability of a
/// noisy N-atom GHZ state.
///
/// The noisy state is modelled as c |GHZ_phi><GHZ_phi| + (1 - c) 1/2^N.
namespace ghznet {

struct GhzMeasurementModel {
    int N = 1;
    double contrast_c = 1.0;
    double fidelity_F = 1.0;

    static GhzMeasurementModel from_contrast(int N, double c) {
        detail::require(N >= 1, "GhzMeasurementModel: N must be >= 1");
        detail::require(c >= 0.0 && c <= 1.0, "GhzMeasurementModel: contrast must lie in [0, 1]");
        return {N, c, (1.0 + c) / 2.0};
    }

    static GhzMeasurementModel from_fidelity(int N, double F) {
        detail::require(F >= 0.5 && F <= 1.0, "GhzMeasurementModel: fidelity must lie in [1/2, 1]");
        return from_contrast(N, 2.0 * F - 1.0);
    }
};

/// P(p | phi) for the parity p of all N qubits.
inline double parity_probability(int p, double phi, const GhzMeasurementModel &m) {
    detail::require(p == 0 || p == 1, "parity_probability: parity must be 0 or 1");
    const double sign = p == 0 ? 1.0 : -1.0;
    return 0.5 * (1.0 + m.contrast_c * sign * std::cos(m.N * phi));
}

inline constexpr int max_enumerated_qubits = 20;

/// Probability of one specific outcome string q (0/1 per qubit):
/// c [1 + (-1)^|q| cos(N phi)] / 2^N + (1 - c) / 2^N.
inline double bitstring_probability(const std::vector<int> &q, double phi, const GhzMeasurementModel &m) {
    detail::require(static_cast<int>(q.size()) == m.N, "bitstring_probability: length must equal N");
    detail::require(m.N <= max_enumerated_qubits, "bitstring_probability: N > 20 is not supported");
    int parity = 0;
    for (int b : q) {
        detail::require(b == 0 || b == 1, "bitstring_probability: entries must be 0 or 1");
        parity ^= b;
    }
    const double inv = std::ldexp(1.0, -m.N);
    const double sign = parity == 0 ? 1.0 : -1.0;
    const double c = m.contrast_c;
    return c * (1.0 + sign * std::cos(m.N * phi)) * inv + (1.0 - c) * inv;
}

namespace detail {

/// sin^2 x / (1/c^2 - cos^2 x), with the c = 1 limit taken exactly.
inline double fisher_kernel(double x, double c) {
    if (c <= 0.0) {
        return 0.0;
    }
    const double s = std::sin(x);
    if (c >= 1.0) {
        return 1.0;
    }
    const double co = std::cos(x);
    return s * s / (1.0 / (c * c) - co * co);
}

} // namespace detail

inline double fisher_information(double phi, const GhzMeasurementModel &m) {
    const double N2 = static_cast<double>(m.N) * m.N;
    return N2 * detail::fisher_kernel(m.N * phi, m.contrast_c);
}

/// Phase average of the Fisher information over one period, by quadrature.
/// The integrand is even and symmetric about pi/2, so [0, pi/2] suffices.
inline double average_fisher(const GhzMeasurementModel &m) {
    const double N2 = static_cast<double>(m.N) * m.N;
    const double c = m.contrast_c;
    if (c <= 0.0) {
        return 0.0;
    }
    if (c >= 1.0) {
        return N2;
    }
    auto f = [c](double x) { return detail::fisher_kernel(x, c); };
    auto q = detail::adaptive_integrate(f, 0.0, std::numbers::pi / 2, 1e-10, "average_fisher");
    return N2 * q.value * 2.0 / std::numbers::pi;
}

inline constexpr double fisher_branch_crossover = 0.7;

/// Two-branch approximation of average_fisher / N^2: c^2/2 below the
/// crossover, 1 - sqrt(2(1 - c)) above it.
inline double average_fisher_approx_normalized(double c) {
    detail::require(c >= 0.0 && c <= 1.0, "average_fisher_approx: contrast must lie in [0, 1]");
    if (c <= fisher_branch_crossover) {
        return c * c / 2.0;
    }
    return 1.0 - std::sqrt(2.0 * (1.0 - c));
}

inline double average_fisher_approx(const GhzMeasurementModel &m) {
    return static_cast<double>(m.N) * m.N * average_fisher_approx_normalized(m.contrast_c);
}

/// Phase uncertainty from nu repetitions, assuming the Cramer-Rao bound is saturated.
inline double cramer_rao_phase_error(const GhzMeasurementModel &m, double nu) {
    detail::require(nu > 0, "cramer_rao_phase_error: repetitions must be positive");
    const double F = average_fisher(m);
    if (F <= 0) {
        throw ComputationError("cramer_rao_phase_error: Fisher information vanishes");
    }
    return 1.0 / std::sqrt(nu * F);
}

/// Allan deviation of an N-atom GHZ clock with contrast c. Natural logarithm.
inline double allan_deviation_entangled(int N, const GhzMeasurementModel &m, double omega0, double tau) {
    detail::require(N >= 2, "allan_deviation_entangled: N must be >= 2");
    detail::require(tau > 0 && omega0 > 0, "allan_deviation_entangled: omega0 and tau must be positive");
    detail::require(m.contrast_c > 0, "allan_deviation_entangled: contrast must be positive");
    const double n = N;
    return 1.0 / (m.contrast_c * omega0 * tau) * (8.0 / std::numbers::pi) * std::sqrt(std::log(n)) / n;
}

/// Optional validity check tau < 1 / (gamma_at N); gamma_at is user supplied.
inline bool entangled_interrogation_valid(int N, double tau, double gamma_at) {
    detail::require(gamma_at > 0, "gamma_at must be positive");
    return tau < 1.0 / (gamma_at * N);
}

inline double allan_deviation_unentangled(int N, double omega0, double tau) {
    detail::require(N >= 1, "allan_deviation_unentangled: N must be >= 1");
    detail::require(tau > 0 && omega0 > 0, "allan_deviation_unentangled: omega0 and tau must be positive");
    return 1.0 / (omega0 * tau * std::sqrt(static_cast<double>(N)));
}

/// Stability gain of the entangled network over N independent atoms,
/// with contrast c = exp(-E N). N is real so that it can be evaluated
/// between integers.
inline double gain(double N, double E) {
    detail::require(N >= 2 && E >= 0, "gain: requires N >= 2 and E >= 0");
    return std::exp(-E * N) * (std::numbers::pi / 8.0) * std::sqrt(N / std::log(N));
}

inline double fidelity_from_error(double N, double E) { return (1.0 + std::exp(-E * N)) / 2.0; }

struct StabilityReport {
    double sigma_ent = 0;
    double sigma_nonent = 0;
    double gain_G = 0;
    double omega0 = 1;
    double tau_avg = 1;
};

/// Both Allan deviations at equal (N, omega0, tau) and their ratio.
inline StabilityReport stability_report(const GhzMeasurementModel &m, double omega0, double tau) {
    StabilityReport r;
    r.omega0 = omega0;
    r.tau_avg = tau;
    r.sigma_ent = allan_deviation_entangled(m.N, m, omega0, tau);
    r.sigma_nonent = allan_deviation_unentangled(m.N, omega0, tau);
    r.gain_G = r.sigma_nonent / r.sigma_ent;
    return r;
}

} // namespace ghznet
