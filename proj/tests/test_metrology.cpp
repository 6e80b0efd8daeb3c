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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "ghznet/metrology.hpp"

using namespace ghznet;

namespace {

constexpr double pi = std::numbers::pi;

// Phase average of sin^2 x / (1/c^2 - cos^2 x) in closed form.
double fisher_oracle(double c) { return 1.0 - std::sqrt(1.0 - c * c); }

} // namespace

TEST(parity_probability, reference_points) {
    auto perfect = GhzMeasurementModel::from_contrast(3, 1.0);
    EXPECT_DOUBLE_EQ(parity_probability(0, 0.0, perfect), 1.0);
    auto mixed = GhzMeasurementModel::from_contrast(3, 0.0);
    EXPECT_DOUBLE_EQ(parity_probability(0, 0.3, mixed), 0.5);
    EXPECT_DOUBLE_EQ(parity_probability(1, 0.3, mixed), 0.5);
    EXPECT_NEAR(parity_probability(0, pi / 8, GhzMeasurementModel::from_contrast(4, 0.8)), 0.5, 1e-15);
    EXPECT_THROW(parity_probability(2, 0.0, perfect), InvalidInput);
}

TEST(measurement_model, contrast_fidelity_relation) {
    auto m = GhzMeasurementModel::from_fidelity(5, 0.82);
    EXPECT_NEAR(m.contrast_c, 0.64, 1e-15);
    EXPECT_THROW(GhzMeasurementModel::from_contrast(5, 1.2), InvalidInput);
    EXPECT_THROW(GhzMeasurementModel::from_fidelity(5, 0.4), InvalidInput);
}

TEST(bitstring_probability, single_qubit) {
    const auto pure = GhzMeasurementModel::from_contrast(1, 1.0);
    EXPECT_DOUBLE_EQ(bitstring_probability({0}, 0.0, pure), 1.0);
    EXPECT_DOUBLE_EQ(bitstring_probability({1}, 0.0, pure), 0.0);
    EXPECT_DOUBLE_EQ(bitstring_probability({1}, 0.0, GhzMeasurementModel::from_contrast(1, 0.0)), 0.5);
}

TEST(bitstring_probability, normalised_and_marginalises_to_parity) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> nd(1, 10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const int N = nd(rng);
        const auto m = GhzMeasurementModel::from_contrast(N, u(rng));
        const double phi = 2 * pi * u(rng);
        double total = 0, even = 0;
        std::vector<int> q(static_cast<std::size_t>(N));
        for (unsigned bits = 0; bits < (1u << N); ++bits) {
            int parity = 0;
            for (int i = 0; i < N; ++i) {
                q[static_cast<std::size_t>(i)] = (bits >> i) & 1;
                parity ^= q[static_cast<std::size_t>(i)];
            }
            const double p = bitstring_probability(q, phi, m);
            total += p;
            if (parity == 0) {
                even += p;
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_NEAR(even, parity_probability(0, phi, m), 1e-12);
    }
    EXPECT_THROW(bitstring_probability(std::vector<int>(21, 0), 0, GhzMeasurementModel::from_contrast(21, 1)),
                 InvalidInput);
}

TEST(fisher_information, reference_points) {
    for (double phi : {0.1, 0.4, 1.3}) {
        EXPECT_NEAR(fisher_information(phi, GhzMeasurementModel::from_contrast(7, 1.0)), 49, 1e-12);
        EXPECT_EQ(fisher_information(phi, GhzMeasurementModel::from_contrast(7, 0.0)), 0.0);
    }
    EXPECT_NEAR(fisher_information(pi / 4, GhzMeasurementModel::from_contrast(2, 0.5)), 1.0, 1e-12);
}

TEST(fisher_information, matches_parity_derivative) {
    // F = sum_p (dP/dphi)^2 / P.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int k = 0; k < 100; ++k) {
        const auto m = GhzMeasurementModel::from_contrast(1 + k % 9, u(rng));
        const double phi = 1.5 * u(rng);
        double F = 0;
        for (int p : {0, 1}) {
            const double sign = p == 0 ? 1 : -1;
            const double dP = -0.5 * m.contrast_c * sign * m.N * std::sin(m.N * phi);
            F += dP * dP / parity_probability(p, phi, m);
        }
        EXPECT_NEAR(fisher_information(phi, m) / F, 1.0, 1e-10);
    }
}

TEST(average_fisher, matches_closed_form) {
    for (int i = 0; i <= 100; ++i) {
        const double c = i / 100.0;
        const auto m = GhzMeasurementModel::from_contrast(3, c);
        EXPECT_NEAR(average_fisher(m) / 9, fisher_oracle(c), 1e-9) << c;
    }
}

TEST(average_fisher, limits_and_branches) {
    EXPECT_NEAR(average_fisher(GhzMeasurementModel::from_contrast(11, 1.0)) / 121, 1.0, 1e-9);
    EXPECT_EQ(average_fisher(GhzMeasurementModel::from_contrast(11, 0.0)), 0.0);
    for (double c : {0.1, 0.3, 0.5}) {
        EXPECT_LT(std::abs(average_fisher(GhzMeasurementModel::from_contrast(4, c)) / 16 / (c * c / 2) - 1), 0.10)
            << c;
    }
    for (double c : {0.85, 0.9, 0.95, 0.99}) {
        EXPECT_LT(std::abs(average_fisher(GhzMeasurementModel::from_contrast(4, c)) / 16 /
                               (1 - std::sqrt(2 * (1 - c))) -
                           1),
                  0.10)
            << c;
    }
    EXPECT_NEAR(average_fisher(GhzMeasurementModel::from_contrast(1, 0.9)), 0.553, 0.553 * 0.1);
}

TEST(average_fisher, depends_only_on_contrast) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double c = u(rng);
        const double ref = average_fisher(GhzMeasurementModel::from_contrast(2, c)) / 4;
        for (int N : {5, 17}) {
            EXPECT_NEAR(average_fisher(GhzMeasurementModel::from_contrast(N, c)) / (N * N), ref, 1e-6);
        }
    }
}

TEST(average_fisher, monotone_and_bounded) {
    double prev = -1;
    for (int i = 0; i <= 200; ++i) {
        const auto m = GhzMeasurementModel::from_contrast(6, i / 200.0);
        const double F = average_fisher(m);
        EXPECT_GT(F, prev);
        EXPECT_LE(F, 36 * (1 + 1e-12));
        prev = F;
    }
}

TEST(approximation, branch_selection) {
    EXPECT_DOUBLE_EQ(average_fisher_approx_normalized(0.5), 0.125);
    EXPECT_DOUBLE_EQ(average_fisher_approx_normalized(0.7), 0.245);
    EXPECT_DOUBLE_EQ(average_fisher_approx_normalized(0.98), 0.8);
    EXPECT_DOUBLE_EQ(average_fisher_approx_normalized(1.0), 1.0);
}

TEST(cramer_rao, scales_with_repetitions) {
    const auto m = GhzMeasurementModel::from_contrast(10, 1.0);
    EXPECT_NEAR(cramer_rao_phase_error(m, 1), 0.1, 1e-10);
    EXPECT_NEAR(cramer_rao_phase_error(m, 4), 0.05, 1e-10);
    EXPECT_THROW(cramer_rao_phase_error(GhzMeasurementModel::from_contrast(10, 0.0), 1), ComputationError);
}

TEST(allan_deviation, entangled_reference_and_scaling) {
    const auto perfect = GhzMeasurementModel::from_contrast(25000, 1.0);
    EXPECT_NEAR(allan_deviation_entangled(25000, perfect, 1, 1) / 3.24e-4, 1.0, 0.01);
    for (int N : {10, 100, 1000}) {
        const double ratio = allan_deviation_entangled(2 * N, perfect, 1, 1) / allan_deviation_entangled(N, perfect, 1, 1);
        EXPECT_NEAR(ratio, 0.5 * std::sqrt(std::log(2.0 * N) / std::log(N)), 1e-14);
    }
    const auto half = GhzMeasurementModel::from_contrast(25000, 0.5);
    EXPECT_NEAR(allan_deviation_entangled(25000, half, 2, 3) / allan_deviation_entangled(25000, perfect, 2, 3), 2.0,
                1e-14);
    EXPECT_TRUE(entangled_interrogation_valid(100, 1e-3, 1.0));
    EXPECT_FALSE(entangled_interrogation_valid(100, 1.0, 1.0));
}

TEST(allan_deviation, unentangled_reference) {
    EXPECT_DOUBLE_EQ(allan_deviation_unentangled(1, 2.0, 3.0), 1.0 / 6);
    EXPECT_NEAR(allan_deviation_unentangled(25000, 1, 1), 6.32e-3, 1e-5);
    EXPECT_NEAR(allan_deviation_unentangled(400, 1, 1) / allan_deviation_unentangled(100, 1, 1), 0.5, 1e-15);
}

TEST(gain, reference_points) {
    EXPECT_NEAR(gain(25000, 1.8e-5), 12, 1);
    EXPECT_NEAR(gain(15000, 3.0e-5), 10, 1);
    EXPECT_NEAR(gain(std::exp(1.0), 0), pi / 8 * std::sqrt(std::exp(1.0)), 1e-15);
    EXPECT_NEAR(gain(std::exp(1.0), 0), 0.648, 1e-3);
    EXPECT_NEAR(fidelity_from_error(25000, 1.8e-5), 0.82, 0.01);
    EXPECT_THROW(gain(1, 0.1), InvalidInput);
}

TEST(gain, equals_ratio_of_allan_deviations) {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> nd(2, 200000);
    std::uniform_real_distribution<double> le(-7, -3), lw(-2, 6);
    for (int k = 0; k < 100; ++k) {
        const int N = nd(rng);
        const double E = std::pow(10.0, le(rng));
        const double omega0 = std::pow(10.0, lw(rng)), tau = std::pow(10.0, lw(rng));
        const auto m = GhzMeasurementModel::from_contrast(N, std::exp(-E * N));
        const auto report = stability_report(m, omega0, tau);
        EXPECT_NEAR(report.gain_G / gain(N, E), 1.0, 1e-13) << N << ' ' << E;
    }
}
