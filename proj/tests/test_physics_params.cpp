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
#include <sstream>

#include "gtest/gtest.h"

#include "ghznet/config.hpp"
#include "ghznet/physics_params.hpp"

using namespace ghznet;

TEST(rydberg_gamma, reference_values) {
    EXPECT_NEAR(rydberg_gamma(120), 542.2, 0.5);
    EXPECT_NEAR(rydberg_gamma(104.279), 840.3, 1e-9);
    EXPECT_NEAR(rydberg_gamma(50), 8.403e8 / std::pow(45.721, 3), 1e-9);
    EXPECT_NEAR(rydberg_gamma(50), 8.79e3, 10);
    EXPECT_THROW(rydberg_gamma(4.0), InvalidInput);
}

TEST(c11_coefficient, reference_values) {
    EXPECT_NEAR(c11_coefficient_au(120) / 2.94e23, 1.0, 0.01);
    EXPECT_NEAR(c11_coefficient(120) / 2.81e-56, 1.0, 0.01);
    EXPECT_NEAR(c11_coefficient_au(100), 3.274e22, 1e9);
    EXPECT_NEAR(c11_coefficient_au(0.116 / 0.0339), 0.0, 1e-6);
    EXPECT_THROW(c11_coefficient_au(3.0), InvalidInput);
}

TEST(c12_coefficient, reference_values) {
    EXPECT_NEAR(c12_coefficient_au(120) / 5.006e7, 1.0, 1e-3);
    EXPECT_NEAR(c12_coefficient(120) / 3.23e-41, 1.0, 0.01);
    EXPECT_NEAR(c12_coefficient_au(1), 0.14977, 1e-12);
    EXPECT_NEAR(c12_coefficient_au(50), 1.171875e6, 1e-6);
    EXPECT_THROW(c12_coefficient_au(0.5), InvalidInput);
}

TEST(rydberg_config, range_is_enforced) {
    EXPECT_NO_THROW(RydbergConfig::for_level(50));
    EXPECT_NO_THROW(RydbergConfig::for_level(150));
    EXPECT_THROW(RydbergConfig::for_level(49), InvalidInput);
    EXPECT_THROW(RydbergConfig::for_level(151), InvalidInput);
}

TEST(rydberg_config, monotone_over_integer_grid) {
    auto prev = RydbergConfig::for_level(50);
    for (int n = 51; n <= 150; ++n) {
        auto cur = RydbergConfig::for_level(n);
        EXPECT_LT(cur.gamma, prev.gamma) << n;
        EXPECT_GT(cur.c11_6, prev.c11_6) << n;
        EXPECT_GT(cur.c12_3, prev.c12_3) << n;
        prev = cur;
    }
}

TEST(dimensionless_deltas, reference_values) {
    const double a = 275.75e-9;
    auto d = dimensionless_deltas(RydbergConfig::for_level(120), a);
    EXPECT_NEAR(d.delta12 / 2.70e10, 1.0, 0.01);
    EXPECT_NEAR(d.delta11 / 1.12e15, 1.0, 0.01);
}

TEST(dimensionless_deltas, lattice_power_laws_are_exact) {
    auto cfg = RydbergConfig::for_level(97);
    for (double a : {1e-7, 275.75e-9, 5e-7}) {
        auto d1 = dimensionless_deltas(cfg, a);
        auto d2 = dimensionless_deltas(cfg, 2 * a);
        EXPECT_DOUBLE_EQ(d2.delta12 / d1.delta12, 1.0 / 8);
        EXPECT_DOUBLE_EQ(d2.delta11 / d1.delta11, 1.0 / 64);
    }
}

TEST(dimensionless_deltas, invariant_under_unit_change) {
    auto cfg = RydbergConfig::for_level(120);
    const double a = 275.75e-9;
    auto si = dimensionless_deltas(cfg.c11_6, cfg.c12_3, 1.054571817e-34, a, cfg.gamma);
    // Micrometres, microseconds and the matching energy unit.
    const double L = 1e6, T = 1e6, M = 1.0;
    const double energy = M * L * L / (T * T);
    auto micro = dimensionless_deltas(cfg.c11_6 * energy * std::pow(L, 6), cfg.c12_3 * energy * std::pow(L, 3),
                                      1.054571817e-34 * energy * T, a * L, cfg.gamma / T);
    EXPECT_NEAR(micro.delta11 / si.delta11, 1.0, 1e-12);
    EXPECT_NEAR(micro.delta12 / si.delta12, 1.0, 1e-12);
    EXPECT_THROW(dimensionless_deltas(cfg, 0.0), InvalidInput);
}

TEST(lower_level_rates, zero_dark_counts_and_link_are_allowed) {
    LowerLevelRates r;
    r.gamma_dark = 0;
    r.link_length_L = 0;
    EXPECT_TRUE(r.validate().empty());
    r.link_length_L = 2e4;
    EXPECT_EQ(r.validate().size(), 1u);
    r.gamma_s = 0;
    EXPECT_THROW(r.validate(), InvalidInput);
}

TEST(model_parameters, parse_overrides_and_rejects) {
    std::istringstream good("# test\n gamma_dark = 0 \nlink_length_L=5e3\n\natoms_per_clock = 1000 # inline\n");
    auto p = ModelParameters::parse(good);
    EXPECT_EQ(p.rates.gamma_dark, 0.0);
    EXPECT_EQ(p.rates.link_length_L, 5e3);
    EXPECT_EQ(p.atoms_per_clock, 1000.0);
    EXPECT_EQ(p.rates.gamma_s, 0.069);

    std::istringstream unknown("gamma_x = 1\n");
    EXPECT_THROW(ModelParameters::parse(unknown), InvalidInput);
    std::istringstream malformed("gamma_s = 1x\n");
    EXPECT_THROW(ModelParameters::parse(malformed), InvalidInput);
    std::istringstream no_eq("gamma_s 1\n");
    EXPECT_THROW(ModelParameters::parse(no_eq), InvalidInput);
    std::istringstream negative("lattice_a = -1\n");
    EXPECT_THROW(ModelParameters::parse(negative), InvalidInput);
}

TEST(model_parameters, canonical_text_tracks_values) {
    ModelParameters a, b;
    EXPECT_EQ(a.canonical_text(), b.canonical_text());
    b.rates.gamma_dark = 11;
    EXPECT_NE(a.canonical_text(), b.canonical_text());
    EXPECT_NE(a.canonical_text().find("gamma_dark=10\n"), std::string::npos);
}
