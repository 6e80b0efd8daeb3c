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

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghznet/error.hpp"
#include "ghznet/sim/state.hpp"

namespace ghznet::sim {

/// One outcome of a projective measurement: its probability and the
/// renormalised post-measurement state.
template <class Outcome>
struct Branch {
    Outcome outcome{};
    double probability = 0;
    CollectiveState state;
};

/// Measures the occupation of `level` in register `reg`. With reset_to set,
/// the measured atoms are moved to that level afterwards.
inline std::vector<Branch<int>> measure_level(const CollectiveState &state, int reg, Level level,
                                              std::optional<Level> reset_to = std::nullopt) {
    state.check_register(reg);
    const auto t = static_cast<std::size_t>(reg);
    std::map<int, std::map<Label, amplitude>> parts;
    for (auto &[label, a] : state.amplitudes()) {
        const int m = label[t][level];
        Label l = label;
        if (reset_to && m > 0) {
            l[t].at(level) = 0;
            l[t].at(*reset_to) = static_cast<std::uint8_t>(l[t][*reset_to] + m);
        }
        parts[m][l] += a;
    }
    std::vector<Branch<int>> out;
    for (auto &[m, amps] : parts) {
        Branch<int> b{m, 0.0, state};
        b.state.assign(std::move(amps));
        b.probability = b.state.norm_squared();
        if (b.probability < prune_threshold) {
            continue;
        }
        b.state.normalize();
        out.push_back(std::move(b));
    }
    return out;
}

/// Detection pattern of the two-photon Bell measurement: two clicks, each
/// in detector c or d and in the early or late bin.
struct BellPattern {
    int first = 0;  ///< click code: 2 * detector + bin, detector c=0 / d=1, bin E=0 / L=1
    int second = 0; ///< first <= second

    bool heralded() const { return (first & 1) != (second & 1); }
    /// +1 when both clicks hit the same detector, -1 otherwise.
    int sign() const { return (first >> 1) == (second >> 1) ? 1 : -1; }

    std::string name() const {
        auto one = [](int code) {
            return std::string((code >> 1) ? "d" : "c") + ((code & 1) ? "L" : "E");
        };
        return one(first) + "," + one(second);
    }
    auto operator<=>(const BellPattern &) const = default;
};

/// All ten two-click patterns in a fixed order.
inline std::vector<BellPattern> all_bell_patterns() {
    std::vector<BellPattern> out;
    for (int a = 0; a < 4; ++a) {
        for (int b = a; b < 4; ++b) {
            out.push_back({a, b});
        }
    }
    return out;
}

namespace internal {

/// Amplitude of `pattern` for photon A in bin x and photon B in bin y
/// after the 50/50 beam splitter a -> (c + d)/sqrt2, b -> (c - d)/sqrt2.
inline double bell_pattern_amplitude(int x, int y, BellPattern p) {
    // a_x^dag b_y^dag = (c_x + d_x)(c_y - d_y) / 2
    const std::array<std::pair<std::array<int, 2>, double>, 4> terms = {{
        {{0 * 2 + x, 0 * 2 + y}, 0.5},
        {{0 * 2 + x, 1 * 2 + y}, -0.5},
        {{1 * 2 + x, 0 * 2 + y}, 0.5},
        {{1 * 2 + x, 1 * 2 + y}, -0.5},
    }};
    double amp = 0;
    for (auto &[modes, coeff] : terms) {
        const int lo = std::min(modes[0], modes[1]);
        const int hi = std::max(modes[0], modes[1]);
        if (lo == p.first && hi == p.second) {
            // A doubly occupied output mode carries the bosonic factor sqrt(2).
            amp += lo == hi ? coeff * std::sqrt(2.0) : coeff;
        }
    }
    return amp;
}

} // namespace internal

/// Interferes the s-photons of register a (early = t1, late = t3) with the
/// f-photons of register b (early = t2, late = t4) and enumerates all ten
/// detection patterns. The photons are consumed. Requires exactly one
/// photon in each register's pair of bins on every branch.
inline std::vector<Branch<BellPattern>> bell_measure(const CollectiveState &state, int reg_a, int reg_b) {
    state.check_register(reg_a);
    state.check_register(reg_b);
    detail::require(reg_a != reg_b, "bell_measure: registers must differ");
    const auto ta = static_cast<std::size_t>(reg_a);
    const auto tb = static_cast<std::size_t>(reg_b);
    const auto patterns = all_bell_patterns();
    std::map<BellPattern, std::map<Label, amplitude>> parts;
    for (auto &[label, a] : state.amplitudes()) {
        const auto &ra = label[ta];
        const auto &rb = label[tb];
        detail::require(ra.bins[0] + ra.bins[2] == 1 && rb.bins[1] + rb.bins[3] == 1,
                        "bell_measure: each register needs exactly one photon in its link bins (branch " +
                            state.label_string(label) + ")");
        const int x = ra.bins[2];
        const int y = rb.bins[3];
        Label l = label;
        l[ta].bins[0] = l[ta].bins[2] = 0;
        l[tb].bins[1] = l[tb].bins[3] = 0;
        for (auto p : patterns) {
            const double c = internal::bell_pattern_amplitude(x, y, p);
            if (c != 0.0) {
                parts[p][l] += c * a;
            }
        }
    }
    std::vector<Branch<BellPattern>> out;
    for (auto p : patterns) {
        Branch<BellPattern> b{p, 0.0, state};
        b.state.assign(std::move(parts[p]));
        b.probability = b.state.norm_squared();
        if (b.probability < prune_threshold) {
            continue;
        }
        b.state.normalize();
        out.push_back(std::move(b));
    }
    return out;
}

/// Picks one branch with probability proportional to its weight.
template <class Outcome>
Branch<Outcome> sample_branch(std::vector<Branch<Outcome>> branches, std::mt19937_64 &rng) {
    if (branches.empty()) {
        throw ComputationError("sample_branch: no outcome with non-zero probability");
    }
    double total = 0;
    for (auto &b : branches) {
        total += b.probability;
    }
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0;
    for (auto &b : branches) {
        acc += b.probability;
        if (u < acc) {
            return std::move(b);
        }
    }
    return std::move(branches.back());
}

} // namespace ghznet::sim
