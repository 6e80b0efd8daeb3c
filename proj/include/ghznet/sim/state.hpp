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
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ghznet/error.hpp"

namespace ghznet::sim {

using amplitude = std::complex<double>;

enum class Level : std::uint8_t { g = 0, f = 1, s = 2, e = 3, r1 = 4, r2 = 5 };

inline constexpr int num_levels = 6;
inline constexpr int num_time_bins = 4;

inline std::string_view level_name(Level l) {
    static constexpr std::array<std::string_view, num_levels> names = {"g", "f", "s", "e", "r1", "r2"};
    return names[static_cast<std::size_t>(l)];
}

inline Level parse_level(std::string_view text) {
    for (int i = 0; i < num_levels; ++i) {
        if (level_name(static_cast<Level>(i)) == text) {
            return static_cast<Level>(i);
        }
    }
    throw InvalidInput("unknown level '" + std::string(text) + "' (expected g, f, s, e, r1 or r2)");
}

inline bool is_rydberg(Level l) { return l == Level::r1 || l == Level::r2; }

enum class RegisterKind { ensemble, messenger };

struct RegisterInfo {
    int n = 1;
    RegisterKind kind = RegisterKind::ensemble;
    int clock = 0;
    int index = 0; ///< ensemble index within the clock; unused for messengers
    std::string name;
};

/// Occupation numbers of one register (collective, symmetric mode
/// description) plus the photons it has emitted into time bins t1..t4.
struct RegisterState {
    std::array<std::uint8_t, num_levels> count{};
    std::array<std::uint8_t, num_time_bins> bins{};

    int operator[](Level l) const { return count[static_cast<std::size_t>(l)]; }
    std::uint8_t &at(Level l) { return count[static_cast<std::size_t>(l)]; }
    int rydberg() const { return (*this)[Level::r1] + (*this)[Level::r2]; }
    int photons() const { return bins[0] + bins[1] + bins[2] + bins[3]; }

    auto operator<=>(const RegisterState &) const = default;
};

using Label = std::vector<RegisterState>;

inline constexpr double prune_threshold = 1e-14;
inline constexpr double norm_tolerance = 1e-12;

/// Sparse state vector over composite basis labels.
///
/// Value semantic: every operation either mutates a state in place or
/// returns a fresh copy; nothing is shared.
class CollectiveState {
  public:
    CollectiveState() { amps_.emplace(Label{}, amplitude{1.0, 0.0}); }

    /// Appends a register with all n atoms in `initial`. Returns its index.
    int add_register(RegisterInfo info, Level initial = Level::g) {
        detail::require(info.n >= 1 && info.n <= 255, "add_register: n must lie in [1, 255]");
        RegisterState r;
        r.at(initial) = static_cast<std::uint8_t>(info.n);
        if (info.name.empty()) {
            info.name = "R" + std::to_string(regs_.size());
        }
        regs_.push_back(std::move(info));
        std::map<Label, amplitude> next;
        for (auto &[label, a] : amps_) {
            Label l = label;
            l.push_back(r);
            next.emplace(std::move(l), a);
        }
        amps_ = std::move(next);
        return static_cast<int>(regs_.size()) - 1;
    }

    const std::vector<RegisterInfo> &registers() const { return regs_; }
    const RegisterInfo &info(int reg) const {
        check_register(reg);
        return regs_[static_cast<std::size_t>(reg)];
    }
    int num_registers() const { return static_cast<int>(regs_.size()); }

    const std::map<Label, amplitude> &amplitudes() const { return amps_; }
    std::size_t size() const { return amps_.size(); }

    void check_register(int reg) const {
        detail::require(reg >= 0 && reg < num_registers(), "register index " + std::to_string(reg) + " out of range");
    }

    double norm_squared() const {
        double s = 0;
        for (auto &[l, a] : amps_) {
            s += std::norm(a);
        }
        return s;
    }

    /// Replaces the amplitude table; zero-ish entries are dropped.
    void assign(std::map<Label, amplitude> amps) {
        amps_ = std::move(amps);
        prune();
    }

    void prune() {
        std::erase_if(amps_, [](const auto &kv) { return std::abs(kv.second) < prune_threshold; });
    }

    void normalize() {
        const double n2 = norm_squared();
        if (!(n2 > 0)) {
            throw ComputationError("normalize: state has zero norm");
        }
        const double s = 1.0 / std::sqrt(n2);
        for (auto &[l, a] : amps_) {
            a *= s;
        }
    }

    void check_norm(std::string_view context) const {
        const double n2 = norm_squared();
        if (std::abs(n2 - 1.0) > norm_tolerance) {
            throw ComputationError(std::string(context) + ": norm drifted to " + std::to_string(n2));
        }
    }

    /// Throws if any branch holds two Rydberg excitations in one register.
    void check_blockade(std::string_view context) const {
        for (auto &[label, a] : amps_) {
            for (auto &r : label) {
                if (r.rydberg() > 1) {
                    throw ComputationError(std::string(context) + ": blockade violated in " + label_string(label));
                }
            }
        }
    }

    amplitude overlap(const CollectiveState &other) const {
        amplitude s{};
        for (auto &[l, a] : amps_) {
            auto it = other.amps_.find(l);
            if (it != other.amps_.end()) {
                s += std::conj(a) * it->second;
            }
        }
        return s;
    }

    amplitude amplitude_of(const Label &l) const {
        auto it = amps_.find(l);
        return it == amps_.end() ? amplitude{} : it->second;
    }

    /// e.g. "C0E0[g1 f1]{t2} M0[s1]".
    std::string label_string(const Label &label) const {
        std::string out;
        for (std::size_t i = 0; i < label.size(); ++i) {
            if (i) {
                out += ' ';
            }
            out += i < regs_.size() ? regs_[i].name : "R" + std::to_string(i);
            out += '[';
            bool first = true;
            for (int lv = 0; lv < num_levels; ++lv) {
                if (label[i].count[static_cast<std::size_t>(lv)]) {
                    if (!first) {
                        out += ' ';
                    }
                    first = false;
                    out += level_name(static_cast<Level>(lv));
                    out += std::to_string(label[i].count[static_cast<std::size_t>(lv)]);
                }
            }
            out += ']';
            if (label[i].photons()) {
                out += '{';
                bool first_bin = true;
                for (int b = 0; b < num_time_bins; ++b) {
                    for (int k = 0; k < label[i].bins[static_cast<std::size_t>(b)]; ++k) {
                        if (!first_bin) {
                            out += ',';
                        }
                        first_bin = false;
                        out += 't' + std::to_string(b + 1);
                    }
                }
                out += '}';
            }
        }
        return out;
    }

  private:
    std::vector<RegisterInfo> regs_;
    std::map<Label, amplitude> amps_;
};

} // namespace ghznet::sim
