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

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "ghznet/error.hpp"
#include "ghznet/physics_params.hpp"

namespace ghznet {

/// The full set of overridable constants, loaded from a flat key=value file.
///
///     # comment
///     gamma_dark = 10
///     link_length_L = 1e4
///
/// Unknown keys and malformed values are rejected.
struct ModelParameters {
    PhysicalConstants constants;
    LowerLevelRates rates;
    double atoms_per_clock = 2500.0;

    void validate() const {
        constants.validate();
        rates.validate();
        detail::require(atoms_per_clock >= 1.0, "atoms_per_clock must be >= 1");
    }

    static ModelParameters parse(std::istream &in) {
        ModelParameters p;
        auto fields = p.field_map();
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            const auto key_value = trim(line);
            if (key_value.empty()) {
                continue;
            }
            const auto eq = key_value.find('=');
            if (eq == std::string_view::npos) {
                throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
            }
            const std::string key{trim(key_value.substr(0, eq))};
            const auto value_text = trim(key_value.substr(eq + 1));
            auto it = fields.find(key);
            if (it == fields.end()) {
                throw InvalidInput("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            }
            double value = 0;
            auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
            if (ec != std::errc{} || ptr != value_text.data() + value_text.size()) {
                throw InvalidInput("config line " + std::to_string(lineno) + ": malformed number for '" + key + "'");
            }
            it->second.get() = value;
        }
        p.validate();
        return p;
    }

    static ModelParameters load(const std::string &path) {
        std::ifstream in(path);
        if (!in) {
            throw InvalidInput("cannot open config file '" + path + "'");
        }
        return parse(in);
    }

    /// Sorted key=value dump of every effective value, 17 significant digits.
    /// Used as the input of the run manifest's config digest.
    std::string canonical_text() const {
        auto self = *this;
        std::ostringstream os;
        for (auto &[key, ref] : self.field_map()) {
            char buf[64];
            auto res = std::to_chars(buf, buf + sizeof buf, ref.get(), std::chars_format::general, 17);
            os << key << '=' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
        }
        return os.str();
    }

  private:
    std::map<std::string, std::reference_wrapper<double>> field_map() {
        return {
            {"hbar", constants.hbar},
            {"atomic_unit_C6", constants.atomic_unit_C6},
            {"atomic_unit_C3", constants.atomic_unit_C3},
            {"speed_of_light", constants.speed_of_light},
            {"gamma_s", rates.gamma_s},
            {"gamma_e", rates.gamma_e},
            {"gamma_dark", rates.gamma_dark},
            {"link_length_L", rates.link_length_L},
            {"lattice_a", rates.lattice_a},
            {"k_e", rates.k_e},
            {"finesse_f", rates.finesse_f},
            {"atoms_per_clock", atoms_per_clock},
        };
    }

    static std::string_view trim(std::string_view s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) {
            return {};
        }
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    }
};

} // namespace ghznet
