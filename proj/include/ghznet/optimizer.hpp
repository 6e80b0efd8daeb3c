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
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "ghznet/config.hpp"
#include "ghznet/error.hpp"
#include "ghznet/error_model.hpp"
#include "ghznet/geometry.hpp"
#include "ghznet/metrology.hpp"

namespace ghznet {

struct OptimizationResult {
    int n_opt = 0;
    double omega_opt = 0;
    double E_min = 0;
    int n_tilde = 0;
    Dim dim = Dim::three_d;
    Variant variant = Variant::photonic;
    bool omega_free = false;
    ErrorBudget budget_at_opt;
};

struct OptimizerSettings {
    int n_min = 2;
    int n_max = 5000;
    int coarse_points = 60;
    double log10_omega_min = 2.0; ///< free-omega search range
    double log10_omega_max = 8.0;
};

namespace detail {

struct PointValue {
    double omega = 0;
    ErrorBudget budget;
};

class EnergyLandscape {
  public:
    EnergyLandscape(int n_tilde, Dim dim, std::optional<double> omega, Variant variant, const ModelParameters &params,
                    const OptimizerSettings &settings)
        : n_tilde_(n_tilde), dim_(dim), omega_(omega), variant_(variant), params_(params), settings_(settings) {}

    ErrorBudget at(int n, double omega) const {
        return total_error_per_atom(ErrorInputs::make(n_tilde_, omega, n, dim_, params_, variant_));
    }

    /// E at fixed n, minimized over omega in free mode.
    PointValue best(int n) const {
        if (omega_) {
            return {*omega_, at(n, *omega_)};
        }
        auto f = [&](double log_omega) { return at(n, std::pow(10.0, log_omega)).E; };
        auto [x, fx] = boost::math::tools::brent_find_minima(f, settings_.log10_omega_min, settings_.log10_omega_max,
                                                              std::numeric_limits<double>::digits / 2);
        (void)fx;
        const double omega = std::pow(10.0, x);
        return {omega, at(n, omega)};
    }

  private:
    int n_tilde_;
    Dim dim_;
    std::optional<double> omega_;
    Variant variant_;
    ModelParameters params_;
    OptimizerSettings settings_;
};

inline std::vector<int> log_grid(int lo, int hi, int points) {
    std::vector<int> grid;
    const double ratio = std::log(static_cast<double>(hi) / lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const int v = static_cast<int>(std::lround(lo * std::exp(ratio * i)));
        if (grid.empty() || v > grid.back()) {
            grid.push_back(std::clamp(v, lo, hi));
        }
    }
    if (grid.back() != hi) {
        grid.push_back(hi);
    }
    return grid;
}

} // namespace detail

/// Integer minimization of E over n in [n_min, n_max]. omega = nullopt
/// selects free mode, where omega is minimized (on a log scale) for each n.
///
/// A coarse log-spaced grid locates the basin; all integers between the
/// grid neighbours of the coarse minimum are then evaluated. Ties go to the
/// smaller n.
inline OptimizationResult minimize_E(int n_tilde, Dim dim, std::optional<double> omega,
                                     Variant variant = Variant::photonic, const ModelParameters &params = {},
                                     const OptimizerSettings &settings = {}) {
    detail::require(n_tilde >= RydbergConfig::min_n_tilde && n_tilde <= RydbergConfig::max_n_tilde,
                    "minimize_E: n_tilde must lie in [50, 150]");
    detail::require(!omega || (*omega > 0 && std::isfinite(*omega)), "minimize_E: omega must be positive");
    detail::require(settings.n_min >= 1 && settings.n_max > settings.n_min + 1 && settings.coarse_points >= 3,
                    "minimize_E: invalid search settings");
    params.validate();

    const detail::EnergyLandscape land(n_tilde, dim, omega, variant, params, settings);
    const auto grid = detail::log_grid(settings.n_min, settings.n_max, settings.coarse_points);

    std::size_t coarse = 0;
    double coarse_E = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double E = land.best(grid[i]).budget.E;
        if (E < coarse_E) {
            coarse_E = E;
            coarse = i;
        }
    }
    const int lo = grid[coarse == 0 ? 0 : coarse - 1];
    const int hi = grid[std::min(coarse + 1, grid.size() - 1)];

    OptimizationResult best;
    best.E_min = std::numeric_limits<double>::infinity();
    for (int n = lo; n <= hi; ++n) {
        auto p = land.best(n);
        if (p.budget.E < best.E_min) {
            best.n_opt = n;
            best.omega_opt = p.omega;
            best.E_min = p.budget.E;
            best.budget_at_opt = p.budget;
        }
    }
    if (best.n_opt == settings.n_min || best.n_opt == settings.n_max) {
        throw ComputationError("minimize_E: minimum at the search boundary n = " + std::to_string(best.n_opt) +
                               " (E is monotone over [" + std::to_string(settings.n_min) + ", " +
                               std::to_string(settings.n_max) + "])");
    }
    best.n_tilde = n_tilde;
    best.dim = dim;
    best.variant = variant;
    best.omega_free = !omega.has_value();
    return best;
}

/// Re-evaluates the neighbourhood of a result: E(n +- 1) >= E_min always,
/// and E(omega (1 +- 1e-3)) >= E_min when omega was optimized.
inline bool certificates_hold(const OptimizationResult &r, const ModelParameters &params = {}) {
    auto E = [&](int n, double omega) {
        return total_error_per_atom(ErrorInputs::make(r.n_tilde, omega, n, r.dim, params, r.variant)).E;
    };
    if (E(r.n_opt, r.omega_opt) != r.E_min) {
        return false;
    }
    if (E(r.n_opt - 1, r.omega_opt) < r.E_min || E(r.n_opt + 1, r.omega_opt) < r.E_min) {
        return false;
    }
    if (r.omega_free) {
        if (E(r.n_opt, r.omega_opt * (1 - 1e-3)) < r.E_min || E(r.n_opt, r.omega_opt * (1 + 1e-3)) < r.E_min) {
            return false;
        }
    }
    return true;
}

struct ScanPoint {
    int n_tilde = 0;
    std::optional<OptimizationResult> result;
    std::string error; ///< set when result is empty
};

/// One minimize_E per integer n_tilde in [lo, hi]; a failing point is
/// recorded and the scan continues.
inline std::vector<ScanPoint> scan_ntilde(int lo, int hi, Dim dim, std::optional<double> omega,
                                          Variant variant = Variant::photonic, const ModelParameters &params = {},
                                          const OptimizerSettings &settings = {}) {
    std::vector<ScanPoint> out;
    if (lo > hi) {
        return out;
    }
    detail::require(lo >= RydbergConfig::min_n_tilde && hi <= RydbergConfig::max_n_tilde,
                    "scan_ntilde: range must lie within [50, 150]");
    for (int nt = lo; nt <= hi; ++nt) {
        ScanPoint p;
        p.n_tilde = nt;
        try {
            p.result = minimize_E(nt, dim, omega, variant, params, settings);
        } catch (const ComputationError &e) {
            p.error = e.what();
        }
        out.push_back(std::move(p));
    }
    return out;
}

struct NetworkPlan {
    std::int64_t N_max = 0;
    std::int64_t K_opt = 0;
    std::int64_t M = 0;
    double G_max = 0;
    double fidelity_F = 0;
    double contrast_c = 0;
    double N_analytic = 0;   ///< 1 / (2 E_min)
    double G_closed_form = 0; ///< (pi/8) [E ln(1/(2E))]^(-1/2), approximation only
};

/// Closed-form estimate of the maximal gain. Not used for the plan.
inline double gain_closed_form(double E) {
    detail::require(E > 0 && E < 0.5, "gain_closed_form: E must lie in (0, 1/2)");
    return std::numbers::pi / 8.0 / std::sqrt(E * std::log(1.0 / (2.0 * E)));
}

/// Integer argmax of gain(N, E_min) over [2, 10 / E_min].
inline NetworkPlan maximize_gain(double E_min, double atoms_per_clock, int n_opt) {
    detail::require(E_min > 0 && std::isfinite(E_min), "maximize_gain: E_min must be positive");
    detail::require(atoms_per_clock >= 1 && n_opt >= 1, "maximize_gain: atoms_per_clock and n_opt must be positive");
    const double upper = std::floor(10.0 / E_min);
    detail::require(upper <= 1e12, "maximize_gain: E_min too small for the search range");
    const auto hi_cap = std::max<std::int64_t>(2, static_cast<std::int64_t>(upper));
    auto G = [E_min](std::int64_t N) { return gain(static_cast<double>(N), E_min); };

    // Unimodal on [6, hi]: integer ternary search.
    std::int64_t lo = std::min<std::int64_t>(6, hi_cap), hi = hi_cap;
    while (hi - lo > 2) {
        const std::int64_t m1 = lo + (hi - lo) / 3;
        const std::int64_t m2 = hi - (hi - lo) / 3;
        if (G(m1) < G(m2)) {
            lo = m1 + 1;
        } else {
            hi = m2;
        }
    }
    const std::int64_t centre = lo;
    const auto width = std::max<std::int64_t>(2, static_cast<std::int64_t>(0.05 * static_cast<double>(centre)));
    std::int64_t best = 2;
    double best_G = G(2);
    auto consider = [&](std::int64_t N) {
        const double g = G(N);
        if (g > best_G) {
            best_G = g;
            best = N;
        }
    };
    for (std::int64_t N = 3; N <= std::min<std::int64_t>(5, hi_cap); ++N) {
        consider(N);
    }
    for (std::int64_t N = std::max<std::int64_t>(2, centre - width); N <= std::min(hi_cap, centre + width); ++N) {
        consider(N);
    }

    NetworkPlan plan;
    plan.N_max = best;
    plan.G_max = best_G;
    plan.contrast_c = std::exp(-E_min * static_cast<double>(best));
    plan.fidelity_F = fidelity_from_error(static_cast<double>(best), E_min);
    plan.K_opt = std::max<std::int64_t>(1, std::llround(static_cast<double>(best) / atoms_per_clock));
    plan.M = std::max<std::int64_t>(1, std::llround(atoms_per_clock / n_opt));
    plan.N_analytic = 1.0 / (2.0 * E_min);
    plan.G_closed_form = E_min < 0.5 ? gain_closed_form(E_min) : 0.0;
    return plan;
}

} // namespace ghznet
