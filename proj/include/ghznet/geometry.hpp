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
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ghznet/error.hpp"

namespace ghznet {

enum class Dim { two_d, three_d };

inline std::string_view to_string(Dim d) { return d == Dim::two_d ? "2d" : "3d"; }

inline Dim parse_dim(std::string_view text) {
    if (text == "2d" || text == "2D") {
        return Dim::two_d;
    }
    if (text == "3d" || text == "3D") {
        return Dim::three_d;
    }
    throw InvalidInput("dimension must be 2d or 3d, got '" + std::string(text) + "'");
}

/// A square (2D) or cubic (3D) lattice uniformly filling a disk (ball)
/// holding n sites.
struct LatticeGeometry {
    Dim dim = Dim::three_d;
    int n = 2;
    double a = 1.0; ///< lattice constant

    static LatticeGeometry make(Dim dim, int n, double a) {
        detail::require(n >= 2, "LatticeGeometry: n must be >= 2");
        detail::require(a > 0, "LatticeGeometry: lattice constant must be positive");
        return {dim, n, a};
    }

    /// pi R^2 = n a^2 in 2D, (4 pi / 3) R^3 = n a^3 in 3D.
    double radius() const {
        if (dim == Dim::two_d) {
            return a * std::sqrt(n / std::numbers::pi);
        }
        return a * std::cbrt(3.0 * n / (4.0 * std::numbers::pi));
    }
};

/// Length of the arc of the circle of radius x, centred at distance r from
/// the origin, that lies inside the disk of radius R.
inline double kernel_S(double r, double x, double R) {
    detail::require(R > 0 && r >= 0 && x >= 0, "kernel_S: need R > 0, r >= 0, x >= 0");
    detail::require(r <= R * (1 + 1e-12), "kernel_S: r must not exceed R");
    constexpr double pi = std::numbers::pi;
    if (x < R - r) {
        return 2 * pi * x;
    }
    if (x > R + r) {
        return 0.0;
    }
    if (r == 0.0 || x == 0.0) {
        // Both seams coincide; the arc is either fully inside or outside.
        return x <= R ? 2 * pi * x : 0.0;
    }
    // acos(c) = 2 atan2(sqrt(1 - c), sqrt(1 + c)) with 1 -+ c in factored form,
    // accurate at both seams where c -> -1 and c -> 1.
    const double one_minus = std::max((R - x + r) * (R + x - r), 0.0);
    const double one_plus = std::max((x + r - R) * (x + r + R), 0.0);
    return 4 * x * std::atan2(std::sqrt(one_minus), std::sqrt(one_plus));
}

/// Area of the sphere of radius x, centred at distance r from the origin,
/// that lies inside the ball of radius R.
inline double kernel_A(double r, double x, double R) {
    detail::require(R > 0 && r >= 0 && x >= 0, "kernel_A: need R > 0, r >= 0, x >= 0");
    detail::require(r <= R * (1 + 1e-12), "kernel_A: r must not exceed R");
    constexpr double pi = std::numbers::pi;
    // x/r is a removable singularity at r -> 0.
    if (r < 1e-9 * R) {
        return x < R ? 4 * pi * x * x : 0.0;
    }
    if (x < R - r) {
        return 4 * pi * x * x;
    }
    if (x > R + r) {
        return 0.0;
    }
    return pi * (x / r) * (R * R - (x - r) * (x - r));
}

struct QuadratureValue {
    double value = 0;
    double abs_error = 0;
};

namespace detail {

inline constexpr double inner_abs_tol = 1e-6;
inline constexpr double outer_abs_tol = 1e-5;

template <class F>
QuadratureValue adaptive_integrate(F &&f, double lo, double hi, double abs_tol, const char *what) {
    if (hi <= lo) {
        return {};
    }
    double err = 0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 20, 1e-11, &err);
    if (!(err <= abs_tol) || !std::isfinite(v)) {
        throw ComputationError(std::string(what) + ": quadrature did not converge (achieved abs error " +
                               std::to_string(err) + ", requested " + std::to_string(abs_tol) + ")");
    }
    return {v, err};
}

/// Double-exponential rule for integrands with square-root endpoint behaviour.
template <class F>
QuadratureValue endpoint_integrate(F &&f, double lo, double hi, double abs_tol, const char *what) {
    if (hi <= lo) {
        return {};
    }
    boost::math::quadrature::tanh_sinh<double> rule;
    double err = 0;
    const double v = rule.integrate(f, lo, hi, 1e-12, &err);
    if (!(err <= abs_tol) || !std::isfinite(v)) {
        throw ComputationError(std::string(what) + ": quadrature did not converge (achieved abs error " +
                               std::to_string(err) + ", requested " + std::to_string(abs_tol) + ")");
    }
    return {v, err};
}

inline double ball_volume(Dim dim, double R) {
    return dim == Dim::two_d ? std::numbers::pi * R * R : 4.0 / 3.0 * std::numbers::pi * R * R * R;
}

} // namespace detail

/// Integral of the kernel over x in [0, R + r]; equals the disk area
/// (ball volume) for every r <= R.
inline QuadratureValue kernel_measure(Dim dim, double r, double R) {
    auto k = [&](double x) { return dim == Dim::two_d ? kernel_S(r, x, R) : kernel_A(r, x, R); };
    const double seam = std::max(R - r, 0.0);
    auto inside = detail::adaptive_integrate(k, 0.0, seam, detail::inner_abs_tol, "kernel_measure");
    auto edge = detail::endpoint_integrate(k, seam, R + r, detail::inner_abs_tol, "kernel_measure");
    return {inside.value + edge.value, inside.abs_error + edge.abs_error};
}

/// Mean of |r_j - r_k|^power over independent uniform points in the disk
/// (ball) of radius R, reduced to a nested 1D quadrature over the centre
/// distance r and the separation x with the S / A kernels.
inline QuadratureValue pair_distance_moment(Dim dim, int power, double R = 1.0) {
    detail::require(power >= 0, "pair_distance_moment: power must be non-negative");
    detail::require(R > 0, "pair_distance_moment: R must be positive");
    double inner_err = 0;
    auto inner = [&](double r) {
        auto integrand = [&](double x) {
            const double k = dim == Dim::two_d ? kernel_S(r, x, R) : kernel_A(r, x, R);
            return k * std::pow(x, power);
        };
        const double seam = std::max(R - r, 0.0);
        // Scale the absolute target with the integrand's natural size (2R)^power.
        const double tol = detail::inner_abs_tol * std::pow(2 * R, power) * std::pow(R, dim == Dim::two_d ? 2 : 3);
        auto a = detail::adaptive_integrate(integrand, 0.0, seam, tol, "pair_distance_moment(inner)");
        auto b = detail::endpoint_integrate(integrand, seam, R + r, tol, "pair_distance_moment(inner)");
        inner_err = std::max(inner_err, a.abs_error + b.abs_error);
        const double shell = dim == Dim::two_d ? 2 * std::numbers::pi * r : 4 * std::numbers::pi * r * r;
        return shell * (a.value + b.value);
    };
    const double V = detail::ball_volume(dim, R);
    const double scale = std::pow(2 * R, power);
    auto outer = detail::adaptive_integrate(inner, 0.0, R, detail::outer_abs_tol * scale * V * V,
                                            "pair_distance_moment(outer)");
    return {outer.value / (V * V), (outer.abs_error + inner_err * V) / (V * V)};
}

/// <|r1 - r2|^6> / R^6 for the uniformly filled disk (2D) or ball (3D).
inline double integral_I(Dim dim) { return pair_distance_moment(dim, 6, 1.0).value; }

/// <|r1 - r2|^12> / R^12.
inline double integral_J(Dim dim) { return pair_distance_moment(dim, 12, 1.0).value; }

struct GeometryIntegrals {
    double I_2D = 0, I_3D = 0, J_2D = 0, J_3D = 0;

    static GeometryIntegrals compute() {
        return {integral_I(Dim::two_d), integral_I(Dim::three_d), integral_J(Dim::two_d), integral_J(Dim::three_d)};
    }

    double I(Dim d) const { return d == Dim::two_d ? I_2D : I_3D; }
    double J(Dim d) const { return d == Dim::two_d ? J_2D : J_3D; }
};

using LatticeSite = std::array<int, 3>;

/// The n lattice sites (in units of a) closest to a centre placed at the
/// middle of a plaquette (2D) or unit cell (3D). Distance ties are broken by
/// lexicographic coordinate order.
inline std::vector<LatticeSite> lattice_sites(Dim dim, int n) {
    detail::require(n >= 1, "lattice_sites: n must be positive");
    const int d = dim == Dim::two_d ? 2 : 3;
    // Twice the squared distance to the centre is an exact integer:
    // (2x-1)^2 + (2y-1)^2 (+ (2z-1)^2).
    auto dist4 = [](const LatticeSite &s) {
        std::int64_t sum = 0;
        for (int c : s) {
            const std::int64_t t = 2 * static_cast<std::int64_t>(c) - 1;
            sum += t * t;
        }
        return sum;
    };
    const double R_est = dim == Dim::two_d ? std::sqrt(n / std::numbers::pi) : std::cbrt(3.0 * n / (4 * std::numbers::pi));
    for (int half = static_cast<int>(std::ceil(R_est)) + 3;; half *= 2) {
        std::vector<std::pair<std::int64_t, LatticeSite>> all;
        const int zlo = d == 3 ? -half : 0;
        const int zhi = d == 3 ? half + 1 : 0;
        for (int x = -half; x <= half + 1; ++x) {
            for (int y = -half; y <= half + 1; ++y) {
                for (int z = zlo; z <= zhi; ++z) {
                    LatticeSite s{x, y, z};
                    // Out-of-plane coordinate is fixed at 0 in 2D; measure
                    // distance in the plane only.
                    LatticeSite planar = d == 3 ? s : LatticeSite{x, y, 1};
                    all.emplace_back(dist4(planar), s);
                }
            }
        }
        if (static_cast<std::size_t>(n) > all.size()) {
            continue;
        }
        std::sort(all.begin(), all.end());
        // The box is large enough when the n-th site lies strictly inside the
        // inscribed sphere of the box (every site at that distance was seen).
        const std::int64_t inscribed = (2 * static_cast<std::int64_t>(half) + 1) * (2 * static_cast<std::int64_t>(half) + 1);
        if (all[static_cast<std::size_t>(n - 1)].first >= inscribed) {
            continue;
        }
        std::vector<LatticeSite> out;
        out.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            out.push_back(all[static_cast<std::size_t>(i)].second);
        }
        return out;
    }
}

inline constexpr int lattice_sum_max_sites = 20000;

/// Exact mean of |r_j - r_k|^exponent over all distinct site pairs of the
/// lattice filling (brute-force validation oracle for the continuum).
inline double lattice_sum_average(const LatticeGeometry &geom, int exponent) {
    detail::require(exponent == 6 || exponent == 12, "lattice_sum_average: exponent must be 6 or 12");
    detail::require(geom.n >= 2, "lattice_sum_average: need at least one pair");
    detail::require(geom.n <= lattice_sum_max_sites,
                    "lattice_sum_average: n exceeds the enumeration cap of " + std::to_string(lattice_sum_max_sites));
    const auto sites = lattice_sites(geom.dim, geom.n);
    const int half_power = exponent / 2;
    long double total = 0;
    for (std::size_t j = 0; j < sites.size(); ++j) {
        long double row = 0;
        for (std::size_t k = j + 1; k < sites.size(); ++k) {
            const double dx = sites[j][0] - sites[k][0];
            const double dy = sites[j][1] - sites[k][1];
            const double dz = sites[j][2] - sites[k][2];
            const double d2 = dx * dx + dy * dy + dz * dz;
            double p = d2 * d2 * d2;
            if (half_power == 6) {
                p *= p;
            }
            row += p;
        }
        total += row;
    }
    const double pairs = 0.5 * static_cast<double>(geom.n) * static_cast<double>(geom.n - 1);
    return static_cast<double>(total / pairs) * std::pow(geom.a, exponent);
}

/// Continuum estimate R^exponent * (I or J) of the same pair average.
inline double continuum_pair_average(const LatticeGeometry &geom, int exponent, const GeometryIntegrals &g) {
    detail::require(exponent == 6 || exponent == 12, "continuum_pair_average: exponent must be 6 or 12");
    const double k = exponent == 6 ? g.I(geom.dim) : g.J(geom.dim);
    return std::pow(geom.radius(), exponent) * k;
}

} // namespace ghznet
