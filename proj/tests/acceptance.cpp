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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ghznet/error_model.hpp"
#include "ghznet/geometry.hpp"
#include "ghznet/metrology.hpp"
#include "ghznet/optimizer.hpp"
#include "ghznet/sim/protocol.hpp"

using namespace ghznet;

namespace {

constexpr double pi = std::numbers::pi;

class Check {
  public:
    void expect(bool ok, const std::string &what) {
        if (!ok) {
            failures_.push_back(what);
        }
    }
    void rel(double actual, double expected, double tol, const std::string &what) {
        std::ostringstream os;
        os << what << " = " << actual << " (want " << expected << " +-" << tol * 100 << "%)";
        expect(std::abs(actual / expected - 1) <= tol, os.str());
    }
    void abs(double actual, double expected, double tol, const std::string &what) {
        std::ostringstream os;
        os << what << " = " << actual << " (want " << expected << " +-" << tol << ")";
        expect(std::abs(actual - expected) <= tol, os.str());
    }
    void order(double actual, double decade, const std::string &what) {
        std::ostringstream os;
        os << what << " = " << actual << " (want order " << decade << ")";
        expect(actual >= decade && actual < 10 * decade, os.str());
    }
    const std::vector<std::string> &failures() const { return failures_; }

  private:
    std::vector<std::string> failures_;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<void(Check &)> body;
};

void reference_3d(Check &c) {
    auto b = total_error_per_atom(ErrorInputs::make(120, 1e5, 146, Dim::three_d));
    c.rel(b.e[0], 2.6e-6, 0.05, "e1");
    c.rel(b.e[1], 1.6e-5, 0.05, "e2");
    c.order(b.e[2], 1e-11, "e3");
    c.order(b.e[3], 1e-11, "e4");
    c.order(b.e[4], 1e-12, "e5");
    c.rel(b.E, 1.8e-5, 0.05, "E");
    c.abs(100 * b.share(0), 14, 2, "share e1 [%]");
    c.abs(100 * b.share(1), 86, 2, "share e2 [%]");
}

void reference_2d(Check &c) {
    auto b = total_error_per_atom(ErrorInputs::make(120, 1e5, 54, Dim::two_d));
    c.rel(b.e[0], 3.2e-6, 0.05, "e1");
    c.rel(b.e[1], 2.5e-5, 0.05, "e2");
    c.rel(b.e[6], 6.5e-7, 0.05, "e7");
    c.rel(b.E, 3.0e-5, 0.05, "E");
}

void optimizer(Check &c) {
    for (auto [dim, target] : {std::pair{Dim::three_d, 146}, std::pair{Dim::two_d, 54}}) {
        const auto t0 = std::chrono::steady_clock::now();
        auto r = minimize_E(120, dim, 1e5);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string tag = std::string(to_string(dim));
        c.abs(r.n_opt, target, 2, tag + " n_opt");
        c.expect(secs < 10, tag + " runtime per point >= 10 s");
        int best_n = 0;
        double best_E = 1e300;
        for (int n = 2; n <= 2000; ++n) {
            const double E = total_error_per_atom(ErrorInputs::make(120, 1e5, n, dim)).E;
            if (E < best_E) {
                best_E = E;
                best_n = n;
            }
        }
        c.expect(best_n == r.n_opt && best_E == r.E_min,
                 tag + " brute force over [2,2000] found n=" + std::to_string(best_n));
    }
}

void network_plan(Check &c) {
    auto p3 = maximize_gain(1.8e-5, 2500, 146);
    c.rel(static_cast<double>(p3.N_max), 25000, 0.10, "E=1.8e-5 N_max");
    c.abs(p3.G_max, 12, 1, "E=1.8e-5 G_max");
    c.abs(static_cast<double>(p3.K_opt), 10, 1, "E=1.8e-5 K_opt");
    c.abs(p3.fidelity_F, 0.82, 0.01, "E=1.8e-5 F");
    auto p2 = maximize_gain(3.0e-5, 2500, 54);
    c.rel(static_cast<double>(p2.N_max), 15000, 0.10, "E=3.0e-5 N_max");
    c.abs(p2.G_max, 10, 1, "E=3.0e-5 G_max");
    c.abs(static_cast<double>(p2.K_opt), 6, 1, "E=3.0e-5 K_opt");
    c.abs(p2.fidelity_F, 0.82, 0.01, "E=3.0e-5 F");
}

void geometry(Check &c) {
    auto g = GeometryIntegrals::compute();
    c.abs(g.I_2D, 3.5, 0.05, "I_2D");
    c.abs(g.I_3D, 4.27, 0.02, "I_3D");
    c.abs(g.J_2D, 61.29, 0.5, "J_2D");
    c.abs(g.J_3D, 68.26, 0.5, "J_3D");
    for (auto [dim, n, tol] : {std::tuple{Dim::three_d, 146, 0.10}, std::tuple{Dim::two_d, 1000, 0.05}}) {
        auto geom = LatticeGeometry::make(dim, n, 275.75e-9);
        for (int p : {6, 12}) {
            const double ratio = lattice_sum_average(geom, p) / continuum_pair_average(geom, p, g);
            c.rel(ratio, 1.0, tol, std::string(to_string(dim)) + " lattice/continuum p=" + std::to_string(p));
        }
    }
}

void fisher(Check &c) {
    c.abs(average_fisher(GhzMeasurementModel::from_contrast(7, 1.0)) / 49, 1.0, 1e-9, "Fbar/N^2 at c=1");
    for (int i = 1; i <= 50; ++i) {
        const double x = i / 100.0;
        c.rel(average_fisher(GhzMeasurementModel::from_contrast(3, x)) / 9, x * x / 2, 0.10,
              "Fbar/N^2 vs c^2/2 at c=" + std::to_string(x));
    }
    for (int i = 85; i <= 100; ++i) {
        const double x = i / 100.0;
        c.rel(average_fisher(GhzMeasurementModel::from_contrast(3, x)) / 9, 1 - std::sqrt(2 * (1 - x)), 0.10,
              "Fbar/N^2 vs 1-sqrt(2(1-c)) at c=" + std::to_string(x));
    }
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        const double ref = average_fisher(GhzMeasurementModel::from_contrast(2, x)) / 4;
        for (int N : {5, 17}) {
            c.abs(average_fisher(GhzMeasurementModel::from_contrast(N, x)) / (N * N), ref, 1e-6,
                  "Fbar/N^2 N=" + std::to_string(N) + " c=" + std::to_string(x));
        }
    }
}

void protocol(Check &c) {
    using namespace ghznet::sim;
    for (Variant v : {Variant::photonic, Variant::messenger}) {
        for (int K = 1; K <= 3; ++K) {
            for (int M = 1; M <= 2; ++M) {
                // n = 1 is outside the photonic variant's domain (f and s must coexist).
                for (int n = v == Variant::photonic ? 2 : 1; n <= 3; ++n) {
                    ProtocolConfig cfg;
                    cfg.clocks = K;
                    cfg.ensembles = M;
                    cfg.atoms = n;
                    cfg.variant = v;
                    const auto r = run_protocol(cfg);
                    const std::string tag = std::string(to_string(v)) + " K=" + std::to_string(K) +
                                            " M=" + std::to_string(M) + " n=" + std::to_string(n);
                    c.abs(r.total_probability, 1.0, 1e-12, tag + " total probability");
                    const auto model = GhzMeasurementModel::from_contrast(K * M * n, 1.0);
                    for (auto &b : r.branches) {
                        if (!b.heralded) {
                            continue;
                        }
                        c.expect(b.fidelity >= 1 - 1e-10, tag + " fidelity " + std::to_string(b.fidelity));
                        double dev = 0;
                        for (int i = 0; i < 32; ++i) {
                            const double phi = 2 * pi * i / 32;
                            dev = std::max(dev, std::abs(parity_probability_sim(b.state, phi) -
                                                         parity_probability(0, phi, model)));
                        }
                        c.expect(dev <= 1e-10, tag + " parity deviation " + std::to_string(dev));
                    }
                }
            }
        }
    }
}

void properties(Check &c) {
    using namespace ghznet::sim;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> ticks(1, 1 << 20);

    // Norm preservation and blockade under random pulse sequences.
    const std::array<std::pair<Level, Level>, 5> pairs = {
        {{Level::g, Level::r1}, {Level::f, Level::r1}, {Level::f, Level::s}, {Level::s, Level::r2}, {Level::e, Level::r1}}};
    for (int k = 0; k < 100; ++k) {
        CollectiveState s;
        s.add_register({1 + k % 3, RegisterKind::ensemble, 0, 0, "A"});
        s.add_register({1 + k % 3, RegisterKind::ensemble, 1, 0, "B"});
        const bool coupled = k % 2 == 0;
        for (int step = 0; step < 30; ++step) {
            const int target = u(rng) < 0.5 ? 0 : 1;
            const auto [from, to] = pairs[static_cast<std::size_t>(u(rng) * pairs.size())];
            std::vector<int> blockers;
            if (coupled) {
                blockers.push_back(1 - target);
            }
            try {
                evolve(s, PulseOp::rabi(target, from, to, 2 * pi * u(rng), 2 * pi * u(rng), Scaling::single_atom,
                                        blockers));
            } catch (const std::exception &e) {
                c.expect(false, std::string("random pulse threw: ") + e.what());
                break;
            }
            c.expect(std::abs(s.norm_squared() - 1) < 1e-12, "norm drift in case " + std::to_string(k));
            for (auto &[label, amp] : s.amplitudes()) {
                const int total = label[0].rydberg() + label[1].rydberg();
                c.expect(label[0].rydberg() <= 1 && label[1].rydberg() <= 1 && (!coupled || total <= 1),
                         "blockade violated in case " + std::to_string(k));
            }
        }
    }

    // Kernel continuity at both seams and normalisation.
    for (int k = 0; k < 100; ++k) {
        const double R = std::ldexp(ticks(rng) + (1 << 20), -18);
        const double r = R * std::ldexp(ticks(rng) - 1, -20);
        const double xi = R - r, xo = R + r;
        c.expect(std::abs(kernel_S(r, xi, R) / (2 * pi * xi) - 1) < 1e-9, "S inner seam");
        c.expect(std::abs(kernel_A(r, xi, R) / (4 * pi * xi * xi) - 1) < 1e-9, "A inner seam");
        c.expect(kernel_S(r, xo, R) / (2 * pi * xo) < 1e-9, "S outer seam");
        c.expect(kernel_A(r, xo, R) / (4 * pi * xo * xo) < 1e-9, "A outer seam");
        c.rel(kernel_measure(Dim::two_d, r, R).value, pi * R * R, 1e-7, "S normalisation");
        c.rel(kernel_measure(Dim::three_d, r, R).value, 4.0 / 3 * pi * R * R * R, 1e-7, "A normalisation");
    }

    // Scaling laws of the error terms.
    std::uniform_int_distribution<int> nt(50, 150), nn(2, 3000);
    for (int k = 0; k < 100; ++k) {
        const Dim dim = k % 2 ? Dim::three_d : Dim::two_d;
        const auto in = ErrorInputs::make(nt(rng), std::pow(10.0, 2 + 6 * u(rng)), nn(rng), dim);
        auto w = in;
        w.omega *= 3;
        auto n2 = in;
        n2.n *= 2;
        auto other = ErrorInputs::make(in.rydberg.n_tilde == 150 ? 50 : in.rydberg.n_tilde + 1, in.omega, in.n, dim);
        c.rel(e1_imperfect_blockade(w) / e1_imperfect_blockade(in), 9, 1e-12, "e1 ~ omega^2");
        c.rel(e1_imperfect_blockade(n2) / e1_imperfect_blockade(in), dim == Dim::three_d ? 8 : 16, 1e-11, "e1 ~ n^d");
        c.rel(e2_rydberg_decay(w) / e2_rydberg_decay(in), 1.0 / 3, 1e-12, "e2 ~ 1/omega");
        c.rel(e2_rydberg_decay(n2) / e2_rydberg_decay(in), 1 / std::sqrt(2.0), 1e-12, "e2 ~ n^-1/2");
        c.rel(e3_self_blockade(w) / e3_self_blockade(in), 9, 1e-12, "e3 ~ omega^2");
        c.expect(e4_r2_decay_nonlocal(w) == e4_r2_decay_nonlocal(in), "e4 independent of omega");
        for (auto *f : {&e5_dark_counts, &e6_memory_loss, &e7_photon_collection}) {
            c.expect((*f)(w) == (*f)(in) && (*f)(other) == (*f)(in), "e5..e7 independent of omega and n_tilde");
        }
    }

    // Gain identity.
    for (int k = 0; k < 100; ++k) {
        const int N = 2 + static_cast<int>(u(rng) * 200000);
        const double E = std::pow(10.0, -7 + 4 * u(rng));
        const auto m = GhzMeasurementModel::from_contrast(N, std::exp(-E * N));
        const auto rep = stability_report(m, std::pow(10.0, 4 * u(rng)), std::pow(10.0, 4 * u(rng) - 2));
        c.rel(rep.gain_G, gain(N, E), 1e-13, "gain identity");
    }
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "3D reference budget (n=146)", 1, reference_3d},
        {2, "2D reference budget (n=54)", 1, reference_2d},
        {3, "optimizer n_opt and brute-force global optimality", 20, optimizer},
        {4, "network plan for E=1.8e-5 and E=3.0e-5", 5, network_plan},
        {5, "geometry integrals and lattice-sum oracle", 60, geometry},
        {6, "average Fisher information", 5, fisher},
        {7, "protocol end-to-end K<=3, M<=2, n<=3", 60, protocol},
        {8, "property suite on randomized grids", 30, properties},
    };
    int failed = 0;
    for (const auto &cr : criteria) {
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(check);
        } catch (const std::exception &e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= cr.budget_seconds) {
            check.expect(false, "runtime " + std::to_string(secs) + " s exceeds " + std::to_string(cr.budget_seconds) +
                                    " s");
        }
        const bool ok = check.failures().empty();
        failed += ok ? 0 : 1;
        std::printf("%s criterion %d: %s (%.3f s)\n", ok ? "PASS" : "FAIL", cr.id, cr.name.c_str(), secs);
        for (std::size_t i = 0; i < check.failures().size() && i < 10; ++i) {
            std::printf("    %s\n", check.failures()[i].c_str());
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
