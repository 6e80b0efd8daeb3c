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
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ghznet/error.hpp"
#include "ghznet/error_model.hpp"
#include "ghznet/sim/gadgets.hpp"
#include "ghznet/sim/measure.hpp"
#include "ghznet/sim/pulse.hpp"
#include "ghznet/sim/state.hpp"

/// End-to-end construction of the network GHZ state
/// (|f>^N + |g>^N) / sqrt2, N = K M n, in the ideal limit.
///
/// Photonic variant, per clock k = 0..K-1 with seed ensemble 0:
///   1. seed -> (|0> + |1_f>)(|0> + |1_s>) / 2
///   2. time-bin photons; the first clock sends only s photons, the last
///      only f photons
///   3. Bell measurement of clock k's s photons with clock k+1's f photons;
///      heralds |0_s 1_f> +- |1_s 0_f>, the minus sign is fixed with a pi
///      phase on the f qubit of clock k+1
///   4. on clocks 0..K-2: flip s iff f = 0, measure s -> m_k, reset s to g;
///      on clock K-1 the unused s qubit is measured and reset.
///      f_{k+1} = f_k xor m_k, so f_j is flipped iff m_0 xor .. xor m_{j-1}
///   -  fan-out of the seed's f qubit to the other M-1 ensembles of the
///      clock through a messenger register parked in s
///   5. every ensemble: |0_f> -> |f^n>, |1_f> -> |g^n>
///
/// Messenger variant: one messenger in (|s> + |r2>) / sqrt2 visits all K M
/// ensembles, is read out in the +- basis (minus fixed with a pi phase on
/// the f qubit of the first ensemble), then step 5 runs everywhere.
namespace ghznet::sim {

struct BellOutcome {
    bool heralded = false;
    BellPattern pattern;
    double probability = 0;
};

/// Fixes the sign of a heralded link: the '-' patterns get Z on f of b.
inline void apply_bell_correction(CollectiveState &state, int reg_b, const BellPattern &p) {
    if (p.heralded() && p.sign() < 0) {
        evolve(state, PulseOp::phase_shift(reg_b, Level::f, gadgets::pi));
    }
}

namespace internal {

inline void require_ground_ensemble(const CollectiveState &state, int reg) {
    const auto &info = state.info(reg);
    detail::require(info.kind == RegisterKind::ensemble, "step 1: register " + info.name + " is not an ensemble");
    detail::require(info.n >= 2, "step 1: needs n >= 2 so that f and s excitations can coexist");
    for (auto &[label, a] : state.amplitudes()) {
        const auto &r = label[static_cast<std::size_t>(reg)];
        detail::require(r[Level::g] == info.n && r.photons() == 0,
                        "step 1: register " + info.name + " is not in |g^n> (branch " + state.label_string(label) + ")");
    }
}

} // namespace internal

inline CollectiveState run_step1_init(CollectiveState state, int reg) {
    internal::require_ground_ensemble(state, reg);
    evolve(state, gadgets::step1_init(reg));
    return state;
}

inline CollectiveState run_step2_photon_emission(CollectiveState state, int reg,
                                                 gadgets::EmitWhich which = gadgets::EmitWhich::both) {
    evolve(state, gadgets::step2_emission(reg, which));
    return state;
}

/// Sampled Bell measurement; on success the sign is corrected.
inline std::pair<CollectiveState, BellOutcome> run_step3_bell_merge(const CollectiveState &state, int reg_a,
                                                                    int reg_b, std::mt19937_64 &rng) {
    auto b = sample_branch(bell_measure(state, reg_a, reg_b), rng);
    BellOutcome out{b.outcome.heralded(), b.outcome, b.probability};
    if (out.heralded) {
        apply_bell_correction(b.state, reg_b, b.outcome);
    }
    return {std::move(b.state), out};
}

/// Connect gadget followed by the exhaustive s measurement (with reset).
inline std::vector<Branch<int>> step4_branches(CollectiveState state, int reg) {
    evolve(state, gadgets::step4_connect(reg));
    return measure_level(state, reg, Level::s, Level::g);
}

inline std::pair<CollectiveState, int> run_step4_cnot_connect(const CollectiveState &state, int reg,
                                                              std::mt19937_64 &rng) {
    auto b = sample_branch(step4_branches(state, reg), rng);
    return {std::move(b.state), b.outcome};
}

/// f_j is flipped iff the xor of the outcomes of the links to its left is 1.
inline Sequence chain_correction(const std::vector<int> &seeds, const std::vector<int> &outcomes) {
    detail::require(outcomes.size() + 1 == seeds.size() || (seeds.empty() && outcomes.empty()),
                    "chain_correction: need one outcome per link");
    Sequence out;
    int parity = 0;
    for (std::size_t j = 1; j < seeds.size(); ++j) {
        parity ^= outcomes[j - 1] & 1;
        if (parity) {
            auto f = gadgets::flip_f(seeds[j]);
            out.insert(out.end(), f.begin(), f.end());
        }
    }
    return out;
}

inline CollectiveState run_step5_local_growth(CollectiveState state, int reg) {
    evolve(state, gadgets::step5_growth(reg, state.info(reg).n));
    return state;
}

/// Conditional pairs on every ensemble followed by the +- readout of the
/// messenger (outcome 1 = '+'), the sign correction and the messenger reset.
inline std::vector<Branch<int>> messenger_branches(CollectiveState state, int messenger,
                                                   const std::vector<int> &ensembles) {
    detail::require(!ensembles.empty(), "messenger variant: need at least one ensemble");
    evolve(state, gadgets::messenger_prepare(messenger));
    for (int e : ensembles) {
        evolve(state, gadgets::messenger_conditional(messenger, e));
    }
    evolve(state, gadgets::messenger_readout(messenger));
    auto branches = measure_level(state, messenger, Level::r2, Level::s);
    for (auto &b : branches) {
        if (b.outcome == 0) {
            evolve(b.state, PulseOp::phase_shift(ensembles.front(), Level::f, gadgets::pi));
        }
    }
    return branches;
}

inline std::pair<CollectiveState, int> run_messenger_variant(const CollectiveState &state, int messenger,
                                                             const std::vector<int> &ensembles,
                                                             std::mt19937_64 &rng) {
    auto b = sample_branch(messenger_branches(state, messenger, ensembles), rng);
    return {std::move(b.state), b.outcome};
}

/// Register indices of a protocol instance.
struct Layout {
    std::vector<std::vector<int>> ensembles; ///< [clock][ensemble]
    std::vector<int> clock_messengers;       ///< photonic variant with M >= 2
    int global_messenger = -1;               ///< messenger variant

    std::vector<int> seeds() const {
        std::vector<int> out;
        for (auto &c : ensembles) {
            out.push_back(c.front());
        }
        return out;
    }
    std::vector<int> all_ensembles() const {
        std::vector<int> out;
        for (auto &c : ensembles) {
            out.insert(out.end(), c.begin(), c.end());
        }
        return out;
    }
};

enum class SimMode { sampled, exhaustive };

inline SimMode parse_sim_mode(std::string_view text) {
    if (text == "sampled" || text == "sample") {
        return SimMode::sampled;
    }
    if (text == "exhaustive") {
        return SimMode::exhaustive;
    }
    throw InvalidInput("mode must be sample, sampled or exhaustive, got '" + std::string(text) + "'");
}

inline std::string_view to_string(SimMode m) { return m == SimMode::sampled ? "sampled" : "exhaustive"; }

struct ProtocolConfig {
    int clocks = 2;     ///< K
    int ensembles = 1;  ///< M per clock
    int atoms = 2;      ///< n per ensemble
    Variant variant = Variant::photonic;
    SimMode mode = SimMode::exhaustive;
    std::uint64_t seed = 1;
    bool trace = false;
    int max_attempts = 10000; ///< sampled mode: herald retries

    void validate() const {
        detail::require(clocks >= 1 && ensembles >= 1 && atoms >= 1, "simulate: clocks, ensembles, atoms must be >= 1");
        detail::require(clocks * ensembles <= 12 && atoms <= 16, "simulate: desk-scale limits are K*M <= 12, n <= 16");
        detail::require(variant == Variant::messenger || atoms >= 2,
                        "simulate: the photonic variant needs n >= 2 (f and s excitations must coexist)");
        detail::require(max_attempts >= 1, "simulate: max_attempts must be >= 1");
    }
};

struct TraceEntry {
    std::string step;
    std::vector<std::pair<std::string, amplitude>> amplitudes; ///< |a| > 1e-12
};

struct ProtocolBranch {
    double probability = 0;
    std::vector<std::string> record; ///< measurement outcomes in order
    bool heralded = true;
    double fidelity = 0;
    CollectiveState state;
    std::vector<TraceEntry> trace;
};

struct ProtocolResult {
    ProtocolConfig config;
    Layout layout;
    std::vector<ProtocolBranch> branches;
    double total_probability = 0;   ///< sum over all branches including failures
    double success_probability = 0; ///< heralded branches only
    double min_fidelity = 1;        ///< over heralded branches
    int attempts = 1;               ///< sampled mode
};

inline CollectiveState initial_state(const ProtocolConfig &cfg, Layout &layout) {
    CollectiveState s;
    layout = {};
    for (int k = 0; k < cfg.clocks; ++k) {
        layout.ensembles.emplace_back();
        for (int m = 0; m < cfg.ensembles; ++m) {
            layout.ensembles.back().push_back(s.add_register(
                {cfg.atoms, RegisterKind::ensemble, k, m, "C" + std::to_string(k) + "E" + std::to_string(m)}));
        }
    }
    if (cfg.variant == Variant::photonic && cfg.ensembles >= 2) {
        for (int k = 0; k < cfg.clocks; ++k) {
            layout.clock_messengers.push_back(
                s.add_register({1, RegisterKind::messenger, k, 0, "C" + std::to_string(k) + "M"}, Level::s));
        }
    }
    if (cfg.variant == Variant::messenger) {
        layout.global_messenger = s.add_register({1, RegisterKind::messenger, 0, 0, "M"}, Level::s);
    }
    return s;
}

/// (|f^N> + |g^N>) / sqrt2 with every messenger in s and no photons.
inline CollectiveState ghz_target(const CollectiveState &like) {
    CollectiveState t = like;
    Label all_f, all_g;
    for (auto &info : like.registers()) {
        RegisterState f, g;
        if (info.kind == RegisterKind::ensemble) {
            f.at(Level::f) = static_cast<std::uint8_t>(info.n);
            g.at(Level::g) = static_cast<std::uint8_t>(info.n);
        } else {
            f.at(Level::s) = g.at(Level::s) = static_cast<std::uint8_t>(info.n);
        }
        all_f.push_back(f);
        all_g.push_back(g);
    }
    const double h = 1.0 / std::sqrt(2.0);
    t.assign({{all_f, h}, {all_g, h}});
    return t;
}

inline double ghz_fidelity(const CollectiveState &state) { return std::norm(ghz_target(state).overlap(state)); }

/// P(parity 0) after the phase e^{i phi n_f} on every ensemble, read out by
/// X on every atom: (1 + <X^N>) / 2. Ensembles must hold only g and f.
inline double parity_probability_sim(const CollectiveState &state, double phi) {
    const auto &regs = state.registers();
    amplitude expect{};
    for (auto &[label, a] : state.amplitudes()) {
        Label swapped = label;
        int nf = 0;
        for (std::size_t i = 0; i < regs.size(); ++i) {
            if (regs[i].kind != RegisterKind::ensemble) {
                continue;
            }
            const auto &r = label[i];
            detail::require(r[Level::g] + r[Level::f] == regs[i].n && r.photons() == 0,
                            "parity readout: ensembles must hold only g and f");
            swapped[i].at(Level::g) = r.count[static_cast<std::size_t>(Level::f)];
            swapped[i].at(Level::f) = r.count[static_cast<std::size_t>(Level::g)];
            nf += r[Level::f];
        }
        int nf_swapped = 0;
        for (std::size_t i = 0; i < regs.size(); ++i) {
            if (regs[i].kind == RegisterKind::ensemble) {
                nf_swapped += swapped[i][Level::f];
            }
        }
        const amplitude phased = a * std::polar(1.0, phi * nf);
        const amplitude partner = state.amplitude_of(swapped) * std::polar(1.0, phi * nf_swapped);
        expect += std::conj(partner) * phased;
    }
    return 0.5 * (1.0 + expect.real());
}

namespace internal {

struct Work {
    CollectiveState state;
    double probability = 1;
    std::vector<std::string> record;
    std::vector<int> step4_outcomes;
    bool failed = false;
    std::vector<TraceEntry> trace;
};

class Runner {
  public:
    Runner(const ProtocolConfig &cfg, std::mt19937_64 &rng) : cfg_(cfg), rng_(rng) {}

    std::vector<Work> &works() { return works_; }

    void start(CollectiveState s) {
        works_.clear();
        Work w;
        w.state = std::move(s);
        works_.push_back(std::move(w));
        record_trace("initial");
    }

    void each(const std::string &step, const std::function<void(Work &)> &fn) {
        for (auto &w : works_) {
            if (!w.failed) {
                fn(w);
            }
        }
        record_trace(step);
    }

    /// Expands every live work item into its measurement branches; sampled
    /// mode keeps one of them.
    template <class Outcome>
    void branch(const std::string &step, const std::function<std::vector<Branch<Outcome>>(const Work &)> &expand,
                const std::function<void(Work &, const Outcome &)> &after) {
        std::vector<Work> next;
        for (auto &w : works_) {
            if (w.failed) {
                next.push_back(std::move(w));
                continue;
            }
            auto branches = expand(w);
            if (cfg_.mode == SimMode::sampled) {
                auto chosen = sample_branch(std::move(branches), rng_);
                branches.clear();
                branches.push_back(std::move(chosen));
            }
            for (auto &b : branches) {
                Work child{std::move(b.state), w.probability * b.probability, w.record, w.step4_outcomes, false,
                           w.trace};
                after(child, b.outcome);
                next.push_back(std::move(child));
            }
        }
        works_ = std::move(next);
        record_trace(step);
    }

    bool any_failed() const {
        for (auto &w : works_) {
            if (w.failed) {
                return true;
            }
        }
        return false;
    }

  private:
    void record_trace(const std::string &step) {
        if (!cfg_.trace) {
            return;
        }
        for (auto &w : works_) {
            if (w.failed) {
                continue;
            }
            TraceEntry e{step, {}};
            for (auto &[label, a] : w.state.amplitudes()) {
                if (std::abs(a) > 1e-12) {
                    e.amplitudes.emplace_back(w.state.label_string(label), a);
                }
            }
            w.trace.push_back(std::move(e));
        }
    }

    const ProtocolConfig &cfg_;
    std::mt19937_64 &rng_;
    std::vector<Work> works_;
};

inline void run_photonic(Runner &run, const ProtocolConfig &cfg, const Layout &layout) {
    const auto seeds = layout.seeds();
    const int K = cfg.clocks;
    run.each("step1", [&](Work &w) {
        for (int s : seeds) {
            w.state = run_step1_init(std::move(w.state), s);
        }
    });
    if (K >= 2) {
        run.each("step2", [&](Work &w) {
            for (int k = 0; k < K; ++k) {
                const auto which = k == 0       ? gadgets::EmitWhich::s_only
                                   : k == K - 1 ? gadgets::EmitWhich::f_only
                                                : gadgets::EmitWhich::both;
                w.state = run_step2_photon_emission(std::move(w.state), seeds[static_cast<std::size_t>(k)], which);
            }
        });
    }
    for (int k = 0; k + 1 < K; ++k) {
        const int a = seeds[static_cast<std::size_t>(k)];
        const int b = seeds[static_cast<std::size_t>(k + 1)];
        run.branch<BellPattern>(
            "step3 link " + std::to_string(k), [&](const Work &w) { return bell_measure(w.state, a, b); },
            [&](Work &w, const BellPattern &p) {
                w.record.push_back("bell" + std::to_string(k) + "=" + p.name());
                if (!p.heralded()) {
                    w.failed = true;
                    return;
                }
                apply_bell_correction(w.state, b, p);
            });
    }
    for (int k = 0; k + 1 < K; ++k) {
        const int reg = seeds[static_cast<std::size_t>(k)];
        run.branch<int>(
            "step4 clock " + std::to_string(k), [&](const Work &w) { return step4_branches(w.state, reg); },
            [&](Work &w, const int &m) {
                w.record.push_back("m" + std::to_string(k) + "=" + std::to_string(m));
                w.step4_outcomes.push_back(m);
            });
    }
    const int last = seeds.back();
    run.branch<int>(
        "step4 discard", [&](const Work &w) { return measure_level(w.state, last, Level::s, Level::g); },
        [&](Work &w, const int &m) { w.record.push_back("discard=" + std::to_string(m)); });
    run.each("chain correction", [&](Work &w) { evolve(w.state, chain_correction(seeds, w.step4_outcomes)); });
    if (cfg.ensembles >= 2) {
        run.each("fan-out", [&](Work &w) {
            for (int k = 0; k < K; ++k) {
                const auto &ens = layout.ensembles[static_cast<std::size_t>(k)];
                evolve(w.state, gadgets::fan_out(ens.front(), layout.clock_messengers[static_cast<std::size_t>(k)],
                                                 std::vector<int>(ens.begin() + 1, ens.end())));
            }
        });
    }
}

inline void run_messenger(Runner &run, const Layout &layout) {
    const auto ens = layout.all_ensembles();
    run.branch<int>(
        "messenger", [&](const Work &w) { return messenger_branches(w.state, layout.global_messenger, ens); },
        [&](Work &w, const int &m) { w.record.push_back(std::string("messenger=") + (m ? "+" : "-")); });
}

} // namespace internal

/// Runs the full protocol. Exhaustive mode returns every measurement branch
/// (failed heralds included, with their probabilities); sampled mode
/// follows one seeded trajectory and restarts after a failed herald.
inline ProtocolResult run_protocol(const ProtocolConfig &cfg) {
    cfg.validate();
    ProtocolResult result;
    result.config = cfg;
    std::mt19937_64 rng(cfg.seed);
    internal::Runner run(cfg, rng);

    for (int attempt = 1;; ++attempt) {
        run.start(initial_state(cfg, result.layout));
        if (cfg.variant == Variant::photonic) {
            internal::run_photonic(run, cfg, result.layout);
        } else {
            internal::run_messenger(run, result.layout);
        }
        result.attempts = attempt;
        if (cfg.mode == SimMode::exhaustive || !run.any_failed()) {
            break;
        }
        if (attempt >= cfg.max_attempts) {
            throw ComputationError("simulate: no heralded run within " + std::to_string(cfg.max_attempts) +
                                   " attempts");
        }
    }
    run.each("step5", [&](internal::Work &w) {
        for (int e : result.layout.all_ensembles()) {
            w.state = run_step5_local_growth(std::move(w.state), e);
        }
    });

    result.min_fidelity = 1.0;
    bool any_success = false;
    for (auto &w : run.works()) {
        ProtocolBranch b;
        b.probability = w.probability;
        b.record = w.record;
        b.heralded = !w.failed;
        b.trace = std::move(w.trace);
        result.total_probability += w.probability;
        if (b.heralded) {
            b.fidelity = ghz_fidelity(w.state);
            result.success_probability += w.probability;
            result.min_fidelity = std::min(result.min_fidelity, b.fidelity);
            any_success = true;
        }
        b.state = std::move(w.state);
        result.branches.push_back(std::move(b));
    }
    if (!any_success) {
        result.min_fidelity = 0;
    }
    return result;
}

} // namespace ghznet::sim
