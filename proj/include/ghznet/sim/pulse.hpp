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
#include <complex>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ghznet/error.hpp"
#include "ghznet/sim/state.hpp"

/// Ideal pulses acting on the collective-mode state.
///
/// A Rabi pulse [phi]_{a,b} with axis angle chi acts on every branch as
/// exp(-i (phi/2) (e^{i chi} T + e^{-i chi} T^dag)), where T moves one atom
/// of the addressed register from a to b with the bosonic matrix element
/// sqrt(n_a (n_b + 1)). With chi = 0 a pi pulse maps |a> -> -i|b>; with
/// chi = pi/2 it maps |a> -> |b> and |b> -> -|a>.
///
/// Blockade: a register never holds more than one Rydberg excitation
/// (r1 and r2 block each other), and a pulse may list blocker registers
/// whose Rydberg population forbids any Rydberg population in the target.
namespace ghznet::sim {

enum class PulseKind { rabi_pulse, phase_shift, photon_emit };

/// How `phase` is interpreted for a Rabi pulse.
///  - single_atom: phase is the single-atom Rabi phase; the collective
///    rotation angle follows from the occupation numbers.
///  - collective: phase is the rotation angle of the two-state collective
///    transition, whatever its sqrt(n) enhancement. Only defined when the
///    branch's allowed segment has exactly two states.
enum class Scaling { single_atom, collective };

inline constexpr double real_axis = std::numbers::pi / 2;

struct PulseOp {
    PulseKind kind = PulseKind::rabi_pulse;
    int target = 0;
    Level from = Level::g;
    Level to = Level::r1;
    double phase = std::numbers::pi;
    double axis = 0.0;
    Scaling scaling = Scaling::single_atom;
    std::vector<int> blockers;
    int bin = 0; ///< time bin index 0..3 for photon_emit

    static PulseOp rabi(int target, Level from, Level to, double phase, double axis = 0.0,
                        Scaling scaling = Scaling::single_atom, std::vector<int> blockers = {}) {
        PulseOp op;
        op.kind = PulseKind::rabi_pulse;
        op.target = target;
        op.from = from;
        op.to = to;
        op.phase = phase;
        op.axis = axis;
        op.scaling = scaling;
        op.blockers = std::move(blockers);
        return op;
    }

    static PulseOp phase_shift(int target, Level level, double angle) {
        PulseOp op;
        op.kind = PulseKind::phase_shift;
        op.target = target;
        op.from = level;
        op.to = level;
        op.phase = angle;
        return op;
    }

    static PulseOp photon_emit(int target, int bin) {
        PulseOp op;
        op.kind = PulseKind::photon_emit;
        op.target = target;
        op.from = Level::e;
        op.to = Level::g;
        op.bin = bin;
        return op;
    }
};

using Sequence = std::vector<PulseOp>;

inline bool is_coupled_pair(Level a, Level b) {
    auto is = [&](Level x, Level y) { return (a == x && b == y) || (a == y && b == x); };
    return is(Level::g, Level::r1) || is(Level::f, Level::r1) || is(Level::f, Level::s) || is(Level::s, Level::r2) ||
           is(Level::e, Level::r1);
}

inline void validate(const PulseOp &op, const CollectiveState &state) {
    state.check_register(op.target);
    detail::require(std::isfinite(op.phase) && std::isfinite(op.axis), "pulse: phase must be finite");
    if (op.kind == PulseKind::rabi_pulse) {
        detail::require(is_coupled_pair(op.from, op.to),
                        "pulse: levels " + std::string(level_name(op.from)) + "," + std::string(level_name(op.to)) +
                            " are not a driven pair");
        for (int b : op.blockers) {
            state.check_register(b);
            detail::require(b != op.target, "pulse: a register cannot block itself");
        }
    }
    if (op.kind == PulseKind::photon_emit) {
        detail::require(op.bin >= 0 && op.bin < num_time_bins, "photon_emit: bin must be 0..3");
    }
}

/// The inverse operation. Photon emission is not invertible.
inline PulseOp inverse(PulseOp op) {
    detail::require(op.kind != PulseKind::photon_emit, "inverse: photon emission is irreversible");
    op.phase = -op.phase;
    return op;
}

inline Sequence inverse(const Sequence &seq) {
    Sequence out;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        out.push_back(inverse(*it));
    }
    return out;
}

namespace internal {

inline bool blockade_allows(const Label &label, int target, const std::vector<int> &blockers) {
    const auto &r = label[static_cast<std::size_t>(target)];
    if (r.rydberg() > 1) {
        return false;
    }
    if (r.rydberg() == 1) {
        for (int b : blockers) {
            if (label[static_cast<std::size_t>(b)].rydberg() > 0) {
                return false;
            }
        }
    }
    return true;
}

inline Label with_transfer(Label label, int target, Level from, Level to, int total, int k) {
    auto &r = label[static_cast<std::size_t>(target)];
    r.at(from) = static_cast<std::uint8_t>(total - k);
    r.at(to) = static_cast<std::uint8_t>(k);
    return label;
}

inline void apply_rabi(CollectiveState &state, const PulseOp &op) {
    const auto t = static_cast<std::size_t>(op.target);
    // Group branches into chains that differ only in how many atoms sit in
    // `to` versus `from`.
    std::map<Label, std::map<int, amplitude>> chains;
    for (auto &[label, a] : state.amplitudes()) {
        const int total = label[t][op.from] + label[t][op.to];
        const int k = label[t][op.to];
        chains[with_transfer(label, op.target, op.from, op.to, total, 0)][k] += a;
    }

    std::map<Label, amplitude> out;
    for (auto &[key, members] : chains) {
        const int total = key[t][op.from];
        auto allowed = [&](int k) {
            return k >= 0 && k <= total &&
                   blockade_allows(with_transfer(key, op.target, op.from, op.to, total, k), op.target, op.blockers);
        };
        std::set<int> done;
        for (auto &[k_start, unused] : members) {
            if (done.contains(k_start)) {
                continue;
            }
            if (!allowed(k_start)) {
                throw InvalidInput("pulse: branch " + state.label_string(
                                                          with_transfer(key, op.target, op.from, op.to, total, k_start)) +
                                   " already violates the blockade predicate");
            }
            int lo = k_start, hi = k_start;
            while (allowed(lo - 1)) {
                --lo;
            }
            while (allowed(hi + 1)) {
                ++hi;
            }
            for (int k = lo; k <= hi; ++k) {
                done.insert(k);
            }
            const int d = hi - lo + 1;
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
            for (int k = lo; k <= hi; ++k) {
                if (auto it = members.find(k); it != members.end()) {
                    v(k - lo) = it->second;
                }
            }
            if (d > 1) {
                if (op.scaling == Scaling::collective && d != 2) {
                    throw InvalidInput("pulse: collective phase undefined for branch " +
                                       state.label_string(with_transfer(key, op.target, op.from, op.to, total, k_start)) +
                                       " (" + std::to_string(d) + " coupled states)");
                }
                const amplitude e_axis = std::polar(1.0, op.axis);
                Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
                for (int i = 0; i + 1 < d; ++i) {
                    const int k = lo + i;
                    const double c =
                        op.scaling == Scaling::collective ? 1.0 : std::sqrt(static_cast<double>((total - k) * (k + 1)));
                    H(i + 1, i) = 0.5 * op.phase * c * e_axis;
                    H(i, i + 1) = std::conj(H(i + 1, i));
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
                const Eigen::VectorXcd phases =
                    es.eigenvalues().unaryExpr([](double w) { return std::polar(1.0, -w); });
                v = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * v;
            }
            for (int k = lo; k <= hi; ++k) {
                if (std::abs(v(k - lo)) >= prune_threshold) {
                    out[with_transfer(key, op.target, op.from, op.to, total, k)] += v(k - lo);
                }
            }
        }
    }
    state.assign(std::move(out));
}

inline void apply_phase_shift(CollectiveState &state, const PulseOp &op) {
    const auto t = static_cast<std::size_t>(op.target);
    std::map<Label, amplitude> out;
    for (auto &[label, a] : state.amplitudes()) {
        out.emplace(label, a * std::polar(1.0, op.phase * label[t][op.from]));
    }
    state.assign(std::move(out));
}

inline void apply_photon_emit(CollectiveState &state, const PulseOp &op) {
    const auto t = static_cast<std::size_t>(op.target);
    std::map<Label, amplitude> out;
    for (auto &[label, a] : state.amplitudes()) {
        Label l = label;
        auto &r = l[t];
        const int ne = r[Level::e];
        ghznet::detail::require(ne <= 1, "photon_emit: more than one atom in e");
        if (ne == 1) {
            auto &bin = r.bins[static_cast<std::size_t>(op.bin)];
            ghznet::detail::require(bin == 0, "photon_emit: time bin t" + std::to_string(op.bin + 1) +
                                                  " of " + state.info(op.target).name + " already used");
            r.at(Level::e) = 0;
            r.at(Level::g) += 1;
            bin = 1;
        }
        out[l] += a;
    }
    state.assign(std::move(out));
}

} // namespace internal

/// Applies `op` in place and re-checks norm and blockade.
inline void evolve(CollectiveState &state, const PulseOp &op) {
    validate(op, state);
    switch (op.kind) {
    case PulseKind::rabi_pulse:
        internal::apply_rabi(state, op);
        break;
    case PulseKind::phase_shift:
        internal::apply_phase_shift(state, op);
        break;
    case PulseKind::photon_emit:
        internal::apply_photon_emit(state, op);
        break;
    }
    state.check_norm("apply_pulse");
    state.check_blockade("apply_pulse");
}

inline void evolve(CollectiveState &state, const Sequence &seq) {
    for (auto &op : seq) {
        evolve(state, op);
    }
}

inline CollectiveState apply_pulse(CollectiveState state, const PulseOp &op) {
    evolve(state, op);
    return state;
}

} // namespace ghznet::sim
