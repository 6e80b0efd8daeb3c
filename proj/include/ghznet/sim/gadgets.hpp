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
#include <numbers>
#include <vector>

#include "ghznet/sim/pulse.hpp"

/// Pulse sequences of the protocol, in time order.
///
/// Every transfer uses the real rotation axis, so a pi pulse [a,b] maps
/// |a> -> |b>. Qubits of an ensemble: the f qubit is n_f in {0, 1}, the s
/// qubit is n_s in {0, 1}.
namespace ghznet::sim::gadgets {

inline constexpr double pi = std::numbers::pi;

inline PulseOp transfer(int reg, Level from, Level to, double phase = pi, std::vector<int> blockers = {}) {
    return PulseOp::rabi(reg, from, to, phase, real_axis, Scaling::single_atom, std::move(blockers));
}

inline PulseOp collective(int reg, Level from, Level to, double angle, std::vector<int> blockers = {}) {
    return PulseOp::rabi(reg, from, to, angle, real_axis, Scaling::collective, std::move(blockers));
}

inline Sequence concat(std::initializer_list<Sequence> parts) {
    Sequence out;
    for (auto &p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

/// |g^n> -> (|0> + |1_f>)(|0> + |1_s>) / 2.
inline Sequence step1_init(int reg) {
    return {
        collective(reg, Level::g, Level::r1, pi / 2), transfer(reg, Level::r1, Level::f),
        transfer(reg, Level::f, Level::s),            collective(reg, Level::g, Level::r1, pi / 2),
        transfer(reg, Level::r1, Level::f),
    };
}

/// Emits one photon into `bin` iff the s qubit is 0. The s excitation is
/// parked in r2, where it blocks the g -> r1 excitation.
inline Sequence emit_if_s_empty(int reg, int bin) {
    return {
        transfer(reg, Level::s, Level::r2), collective(reg, Level::g, Level::r1, pi),
        transfer(reg, Level::r1, Level::e), PulseOp::photon_emit(reg, bin),
        transfer(reg, Level::r2, Level::s),
    };
}

/// Exact X on the f qubit; identity while r2 is occupied.
inline Sequence flip_f(int reg) {
    return {
        transfer(reg, Level::f, Level::r1),
        PulseOp::phase_shift(reg, Level::r1, pi),
        collective(reg, Level::g, Level::r1, pi),
        transfer(reg, Level::r1, Level::f),
    };
}

/// Rotation carrying f into s; its inverse carries s into f.
inline Sequence swap_fs(int reg) { return {transfer(reg, Level::f, Level::s)}; }

/// Exact X on the s qubit.
inline Sequence flip_s(int reg) { return concat({inverse(swap_fs(reg)), flip_f(reg), swap_fs(reg)}); }

enum class EmitWhich { both, s_only, f_only };

/// Four time bins: t1 iff s = 0, t2 iff f = 0, t3 iff s = 1, t4 iff f = 1.
inline Sequence step2_emission(int reg, EmitWhich which) {
    const bool s_photons = which != EmitWhich::f_only;
    const bool f_photons = which != EmitWhich::s_only;
    Sequence out;
    auto add = [&](const Sequence &s) { out.insert(out.end(), s.begin(), s.end()); };
    if (s_photons) {
        add(emit_if_s_empty(reg, 0));
    }
    if (f_photons) {
        add(concat({inverse(swap_fs(reg)), emit_if_s_empty(reg, 1), swap_fs(reg)}));
    }
    if (s_photons) {
        add(concat({flip_s(reg), emit_if_s_empty(reg, 2), inverse(flip_s(reg))}));
    }
    if (f_photons) {
        add(concat({flip_f(reg), inverse(swap_fs(reg)), emit_if_s_empty(reg, 3), swap_fs(reg),
                    inverse(flip_f(reg))}));
    }
    return out;
}

/// Flips f iff s = 0: |0_f 0_s> -> |1_f 0_s>, |0_f 1_s> unchanged.
inline Sequence conditional_flip(int reg) {
    return concat({{transfer(reg, Level::s, Level::r2)}, flip_f(reg), {transfer(reg, Level::r2, Level::s)}});
}

/// Flips s iff f = 0, leaving the measured s qubit carrying the parity of
/// the two links held by this ensemble.
inline Sequence step4_connect(int reg) {
    return concat({inverse(swap_fs(reg)), conditional_flip(reg), swap_fs(reg)});
}

/// |0_f> -> |f^n>, |1_f> -> |g^n>; s and r2 are left empty.
inline Sequence step5_growth(int reg, int n) {
    Sequence out = {transfer(reg, Level::f, Level::s), transfer(reg, Level::s, Level::r2)};
    for (int j = 1; j <= n; ++j) {
        out.push_back(transfer(reg, Level::g, Level::r1, pi / std::sqrt(static_cast<double>(n - j + 1))));
        out.push_back(transfer(reg, Level::r1, Level::f, pi / std::sqrt(static_cast<double>(j))));
    }
    out.push_back(transfer(reg, Level::r2, Level::s));
    out.push_back(transfer(reg, Level::s, Level::f));
    out.push_back(transfer(reg, Level::f, Level::r1));
    out.push_back(transfer(reg, Level::s, Level::f, -pi));
    out.push_back(collective(reg, Level::r1, Level::g, pi));
    return out;
}

/// Copies the f qubit of `seed` onto every ensemble in `others` (all in g)
/// through a messenger register parked in s, then returns the messenger to s.
inline Sequence fan_out(int seed, int messenger, const std::vector<int> &others) {
    Sequence out = {
        transfer(seed, Level::f, Level::r1),
        transfer(messenger, Level::s, Level::r2, pi, {seed}),
        transfer(seed, Level::r1, Level::f),
    };
    for (int o : others) {
        out.push_back(collective(o, Level::g, Level::r1, pi, {messenger}));
        out.push_back(transfer(o, Level::r1, Level::f));
    }
    out.push_back(transfer(seed, Level::f, Level::r1));
    out.push_back(transfer(messenger, Level::r2, Level::s, pi, {seed}));
    out.push_back(transfer(seed, Level::r1, Level::f));
    return out;
}

/// Messenger in s -> (|s> + |r2>) / sqrt2.
inline Sequence messenger_prepare(int messenger) { return {transfer(messenger, Level::s, Level::r2, pi / 2)}; }

/// Gives `ensemble` one f excitation iff the messenger is not in r2.
inline Sequence messenger_conditional(int messenger, int ensemble) {
    return {collective(ensemble, Level::g, Level::r1, pi, {messenger}), transfer(ensemble, Level::r1, Level::f)};
}

/// Rotates the messenger so that a measurement of r2 reads the relative
/// sign of the two branches: r2 for '+', s for '-'.
inline Sequence messenger_readout(int messenger) { return {transfer(messenger, Level::s, Level::r2, pi / 2)}; }

} // namespace ghznet::sim::gadgets
