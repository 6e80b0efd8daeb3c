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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghznet/config.hpp"
#include "ghznet/error.hpp"
#include "ghznet/error_model.hpp"
#include "ghznet/geometry.hpp"
#include "ghznet/metrology.hpp"
#include "ghznet/optimizer.hpp"
#include "ghznet/physics_params.hpp"
#include "ghznet/sim/protocol.hpp"
#include "output.hpp"

namespace ghznet::cli {
namespace {

using json = nlohmann::ordered_json;

struct Globals {
    std::string config;
    std::string format;
    std::string out;
    std::uint64_t seed = 1;
};

struct Context {
    Globals globals;
    ModelParameters params;
    std::string digest;
    std::ostream *out = nullptr;
    std::ostream *err = nullptr;
};

std::string num(double v) { return format_number(v); }

double parse_double(const std::string &text, const std::string &what) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidInput(what + ": expected a number, got '" + text + "'");
    }
    return v;
}

std::vector<Dim> parse_dims(const std::string &text) {
    if (text == "both") {
        return {Dim::two_d, Dim::three_d};
    }
    return {parse_dim(text)};
}

RunManifest make_manifest(const Context &ctx, const std::string &command,
                          std::map<std::string, std::string> parameters) {
    RunManifest m;
    m.command = command;
    m.parameters = std::move(parameters);
    m.config_digest = ctx.digest;
    m.outputs = {ctx.globals.out.empty() ? "stdout" : ctx.globals.out};
    return m;
}

void write_text(const Context &ctx, const std::string &text) {
    if (ctx.globals.out.empty()) {
        *ctx.out << text;
        return;
    }
    std::ofstream f(ctx.globals.out, std::ios::binary);
    if (!f) {
        throw InvalidInput("cannot open output file '" + ctx.globals.out + "'");
    }
    f << text;
    if (!f) {
        throw ComputationError("failed writing '" + ctx.globals.out + "'");
    }
}

std::string effective_format(const Context &ctx, const std::string &fallback) {
    return ctx.globals.format.empty() ? fallback : ctx.globals.format;
}

void emit_table(const Context &ctx, const RunManifest &manifest, const Table &table, const json &extra = {}) {
    std::ostringstream os;
    if (effective_format(ctx, "csv") == "json") {
        auto j = table_json(manifest, table);
        for (auto &[k, v] : extra.items()) {
            j[k] = v;
        }
        os << j.dump(2) << '\n';
    } else {
        write_csv(os, manifest, table);
    }
    write_text(ctx, os.str());
}

const std::vector<std::string> plan_columns = {"ntilde", "dim", "n_opt", "omega_opt", "E_min", "e1", "e2", "e3", "e4",
                                               "e5",     "e6",  "e7",    "N_max",     "K_opt", "G_max", "F"};

std::vector<Cell> plan_row(const OptimizationResult &r, const NetworkPlan &plan) {
    std::vector<Cell> row = {std::int64_t{r.n_tilde}, std::string(to_string(r.dim)), std::int64_t{r.n_opt},
                             r.omega_opt, r.E_min};
    for (double e : r.budget_at_opt.e) {
        row.emplace_back(e);
    }
    row.emplace_back(plan.N_max);
    row.emplace_back(plan.K_opt);
    row.emplace_back(plan.G_max);
    row.emplace_back(plan.fidelity_F);
    return row;
}

std::vector<Cell> failed_row(int n_tilde, Dim dim) {
    std::vector<Cell> row = {std::int64_t{n_tilde}, std::string(to_string(dim))};
    row.resize(plan_columns.size());
    return row;
}

std::optional<double> parse_omega(const std::string &text) {
    if (text == "free") {
        return std::nullopt;
    }
    return parse_double(text, "--omega");
}

// ---------------------------------------------------------------- params

struct ParamsArgs {
    int n_tilde = 0;
};

void cmd_params(const Context &ctx, const ParamsArgs &a) {
    const auto cfg = RydbergConfig::for_level(a.n_tilde, ctx.params.constants);
    const auto d = dimensionless_deltas(cfg, ctx.params.rates.lattice_a, ctx.params.constants);
    Table t{{"quantity", "value", "unit"}, {}};
    auto add = [&](const char *q, double v, const char *unit) { t.rows.push_back({std::string(q), v, std::string(unit)}); };
    add("n_tilde", a.n_tilde, "1");
    add("gamma", cfg.gamma, "1/s");
    add("C11_au", c11_coefficient_au(a.n_tilde), "E_h a0^6");
    add("C11", cfg.c11_6, "J m^6");
    add("C12_au", c12_coefficient_au(a.n_tilde), "E_h a0^3");
    add("C12", cfg.c12_3, "J m^3");
    add("lattice_a", ctx.params.rates.lattice_a, "m");
    add("delta11", d.delta11, "1");
    add("delta12", d.delta12, "1");
    emit_table(ctx, make_manifest(ctx, "params", {{"ntilde", std::to_string(a.n_tilde)}}), t);
}

// ---------------------------------------------------------------- budget

struct BudgetArgs {
    int n_tilde = 0;
    double omega = 1e5;
    int n = 0; ///< 0: use the optimal n
    std::string dim = "3d";
    std::string variant = "photonic";
    double atoms_per_clock = 0; ///< 0: config value
};

void cmd_budget(Context ctx, const BudgetArgs &a) {
    const Dim dim = parse_dim(a.dim);
    const Variant variant = parse_variant(a.variant);
    if (a.atoms_per_clock != 0) {
        ctx.params.atoms_per_clock = a.atoms_per_clock;
        ctx.params.validate();
    }
    int n = a.n;
    if (n == 0) {
        n = minimize_E(a.n_tilde, dim, a.omega, variant, ctx.params).n_opt;
    }
    const auto in = ErrorInputs::make(a.n_tilde, a.omega, n, dim, ctx.params, variant);
    const auto b = total_error_per_atom(in);
    Table t{{"term", "description", "value", "share_percent"}, {}};
    for (int i = 0; i < 7; ++i) {
        t.rows.push_back({"e" + std::to_string(i + 1), std::string(error_term_names[static_cast<std::size_t>(i)]),
                          b.e[static_cast<std::size_t>(i)], 100.0 * b.share(i)});
    }
    t.rows.push_back({std::string("E"), std::string("total per atom"), b.E, 100.0});
    t.rows.push_back({std::string("eps_local"), std::string("ensemble error n(e1+e2+e3)"), b.eps_local, Cell{}});
    t.rows.push_back({std::string("eps_nonlocal"), std::string("link error Mn(e4+..+e7)"), b.eps_nonlocal, Cell{}});
    t.rows.push_back({std::string("tau"), std::string("photon-step pulse width [s]"), b.tau_pulse, Cell{}});
    t.rows.push_back({std::string("p_double"), std::string("double excitation at tau"), b.p_double, Cell{}});
    emit_table(ctx,
               make_manifest(ctx, "budget",
                             {{"ntilde", std::to_string(a.n_tilde)},
                              {"omega", num(a.omega)},
                              {"n", std::to_string(n)},
                              {"dim", std::string(to_string(dim))},
                              {"variant", std::string(to_string(variant))},
                              {"atoms_per_clock", num(ctx.params.atoms_per_clock)}}),
               t);
}

// ---------------------------------------------------------------- optimize / scan

struct OptimizeArgs {
    int n_tilde = 0;
    std::string dim = "3d";
    std::string omega = "1e5";
    std::string variant = "photonic";
};

void cmd_optimize(const Context &ctx, const OptimizeArgs &a) {
    const Dim dim = parse_dim(a.dim);
    const auto omega = parse_omega(a.omega);
    const Variant variant = parse_variant(a.variant);
    const auto r = minimize_E(a.n_tilde, dim, omega, variant, ctx.params);
    const auto plan = maximize_gain(r.E_min, ctx.params.atoms_per_clock, r.n_opt);
    Table t{plan_columns, {plan_row(r, plan)}};
    emit_table(ctx,
               make_manifest(ctx, "optimize",
                             {{"ntilde", std::to_string(a.n_tilde)},
                              {"dim", std::string(to_string(dim))},
                              {"omega", omega ? num(*omega) : "free"},
                              {"variant", std::string(to_string(variant))}}),
               t);
}

struct ScanArgs {
    std::vector<int> range = {50, 150};
    std::string dim = "both";
    std::string omega = "1e5";
    std::string variant = "photonic";
};

int cmd_scan(const Context &ctx, const ScanArgs &a) {
    detail::require(a.range.size() == 2, "--range takes two integers");
    const auto dims = parse_dims(a.dim);
    const auto omega = parse_omega(a.omega);
    const Variant variant = parse_variant(a.variant);
    std::map<Dim, std::vector<ScanPoint>> per_dim;
    for (Dim d : dims) {
        per_dim[d] = scan_ntilde(a.range[0], a.range[1], d, omega, variant, ctx.params);
    }
    Table t{plan_columns, {}};
    int failures = 0;
    const std::size_t count = per_dim.begin()->second.size();
    for (std::size_t i = 0; i < count; ++i) {
        for (Dim d : dims) {
            const auto &p = per_dim[d][i];
            if (p.result) {
                const auto plan = maximize_gain(p.result->E_min, ctx.params.atoms_per_clock, p.result->n_opt);
                t.rows.push_back(plan_row(*p.result, plan));
            } else {
                ++failures;
                *ctx.err << "warning: ntilde=" << p.n_tilde << " dim=" << to_string(d) << ": " << p.error << '\n';
                t.rows.push_back(failed_row(p.n_tilde, d));
            }
        }
    }
    emit_table(ctx,
               make_manifest(ctx, "scan",
                             {{"range", std::to_string(a.range[0]) + ".." + std::to_string(a.range[1])},
                              {"dim", a.dim},
                              {"omega", omega ? num(*omega) : "free"},
                              {"variant", std::string(to_string(variant))}}),
               t);
    const bool all_failed = failures > 0 && static_cast<std::size_t>(failures) == t.rows.size();
    return all_failed ? exit_computation : exit_ok;
}

// ---------------------------------------------------------------- gain

struct GainArgs {
    double E = 0;
    int n_tilde = 0;
    std::string dim = "3d";
    int n = 0; ///< atoms per ensemble for M; 0: optimum at --ntilde, else unknown
    int points = 200;
    bool plan = false;
};

void cmd_gain(const Context &ctx, const GainArgs &a) {
    double E = a.E;
    int n_opt = a.n;
    std::map<std::string, std::string> parameters;
    if (a.n_tilde != 0) {
        detail::require(a.E == 0, "give either --E or --ntilde, not both");
        const auto r = minimize_E(a.n_tilde, parse_dim(a.dim), 1e5, Variant::photonic, ctx.params);
        E = r.E_min;
        if (n_opt == 0) {
            n_opt = r.n_opt;
        }
        parameters["ntilde"] = std::to_string(a.n_tilde);
        parameters["dim"] = a.dim;
    }
    detail::require(E > 0, "gain: give --E > 0 or --ntilde");
    parameters["E"] = num(E);
    if (a.plan) {
        detail::require(n_opt >= 0, "--n must be positive");
        const auto plan = maximize_gain(E, ctx.params.atoms_per_clock, std::max(n_opt, 1));
        Table t{{"E", "N_max", "K_opt", "M", "G_max", "F", "c", "N_analytic", "G_closed_form"},
                {{E, plan.N_max, plan.K_opt, n_opt > 0 ? Cell{plan.M} : Cell{}, plan.G_max, plan.fidelity_F,
                  plan.contrast_c, plan.N_analytic, plan.G_closed_form}}};
        parameters["atoms_per_clock"] = num(ctx.params.atoms_per_clock);
        if (n_opt > 0) {
            parameters["n"] = std::to_string(n_opt);
        }
        emit_table(ctx, make_manifest(ctx, "gain", parameters), t);
        return;
    }
    detail::require(a.points >= 2, "--points must be >= 2");
    const double hi = std::floor(10.0 / E);
    detail::require(hi >= 2 && hi <= 1e12, "gain: 10/E must lie in [2, 1e12]");
    Table t{{"N", "G"}, {}};
    std::int64_t last = 0;
    for (int i = 0; i < a.points; ++i) {
        const double x = std::exp(std::log(2.0) + (std::log(hi) - std::log(2.0)) * i / (a.points - 1));
        const auto N = static_cast<std::int64_t>(std::llround(x));
        if (N <= last) {
            continue;
        }
        last = N;
        t.rows.push_back({N, gain(static_cast<double>(N), E)});
    }
    parameters["points"] = std::to_string(a.points);
    emit_table(ctx, make_manifest(ctx, "gain", parameters), t);
}

// ---------------------------------------------------------------- fisher

struct FisherArgs {
    int grid = 101;
    int atoms = 10;
};

void cmd_fisher(const Context &ctx, const FisherArgs &a) {
    detail::require(a.grid >= 2, "--grid must be >= 2");
    detail::require(a.atoms >= 1, "--atoms must be >= 1");
    Table t{{"c", "exact", "approx"}, {}};
    const double N2 = static_cast<double>(a.atoms) * a.atoms;
    for (int i = 0; i < a.grid; ++i) {
        const double c = static_cast<double>(i) / (a.grid - 1);
        const auto m = GhzMeasurementModel::from_contrast(a.atoms, c);
        t.rows.push_back({c, average_fisher(m) / N2, average_fisher_approx_normalized(c)});
    }
    emit_table(ctx,
               make_manifest(ctx, "fisher", {{"grid", std::to_string(a.grid)}, {"atoms", std::to_string(a.atoms)}}),
               t);
}

// ---------------------------------------------------------------- geometry

struct GeometryArgs {
    std::string dim = "both";
    int n = 0;
};

void cmd_geometry(const Context &ctx, const GeometryArgs &a) {
    const auto dims = parse_dims(a.dim);
    const auto g = GeometryIntegrals::compute();
    Table t{{"dim", "exponent", "integral", "n", "continuum", "lattice", "rel_err"}, {}};
    for (Dim d : dims) {
        const int n = a.n != 0 ? a.n : (d == Dim::three_d ? 146 : 1000);
        const auto geom = LatticeGeometry::make(d, n, 1.0);
        for (int p : {6, 12}) {
            const double cont = continuum_pair_average(geom, p, g);
            const double lat = lattice_sum_average(geom, p);
            t.rows.push_back({std::string(to_string(d)), std::int64_t{p}, p == 6 ? g.I(d) : g.J(d), std::int64_t{n},
                              cont, lat, (lat - cont) / cont});
        }
    }
    std::map<std::string, std::string> parameters{{"dim", a.dim}};
    if (a.n != 0) {
        parameters["n"] = std::to_string(a.n);
    }
    emit_table(ctx, make_manifest(ctx, "geometry", parameters), t);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    int clocks = 2;
    int ensembles = 1;
    int atoms = 2;
    std::string variant = "photonic";
    std::string mode = "sampled";
    bool no_trace = false;
};

json amplitude_json(const std::pair<std::string, sim::amplitude> &a) {
    return json{{"label", a.first}, {"re", round_number(a.second.real())}, {"im", round_number(a.second.imag())}};
}

void cmd_simulate(const Context &ctx, const SimulateArgs &a) {
    sim::ProtocolConfig cfg;
    cfg.clocks = a.clocks;
    cfg.ensembles = a.ensembles;
    cfg.atoms = a.atoms;
    cfg.variant = parse_variant(a.variant);
    cfg.mode = sim::parse_sim_mode(a.mode);
    cfg.seed = ctx.globals.seed;
    cfg.trace = !a.no_trace;
    const auto r = sim::run_protocol(cfg);

    const auto manifest = make_manifest(ctx, "simulate",
                                        {{"clocks", std::to_string(a.clocks)},
                                         {"ensembles", std::to_string(a.ensembles)},
                                         {"atoms", std::to_string(a.atoms)},
                                         {"variant", std::string(to_string(cfg.variant))},
                                         {"mode", std::string(sim::to_string(cfg.mode))},
                                         {"seed", std::to_string(cfg.seed)},
                                         {"trace", cfg.trace ? "on" : "off"}});
    Table t{{"branch", "probability", "heralded", "fidelity", "record"}, {}};
    for (std::size_t i = 0; i < r.branches.size(); ++i) {
        const auto &b = r.branches[i];
        std::string record;
        for (auto &s : b.record) {
            record += (record.empty() ? "" : " ") + s;
        }
        t.rows.push_back({static_cast<std::int64_t>(i), b.probability, std::string(b.heralded ? "yes" : "no"),
                          b.heralded ? Cell{b.fidelity} : Cell{}, record});
    }
    if (effective_format(ctx, "json") == "csv") {
        std::ostringstream os;
        write_csv(os, manifest, t);
        write_text(ctx, os.str());
        return;
    }
    json j;
    j["manifest"] = manifest.to_json();
    j["atoms_total"] = a.clocks * a.ensembles * a.atoms;
    j["total_probability"] = round_number(r.total_probability);
    j["success_probability"] = round_number(r.success_probability);
    j["final_fidelity"] = round_number(r.min_fidelity);
    j["attempts"] = r.attempts;
    auto branches = json::array();
    for (auto &b : r.branches) {
        json jb;
        jb["probability"] = round_number(b.probability);
        jb["record"] = b.record;
        jb["heralded"] = b.heralded;
        jb["fidelity"] = b.heralded ? json(round_number(b.fidelity)) : json(nullptr);
        if (cfg.trace) {
            auto steps = json::array();
            for (auto &e : b.trace) {
                auto amps = json::array();
                for (auto &amp : e.amplitudes) {
                    amps.push_back(amplitude_json(amp));
                }
                steps.push_back(json{{"step", e.step}, {"amplitudes", std::move(amps)}});
            }
            jb["trace"] = std::move(steps);
        }
        branches.push_back(std::move(jb));
    }
    j["branches"] = std::move(branches);
    write_text(ctx, j.dump(2) + "\n");
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"ghznet: error budgets, optimal parameters and protocol simulation for entangled clock networks",
                 "ghznet"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "Constants file (key = value lines)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "Write results to this file instead of stdout");
    app.add_option("--seed", g.seed, "Seed for sampled simulations");

    ParamsArgs params_args;
    auto *params = app.add_subcommand("params", "Rydberg level data for one principal quantum number");
    params->add_option("--ntilde", params_args.n_tilde, "Principal quantum number")->required();

    BudgetArgs budget_args;
    auto *budget = app.add_subcommand("budget", "Per-atom error budget, term by term");
    budget->add_option("--ntilde", budget_args.n_tilde, "Principal quantum number")->required();
    budget->add_option("--omega", budget_args.omega, "Rabi frequency in units of the Rydberg decay rate");
    budget->add_option("--n", budget_args.n, "Atoms per ensemble (default: optimal n)");
    budget->add_option("--dim", budget_args.dim, "Ensemble dimension (2d or 3d)");
    budget->add_option("--variant", budget_args.variant, "photonic or messenger");
    budget->add_option("--atoms-per-clock", budget_args.atoms_per_clock, "Atoms per clock Mn (default: config)");

    OptimizeArgs optimize_args;
    auto *optimize = app.add_subcommand("optimize", "Optimal ensemble size at one principal quantum number");
    optimize->add_option("--ntilde", optimize_args.n_tilde, "Principal quantum number")->required();
    optimize->add_option("--dim", optimize_args.dim, "2d or 3d");
    optimize->add_option("--omega", optimize_args.omega, "Rabi frequency, or 'free' to optimize it");
    optimize->add_option("--variant", optimize_args.variant, "photonic or messenger");

    ScanArgs scan_args;
    auto *scan = app.add_subcommand("scan", "Optimal parameters and network plan across principal quantum numbers");
    scan->add_option("--range", scan_args.range, "First and last principal quantum number")->expected(2);
    scan->add_option("--dim", scan_args.dim, "2d, 3d or both");
    scan->add_option("--omega", scan_args.omega, "Rabi frequency, or 'free'");
    scan->add_option("--variant", scan_args.variant, "photonic or messenger");

    GainArgs gain_args;
    auto *gain_cmd = app.add_subcommand("gain", "Stability gain curve G(N) or the optimal network plan");
    gain_cmd->add_option("--E", gain_args.E, "Error per atom");
    gain_cmd->add_option("--ntilde", gain_args.n_tilde, "Take E from the optimum at this principal quantum number");
    gain_cmd->add_option("--dim", gain_args.dim, "2d or 3d (with --ntilde)");
    gain_cmd->add_option("--n", gain_args.n, "Atoms per ensemble, sets M in the plan");
    gain_cmd->add_option("--points", gain_args.points, "Curve points");
    gain_cmd->add_flag("--plan", gain_args.plan, "Emit the optimal network plan instead of the curve");

    FisherArgs fisher_args;
    auto *fisher = app.add_subcommand("fisher", "Phase-averaged Fisher information versus contrast");
    fisher->add_option("--grid", fisher_args.grid, "Number of contrast values in [0, 1]");
    fisher->add_option("--atoms", fisher_args.atoms, "GHZ size used for the evaluation");

    GeometryArgs geometry_args;
    auto *geometry = app.add_subcommand("geometry", "Pair-distance integrals and lattice-sum comparison");
    geometry->add_option("--dim", geometry_args.dim, "2d, 3d or both");
    geometry->add_option("--n", geometry_args.n, "Sites in the lattice sum (default 146 in 3d, 1000 in 2d)");

    SimulateArgs simulate_args;
    auto *simulate = app.add_subcommand("simulate", "Ideal state-vector simulation of the entangling protocol");
    simulate->add_option("--clocks", simulate_args.clocks, "Clocks K");
    simulate->add_option("--ensembles", simulate_args.ensembles, "Ensembles per clock M");
    simulate->add_option("--atoms", simulate_args.atoms, "Atoms per ensemble n");
    simulate->add_option("--variant", simulate_args.variant, "photonic or messenger");
    simulate->add_option("--mode", simulate_args.mode, "sample(d) or exhaustive");
    simulate->add_flag("--no-trace", simulate_args.no_trace, "Omit the per-step state trace");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return exit_ok;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    CLI::App *active = app.get_subcommands().front();
    try {
        Context ctx;
        ctx.globals = g;
        ctx.out = &out;
        ctx.err = &err;
        ctx.params = g.config.empty() ? ModelParameters{} : ModelParameters::load(g.config);
        for (auto &w : ctx.params.rates.validate()) {
            err << "warning: " << w << '\n';
        }
        ctx.digest = sha256_hex(ctx.params.canonical_text());

        if (active == params) {
            cmd_params(ctx, params_args);
        } else if (active == budget) {
            cmd_budget(ctx, budget_args);
        } else if (active == optimize) {
            cmd_optimize(ctx, optimize_args);
        } else if (active == scan) {
            return cmd_scan(ctx, scan_args);
        } else if (active == gain_cmd) {
            cmd_gain(ctx, gain_args);
        } else if (active == fisher) {
            cmd_fisher(ctx, fisher_args);
        } else if (active == geometry) {
            cmd_geometry(ctx, geometry_args);
        } else if (active == simulate) {
            cmd_simulate(ctx, simulate_args);
        }
    } catch (const InvalidInput &e) {
        err << "error: " << e.what() << "\n\n" << active->help();
        return exit_usage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_computation;
    }
    return exit_ok;
}

} // namespace ghznet::cli
