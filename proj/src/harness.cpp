#include "subfid/harness.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace subfid {

void Tolerances::set(const std::string& name, double value) {
    if (value <= 0.0) throw std::invalid_argument("Tolerances: value for '" + name + "' must be > 0");
    if (name == "slack") slack = value;
    else if (name == "identity") identity = value;
    else if (name == "psd") psd = value;
    else if (name == "symmetry") symmetry = value;
    else if (name == "normalization") normalization = value;
    else if (name == "equivalence") equivalence = value;
    else if (name == "oracle_upper") oracle_upper = value;
    else if (name == "oracle_reach") oracle_reach = value;
    else if (name == "povm_floor") povm_floor = value;
    else if (name == "povm_optimal") povm_optimal = value;
    else if (name == "strict") strict = value;
    else throw std::invalid_argument("Tolerances: unknown tolerance name '" + name + "'");
}

std::map<std::string, double> Tolerances::named() const {
    return {{"slack", slack},
            {"identity", identity},
            {"psd", psd},
            {"symmetry", symmetry},
            {"normalization", normalization},
            {"equivalence", equivalence},
            {"oracle_upper", oracle_upper},
            {"oracle_reach", oracle_reach},
            {"povm_floor", povm_floor},
            {"povm_optimal", povm_optimal},
            {"strict", strict}};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-trial check recorder. A check passes when slack >= -tol (NaN fails);
// the trial passes when all its checks do.
struct TrialScope {
    SuiteSummary& summary;
    bool pass = true;

    void note(const std::string& check, double slack, double tol) {
        auto& stats = summary.checks[check];
        stats.trials += 1;
        if (slack < stats.min_slack) stats.min_slack = slack;
        if (!(slack >= -tol)) {
            stats.failures += 1;
            pass = false;
        }
    }
};

void finish(SuiteSummary& summary, const std::string& primary_check, Clock::time_point start) {
    summary.wall_time_s = seconds_since(start);
    const auto it = summary.checks.find(primary_check);
    if (it != summary.checks.end() && it->second.trials > 0) summary.min_slack = it->second.min_slack;
}

// Mix of state kinds so every suite sees generic, leaked, and code-subspace
// supported inputs.
DensityOperator draw_state(const SpaceDecomposition& dims, RngStream& rng) {
    switch (rng.uniform_index(3)) {
        case 0: return random_full_state(dims, rng);
        case 1: return random_imperfect_state(dims, rng);
        default: return random_perfect_state(dims, rng);
    }
}

std::vector<double> draw_simplex(int n, RngStream& rng) {
    std::vector<double> w(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] = -std::log(1.0 - rng.uniform());
        total += w[i];
    }
    for (auto& x : w) x /= total;
    return w;
}

void store_state(FailureBundle& bundle, const std::string& name, const DensityOperator& rho) {
    bundle.matrices.emplace_back(name, rho.matrix());
}

void store_blocks(FailureBundle& bundle, const std::string& prefix, const std::vector<Matrix>& blocks) {
    for (std::size_t i = 0; i < blocks.size(); ++i)
        bundle.matrices.emplace_back(prefix + "[" + std::to_string(i) + "]", blocks[i]);
}

}  // namespace

SuiteResult run_theorem3(const Theorem3Config& cfg) {
    if (cfg.dims.dK < 1)
        throw std::invalid_argument("run_theorem3: requires dK >= 1 (no complement, nothing leaks)");
    if (cfg.trials < 0) throw std::invalid_argument("run_theorem3: trials must be >= 0");
    if (cfg.n_kraus.empty()) throw std::invalid_argument("run_theorem3: n_kraus choices empty");

    SuiteResult res;
    res.summary.suite = "theorem3";
    res.summary.dims = cfg.dims;
    res.summary.seed = cfg.seed;
    res.summary.tolerances = cfg.tol;
    res.summary.trials = cfg.trials;
    res.reports.reserve(cfg.trials);

    const auto start = Clock::now();
    const RngStream master(cfg.seed);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        RngStream stream = master.split(trial);
        const int n = cfg.n_kraus[trial % cfg.n_kraus.size()];
        TrialScope scope{res.summary};
        TrialReport report;
        report.trial_index = trial;
        report.seed = cfg.seed;
        report.dims = cfg.dims;
        report.n_kraus = n;
        report.leak_strength = cfg.leak_strength;
        FailureBundle bundle{trial, cfg.seed, "", {}};
        try {
            const auto spec = random_structured(cfg.dims, n, cfg.leak_strength, stream);
            const auto rho = random_perfect_state(cfg.dims, stream);
            const auto rho_tilde = random_imperfect_state(cfg.dims, stream);
            const auto channel = assemble(spec);
            const auto evolved = apply(channel, rho_tilde);

            report.fa_before = subsystem_fidelity(rho, rho_tilde);
            report.fa_after = subsystem_fidelity(rho, evolved);
            report.slack = report.fa_after - report.fa_before;
            scope.note("fidelity_monotone", report.slack, cfg.tol.slack);

            // Intermediate link of the concavity chain, on the unnormalized
            // reduced operators: F̌²(R, R~ + L) >= F̌²(R, R~) + F̌²(R, L).
            const Matrix reduced_ref = reduced_on_a(rho).matrix();
            const Matrix reduced_tilde = reduced_on_a(rho_tilde).matrix();
            const Matrix leak = leak_term_matrix(cfg.dims, spec.D,
                                                 block_view(cfg.dims, rho_tilde.matrix()).rho3);
            const double whole = fcheck(reduced_ref, hermitize(reduced_tilde + leak));
            const double part_tilde = fcheck(reduced_ref, reduced_tilde);
            const double part_leak = fcheck(reduced_ref, leak);
            const double chain_slack =
                whole * whole - part_tilde * part_tilde - part_leak * part_leak;
            scope.note("square_chain", chain_slack, cfg.tol.slack);
            scope.note("leak_psd", min_eigenvalue(leak), cfg.tol.psd);

            // The chain implies the end-to-end claim; the two verdicts must
            // never disagree in that direction.
            const bool chain_ok = chain_slack >= -cfg.tol.slack;
            const bool final_ok = report.slack >= -cfg.tol.slack;
            scope.note("chain_consistency", (chain_ok && !final_ok) ? -1.0 : 0.0, 0.0);

            if (!scope.pass) {
                bundle.what = "theorem3 check failed";
                store_state(bundle, "rho", rho);
                store_state(bundle, "rho_tilde", rho_tilde);
                store_blocks(bundle, "C", spec.C);
                store_blocks(bundle, "D", spec.D);
                store_blocks(bundle, "G", spec.G);
            }
        } catch (const std::exception& ex) {
            scope.pass = false;
            bundle.what = std::string("exception: ") + ex.what();
        }
        report.pass = scope.pass;
        if (!scope.pass) {
            res.summary.failures += 1;
            res.failures.push_back(std::move(bundle));
        }
        res.reports.push_back(report);
    }
    finish(res.summary, "fidelity_monotone", start);
    return res;
}

SuiteResult run_theorem4(const Theorem4Config& cfg) {
    if (cfg.dims.dK < 1) throw std::invalid_argument("run_theorem4: requires dK >= 1");
    if (cfg.trials < 0) throw std::invalid_argument("run_theorem4: trials must be >= 0");
    if (cfg.n_kraus.empty() || cfg.n_logical.empty())
        throw std::invalid_argument("run_theorem4: Kraus count choices empty");

    SuiteResult res;
    res.summary.suite = "theorem4";
    res.summary.dims = cfg.dims;
    res.summary.seed = cfg.seed;
    res.summary.tolerances = cfg.tol;
    res.summary.trials = cfg.trials;
    res.reports.reserve(cfg.trials);

    const auto start = Clock::now();
    const RngStream master(cfg.seed);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        RngStream stream = master.split(trial);
        const int n_logical = cfg.n_logical[trial % cfg.n_logical.size()];
        const int n_gauge = cfg.n_kraus[trial % cfg.n_kraus.size()];
        TrialScope scope{res.summary};
        TrialReport report;
        report.trial_index = trial;
        report.seed = cfg.seed;
        report.dims = cfg.dims;
        report.n_kraus = n_logical * n_gauge;
        report.leak_strength = cfg.leak_strength;
        FailureBundle bundle{trial, cfg.seed, "", {}};
        try {
            const auto spec = random_computation(cfg.dims, n_logical, n_gauge, cfg.leak_strength, stream);
            const auto rho = random_perfect_state(cfg.dims, stream);
            const auto rho_tilde = random_imperfect_state(cfg.dims, stream);
            const auto channel = assemble_computation(spec);
            const auto rho_out = apply(channel, rho);
            const auto tilde_out = apply(channel, rho_tilde);

            report.fa_before = subsystem_fidelity(rho, rho_tilde);
            report.fa_after = subsystem_fidelity(rho_out, tilde_out);
            report.slack = report.fa_after - report.fa_before;
            scope.note("fidelity_monotone", report.slack, cfg.tol.slack);

            // reduced' = logical(reduced) + error, error PSD
            const Matrix error_term = leak_term_matrix(
                cfg.dims, spec.D, block_view(cfg.dims, rho_tilde.matrix()).rho3);
            const Matrix expected =
                apply_kraus(spec.logical, reduced_on_a(rho_tilde).matrix()) + error_term;
            const double update_residual = (reduced_on_a(tilde_out).matrix() - expected).norm();
            scope.note("reduced_update_identity", -update_residual, cfg.tol.identity);
            scope.note("error_term_psd", min_eigenvalue(error_term), cfg.tol.psd);

            // perfectly initialized states evolve by the logical map alone
            const double perfect_residual =
                (reduced_on_a(rho_out).matrix() -
                 apply_kraus(spec.logical, reduced_on_a(rho).matrix()))
                    .norm();
            scope.note("perfect_reduced_action", -perfect_residual, cfg.tol.identity);

            if (!scope.pass) {
                bundle.what = "theorem4 check failed";
                store_state(bundle, "rho", rho);
                store_state(bundle, "rho_tilde", rho_tilde);
                store_blocks(bundle, "F", spec.logical);
                store_blocks(bundle, "C", spec.C);
                store_blocks(bundle, "D", spec.D);
                store_blocks(bundle, "G", spec.G);
            }
        } catch (const std::exception& ex) {
            scope.pass = false;
            bundle.what = std::string("exception: ") + ex.what();
        }
        report.pass = scope.pass;
        if (!scope.pass) {
            res.summary.failures += 1;
            res.failures.push_back(std::move(bundle));
        }
        res.reports.push_back(report);
    }
    finish(res.summary, "fidelity_monotone", start);
    return res;
}

SuiteResult run_evolution_identities(const EvolutionConfig& cfg) {
    if (cfg.trials < 0) throw std::invalid_argument("run_evolution_identities: trials must be >= 0");
    if (cfg.n_kraus.empty()) throw std::invalid_argument("run_evolution_identities: n_kraus choices empty");

    SuiteResult res;
    res.summary.suite = "evolution";
    res.summary.dims = cfg.dims;
    res.summary.seed = cfg.seed;
    res.summary.tolerances = cfg.tol;
    res.summary.trials = cfg.trials;

    const auto start = Clock::now();
    const RngStream master(cfg.seed);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        RngStream stream = master.split(trial);
        const int n = cfg.n_kraus[trial % cfg.n_kraus.size()];
        TrialScope scope{res.summary};
        FailureBundle bundle{trial, cfg.seed, "", {}};
        try {
            const auto spec = random_structured(cfg.dims, n, cfg.leak_strength, stream);
            const auto channel = assemble(spec);
            const auto rho = random_perfect_state(cfg.dims, stream);
            const auto rho_tilde = random_imperfect_state(cfg.dims, stream);
            const auto generic = random_full_state(cfg.dims, stream);

            // (a) perfect-state reduced invariance
            const double perfect_residual =
                (reduced_on_a(apply(channel, rho)).matrix() - reduced_on_a(rho).matrix()).norm();
            scope.note("perfect_invariance", -perfect_residual, cfg.tol.identity);

            // (b) update identity with the leak term, for imperfect and
            // fully generic states
            for (const auto* state : {&rho_tilde, &generic}) {
                const Matrix leak = leak_term_matrix(cfg.dims, spec.D,
                                                     block_view(cfg.dims, state->matrix()).rho3);
                const double residual = (reduced_on_a(apply(channel, *state)).matrix() -
                                         reduced_on_a(*state).matrix() - leak)
                                            .norm();
                scope.note("leak_update_identity", -residual, cfg.tol.identity);
                scope.note("leak_psd", min_eigenvalue(leak), cfg.tol.psd);
            }

            // (c) initialization-free channels preserve the reduced operator
            // for arbitrary states
            const auto channel_free = assemble(random_initialization_free(cfg.dims, n, stream));
            const double free_residual =
                (reduced_on_a(apply(channel_free, generic)).matrix() - reduced_on_a(generic).matrix())
                    .norm();
            scope.note("init_free_invariance", -free_residual, cfg.tol.identity);

            if (!scope.pass) {
                bundle.what = "evolution identity failed";
                store_state(bundle, "rho", rho);
                store_state(bundle, "rho_tilde", rho_tilde);
                store_state(bundle, "generic", generic);
                store_blocks(bundle, "C", spec.C);
                store_blocks(bundle, "D", spec.D);
                store_blocks(bundle, "G", spec.G);
            }
        } catch (const std::exception& ex) {
            scope.pass = false;
            bundle.what = std::string("exception: ") + ex.what();
        }
        if (!scope.pass) {
            res.summary.failures += 1;
            res.failures.push_back(std::move(bundle));
        }
    }
    finish(res.summary, "leak_update_identity", start);
    return res;
}

SuiteResult run_property_suite(const PropertyConfig& cfg) {
    if (cfg.trials < 0) throw std::invalid_argument("run_property_suite: trials must be >= 0");

    SuiteResult res;
    res.summary.suite = "properties";
    res.summary.dims = cfg.dims;
    res.summary.seed = cfg.seed;
    res.summary.tolerances = cfg.tol;
    res.summary.trials = cfg.trials;

    const auto start = Clock::now();
    const RngStream master(cfg.seed);
    const SpaceDecomposition dims = cfg.dims;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        RngStream stream = master.split(trial);
        TrialScope scope{res.summary};
        FailureBundle bundle{trial, cfg.seed, "", {}};
        try {
            const auto tau = draw_state(dims, stream);
            const auto ups = draw_state(dims, stream);
            const double fa = subsystem_fidelity(tau, ups);

            // Property 1: symmetry
            scope.note("symmetry", -std::abs(fa - subsystem_fidelity(ups, tau)), cfg.tol.symmetry);

            // Property 2: the measure is 1 exactly for equal reduced operators.
            const auto same = random_state_same_reduced(tau, stream,
                                                        1 + static_cast<int>(stream.uniform_index(4)));
            scope.note("normalization_equal_reduced", -std::abs(subsystem_fidelity(tau, same) - 1.0),
                       cfg.tol.normalization);
            // Converse direction, away from the quadratic blind zone: clearly
            // distinct reduced operators must keep the measure away from 1.
            const double reduced_gap =
                (reduced_on_a(tau).matrix() - reduced_on_a(ups).matrix()).norm();
            if (reduced_gap > 1e-3)
                scope.note("normalization_distinct", (1.0 - fa) - cfg.tol.normalization, 0.0);

            // Property 3: strong concavity, and concavity of the square in
            // one argument with the other held fixed (the form the
            // monotonicity argument uses; the jointly mixed variant is false
            // already for classical distributions).
            {
                const int parts = 2 + static_cast<int>(stream.uniform_index(3));
                std::vector<DensityOperator> taus, upses;
                for (int i = 0; i < parts; ++i) {
                    taus.push_back(draw_state(dims, stream));
                    upses.push_back(draw_state(dims, stream));
                }
                const auto p = draw_simplex(parts, stream);
                const auto q = draw_simplex(parts, stream);
                Matrix mix_tau = Matrix::Zero(dims.dS(), dims.dS());
                Matrix mix_ups_q = Matrix::Zero(dims.dS(), dims.dS());
                Matrix mix_ups_p = Matrix::Zero(dims.dS(), dims.dS());
                double strong_rhs = 0.0;
                double square_rhs = 0.0;
                for (int i = 0; i < parts; ++i) {
                    mix_tau += p[i] * taus[i].matrix();
                    mix_ups_q += q[i] * upses[i].matrix();
                    mix_ups_p += p[i] * upses[i].matrix();
                    strong_rhs += std::sqrt(p[i] * q[i]) * subsystem_fidelity(taus[i], upses[i]);
                    const double fi = subsystem_fidelity(tau, upses[i]);
                    square_rhs += p[i] * fi * fi;
                }
                const DensityOperator mt(dims, hermitize(mix_tau));
                const double strong_lhs = subsystem_fidelity(mt, {dims, hermitize(mix_ups_q)});
                scope.note("strong_concavity", strong_lhs - strong_rhs, cfg.tol.slack);
                const double square_lhs = subsystem_fidelity(tau, {dims, hermitize(mix_ups_p)});
                scope.note("square_concavity", square_lhs * square_lhs - square_rhs, cfg.tol.slack);
            }

            // Properties 5 and 6: monotonicity and angle contractivity under
            // block-local product channels
            {
                const auto a_kraus = random_kraus_set(dims.dA, 1 + static_cast<int>(stream.uniform_index(2)), stream);
                const auto b_kraus = random_kraus_set(dims.dB, 1 + static_cast<int>(stream.uniform_index(2)), stream);
                const auto k_kraus = dims.dK > 0
                                         ? random_kraus_set(dims.dK, 1 + static_cast<int>(stream.uniform_index(2)), stream)
                                         : std::vector<Matrix>{};
                const auto local = assemble_local_product(dims, a_kraus, b_kraus, k_kraus);
                const auto tau_out = apply(local, tau);
                const auto ups_out = apply(local, ups);
                scope.note("local_monotonicity", subsystem_fidelity(tau_out, ups_out) - fa,
                           cfg.tol.slack);
                scope.note("angle_contractivity",
                           subsystem_angle(tau, ups) - subsystem_angle(tau_out, ups_out),
                           cfg.tol.slack);
            }

            // Property 4: triangle inequality for the angle
            {
                const auto phi = draw_state(dims, stream);
                const double lhs = subsystem_angle(tau, ups);
                const double rhs = subsystem_angle(tau, phi) + subsystem_angle(phi, ups);
                scope.note("triangle", rhs - lhs, cfg.tol.slack);
            }

            // Operational sandwich on the subsystem measure
            for (int s = 0; s < cfg.povm_samples; ++s) {
                const auto povm = make_subsystem_povm(
                    dims, random_povm(dims.dA, 2 + static_cast<int>(stream.uniform_index(3)), stream));
                scope.note("povm_floor", povm_overlap(povm, tau, ups) - fa, cfg.tol.povm_floor);
            }
            if (weight_ab(tau) > kZeroWeightTol && weight_ab(ups) > kZeroWeightTol) {
                const auto best = optimal_subsystem_povm(tau, ups);
                scope.note("povm_optimal", -std::abs(povm_overlap(best, tau, ups) - fa),
                           cfg.tol.povm_optimal);
            }

            // Operational check of the plain fidelity on the full space
            {
                const double f = uhlmann_fidelity(tau, ups);
                const auto best = optimal_global_povm(tau.matrix(), ups.matrix());
                scope.note("global_fuchs_optimal",
                           -std::abs(global_povm_overlap(best, tau.matrix(), ups.matrix()) - f),
                           cfg.tol.povm_optimal);
                for (int s = 0; s < cfg.povm_samples; ++s) {
                    const auto povm = random_povm(
                        dims.dS(), 2 + static_cast<int>(stream.uniform_index(3)), stream);
                    scope.note("global_povm_floor",
                               global_povm_overlap(povm, tau.matrix(), ups.matrix()) - f,
                               cfg.tol.povm_floor);
                }
            }

            if (!scope.pass) {
                bundle.what = "property check failed";
                store_state(bundle, "tau", tau);
                store_state(bundle, "upsilon", ups);
            }
        } catch (const std::exception& ex) {
            scope.pass = false;
            bundle.what = std::string("exception: ") + ex.what();
        }
        if (!scope.pass) {
            res.summary.failures += 1;
            res.failures.push_back(std::move(bundle));
        }
    }
    finish(res.summary, "local_monotonicity", start);
    return res;
}

SuiteResult run_equivalence(const EquivalenceConfig& cfg) {
    if (cfg.pairs < 0) throw std::invalid_argument("run_equivalence: pairs must be >= 0");

    SuiteResult res;
    res.summary.suite = "equivalence";
    res.summary.dims = cfg.dims;
    res.summary.seed = cfg.seed;
    res.summary.tolerances = cfg.tol;
    res.summary.trials = cfg.pairs;

    const auto start = Clock::now();
    const RngStream master(cfg.seed);
    const SpaceDecomposition dims = cfg.dims;
    for (int pair = 0; pair < cfg.pairs; ++pair) {
        RngStream stream = master.split(pair);
        TrialScope scope{res.summary};
        FailureBundle bundle{pair, cfg.seed, "", {}};
        try {
            const auto tau = draw_state(dims, stream);
            const auto ups = draw_state(dims, stream);
            const double closed = subsystem_fidelity(tau, ups);

            // Form 1 vs form 2: closed form against the full-space fidelity
            // of the canonical maximizers.
            const auto [tau_star, ups_star] = canonical_maximizers(tau, ups);
            const double canonical = uhlmann_fidelity(tau_star, ups_star);
            scope.note("closed_vs_canonical", -std::abs(closed - canonical), cfg.tol.equivalence);

            // Form 1 vs the defining maximization, sampled: an upper bound
            // that the samples may never exceed, reached once the canonical
            // pair joins the sample set.
            const double sampled = definition_oracle_bound(tau, ups, cfg.oracle_samples, stream, false);
            scope.note("oracle_upper_bound", closed - sampled, cfg.tol.oracle_upper);
            const double injected = std::max(sampled, canonical);
            scope.note("oracle_injected_reach", injected - closed, cfg.tol.oracle_reach);

            // Form 1 vs form 3: the measurement minimum.
            for (int s = 0; s < cfg.povm_samples; ++s) {
                const auto povm = make_subsystem_povm(
                    dims, random_povm(dims.dA, 2 + static_cast<int>(stream.uniform_index(3)), stream));
                scope.note("povm_floor", povm_overlap(povm, tau, ups) - closed, cfg.tol.povm_floor);
            }
            if (weight_ab(tau) > kZeroWeightTol && weight_ab(ups) > kZeroWeightTol) {
                const auto best = optimal_subsystem_povm(tau, ups);
                scope.note("povm_optimal", -std::abs(povm_overlap(best, tau, ups) - closed),
                           cfg.tol.povm_optimal);
            }

            if (!scope.pass) {
                bundle.what = "equivalence check failed";
                store_state(bundle, "tau", tau);
                store_state(bundle, "upsilon", ups);
            }
        } catch (const std::exception& ex) {
            scope.pass = false;
            bundle.what = std::string("exception: ") + ex.what();
        }
        if (!scope.pass) {
            res.summary.failures += 1;
            res.failures.push_back(std::move(bundle));
        }
    }
    finish(res.summary, "closed_vs_canonical", start);
    return res;
}

SuiteResult run_global_fuchs(const FuchsConfig& cfg) {
    if (cfg.pairs < 0) throw std::invalid_argument("run_global_fuchs: pairs must be >= 0");
    if (cfg.max_dim < 2) throw std::invalid_argument("run_global_fuchs: max_dim must be >= 2");

    SuiteResult res;
    res.summary.suite = "fuchs";
    res.summary.dims = SpaceDecomposition(cfg.max_dim, 1, 0);
    res.summary.seed = cfg.seed;
    res.summary.tolerances = cfg.tol;
    res.summary.trials = cfg.pairs;

    const auto start = Clock::now();
    const RngStream master(cfg.seed);
    for (int pair = 0; pair < cfg.pairs; ++pair) {
        RngStream stream = master.split(pair);
        TrialScope scope{res.summary};
        FailureBundle bundle{pair, cfg.seed, "", {}};
        try {
            const int dim = 2 + pair % (cfg.max_dim - 1);
            const Matrix tau = random_density(dim, 1 + static_cast<int>(stream.uniform_index(dim)), stream);
            const Matrix ups = random_density(dim, 1 + static_cast<int>(stream.uniform_index(dim)), stream);
            const double f = uhlmann_fidelity(tau, ups);

            const auto best = optimal_global_povm(tau, ups);
            scope.note("fuchs_optimal", -std::abs(global_povm_overlap(best, tau, ups) - f),
                       cfg.tol.povm_optimal);
            for (int s = 0; s < cfg.povm_samples; ++s) {
                const auto povm =
                    random_povm(dim, 2 + static_cast<int>(stream.uniform_index(dim)), stream);
                scope.note("fuchs_floor", global_povm_overlap(povm, tau, ups) - f, cfg.tol.povm_floor);
            }
            if (!scope.pass) {
                bundle.what = "fuchs check failed";
                bundle.matrices.emplace_back("tau", tau);
                bundle.matrices.emplace_back("upsilon", ups);
            }
        } catch (const std::exception& ex) {
            scope.pass = false;
            bundle.what = std::string("exception: ") + ex.what();
        }
        if (!scope.pass) {
            res.summary.failures += 1;
            res.failures.push_back(std::move(bundle));
        }
    }
    finish(res.summary, "fuchs_optimal", start);
    return res;
}

SwapResult swap_counterexample_search(const SwapConfig& cfg) {
    if (cfg.dims.dA != cfg.dims.dB)
        throw std::invalid_argument("swap_counterexample_search: requires dA = dB");
    if (cfg.trials < 0) throw std::invalid_argument("swap_counterexample_search: trials must be >= 0");

    SwapResult res;
    res.summary.suite = "swap";
    res.summary.dims = cfg.dims;
    res.summary.seed = cfg.seed;
    res.summary.tolerances = cfg.tol;
    res.summary.trials = cfg.trials;
    res.reports.reserve(cfg.trials);

    const auto start = Clock::now();
    const auto channel = make_kraus_channel(cfg.dims, {swap_ab_unitary(cfg.dims)});
    const RngStream master(cfg.seed);
    double min_slack = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < cfg.trials; ++trial) {
        RngStream stream = master.split(trial);
        const auto tau = draw_state(cfg.dims, stream);
        const auto ups = draw_state(cfg.dims, stream);
        TrialReport report;
        report.trial_index = trial;
        report.seed = cfg.seed;
        report.dims = cfg.dims;
        report.n_kraus = 1;
        report.fa_before = subsystem_fidelity(tau, ups);
        report.fa_after = subsystem_fidelity(apply(channel, tau), apply(channel, ups));
        report.slack = report.fa_after - report.fa_before;
        min_slack = std::min(min_slack, report.slack);
        if (report.slack > cfg.tol.strict && (!res.found_increase || report.slack > res.max_increase)) {
            res.found_increase = true;
            res.increase_trial = trial;
            res.max_increase = report.slack;
        }
        if (report.slack < -cfg.tol.strict && (!res.found_decrease || report.slack < res.min_decrease)) {
            res.found_decrease = true;
            res.decrease_trial = trial;
            res.min_decrease = report.slack;
        }
        res.reports.push_back(report);
    }
    TrialScope scope{res.summary};
    scope.note("strict_increase_found", res.found_increase ? 0.0 : -1.0, 0.0);
    scope.note("strict_decrease_found", res.found_decrease ? 0.0 : -1.0, 0.0);
    if (!scope.pass) res.summary.failures = 1;
    res.summary.wall_time_s = seconds_since(start);
    res.summary.min_slack = min_slack;
    return res;
}

SweepResult sweep_init_error(const SweepConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("sweep_init_error: trials must be >= 1");
    if (cfg.epsilons.empty() || cfg.leak_strengths.empty())
        throw std::invalid_argument("sweep_init_error: empty grid");
    for (double eps : cfg.epsilons)
        if (eps > 0.0 && cfg.dims.dK < 1)
            throw std::invalid_argument("sweep_init_error: epsilon > 0 requires dK >= 1");

    SweepResult res;
    res.summary.suite = "sweep";
    res.summary.dims = cfg.dims;
    res.summary.seed = cfg.seed;
    res.summary.tolerances = cfg.tol;

    const auto start = Clock::now();
    const RngStream master(cfg.seed);
    double global_min_slack = std::numeric_limits<double>::infinity();
    std::uint64_t lane = 0;
    for (double eps : cfg.epsilons) {
        for (double strength : cfg.leak_strengths) {
            SweepCell cell;
            cell.epsilon = eps;
            cell.leak_strength = strength;
            cell.min_before = std::numeric_limits<double>::infinity();
            cell.min_after = std::numeric_limits<double>::infinity();
            cell.min_slack = std::numeric_limits<double>::infinity();
            double sum_before = 0.0, sum_after = 0.0;
            for (int trial = 0; trial < cfg.trials; ++trial, ++lane) {
                RngStream stream = master.split(lane);
                TrialScope scope{res.summary};
                FailureBundle bundle{trial, cfg.seed, "", {}};
                SweepRow row{eps, strength, trial, 0.0, 0.0, 0.0};
                try {
                    // Imperfect preparation of the same target state.
                    const Matrix rho_a = random_density(
                        cfg.dims.dA, 1 + static_cast<int>(stream.uniform_index(cfg.dims.dA)), stream);
                    const Matrix sigma_b = random_density(
                        cfg.dims.dB, 1 + static_cast<int>(stream.uniform_index(cfg.dims.dB)), stream);
                    Matrix kappa(0, 0);
                    if (cfg.dims.dK > 0)
                        kappa = random_density(
                            cfg.dims.dK, 1 + static_cast<int>(stream.uniform_index(cfg.dims.dK)), stream);
                    const double coherence = stream.uniform();
                    const auto rho = make_perfect_state(cfg.dims, rho_a, sigma_b);
                    const auto rho_tilde = make_imperfect_state(cfg.dims, rho_a, sigma_b, eps, kappa,
                                                                coherence, stream);
                    const auto spec = random_structured(cfg.dims, cfg.n_kraus, strength, stream);
                    const auto evolved = apply(assemble(spec), rho_tilde);
                    row.fa_before = subsystem_fidelity(rho, rho_tilde);
                    row.fa_after = subsystem_fidelity(rho, evolved);
                    row.slack = row.fa_after - row.fa_before;
                    scope.note("monotone", row.slack, cfg.tol.slack);
                    if (eps == 0.0) {
                        scope.note("perfect_preparation", -std::abs(row.fa_before - 1.0), cfg.tol.slack);
                        scope.note("perfect_preparation", -std::abs(row.fa_after - 1.0), cfg.tol.slack);
                    }
                    if (strength == 0.0)
                        scope.note("zero_leak_identity", -std::abs(row.slack), cfg.tol.identity);
                    if (!scope.pass) {
                        bundle.what = "sweep check failed";
                        store_state(bundle, "rho", rho);
                        store_state(bundle, "rho_tilde", rho_tilde);
                    }
                } catch (const std::exception& ex) {
                    scope.pass = false;
                    bundle.what = std::string("exception: ") + ex.what();
                }
                res.summary.trials += 1;
                if (!scope.pass) {
                    res.summary.failures += 1;
                    res.failures.push_back(std::move(bundle));
                    cell.pass = false;
                }
                sum_before += row.fa_before;
                sum_after += row.fa_after;
                cell.min_before = std::min(cell.min_before, row.fa_before);
                cell.min_after = std::min(cell.min_after, row.fa_after);
                cell.min_slack = std::min(cell.min_slack, row.slack);
                global_min_slack = std::min(global_min_slack, row.slack);
                res.rows.push_back(row);
            }
            cell.mean_before = sum_before / cfg.trials;
            cell.mean_after = sum_after / cfg.trials;
            cell.mean_slack = cell.mean_after - cell.mean_before;
            if (!(cell.mean_slack >= -cfg.tol.slack)) {
                cell.pass = false;
                res.summary.failures += 1;
                res.summary.checks["cell_mean_monotone"].failures += 1;
            }
            res.summary.checks["cell_mean_monotone"].trials += 1;
            auto& stats = res.summary.checks["cell_mean_monotone"];
            stats.min_slack = std::min(stats.min_slack, cell.mean_slack);
            res.cells.push_back(cell);
        }
    }
    res.summary.wall_time_s = seconds_since(start);
    res.summary.min_slack = global_min_slack;
    return res;
}

}  // namespace subfid
