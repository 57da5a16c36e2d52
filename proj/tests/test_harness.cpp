#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subfid/harness.hpp"
#include "subfid/io.hpp"

using namespace subfid;

namespace {

Matrix basis_density(int d, int i) {
    Matrix m = Matrix::Zero(d, d);
    m(i, i) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("theorem3 suite: zero failures, chain agrees") {
    Theorem3Config cfg;
    cfg.trials = 500;
    cfg.seed = 101;
    cfg.n_kraus = {2, 3, 4};
    const SuiteResult res = run_theorem3(cfg);
    CHECK(res.summary.failures == 0);
    CHECK(res.failures.empty());
    CHECK(res.summary.min_slack >= -1e-9);
    CHECK(res.summary.checks.at("square_chain").failures == 0);
    CHECK(res.summary.checks.at("chain_consistency").failures == 0);
    CHECK(res.summary.checks.at("leak_psd").failures == 0);
    CHECK(static_cast<int>(res.reports.size()) == cfg.trials);

    // requires a complement to leak into
    Theorem3Config flat = cfg;
    flat.dims = SpaceDecomposition(2, 2, 0);
    CHECK_THROWS_AS((void)run_theorem3(flat), std::invalid_argument);
}

TEST_CASE("theorem3 suite: zero leak strength means exactly invariant fidelity") {
    Theorem3Config cfg;
    cfg.trials = 500;
    cfg.seed = 103;
    cfg.leak_strength = 0.0;
    const SuiteResult res = run_theorem3(cfg);
    CHECK(res.summary.failures == 0);
    for (const auto& report : res.reports) CHECK(std::abs(report.slack) < 1e-10);
}

TEST_CASE("theorem3 suite: strict increases are common at full leak") {
    Theorem3Config cfg;
    cfg.trials = 2000;
    cfg.seed = 105;
    cfg.leak_strength = 1.0;
    cfg.n_kraus = {3};
    const SuiteResult res = run_theorem3(cfg);
    CHECK(res.summary.failures == 0);
    int strict = 0;
    for (const auto& report : res.reports)
        if (report.slack > 1e-4) ++strict;
    CHECK(strict >= cfg.trials / 10);
}

TEST_CASE("theorem3 boundary: comparing a perfect state with itself") {
    const SpaceDecomposition dims(2, 2, 2);
    RngStream rng(107);
    const DensityOperator rho = random_perfect_state(dims, rng);
    const auto channel = assemble(random_structured(dims, 3, 1.0, rng));
    CHECK(subsystem_fidelity(rho, rho) == 1.0);
    CHECK(subsystem_fidelity(rho, apply(channel, rho)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("theorem4 suite: zero failures including the update decomposition") {
    Theorem4Config cfg;
    cfg.trials = 500;
    cfg.seed = 109;
    const SuiteResult res = run_theorem4(cfg);
    CHECK(res.summary.failures == 0);
    CHECK(res.summary.checks.at("fidelity_monotone").failures == 0);
    CHECK(res.summary.checks.at("reduced_update_identity").failures == 0);
    CHECK(res.summary.checks.at("error_term_psd").failures == 0);
    CHECK(res.summary.checks.at("perfect_reduced_action").failures == 0);
    CHECK(res.summary.checks.at("reduced_update_identity").min_slack >= -1e-10);
    CHECK(res.summary.checks.at("error_term_psd").min_slack >= -1e-10);
}

TEST_CASE("evolution identities hold at three decompositions") {
    for (const auto& dims :
         {SpaceDecomposition(2, 2, 2), SpaceDecomposition(2, 2, 3), SpaceDecomposition(3, 2, 2)}) {
        EvolutionConfig cfg;
        cfg.dims = dims;
        cfg.trials = 300;
        cfg.seed = 111;
        const SuiteResult res = run_evolution_identities(cfg);
        CHECK(res.summary.failures == 0);
        CHECK(res.summary.checks.at("perfect_invariance").min_slack >= -1e-10);
        CHECK(res.summary.checks.at("leak_update_identity").min_slack >= -1e-10);
        CHECK(res.summary.checks.at("init_free_invariance").min_slack >= -1e-10);
        CHECK(res.summary.checks.at("leak_psd").min_slack >= -1e-10);
    }
}

TEST_CASE("evolution identities: zero leak strength gives zero leak term") {
    EvolutionConfig cfg;
    cfg.trials = 200;
    cfg.seed = 113;
    cfg.leak_strength = 0.0;
    const SuiteResult res = run_evolution_identities(cfg);
    CHECK(res.summary.failures == 0);

    // the leak term depends only on the complement block: states confined to
    // the code subspace produce none even under a leaking channel
    const SpaceDecomposition dims(2, 2, 2);
    RngStream rng(115);
    const auto spec = random_structured(dims, 3, 1.0, rng);
    const DensityOperator block_supported = random_perfect_state(dims, rng);
    const auto leak = leak_term(spec, block_supported);
    CHECK(leak.matrix().norm() <= 1e-14);
    const Matrix evolved = reduced_on_a(apply(assemble(spec), block_supported)).matrix();
    CHECK((evolved - reduced_on_a(block_supported).matrix()).norm() < 1e-10);
}

TEST_CASE("property suite: zero failures at desk scale") {
    PropertyConfig cfg;
    cfg.trials = 300;
    cfg.seed = 117;
    const SuiteResult res = run_property_suite(cfg);
    CHECK(res.summary.failures == 0);
    for (const auto& [name, stats] : res.summary.checks) {
        INFO(name);
        CHECK(stats.failures == 0);
    }
    CHECK(res.summary.checks.at("symmetry").trials == cfg.trials);
    CHECK(res.summary.checks.at("povm_floor").trials == cfg.trials * cfg.povm_samples);
}

TEST_CASE("property suite: empty run yields an empty passing summary") {
    PropertyConfig cfg;
    cfg.trials = 0;
    cfg.seed = 119;
    const SuiteResult res = run_property_suite(cfg);
    CHECK(res.summary.trials == 0);
    CHECK(res.summary.failures == 0);
    CHECK(res.summary.checks.empty());
}

TEST_CASE("triangle inequality is exactly tight through the shared corner") {
    const SpaceDecomposition dims(2, 2, 2);
    RngStream rng(121);
    const DensityOperator tau = random_full_state(dims, rng);
    const DensityOperator ups = random_full_state(dims, rng);
    const DensityOperator phi = tau;
    const double lhs = subsystem_angle(tau, ups);
    const double rhs = subsystem_angle(tau, phi) + subsystem_angle(phi, ups);
    CHECK(std::abs(rhs - lhs) <= 1e-12);
}

TEST_CASE("swap search finds both directions and verifies handcrafted pairs") {
    SwapConfig cfg;
    cfg.trials = 1000;
    cfg.seed = 123;
    const SwapResult res = swap_counterexample_search(cfg);
    CHECK(res.summary.failures == 0);
    CHECK(res.found_increase);
    CHECK(res.found_decrease);
    CHECK(res.max_increase > 1e-6);
    CHECK(res.min_decrease < -1e-6);

    // handcrafted: orthogonal protected states, equal gauge states; the swap
    // raises the measure from 0 to 1
    const SpaceDecomposition dims(2, 2, 1);
    const auto channel = make_kraus_channel(dims, {swap_ab_unitary(dims)});
    const DensityOperator tau = make_perfect_state(dims, basis_density(2, 0), basis_density(2, 0));
    const DensityOperator ups = make_perfect_state(dims, basis_density(2, 1), basis_density(2, 0));
    CHECK(subsystem_fidelity(tau, ups) <= 1e-12);
    CHECK(subsystem_fidelity(apply(channel, tau), apply(channel, ups)) ==
          doctest::Approx(1.0).epsilon(1e-10));

    // equal protected states, orthogonal gauge states: the swap lowers it
    const DensityOperator tau2 = make_perfect_state(dims, basis_density(2, 0), basis_density(2, 0));
    const DensityOperator ups2 = make_perfect_state(dims, basis_density(2, 0), basis_density(2, 1));
    CHECK(subsystem_fidelity(tau2, ups2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(subsystem_fidelity(apply(channel, tau2), apply(channel, ups2)) <= 1e-12);

    // swap-symmetric pairs are untouched
    RngStream rng(125);
    const Matrix x = random_density(2, 2, rng);
    const Matrix y = random_density(2, 1, rng);
    const DensityOperator sym_tau = make_perfect_state(dims, x, x);
    const DensityOperator sym_ups = make_perfect_state(dims, y, y);
    const double before = subsystem_fidelity(sym_tau, sym_ups);
    const double after = subsystem_fidelity(apply(channel, sym_tau), apply(channel, sym_ups));
    CHECK(std::abs(after - before) <= 1e-10);

    SwapConfig rectangular;
    rectangular.dims = SpaceDecomposition(2, 3, 1);
    CHECK_THROWS_AS((void)swap_counterexample_search(rectangular), std::invalid_argument);
}

TEST_CASE("equivalence suite: the three forms agree") {
    EquivalenceConfig cfg;
    cfg.pairs = 300;
    cfg.seed = 127;
    const SuiteResult res = run_equivalence(cfg);
    CHECK(res.summary.failures == 0);
    CHECK(res.summary.checks.at("closed_vs_canonical").min_slack >= -1e-9);
    CHECK(res.summary.checks.at("oracle_upper_bound").min_slack >= -1e-9);
    CHECK(res.summary.checks.at("oracle_injected_reach").min_slack >= -1e-6);
    CHECK(res.summary.checks.at("povm_optimal").min_slack >= -1e-7);
    CHECK(res.summary.checks.at("povm_floor").min_slack >= -1e-9);
}

TEST_CASE("global fuchs suite passes across dimensions") {
    FuchsConfig cfg;
    cfg.pairs = 50;
    cfg.povm_samples = 50;
    cfg.seed = 129;
    const SuiteResult res = run_global_fuchs(cfg);
    CHECK(res.summary.failures == 0);
    CHECK(res.summary.checks.at("fuchs_optimal").min_slack >= -1e-7);
    CHECK(res.summary.checks.at("fuchs_floor").min_slack >= -1e-9);
}

TEST_CASE("sweep: grid aggregates are monotone, boundary rows exact") {
    SweepConfig cfg;
    cfg.trials = 100;
    cfg.seed = 131;
    cfg.epsilons = {0.0, 0.2, 0.5};
    cfg.leak_strengths = {0.0, 1.0};
    const SweepResult res = sweep_init_error(cfg);
    CHECK(res.summary.failures == 0);
    CHECK(res.rows.size() == static_cast<std::size_t>(3 * 2 * cfg.trials));
    CHECK(res.cells.size() == 6);
    for (const auto& cell : res.cells) {
        CHECK(cell.pass);
        CHECK(cell.mean_after >= cell.mean_before - 1e-9);
        if (cell.epsilon == 0.0) {
            CHECK(std::abs(cell.mean_before - 1.0) <= 1e-9);
            CHECK(std::abs(cell.mean_after - 1.0) <= 1e-9);
        }
        if (cell.leak_strength == 0.0) CHECK(std::abs(cell.mean_slack) <= 1e-10);
    }
    for (const auto& row : res.rows)
        if (row.leak_strength == 0.0) CHECK(std::abs(row.slack) <= 1e-10);
}

TEST_CASE("suite outputs are deterministic for fixed seed and config") {
    Theorem3Config cfg;
    cfg.trials = 200;
    cfg.seed = 133;
    const SuiteResult a = run_theorem3(cfg);
    const SuiteResult b = run_theorem3(cfg);
    CHECK(io::result_to_json(a).dump() == io::result_to_json(b).dump());
    CHECK(io::reports_csv(a.reports) == io::reports_csv(b.reports));

    Theorem3Config other = cfg;
    other.seed = 134;
    const SuiteResult c = run_theorem3(other);
    CHECK(io::reports_csv(a.reports) != io::reports_csv(c.reports));

    SweepConfig sweep_cfg;
    sweep_cfg.trials = 20;
    sweep_cfg.seed = 135;
    const SweepResult s1 = sweep_init_error(sweep_cfg);
    const SweepResult s2 = sweep_init_error(sweep_cfg);
    CHECK(io::sweep_csv(s1.rows) == io::sweep_csv(s2.rows));
    CHECK(io::result_to_json(s1).dump() == io::result_to_json(s2).dump());
}

TEST_CASE("tolerance overrides accept known names and reject unknown ones") {
    Tolerances tol;
    tol.set("slack", 1e-8);
    CHECK(tol.slack == 1e-8);
    CHECK(tol.named().at("slack") == 1e-8);
    CHECK_THROWS_WITH_AS(tol.set("bogus", 1.0), doctest::Contains("unknown tolerance"),
                         std::invalid_argument);
    CHECK_THROWS_AS(tol.set("slack", -1.0), std::invalid_argument);
}
