// subfid CLI: closed-form fidelity evaluation, state/channel generation,
// verification suites, and initialization-error sweeps over JSON/CSV files.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "subfid/io.hpp"

namespace {

using namespace subfid;

std::string fmt12(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

SpaceDecomposition parse_dims(const std::vector<int>& dims) {
    if (dims.size() != 3) throw std::runtime_error("--dims expects dA dB dK");
    return {dims[0], dims[1], dims[2]};
}

Tolerances parse_tolerances(const std::vector<std::string>& overrides) {
    Tolerances tol;
    for (const auto& item : overrides) {
        const auto pos = item.find('=');
        if (pos == std::string::npos)
            throw std::runtime_error("--tol expects NAME=VALUE, got '" + item + "'");
        tol.set(item.substr(0, pos), std::stod(item.substr(pos + 1)));
    }
    return tol;
}

std::vector<double> parse_grid(const std::string& csv, const char* flag) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const std::string token = csv.substr(start, comma == std::string::npos ? std::string::npos
                                                                               : comma - start);
        if (token.empty()) throw std::runtime_error(std::string(flag) + ": empty value in list");
        values.push_back(std::stod(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (values.empty()) throw std::runtime_error(std::string(flag) + ": empty list");
    return values;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text << "\n";
    else
        io::write_text_file(out_path, text + "\n");
}

void print_summary_line(const SuiteSummary& s) {
    std::cout << "suite=" << s.suite << " trials=" << s.trials << " failures=" << s.failures
              << " min_slack=" << fmt12(s.min_slack) << " wall_time_s=" << fmt12(s.wall_time_s)
              << "\n";
}

int cmd_fa(const std::string& path1, const std::string& path2, const std::string& out_path) {
    const DensityOperator tau = io::state_from_json(io::load_json_file(path1));
    const DensityOperator ups = io::state_from_json(io::load_json_file(path2));
    if (!(tau.space() == ups.space()))
        throw std::runtime_error("states have different decompositions");
    const SubsystemFidelity parts = subsystem_fidelity_parts(tau, ups);
    emit(io::fa_record(parts, subsystem_angle(tau, ups)), out_path);
    return 0;
}

int cmd_fidelity(const std::string& path1, const std::string& path2, const std::string& out_path) {
    const DensityOperator tau = io::state_from_json(io::load_json_file(path1));
    const DensityOperator ups = io::state_from_json(io::load_json_file(path2));
    if (!(tau.space() == ups.space()))
        throw std::runtime_error("states have different decompositions");
    const double f = uhlmann_fidelity(tau, ups);
    emit("{\"F\": " + fmt12(f) + ", \"angle\": " + fmt12(angle(tau, ups)) + "}", out_path);
    return 0;
}

struct GenOpts {
    std::vector<int> dims{2, 2, 2};
    std::uint64_t seed = 0;
    std::string out;
    // state options
    bool perfect = false;
    double epsilon = 0.0;
    double eta = 0.0;
    // channel options
    std::string kind = "structured";
    int kraus = 3;
    int kraus_logical = 2;
    double leak = 1.0;
};

int cmd_gen(const std::string& what, const GenOpts& opts) {
    const SpaceDecomposition dims = parse_dims(opts.dims);
    if (opts.out.empty()) throw std::runtime_error("gen: --out PATH is required");
    RngStream stream(opts.seed);
    if (what == "state") {
        const double eps = opts.perfect ? 0.0 : opts.epsilon;
        const DensityOperator rho = random_imperfect_state(dims, eps, opts.eta, stream);
        io::write_text_file(opts.out, io::state_to_json(rho).dump(2) + "\n");
        return 0;
    }
    if (what == "channel") {
        io::json j;
        if (opts.kind == "structured") {
            j = io::channel_to_json(random_structured(dims, opts.kraus, opts.leak, stream));
        } else if (opts.kind == "init-free") {
            j = io::channel_to_json(random_initialization_free(dims, opts.kraus, stream));
        } else if (opts.kind == "computation") {
            j = io::channel_to_json(
                random_computation(dims, opts.kraus_logical, opts.kraus, opts.leak, stream));
        } else if (opts.kind == "product") {
            const auto a_kraus = random_kraus_set(dims.dA, opts.kraus, stream);
            const auto b_kraus = random_kraus_set(dims.dB, opts.kraus, stream);
            const auto k_kraus = dims.dK > 0 ? random_kraus_set(dims.dK, opts.kraus, stream)
                                             : std::vector<Matrix>{};
            j = io::product_channel_to_json(dims, a_kraus, b_kraus, k_kraus);
        } else {
            throw std::runtime_error("gen channel: unknown kind '" + opts.kind +
                                     "' (expected structured|init-free|product|computation)");
        }
        io::write_text_file(opts.out, j.dump(2) + "\n");
        return 0;
    }
    throw std::runtime_error("gen: unknown kind '" + what + "' (expected state|channel)");
}

struct VerifyOpts {
    std::vector<int> dims{2, 2, 2};
    std::uint64_t seed = 0;
    int trials = 1000;
    int kraus = 0;  // 0 = suite default
    double leak = 1.0;
    int povms = 0;  // 0 = suite default
    std::string out;
    std::string csv;
    std::vector<std::string> tol;
};

int cmd_verify(const std::string& suite, const VerifyOpts& opts) {
    const SpaceDecomposition dims = parse_dims(opts.dims);
    const Tolerances tol = parse_tolerances(opts.tol);
    SuiteSummary summary;
    io::json out_json;
    std::string csv_text;
    if (suite == "theorem3") {
        Theorem3Config cfg{dims, {2, 3, 4}, opts.trials, opts.leak, opts.seed, tol};
        if (opts.kraus > 0) cfg.n_kraus = {opts.kraus};
        const SuiteResult res = run_theorem3(cfg);
        summary = res.summary;
        out_json = io::result_to_json(res);
        csv_text = io::reports_csv(res.reports);
    } else if (suite == "theorem4") {
        Theorem4Config cfg{dims, {1, 2, 3}, {2, 3, 4}, opts.trials, opts.leak, opts.seed, tol};
        if (opts.kraus > 0) cfg.n_kraus = {opts.kraus};
        const SuiteResult res = run_theorem4(cfg);
        summary = res.summary;
        out_json = io::result_to_json(res);
        csv_text = io::reports_csv(res.reports);
    } else if (suite == "evolution") {
        EvolutionConfig cfg{dims, {2, 3, 4}, opts.trials, opts.leak, opts.seed, tol};
        if (opts.kraus > 0) cfg.n_kraus = {opts.kraus};
        const SuiteResult res = run_evolution_identities(cfg);
        summary = res.summary;
        out_json = io::result_to_json(res);
    } else if (suite == "properties") {
        PropertyConfig cfg{dims, opts.trials, opts.povms > 0 ? opts.povms : 10, opts.seed, tol};
        const SuiteResult res = run_property_suite(cfg);
        summary = res.summary;
        out_json = io::result_to_json(res);
    } else if (suite == "equivalence") {
        EquivalenceConfig cfg{dims, opts.trials, 8, opts.povms > 0 ? opts.povms : 10, opts.seed, tol};
        const SuiteResult res = run_equivalence(cfg);
        summary = res.summary;
        out_json = io::result_to_json(res);
    } else if (suite == "fuchs") {
        FuchsConfig cfg{dims.dS(), opts.trials, opts.povms > 0 ? opts.povms : 100, opts.seed, tol};
        const SuiteResult res = run_global_fuchs(cfg);
        summary = res.summary;
        out_json = io::result_to_json(res);
    } else if (suite == "swap") {
        SwapConfig cfg{dims, opts.trials, opts.seed, tol};
        const SwapResult res = swap_counterexample_search(cfg);
        summary = res.summary;
        out_json = io::result_to_json(res);
        csv_text = io::reports_csv(res.reports);
    } else {
        throw std::runtime_error(
            "verify: unknown suite '" + suite +
            "' (expected theorem3|theorem4|evolution|properties|equivalence|fuchs|swap)");
    }
    if (!opts.out.empty()) io::write_text_file(opts.out, out_json.dump(2) + "\n");
    if (!opts.csv.empty()) {
        if (csv_text.empty()) throw std::runtime_error("verify: suite '" + suite + "' has no CSV reports");
        io::write_text_file(opts.csv, csv_text);
    }
    print_summary_line(summary);
    return summary.failures == 0 ? 0 : 1;
}

struct SweepOpts {
    std::vector<int> dims{2, 2, 2};
    std::uint64_t seed = 0;
    int trials = 200;
    int kraus = 3;
    std::string epsilons = "0,0.1,0.2,0.3,0.4,0.5";
    std::string leaks = "0,0.5,1";
    std::string out;
    std::string summary;
    std::vector<std::string> tol;
};

int cmd_sweep(const SweepOpts& opts) {
    SweepConfig cfg;
    cfg.dims = parse_dims(opts.dims);
    cfg.epsilons = parse_grid(opts.epsilons, "--epsilons");
    cfg.leak_strengths = parse_grid(opts.leaks, "--leaks");
    cfg.trials = opts.trials;
    cfg.n_kraus = opts.kraus;
    cfg.seed = opts.seed;
    cfg.tol = parse_tolerances(opts.tol);
    const SweepResult res = sweep_init_error(cfg);
    if (!opts.out.empty()) io::write_text_file(opts.out, io::sweep_csv(res.rows));
    if (!opts.summary.empty()) io::write_text_file(opts.summary, io::result_to_json(res).dump(2) + "\n");
    print_summary_line(res.summary);
    return res.summary.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subsystem-code fidelity numerics and verification suites"};
    app.require_subcommand(1);
    int exit_code = 0;

    // fa / fidelity
    std::string state1, state2, record_out;
    auto* fa = app.add_subcommand("fa", "fidelity of the encoded information in two state files");
    fa->add_option("state1", state1, "first state JSON file")->required();
    fa->add_option("state2", state2, "second state JSON file")->required();
    fa->add_option("--out", record_out, "write the record here instead of stdout");
    fa->callback([&] { exit_code = cmd_fa(state1, state2, record_out); });

    auto* fid = app.add_subcommand("fidelity", "plain Uhlmann fidelity of two state files");
    fid->add_option("state1", state1, "first state JSON file")->required();
    fid->add_option("state2", state2, "second state JSON file")->required();
    fid->add_option("--out", record_out, "write the record here instead of stdout");
    fid->callback([&] { exit_code = cmd_fidelity(state1, state2, record_out); });

    // gen
    GenOpts gopts;
    std::string gen_what;
    auto* gen = app.add_subcommand("gen", "generate a random state or channel file");
    gen->add_option("what", gen_what, "state | channel")->required();
    gen->add_option("--dims", gopts.dims, "dA dB dK")->expected(3);
    gen->add_option("--seed", gopts.seed, "stream seed");
    gen->add_option("--out", gopts.out, "output path")->required();
    gen->add_flag("--perfect", gopts.perfect, "state: perfectly initialized");
    gen->add_option("--epsilon", gopts.epsilon, "state: leaked weight in [0,1]");
    gen->add_option("--eta", gopts.eta, "state: cross-block coherence in [0,1]");
    gen->add_option("--kind", gopts.kind, "channel: structured|init-free|product|computation");
    gen->add_option("--kraus", gopts.kraus, "channel: Kraus operators per block");
    gen->add_option("--kraus-logical", gopts.kraus_logical, "computation channel: logical Kraus count");
    gen->add_option("--leak", gopts.leak, "channel: leak strength in [0,1]");
    gen->callback([&] { exit_code = cmd_gen(gen_what, gopts); });

    // verify
    VerifyOpts vopts;
    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite,
                       "theorem3|theorem4|evolution|properties|equivalence|fuchs|swap")
        ->required();
    verify->add_option("--dims", vopts.dims, "dA dB dK")->expected(3);
    verify->add_option("--seed", vopts.seed, "suite seed");
    verify->add_option("--trials", vopts.trials, "trial (or pair) count");
    verify->add_option("--kraus", vopts.kraus, "fix the Kraus count (default: cycle)");
    verify->add_option("--leak", vopts.leak, "leak strength in [0,1]");
    verify->add_option("--povms", vopts.povms, "random measurements per trial");
    verify->add_option("--out", vopts.out, "write the JSON result here");
    verify->add_option("--csv", vopts.csv, "write per-trial CSV here (theorem3|theorem4|swap)");
    verify->add_option("--tol", vopts.tol, "override a tolerance, NAME=VALUE")->take_all();
    verify->callback([&] { exit_code = cmd_verify(suite, vopts); });

    // sweep
    SweepOpts sopts;
    auto* sweep = app.add_subcommand("sweep", "initialization-error sweep, CSV output");
    sweep->add_option("--dims", sopts.dims, "dA dB dK")->expected(3);
    sweep->add_option("--seed", sopts.seed, "suite seed");
    sweep->add_option("--trials", sopts.trials, "trials per grid cell");
    sweep->add_option("--kraus", sopts.kraus, "Kraus operators per channel");
    sweep->add_option("--epsilons", sopts.epsilons, "comma-separated leak weights");
    sweep->add_option("--leaks", sopts.leaks, "comma-separated leak strengths");
    sweep->add_option("--out", sopts.out, "write the per-trial CSV here");
    sweep->add_option("--summary", sopts.summary, "write the JSON summary here");
    sweep->add_option("--tol", sopts.tol, "override a tolerance, NAME=VALUE")->take_all();
    sweep->callback([&] { exit_code = cmd_sweep(sopts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
