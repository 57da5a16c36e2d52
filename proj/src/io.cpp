#include "subfid/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace subfid::io {

namespace {

std::string fmt12(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

SpaceDecomposition dims_from_json(const json& j) {
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3)
        throw std::runtime_error("dims: expected an array [dA, dB, dK]");
    return {j["dims"][0].get<int>(), j["dims"][1].get<int>(), j["dims"][2].get<int>()};
}

json dims_to_json(const SpaceDecomposition& space) {
    return json::array({space.dA, space.dB, space.dK});
}

json matrix_list_to_json(const std::vector<Matrix>& blocks) {
    json arr = json::array();
    for (const auto& m : blocks) arr.push_back(matrix_to_json(m));
    return arr;
}

std::vector<Matrix> matrix_list_from_json(const json& j, const char* field) {
    if (!j.is_array()) throw std::runtime_error(std::string(field) + ": expected an array of matrices");
    std::vector<Matrix> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(matrix_from_json(item));
    return out;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw std::runtime_error("matrix: expected an object with rows, cols, entries");
    const auto rows = j["rows"].get<Eigen::Index>();
    const auto cols = j["cols"].get<Eigen::Index>();
    if (rows < 0 || cols < 0) throw std::runtime_error("matrix: negative dimension");
    const auto& entries = j["entries"];
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows * cols)
        throw std::runtime_error("matrix: entry count does not equal rows*cols");
    Matrix m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k, ++idx) {
            const auto& e = entries[static_cast<std::size_t>(idx)];
            if (!e.is_array() || e.size() != 2)
                throw std::runtime_error("matrix: each entry must be a pair [re, im]");
            m(i, k) = cd(e[0].get<double>(), e[1].get<double>());
        }
    return m;
}

json state_to_json(const DensityOperator& rho) {
    return json{{"dims", dims_to_json(rho.space())}, {"matrix", matrix_to_json(rho.matrix())}};
}

DensityOperator state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("matrix"))
        throw std::runtime_error("state: expected an object with dims and matrix");
    const SpaceDecomposition space = dims_from_json(j);
    return {space, matrix_from_json(j["matrix"])};
}

json channel_to_json(const KrausChannel& channel) {
    return json{{"dims", dims_to_json(channel.space)},
                {"kind", "raw"},
                {"blocks", json{{"kraus", matrix_list_to_json(channel.kraus)}}}};
}

json channel_to_json(const StructuredChannelSpec& spec) {
    return json{{"dims", dims_to_json(spec.space)},
                {"kind", "structured"},
                {"blocks", json{{"C", matrix_list_to_json(spec.C)},
                                {"D", matrix_list_to_json(spec.D)},
                                {"G", matrix_list_to_json(spec.G)}}}};
}

json channel_to_json(const ComputationChannelSpec& spec) {
    return json{{"dims", dims_to_json(spec.space)},
                {"kind", "computation"},
                {"blocks", json{{"FA", matrix_list_to_json(spec.logical)},
                                {"C", matrix_list_to_json(spec.C)},
                                {"D", matrix_list_to_json(spec.D)},
                                {"G", matrix_list_to_json(spec.G)}}}};
}

json product_channel_to_json(const SpaceDecomposition& space, const std::vector<Matrix>& a_kraus,
                             const std::vector<Matrix>& b_kraus,
                             const std::vector<Matrix>& complement_kraus) {
    return json{{"dims", dims_to_json(space)},
                {"kind", "product"},
                {"blocks", json{{"A", matrix_list_to_json(a_kraus)},
                                {"B", matrix_list_to_json(b_kraus)},
                                {"K", matrix_list_to_json(complement_kraus)}}}};
}

LoadedChannel channel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("blocks"))
        throw std::runtime_error("channel: expected an object with dims, kind, blocks");
    const SpaceDecomposition space = dims_from_json(j);
    const std::string kind = j["kind"].get<std::string>();
    const auto& blocks = j["blocks"];
    if (kind == "raw") {
        return {kind, make_kraus_channel(space, matrix_list_from_json(blocks.at("kraus"), "kraus"))};
    }
    if (kind == "structured") {
        StructuredChannelSpec spec{space, matrix_list_from_json(blocks.at("C"), "C"),
                                   matrix_list_from_json(blocks.at("D"), "D"),
                                   matrix_list_from_json(blocks.at("G"), "G")};
        return {kind, assemble(spec)};
    }
    if (kind == "computation") {
        ComputationChannelSpec spec{space, matrix_list_from_json(blocks.at("FA"), "FA"),
                                    matrix_list_from_json(blocks.at("C"), "C"),
                                    matrix_list_from_json(blocks.at("D"), "D"),
                                    matrix_list_from_json(blocks.at("G"), "G")};
        return {kind, assemble_computation(spec)};
    }
    if (kind == "product") {
        return {kind, assemble_local_product(space, matrix_list_from_json(blocks.at("A"), "A"),
                                             matrix_list_from_json(blocks.at("B"), "B"),
                                             matrix_list_from_json(blocks.at("K"), "K"))};
    }
    throw std::runtime_error("channel: unknown kind '" + kind + "'");
}

json summary_to_json(const SuiteSummary& summary) {
    json checks = json::object();
    for (const auto& [name, stats] : summary.checks)
        checks[name] = json{{"trials", stats.trials},
                            {"failures", stats.failures},
                            {"min_slack", stats.min_slack}};
    json tolerances = json::object();
    for (const auto& [name, value] : summary.tolerances.named()) tolerances[name] = value;
    return json{{"suite", summary.suite},
                {"dims", dims_to_json(summary.dims)},
                {"seed", summary.seed},
                {"trials", summary.trials},
                {"failures", summary.failures},
                {"min_slack", summary.min_slack},
                {"checks", std::move(checks)},
                {"tolerances", std::move(tolerances)}};
}

namespace {

json failure_to_json(const FailureBundle& bundle) {
    json matrices = json::object();
    for (const auto& [name, m] : bundle.matrices) matrices[name] = matrix_to_json(m);
    return json{{"trial_index", bundle.trial_index},
                {"seed", bundle.seed},
                {"what", bundle.what},
                {"matrices", std::move(matrices)}};
}

json failures_to_json(const std::vector<FailureBundle>& failures) {
    json arr = json::array();
    for (const auto& f : failures) arr.push_back(failure_to_json(f));
    return arr;
}

}  // namespace

json result_to_json(const SuiteResult& result) {
    return json{{"summary", summary_to_json(result.summary)},
                {"failures", failures_to_json(result.failures)}};
}

json result_to_json(const SwapResult& result) {
    return json{{"summary", summary_to_json(result.summary)},
                {"found_increase", result.found_increase},
                {"found_decrease", result.found_decrease},
                {"increase_trial", result.increase_trial},
                {"decrease_trial", result.decrease_trial},
                {"max_increase", result.max_increase},
                {"min_decrease", result.min_decrease}};
}

json result_to_json(const SweepResult& result) {
    json cells = json::array();
    for (const auto& c : result.cells)
        cells.push_back(json{{"epsilon", c.epsilon},
                             {"leak_strength", c.leak_strength},
                             {"mean_before", c.mean_before},
                             {"mean_after", c.mean_after},
                             {"min_before", c.min_before},
                             {"min_after", c.min_after},
                             {"mean_slack", c.mean_slack},
                             {"min_slack", c.min_slack},
                             {"pass", c.pass}});
    return json{{"summary", summary_to_json(result.summary)},
                {"cells", std::move(cells)},
                {"failures", failures_to_json(result.failures)}};
}

std::string reports_csv(const std::vector<TrialReport>& reports) {
    std::ostringstream out;
    out << "trial,seed,dA,dB,dK,n_kraus,leak_strength,fa_before,fa_after,slack,pass\n";
    for (const auto& r : reports) {
        out << r.trial_index << ',' << r.seed << ',' << r.dims.dA << ',' << r.dims.dB << ','
            << r.dims.dK << ',' << r.n_kraus << ',' << fmt12(r.leak_strength) << ','
            << fmt12(r.fa_before) << ',' << fmt12(r.fa_after) << ',' << fmt12(r.slack) << ','
            << (r.pass ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "epsilon,leak_strength,trial,fa_before,fa_after,slack\n";
    for (const auto& r : rows) {
        out << fmt12(r.epsilon) << ',' << fmt12(r.leak_strength) << ',' << r.trial << ','
            << fmt12(r.fa_before) << ',' << fmt12(r.fa_after) << ',' << fmt12(r.slack) << '\n';
    }
    return out.str();
}

std::string fa_record(const SubsystemFidelity& parts, double angle_value) {
    return "{\"FA\": " + fmt12(parts.total) + ", \"fA_term\": " + fmt12(parts.ab_term) +
           ", \"K_term\": " + fmt12(parts.k_term) + ", \"angle\": " + fmt12(angle_value) + "}";
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& ex) {
        throw std::runtime_error("parse failure in " + path + ": " + ex.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace subfid::io
