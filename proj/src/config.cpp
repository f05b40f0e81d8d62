#include "emlab/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace emlab {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return j;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown config key: " + prefix + it.key());
    }
}

const json& require(const json& j, const std::string& key, const std::string& prefix) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing required config key: " + prefix + key);
    return *it;
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

TopologyKind parse_topology_kind(const std::string& s) {
    if (s == "chain-1d-periodic") return TopologyKind::Chain1dPeriodic;
    if (s == "all-to-all") return TopologyKind::AllToAll;
    throw ConfigError("topology.kind must be 'chain-1d-periodic' or 'all-to-all', got '" + s + "'");
}

NoiseMode parse_noise_mode(const std::string& s) {
    if (s == "spacetime") return NoiseMode::Spacetime;
    if (s == "quenched") return NoiseMode::Quenched;
    throw ConfigError("disorder.mode must be 'spacetime' or 'quenched', got '" + s + "'");
}

std::vector<int> int_list(const json& j, const std::string& name) {
    if (j.is_number_integer()) return {j.get<int>()};
    if (j.is_array()) return j.get<std::vector<int>>();
    throw ConfigError(name + " must be an integer or a list of integers");
}

}  // namespace

SweepSpec parse_sweep_config(const std::string& path) {
    json j = load_json(path);
    check_keys(j, {"engine", "probe", "topology", "depth", "disorder", "realizations", "seed",
                   "workers"},
               "");
    SweepSpec spec;
    std::string engine = require(j, "engine", "").get<std::string>();
    if (engine == "replica")
        spec.engine = Engine::Replica;
    else if (engine == "exact")
        spec.engine = Engine::Exact;
    else
        throw ConfigError("engine must be 'replica' or 'exact', got '" + engine + "'");

    std::string probe = require(j, "probe", "").get<std::string>();
    if (probe == "correlation-metric")
        spec.probe = Probe::CorrelationMetric;
    else if (probe == "mutual-information")
        spec.probe = Probe::MutualInformation;
    else if (probe == "renyi2-probe")
        spec.probe = Probe::Renyi2Probe;
    else
        throw ConfigError("probe must be one of correlation-metric, mutual-information, "
                          "renyi2-probe; got '" + probe + "'");

    const json& topo = require(j, "topology", "");
    check_keys(topo, {"kind", "n"}, "topology.");
    spec.topology = parse_topology_kind(require(topo, "kind", "topology.").get<std::string>());
    spec.sizes = int_list(require(topo, "n", "topology."), "topology.n");

    spec.depth = get_or(j, "depth", 0);

    const json& dis = require(j, "disorder", "");
    check_keys(dis, {"p", "q_bar", "sigma_over_qbar", "mode"}, "disorder.");
    spec.p = get_or(dis, "p", 0.5);
    spec.q_bar = require(dis, "q_bar", "disorder.").get<double>();
    spec.sigma_over_qbar =
        require(dis, "sigma_over_qbar", "disorder.").get<std::vector<double>>();
    spec.noise_mode = parse_noise_mode(get_or<std::string>(dis, "mode", "spacetime"));

    spec.realizations = require(j, "realizations", "").get<int>();
    spec.master_seed = get_or<std::uint64_t>(j, "seed", 0);
    spec.workers = get_or(j, "workers", 1);
    spec.validate();
    return spec;
}

MeanFieldRunConfig parse_meanfield_config(const std::string& path) {
    json j = load_json(path);
    check_keys(j, {"coupling", "delta1", "p", "t_end", "dt"}, "");
    MeanFieldRunConfig cfg;
    const json& coupling = require(j, "coupling", "");
    cfg.coupling_values = coupling.is_number() ? std::vector<double>{coupling.get<double>()}
                                               : coupling.get<std::vector<double>>();
    const json& d1 = require(j, "delta1", "");
    cfg.delta1_values =
        d1.is_number() ? std::vector<double>{d1.get<double>()} : d1.get<std::vector<double>>();
    cfg.p = get_or(j, "p", 0.5);
    cfg.t_end = get_or(j, "t_end", 50.0);
    cfg.dt = get_or(j, "dt", 1e-3);
    return cfg;
}

InstabilityRunConfig parse_instability_config(const std::string& path) {
    json j = load_json(path);
    check_keys(j, {"sizes", "p", "q1", "q2", "d_max", "form", "realizations"}, "");
    InstabilityRunConfig cfg;
    cfg.sizes = int_list(require(j, "sizes", ""), "sizes");
    cfg.p = get_or(j, "p", 0.5);
    cfg.q1 = require(j, "q1", "").get<double>();
    cfg.q2 = require(j, "q2", "").get<double>();
    cfg.d_max = get_or(j, "d_max", 64);
    std::string form = get_or<std::string>(j, "form", "product-on-region");
    if (form == "product-on-region")
        cfg.form = SimpleForm::ProductOnRegion;
    else if (form == "haar-on-region")
        cfg.form = SimpleForm::HaarOnRegion;
    else
        throw ConfigError("form must be 'product-on-region' or 'haar-on-region'");
    cfg.realizations = get_or(j, "realizations", 1);
    return cfg;
}

FidelitySpec parse_xeb_config(const std::string& path) {
    json j = load_json(path);
    check_keys(j, {"sizes", "depths", "disorder", "mitigated", "noise_realizations",
                   "circuits_per_noise", "seed", "workers"},
               "");
    FidelitySpec spec;
    spec.sizes = int_list(require(j, "sizes", ""), "sizes");
    spec.depths = int_list(require(j, "depths", ""), "depths");
    const json& dis = require(j, "disorder", "");
    check_keys(dis, {"p", "q_bar", "sigma_over_qbar"}, "disorder.");
    spec.p = get_or(dis, "p", 0.5);
    spec.q_bar = require(dis, "q_bar", "disorder.").get<double>();
    spec.sigma_over_qbar = require(dis, "sigma_over_qbar", "disorder.").get<double>();
    spec.mitigated = get_or(j, "mitigated", true);
    spec.noise_realizations = get_or(j, "noise_realizations", 20);
    spec.circuits_per_noise = get_or(j, "circuits_per_noise", 5);
    spec.master_seed = get_or<std::uint64_t>(j, "seed", 0);
    spec.workers = get_or(j, "workers", 1);
    return spec;
}

CollapseRunConfig parse_collapse_config(const std::string& path) {
    json j = load_json(path);
    check_keys(j, {"data_file", "sigma_c_grid", "mu_grid"}, "");
    CollapseRunConfig cfg;
    cfg.data_file = require(j, "data_file", "").get<std::string>();
    cfg.sigma_c_grid = require(j, "sigma_c_grid", "").get<std::vector<double>>();
    cfg.mu_grid = require(j, "mu_grid", "").get<std::vector<double>>();
    return cfg;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void write_sweep_csv(const std::string& path, const SweepTable& table) {
    std::ostringstream os;
    os << "n,sigma_over_qbar,depth,mean,std,stderr,count,nonfinite_count\n";
    for (const auto& row : table) {
        os << row.n << ',' << format_double(row.sigma_over_qbar) << ',' << row.depth << ','
           << format_double(row.result.mean) << ',' << format_double(row.result.std_dev) << ','
           << format_double(row.result.std_err) << ',' << row.result.count << ','
           << row.result.nonfinite_count << '\n';
    }
    write_text_atomic(path, os.str());
}

SweepTable read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty sweep CSV: " + path);
    SweepTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        SweepRow row;
        char comma;
        ls >> row.n >> comma >> row.sigma_over_qbar >> comma >> row.depth >> comma >>
            row.result.mean >> comma >> row.result.std_dev >> comma >> row.result.std_err >>
            comma >> row.result.count >> comma >> row.result.nonfinite_count;
        if (ls.fail()) throw std::runtime_error("malformed sweep CSV row: " + line);
        table.push_back(row);
    }
    return table;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ostringstream os;
    for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
    write_text_atomic(path, os.str());
}

}  // namespace emlab
