#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "emlab/circuit_model.hpp"
#include "emlab/experiments.hpp"
#include "emlab/meanfield.hpp"

namespace emlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeanFieldRunConfig {
    std::vector<double> coupling_values;
    std::vector<double> delta1_values;
    double p = 0.5;
    double t_end = 50.0;
    double dt = 1e-3;
};

struct InstabilityRunConfig {
    std::vector<int> sizes;
    double p = 0.5;
    double q1 = 0.02;
    double q2 = 0.3;
    int d_max = 64;
    SimpleForm form = SimpleForm::ProductOnRegion;
    int realizations = 1;
};

struct CollapseRunConfig {
    std::string data_file;  // sweep CSV to collapse
    std::vector<double> sigma_c_grid;
    std::vector<double> mu_grid;
};

// Parsed from a JSON config file; unknown keys are rejected with the full
// key path in the diagnostic.
SweepSpec parse_sweep_config(const std::string& path);
MeanFieldRunConfig parse_meanfield_config(const std::string& path);
InstabilityRunConfig parse_instability_config(const std::string& path);
FidelitySpec parse_xeb_config(const std::string& path);
CollapseRunConfig parse_collapse_config(const std::string& path);

std::string format_double(double v);  // 17 significant digits

// Write-temp-then-rename; the file appears atomically.
void write_text_atomic(const std::string& path, const std::string& content);

void write_sweep_csv(const std::string& path, const SweepTable& table);
SweepTable read_sweep_csv(const std::string& path);

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace emlab
