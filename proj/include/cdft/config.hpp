#pragma once

#include "cdft/eigensolve.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdft {

/// Malformed or invalid configuration; the message names the line or field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::size_t n{257};
    std::optional<double> L; // absent means "auto": 8 / sqrt(alpha)
    double alpha{1.0};
    double B{-1.0};
    double Btilde{-0.5};
    std::optional<std::size_t> eps_count;
    std::optional<std::vector<double>> eps_list;
    SolverOptions solver;
    std::filesystem::path output_dir{"out"};

    [[nodiscard]] double resolved_L() const;
    /// eps_list if given, otherwise eps_count (default 5) evenly spaced values.
    [[nodiscard]] std::vector<double> eps_values(double eps_max) const;
};

/**
 * Schema:
 *   {"grid": {"n": 257, "L": "auto" | number},
 *    "family": {"alpha": 1, "B": -1, "Btilde": -0.5},
 *    "sweep": {"eps_count": 5} | {"eps_list": [...]},
 *    "solver": {"tol": 1e-8, "max_iter": 500, "seed": 20250611},
 *    "output_dir": "out"}
 * Every key is optional; unknown keys are rejected.
 */
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Grid and solver preconditions shared by every subcommand.
void validate_common(const RunConfig& c);

} // namespace cdft
