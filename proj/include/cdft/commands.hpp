#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace cdft {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,         // configuration, file format or grid error
    kExitSolver = 3,         // eigensolver did not converge
    kExitVerdict = 4,        // a verdict or certification failed
    kExitRepresentation = 5, // rho too small to represent
};

struct CommandOptions {
    std::optional<std::filesystem::path> config; // defaults when absent
    std::optional<std::filesystem::path> out;    // overrides output_dir
    bool refine{false};
    std::optional<std::uint64_t> seed; // overrides solver.seed
    std::optional<std::filesystem::path> rho;
    std::optional<std::filesystem::path> current;
};

/// Lowest two eigenpairs of the configured H(V, A); writes eigenvalues.json
/// and the ground-state rho, j_p, j fields.
int cmd_solve(const CommandOptions& opt, std::ostream& out, std::ostream& err);

/// Family, eps sweep, verdicts; writes report.json and sweep.csv.
int cmd_counterexample(const CommandOptions& opt, std::ostream& out, std::ostream& err);

/// Functionals of externally supplied (rho, j) against the configured
/// potentials of field B; writes functional.json.
int cmd_functional(const CommandOptions& opt, std::ostream& out, std::ostream& err);

} // namespace cdft
