#include "cdft/commands.hpp"

#include "cdft/config.hpp"
#include "cdft/counterexample.hpp"
#include "cdft/field_io.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <ostream>

namespace cdft {

namespace {

using nlohmann::json;

json metadata() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"generated_at", stamp}, {"tool", "cdft_lab"}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json config_json(const RunConfig& c) {
    json sweep = json::object();
    if (c.eps_list) sweep["eps_list"] = *c.eps_list;
    else sweep["eps_count"] = c.eps_count.value_or(5);
    return {{"grid", {{"n", c.n}, {"L", c.resolved_L()}}},
            {"family", {{"alpha", c.alpha}, {"B", c.B}, {"Btilde", c.Btilde}}},
            {"sweep", sweep},
            {"solver",
             {{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter}, {"seed", c.solver.seed}}}};
}

RunConfig resolve(const CommandOptions& opt) {
    RunConfig c = opt.config ? load_config(*opt.config) : RunConfig{};
    if (opt.seed) c.solver.seed = *opt.seed;
    if (opt.out) c.output_dir = *opt.out;
    validate_common(c);
    return c;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

// Runs `body`, mapping the library's exceptions onto the exit-code contract.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const FieldFormatError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DensityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GridMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const RepresentationError& e) {
        err << "representation failure: " << e.what() << "\n";
        return kExitRepresentation;
    } catch (const FamilyError& e) {
        err << "certification failure: " << e.what() << "\n";
        return kExitVerdict;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        // I/O failures: unwritable output directory and the like.
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace

int cmd_solve(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig c = resolve(opt);
        const Grid2D grid = make_grid(c.resolved_L(), c.n);
        const FockDarwinFamily fam = fock_darwin_family(grid, {.alpha = c.alpha, .B = c.B});
        const Hamiltonian H(fam.pair);
        const EigenResult res = lowest_eigenpairs(H, 2, c.solver);

        const ComplexField& phi = res.eigenvectors[0];
        const ScalarField rho = particle_density(phi);
        const VectorField jp = paramagnetic_current(phi);
        const VectorField j = total_current(phi, fam.pair.A);
        json report{{"config", config_json(c)},
                    {"potentials", fam.pair.label},
                    {"eigenvalues", res.eigenvalues},
                    {"residuals", res.residuals},
                    {"gap", res.gap()},
                    {"iterations", res.iterations},
                    {"continuity_residual", continuity_residual(j)},
                    {"metadata", metadata()}};

        ensure_dir(c.output_dir);
        write_file_atomic(c.output_dir / "eigenvalues.json", dump(report));
        write_scalar_field(c.output_dir / "rho.csv", rho);
        write_vector_field(c.output_dir / "jp.csv", jp);
        write_vector_field(c.output_dir / "j.csv", j);
        char line[160];
        std::snprintf(line, sizeof line, "e0 = %.10f  e1 = %.10f  gap = %.6f  (%zu iterations)\n",
                      res.eigenvalues[0], res.eigenvalues[1], res.gap(), res.iterations);
        out << line << "wrote " << c.output_dir.string() << "\n";
        return int{kExitOk};
    });
}

int cmd_counterexample(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig c = resolve(opt);
        try {
            check_family_parameters(c.alpha, c.B, c.Btilde);
        } catch (const FamilyError& e) {
            throw ConfigError(std::string("family: ") + e.what());
        }
        const double eps_max = 0.5 * (c.Btilde - c.B);
        const std::vector<double> eps = c.eps_values(eps_max);
        for (double e : eps) {
            if (!(e >= 0.0 && e <= eps_max * (1.0 + 1e-12))) {
                throw ConfigError("config field 'sweep.eps_list': " + format_g17(e) +
                                  " outside [0, eps_max = " + format_g17(eps_max) + "]");
            }
        }

        json report;
        CounterexampleReport rep;
        bool refine_ok = true;
        if (opt.refine) {
            RefinementStudy s =
                refinement_study(c.alpha, c.B, c.Btilde, c.resolved_L(), c.n, eps, c.solver);
            refine_ok = s.ratio >= 3.0;
            report = to_json(s.coarse);
            report["refinement"] = {{"n_coarse", s.coarse.n},
                                    {"n_fine", s.fine.n},
                                    {"fine", to_json(s.fine)},
                                    {"ratio", s.ratio},
                                    {"order", s.order},
                                    {"passes", refine_ok}};
            rep = std::move(s.coarse);
        } else {
            const Family fam = build_family(make_grid(c.resolved_L(), c.n), c.alpha, c.B,
                                            c.Btilde, c.solver);
            rep = epsilon_sweep(fam, eps, c.solver);
            report = to_json(rep);
        }
        report["config"] = config_json(c);
        report["conforming"] = rep.conforming() && refine_ok;
        report["metadata"] = metadata();

        ensure_dir(c.output_dir);
        write_file_atomic(c.output_dir / "report.json", dump(report));
        write_file_atomic(c.output_dir / "sweep.csv", sweep_csv(rep));
        out << verdict_table(rep);
        if (opt.refine) {
            char line[160];
            std::snprintf(line, sizeof line,
                          "  [%s] refinement: worst discrepancy ratio %.2f (order %.2f)\n",
                          refine_ok ? "PASS" : "FAIL", report["refinement"]["ratio"].get<double>(),
                          report["refinement"]["order"].get<double>());
            out << line;
        }
        return rep.conforming() && refine_ok ? int{kExitOk} : int{kExitVerdict};
    });
}

int cmd_functional(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!opt.rho || !opt.current) throw ConfigError("functional needs --rho and --current");
        const RunConfig c = resolve(opt);
        const ScalarField rho = read_scalar_field(*opt.rho);
        const VectorField j = read_vector_field(*opt.current);
        require_same_grid(rho.grid(), j.grid(), "density files");
        const Grid2D& grid = rho.grid();
        const Grid2D expected = make_grid(c.resolved_L(), c.n);
        if (!(grid == expected)) {
            throw ConfigError("density files are on an n=" + std::to_string(grid.n()) +
                              ", L=" + format_g17(grid.half_extent()) +
                              " grid but the config asks for n=" + std::to_string(c.n) +
                              ", L=" + format_g17(c.resolved_L()));
        }
        const DensityPair d(rho, j, opt.rho->filename().string() + ", " +
                                        opt.current->filename().string());
        const FockDarwinFamily fam = fock_darwin_family(grid, {.alpha = c.alpha, .B = c.B});
        const MembershipResult m = membership_check(d, c.solver);
        const FunctionalReport r = e_full(d, fam.pair, m);

        json report = to_json(r);
        report["potentials"] = fam.pair.label;
        report["membership"] = {{"in_A1", m.in_A1},
                                {"e0", m.check ? json(m.e0) : json(nullptr)},
                                {"imag_residual", m.inversion.imag_residual},
                                {"imag_threshold", m.inversion.threshold},
                                {"reason", m.reason}};
        report["config"] = config_json(c);
        report["metadata"] = metadata();
        ensure_dir(c.output_dir);
        write_file_atomic(c.output_dir / "functional.json", dump(report));

        char line[200];
        std::snprintf(line, sizeof line,
                      "F_HK = %.10f\nE~   = %.10f\ncorr = %.10f\nE    = %.10f\n"
                      "direct = %.10f (discrepancy %.3e)\nin A1: %s\n",
                      r.f_hk, r.e_tilde, r.correction, r.e_full, r.cross_check, r.discrepancy,
                      m.in_A1 ? "yes" : "no");
        out << line;
        return int{kExitOk};
    });
}

} // namespace cdft
