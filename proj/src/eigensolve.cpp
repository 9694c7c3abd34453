#include "cdft/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <fftw3.h>

namespace cdft {

namespace {

using Block = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Interior (Dirichlet) unknowns are stored row-major in y, (n-2)^2 of them.
class InteriorMap {
public:
    explicit InteriorMap(const Grid2D& g) : grid_(g), m_(g.n() - 2) {}

    [[nodiscard]] std::size_t size() const noexcept { return m_ * m_; }

    [[nodiscard]] ComplexField to_field(const Eigen::Ref<const Vec>& v) const {
        std::vector<Complex> out(grid_.size());
        for (std::size_t iy = 0; iy < m_; ++iy) {
            for (std::size_t ix = 0; ix < m_; ++ix) {
                out[grid_.index(ix + 1, iy + 1)] = v[static_cast<Eigen::Index>(iy * m_ + ix)];
            }
        }
        return ComplexField(grid_, std::move(out));
    }

    void from_field(const ComplexField& f, Eigen::Ref<Vec> v) const {
        for (std::size_t iy = 0; iy < m_; ++iy) {
            for (std::size_t ix = 0; ix < m_; ++ix) {
                v[static_cast<Eigen::Index>(iy * m_ + ix)] = f[grid_.index(ix + 1, iy + 1)];
            }
        }
    }

private:
    Grid2D grid_;
    std::size_t m_;
};

// (-Lap_h + shift)^{-1} on the interior, diagonalized by DST-I in both axes.
class LaplacianPreconditioner {
public:
    LaplacianPreconditioner(const Grid2D& g, double shift) : m_(g.n() - 2) {
        const std::size_t count = m_ * m_;
        in_ = fftw_alloc_real(count);
        out_ = fftw_alloc_real(count);
        const int mi = static_cast<int>(m_);
        plan_ = fftw_plan_r2r_2d(mi, mi, in_, out_, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
        const double h = g.spacing();
        const double norm = 1.0 / (4.0 * static_cast<double>((m_ + 1) * (m_ + 1)));
        std::vector<double> s(m_);
        for (std::size_t p = 0; p < m_; ++p) {
            const double t = std::sin(std::numbers::pi * static_cast<double>(p + 1) /
                                      (2.0 * static_cast<double>(m_ + 1)));
            s[p] = 4.0 * t * t / (h * h);
        }
        scale_.resize(count);
        for (std::size_t q = 0; q < m_; ++q) {
            for (std::size_t p = 0; p < m_; ++p) {
                scale_[q * m_ + p] = norm / (s[p] + s[q] + shift);
            }
        }
    }
    ~LaplacianPreconditioner() {
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    LaplacianPreconditioner(const LaplacianPreconditioner&) = delete;
    LaplacianPreconditioner& operator=(const LaplacianPreconditioner&) = delete;

    void apply(const Eigen::Ref<const Vec>& r, Eigen::Ref<Vec> out) {
        const std::size_t count = m_ * m_;
        std::vector<double> re(count);
        std::vector<double> im(count);
        for (std::size_t i = 0; i < count; ++i) {
            re[i] = r[static_cast<Eigen::Index>(i)].real();
            im[i] = r[static_cast<Eigen::Index>(i)].imag();
        }
        solve(re);
        solve(im);
        for (std::size_t i = 0; i < count; ++i) {
            out[static_cast<Eigen::Index>(i)] = Complex(re[i], im[i]);
        }
    }

private:
    void solve(std::vector<double>& v) {
        const std::size_t count = m_ * m_;
        std::copy(v.begin(), v.end(), in_);
        fftw_execute(plan_);
        for (std::size_t i = 0; i < count; ++i) in_[i] = out_[i] * scale_[i];
        fftw_execute(plan_);
        std::copy(out_, out_ + count, v.begin());
    }

    std::size_t m_;
    double* in_{nullptr};
    double* out_{nullptr};
    fftw_plan plan_{nullptr};
    std::vector<double> scale_;
};

// Two-pass modified Gram-Schmidt; columns that lose more than all but
// `drop` of their norm to the previous ones are discarded.
Block orthonormalize(const Block& s, double drop = 1e-10) {
    Block q(s.rows(), s.cols());
    Eigen::Index kept = 0;
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
        Vec v = s.col(j);
        const double n0 = v.norm();
        if (!(n0 > 0.0)) continue;
        v /= n0;
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index i = 0; i < kept; ++i) {
                v -= q.col(i) * q.col(i).dot(v);
            }
        }
        const double n1 = v.norm();
        if (n1 < drop) continue;
        q.col(kept++) = v / n1;
    }
    return q.leftCols(kept);
}

Block apply_block(const Hamiltonian& H, const InteriorMap& map, const Block& x) {
    Block y(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const ComplexField hx = H.apply(map.to_field(x.col(j)));
        map.from_field(hx, y.col(j));
    }
    return y;
}

double uniform_pm1(std::mt19937_64& rng) {
    // 53 random mantissa bits; independent of the standard library's distributions.
    return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

// Shift of the preconditioner. Tried 0.5 to 60 on harmonic traps; iteration
// counts are flat between about 5 and 30.
double preconditioner_shift(const Hamiltonian& H) {
    const auto& p = H.potentials();
    double vmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.grid().size(); ++i) {
        const double d = p.V[i] + p.A.x()[i] * p.A.x()[i] + p.A.y()[i] * p.A.y()[i];
        vmin = std::min(vmin, d);
    }
    return 10.0 + std::max(0.0, -vmin);
}

} // namespace

double EigenResult::gap() const {
    if (eigenvalues.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    return eigenvalues[1] - eigenvalues[0];
}

EigenResult lowest_eigenpairs(const Hamiltonian& H, std::size_t k, double tol,
                              std::size_t max_iter, std::uint64_t seed) {
    if (k < 1 || k > kMaxEigenpairs) {
        throw std::invalid_argument("lowest_eigenpairs: k must be in [1, " +
                                    std::to_string(kMaxEigenpairs) + "], got " +
                                    std::to_string(k));
    }
    if (!(tol > 0.0)) throw std::invalid_argument("lowest_eigenpairs: tol must be positive");

    const Grid2D& g = H.grid();
    const InteriorMap map(g);
    const auto dim = static_cast<Eigen::Index>(map.size());
    const auto block = static_cast<Eigen::Index>(std::min<std::size_t>(k + 2, map.size()));
    const auto wanted = static_cast<Eigen::Index>(k);
    // Euclidean residuals of Euclidean-normalized interior vectors equal the
    // quadrature residuals of quadrature-normalized fields.

    std::mt19937_64 rng(seed);
    Block x(dim, block);
    for (Eigen::Index j = 0; j < block; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = uniform_pm1(rng);
            const double im = uniform_pm1(rng);
            x(i, j) = Complex(re, im);
        }
    }
    x = orthonormalize(x);

    LaplacianPreconditioner precond(g, preconditioner_shift(H));

    Block p(dim, 0);
    Block ax = apply_block(H, map, x);
    Eigen::VectorXd theta;
    {
        Block gram = x.adjoint() * ax;
        gram = 0.5 * (gram + gram.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Block> es(gram);
        theta = es.eigenvalues();
        x = x * es.eigenvectors();
        ax = ax * es.eigenvectors();
    }

    std::vector<double> best(static_cast<std::size_t>(wanted),
                             std::numeric_limits<double>::infinity());
    std::size_t iter = 0;
    for (;; ++iter) {
        Block r = ax - x * theta.asDiagonal();
        bool converged = true;
        for (Eigen::Index j = 0; j < wanted; ++j) {
            const double res = r.col(j).norm();
            best[static_cast<std::size_t>(j)] = std::min(best[static_cast<std::size_t>(j)], res);
            if (res > tol) converged = false;
        }
        if (converged) break;
        if (iter >= max_iter) {
            std::string msg = "lowest_eigenpairs: no convergence in " +
                              std::to_string(max_iter) + " iterations; best residuals:";
            for (double b : best) msg += " " + std::to_string(b);
            throw ConvergenceError(msg, best);
        }

        Block w(dim, block);
        for (Eigen::Index j = 0; j < block; ++j) precond.apply(r.col(j), w.col(j));

        Block s(dim, x.cols() + w.cols() + p.cols());
        s << x, w, p;
        s = orthonormalize(s);
        const Block as = apply_block(H, map, s);
        Block gram = s.adjoint() * as;
        gram = 0.5 * (gram + gram.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Block> es(gram);
        const Block c = es.eigenvectors().leftCols(block);
        theta = es.eigenvalues().head(block);
        const Block x_new = s * c;
        ax = as * c;
        // Search direction: the part of the update outside the old X block,
        // i.e. the contribution of every basis vector past the first `block`.
        const Eigen::Index tail = s.cols() - block;
        p = tail > 0 ? Block(s.rightCols(tail) * c.bottomRows(tail)) : Block(dim, 0);
        x = x_new;
    }

    // Report against a fresh application of H.
    const Block hx = apply_block(H, map, x);
    EigenResult result;
    result.iterations = iter;
    const double scale = 1.0 / g.spacing();
    for (Eigen::Index j = 0; j < wanted; ++j) {
        const double lambda = theta[j];
        result.eigenvalues.push_back(lambda);
        result.residuals.push_back((hx.col(j) - lambda * x.col(j)).norm());
        const Vec v = x.col(j) * scale;
        result.eigenvectors.push_back(map.to_field(v));
    }
    return result;
}

GroundStateCheck verify_ground_state(const ComplexField& psi, const PotentialPair& p,
                                     const SolverOptions& opt) {
    require_same_grid(psi.grid(), p.grid(), "verify_ground_state");
    const Hamiltonian H(p);
    const ExpectationValue rq = expectation(H, psi);
    EigenResult spec = lowest_eigenpairs(H, 2, opt);

    const Complex ov = inner(psi, spec.eigenvectors[0]);
    const double overlap = std::abs(ov);
    // Rotate phi_0 so that <psi, phi_0> is real and non-negative.
    const Complex phase = overlap > 0.0 ? std::conj(ov) / overlap : Complex(1.0);
    ComplexField aligned = phase * spec.eigenvectors[0];

    GroundStateCheck out{.is_ground = false,
                         .possibly_degenerate = false,
                         .energy = rq.value,
                         .gap = spec.gap(),
                         .overlap = overlap,
                         .ground_state = std::move(aligned),
                         .spectrum = std::move(spec)};
    out.possibly_degenerate = !(out.gap > 10.0 * opt.tol);
    out.is_ground = !out.possibly_degenerate && overlap >= 1.0 - kGroundOverlapTol;
    return out;
}

} // namespace cdft
