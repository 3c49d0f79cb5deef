#include "reflect/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace reflect {

namespace {

Eigen::MatrixXd dense_matrix(const InteractionSystem& sys) {
    const std::size_t n = sys.size();
    const std::size_t m = n * sys.comps;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    const bool screened = sys.config.kernel == Kernel::yukawa && !std::isinf(sys.config.xi);

    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < sys.comps; ++c) A(i * sys.comps + c, i * sys.comps + c) = sys.diag[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Vec3 d = sys.config.particles[i].center - sys.config.particles[j].center;
            if (sys.truncated() && norm(d) > sys.truncation) continue;
            if (sys.comps == 1) {
                const double rho = norm(d);
                A(i, j) = (screened ? std::exp(-rho / sys.config.xi) : 1.0) / rho;
            } else {
                const Mat3 t = oseen_tensor(d);
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) A(3 * i + a, 3 * j + b) = t(a, b);
            }
        }
    }
    return A;
}

void check_cap(const InteractionSystem& sys, const DenseSolveOptions& opts) {
    const std::size_t cap = sys.comps == 3 ? opts.max_stokes : opts.max_scalar;
    if (sys.size() > cap)
        throw std::invalid_argument("dense solve capped at " + std::to_string(cap) +
                                    " particles, got " + std::to_string(sys.size()));
}

}  // namespace

Strengths dense_solve(const InteractionSystem& sys, const DenseSolveOptions& opts) {
    check_cap(sys, opts);
    const Eigen::MatrixXd A = dense_matrix(sys);
    const Eigen::Map<const Eigen::VectorXd> b(sys.rhs.data(), sys.rhs.size());

    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    Eigen::VectorXd x = ldlt.solve(-b);
    // one refinement pass tightens the certificate
    x += ldlt.solve(-b - A * x);

    const double rel = (A * x + b).norm() / std::max(b.norm(), 1e-300);
    if (!(rel <= opts.residual_tol)) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        const double cond = svd.singularValues()(0) /
                            svd.singularValues()(svd.singularValues().size() - 1);
        throw std::runtime_error("dense_solve: residual " + std::to_string(rel) +
                                 " exceeds certificate; condition estimate " +
                                 std::to_string(cond));
    }

    Strengths s;
    s.comps = sys.comps;
    s.data.assign(x.data(), x.data() + x.size());
    return s;
}

Strengths dense_solve(const ParticleConfig& config, const SourceSpec& source,
                      const DenseSolveOptions& opts) {
    return dense_solve(assemble(config, source), opts);
}

SpectrumReport jacobi_spectrum(const ParticleConfig& config, Scheme scheme, double gamma) {
    const InteractionSystem sys = assemble_operator(config);
    const std::size_t n = sys.size();
    const std::size_t m = n * sys.comps;
    Eigen::MatrixXd A = dense_matrix(sys);

    Eigen::VectorXd scale(m);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        if (scheme == Scheme::cutoff_damped)
            w = std::exp(-norm(sys.config.particles[i].center));
        for (int c = 0; c < sys.comps; ++c)
            scale(i * sys.comps + c) = std::sqrt(w) / std::sqrt(sys.diag[i]);
    }
    const Eigen::MatrixXd M = scale.asDiagonal() * A * scale.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
    if (eig.info() != Eigen::Success) throw std::runtime_error("jacobi_spectrum: eigensolver failed");

    SpectrumReport report;
    report.eigenvalues.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + m);
    report.min_eigenvalue = report.eigenvalues.front();
    report.max_eigenvalue = report.eigenvalues.back();
    report.gamma = scheme == Scheme::plain ? 1.0 : gamma;
    if (!(report.gamma > 0.0)) report.gamma = 1.0 / report.max_eigenvalue;
    double radius = 0.0;
    for (double lambda : report.eigenvalues)
        radius = std::max(radius, std::abs(1.0 - report.gamma * lambda));
    report.iteration_spectral_radius = radius;
    return report;
}

}  // namespace reflect
