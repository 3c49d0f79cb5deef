#include "reflect/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace reflect {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::plain: return "plain";
        case Scheme::damped: return "damped";
        case Scheme::cutoff_damped: return "cutoff-damped";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "plain") return Scheme::plain;
    if (name == "damped") return Scheme::damped;
    if (name == "cutoff-damped" || name == "cutoff_damped") return Scheme::cutoff_damped;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

namespace {

std::vector<double> cutoff_weights(const InteractionSystem& sys) {
    std::vector<double> w(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i)
        w[i] = std::exp(-norm(sys.config.particles[i].center));
    return w;
}

ResidualNorms norms_of(const std::vector<double>& residual, int comps) {
    ResidualNorms out;
    double sum2 = 0.0;
    const std::size_t n = residual.size() / comps;
    for (std::size_t i = 0; i < n; ++i) {
        double mag2 = 0.0;
        for (int c = 0; c < comps; ++c) {
            const double v = residual[i * comps + c];
            mag2 += v * v;
        }
        sum2 += mag2;
        out.max = std::max(out.max, std::sqrt(mag2));
    }
    out.rms = n > 0 ? std::sqrt(sum2 / static_cast<double>(n)) : 0.0;
    return out;
}

// s <- s - gamma W D^-1 residual; returns the applied correction.
Strengths apply_correction(const InteractionSystem& sys, Strengths& s,
                           const std::vector<double>& residual, double gamma,
                           const std::vector<double>* weights) {
    Strengths delta;
    delta.comps = sys.comps;
    delta.data.resize(s.data.size());
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double scale = gamma * (weights ? (*weights)[i] : 1.0) / sys.diag[i];
        for (int c = 0; c < sys.comps; ++c) {
            const std::size_t k = i * sys.comps + c;
            delta.data[k] = -scale * residual[k];
            s.data[k] += delta.data[k];
        }
    }
    return delta;
}

double norm2_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

}  // namespace

Strengths reflect_step(const InteractionSystem& sys, const Strengths& s,
                       const IterationSettings& settings) {
    const double gamma = settings.scheme == Scheme::plain ? 1.0 : settings.gamma;
    if (!(gamma > 0.0)) throw std::invalid_argument("reflect_step: gamma must be positive");
    std::vector<double> residual;
    apply_interaction(sys, s, residual);
    for (std::size_t k = 0; k < residual.size(); ++k) residual[k] += sys.rhs[k];
    Strengths next = s;
    if (settings.scheme == Scheme::cutoff_damped) {
        const auto w = cutoff_weights(sys);
        apply_correction(sys, next, residual, gamma, &w);
    } else {
        apply_correction(sys, next, residual, gamma, nullptr);
    }
    return next;
}

IterationResult iterate(const InteractionSystem& sys, IterationSettings settings) {
    if (!(settings.tol > 0.0)) throw std::invalid_argument("iterate: tol must be positive");
    double gamma = settings.scheme == Scheme::plain ? 1.0 : settings.gamma;
    if (settings.scheme != Scheme::plain && !(gamma > 0.0))
        gamma = 1.0 / estimate_norm(sys, settings.scheme == Scheme::cutoff_damped);

    std::vector<double> weights;
    if (settings.scheme == Scheme::cutoff_damped) weights = cutoff_weights(sys);
    const std::vector<double>* wp = weights.empty() ? nullptr : &weights;

    IterationResult result;
    result.strengths = zero_strengths(sys);
    auto& trace = result.trace;
    trace.scheme = settings.scheme;
    trace.gamma_used = gamma;

    if (settings.record_corrections) result.corrections.push_back(result.strengths);

    std::vector<double> residual;
    apply_interaction(sys, result.strengths, residual);
    for (std::size_t k = 0; k < residual.size(); ++k) residual[k] += sys.rhs[k];
    ResidualNorms res = norms_of(residual, sys.comps);
    trace.residual_max.push_back(res.max);
    trace.residual_rms.push_back(res.rms);
    trace.correction_norm.push_back(0.0);

    double min_res = res.max;
    trace.converged = res.max <= settings.tol;

    for (int step = 1; step <= settings.max_iter && !trace.converged; ++step) {
        Strengths delta =
            apply_correction(sys, result.strengths, residual, gamma, wp);
        trace.correction_norm.push_back(norm2_of(delta.data));
        if (settings.record_corrections) result.corrections.push_back(std::move(delta));

        apply_interaction(sys, result.strengths, residual);
        for (std::size_t k = 0; k < residual.size(); ++k) residual[k] += sys.rhs[k];
        res = norms_of(residual, sys.comps);
        trace.residual_max.push_back(res.max);
        trace.residual_rms.push_back(res.rms);
        trace.iterations = step;

        if (!std::isfinite(res.max)) {
            trace.diverged = true;
            break;
        }
        if (res.max <= settings.tol) {
            trace.converged = true;
            break;
        }
        if (res.max >= 10.0 * min_res) {
            trace.diverged = true;
            break;
        }
        min_res = std::min(min_res, res.max);
    }
    return result;
}

IterationResult iterate(const ParticleConfig& config, const SourceSpec& source,
                        IterationSettings settings, double truncation) {
    return iterate(assemble(config, source, truncation), settings);
}

std::vector<double> evaluate_field(const ParticleConfig& config, const Strengths& s,
                                   const SourceSpec& source, const std::vector<Vec3>& points) {
    const int comps = components(config.kernel);
    if (s.comps != comps || s.size() != config.size())
        throw std::invalid_argument("evaluate_field: strengths do not match the config");
    std::vector<double> out = background_field(source, points, config.kernel, config.xi);

    const bool screened = config.kernel == Kernel::yukawa && !std::isinf(config.xi);
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t j = 0; j < config.size(); ++j) {
            const Vec3 d = points[p] - config.particles[j].center;
            const double rho = norm(d);
            if (!(rho > 0.0))
                throw std::domain_error("evaluate_field: point coincides with a particle center");
            if (comps == 1) {
                const double k = screened ? std::exp(-rho / config.xi) / rho : 1.0 / rho;
                out[p] += k * s.data[j];
            } else {
                const Vec3 f{s.data[3 * j], s.data[3 * j + 1], s.data[3 * j + 2]};
                const Vec3 u = oseen_tensor(d) * f;
                out[3 * p] += u.x;
                out[3 * p + 1] += u.y;
                out[3 * p + 2] += u.z;
            }
        }
    }
    return out;
}

ResidualNorms boundary_residual(const InteractionSystem& sys, const Strengths& s) {
    std::vector<double> residual;
    apply_interaction(sys, s, residual);
    for (std::size_t k = 0; k < residual.size(); ++k) residual[k] += sys.rhs[k];
    return norms_of(residual, sys.comps);
}

ResidualNorms boundary_residual(const ParticleConfig& config, const Strengths& s,
                                const SourceSpec& source) {
    return boundary_residual(assemble(config, source), s);
}

namespace {

// splitmix64; fixed-seed start vector for the power iteration
std::uint64_t mix(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

double estimate_norm(const InteractionSystem& sys, bool cutoff, double rel_tol, int max_iter) {
    const std::size_t m = sys.size() * sys.comps;
    if (m == 0) throw std::invalid_argument("estimate_norm: empty system");

    std::vector<double> w_half(sys.size(), 1.0);
    if (cutoff) {
        const auto w = cutoff_weights(sys);
        for (std::size_t i = 0; i < sys.size(); ++i) w_half[i] = std::sqrt(w[i]);
    }
    std::vector<double> d_invhalf(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) d_invhalf[i] = 1.0 / std::sqrt(sys.diag[i]);

    auto scale = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(m);
        for (std::size_t i = 0; i < sys.size(); ++i) {
            const double f = w_half[i] * d_invhalf[i];
            for (int c = 0; c < sys.comps; ++c) out[i * sys.comps + c] = f * in[i * sys.comps + c];
        }
    };

    std::uint64_t state = 0x243F6A8885A308D3ull ^ m;
    Strengths v;
    v.comps = sys.comps;
    v.data.resize(m);
    for (auto& x : v.data) x = static_cast<double>(mix(state) >> 11) * 0x1.0p-53 - 0.5;

    Strengths t;
    t.comps = sys.comps;
    std::vector<double> av, mv;
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        scale(v.data, t.data);
        apply_interaction(sys, t, av);
        scale(av, mv);

        double vnorm2 = 0.0, rayleigh = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            vnorm2 += v.data[k] * v.data[k];
            rayleigh += v.data[k] * mv[k];
        }
        const double lambda_new = rayleigh / vnorm2;

        double mnorm = 0.0;
        for (double x : mv) mnorm += x * x;
        mnorm = std::sqrt(mnorm);
        if (mnorm == 0.0) return 0.0;
        for (std::size_t k = 0; k < m; ++k) v.data[k] = mv[k] / mnorm;

        // the per-step change underestimates the remaining error by the
        // contraction factor, so demand a 20x smaller change
        if (it > 0 && std::abs(lambda_new - lambda) <= 0.05 * rel_tol * std::abs(lambda_new)) {
            lambda = lambda_new;
            break;
        }
        lambda = lambda_new;
    }
    return lambda;
}

double estimate_norm(const ParticleConfig& config, bool cutoff_weights_flag) {
    return estimate_norm(assemble_operator(config), cutoff_weights_flag);
}

}  // namespace reflect
