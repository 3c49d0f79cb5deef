// reflect: many-sphere Dirichlet problems via relaxed reflection sweeps.
// Subcommands cover configuration generation, convergence diagnostics,
// solving, summation weights, dense reference solves, and homogenization
// sweeps. Exit codes: 0 ok, 1 usage, 2 validation, 3 declared divergence.

#include <cstdlib>
#include <iostream>
#include <omp.h>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reflect/diagnostics.hpp"
#include "reflect/engine.hpp"
#include "reflect/homogenize.hpp"
#include "reflect/io.hpp"
#include "reflect/oracle.hpp"
#include "reflect/version.hpp"
#include "reflect/weights.hpp"

namespace {

using namespace reflect;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_validation = 2;
constexpr int exit_divergence = 3;

Vec3 parse_triple(const std::string& text, const std::string& what) {
    Vec3 v;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',')
        throw CLI::ValidationError(what, "expected x,y,z");
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
}

struct SourceFlags {
    std::string type = "point";
    std::string loc = "0,0,0";
    double strength = 1.0;
    std::string force = "1,0,0";
    std::string velocity = "1,0,0";
    double width = 0.1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--source-type", type, "point|gaussian|uniform")
            ->check(CLI::IsMember({"point", "gaussian", "uniform"}));
        cmd->add_option("--source-loc", loc, "source location x,y,z");
        cmd->add_option("--source-strength", strength, "total charge (scalar kernels)");
        cmd->add_option("--source-force", force, "point force fx,fy,fz (stokes)");
        cmd->add_option("--source-velocity", velocity, "uniform flow ux,uy,uz (stokes)");
        cmd->add_option("--source-width", width, "gaussian width");
    }

    SourceSpec build(Kernel kernel) const {
        const Vec3 location = parse_triple(loc, "--source-loc");
        if (type == "gaussian") return SourceSpec::gaussian_charge(location, width, strength);
        if (type == "uniform")
            return SourceSpec::uniform_flow(parse_triple(velocity, "--source-velocity"));
        if (kernel == Kernel::stokes)
            return SourceSpec::point_force(location, parse_triple(force, "--source-force"));
        return SourceSpec::point_charge(location, strength);
    }
};

std::vector<std::string> arg_vector(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return args;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reflect " + std::string(version) +
                 " - monopole reflection solver for Laplace/Yukawa/Stokes sphere systems"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker cap (default: REFLECT_THREADS or all cores)");

    // gen-lattice
    auto* gen_lattice = app.add_subcommand("gen-lattice", "cubic lattice configuration");
    double gl_d = 1.0, gl_r = 0.1, gl_xi = 0.0;
    std::string gl_box_min = "-1,-1,-1", gl_box_max = "1,1,1", gl_kernel = "laplace", gl_out;
    gen_lattice->add_option("--d", gl_d, "lattice spacing")->required();
    gen_lattice->add_option("--r", gl_r, "sphere radius")->required();
    gen_lattice->add_option("--box-min", gl_box_min, "box lower corner x,y,z");
    gen_lattice->add_option("--box-max", gl_box_max, "box upper corner x,y,z");
    gen_lattice->add_option("--kernel", gl_kernel, "laplace|yukawa|stokes");
    gen_lattice->add_option("--xi", gl_xi, "screening length (yukawa; omit for infinite)");
    gen_lattice->add_option("--out", gl_out, "output config path (default stdout)");

    // gen-random
    auto* gen_rand = app.add_subcommand("gen-random", "random non-touching spheres");
    int gr_n = 10;
    double gr_r = 0.02, gr_kappa = 2.0, gr_xi = 0.0;
    std::uint64_t gr_seed = 0;
    std::string gr_box_min = "0,0,0", gr_box_max = "1,1,1", gr_kernel = "laplace", gr_out;
    gen_rand->add_option("--n", gr_n, "sphere count")->required();
    gen_rand->add_option("--r", gr_r, "sphere radius")->required();
    gen_rand->add_option("--kappa", gr_kappa, "separation factor, centers > 2*kappa*r apart");
    gen_rand->add_option("--seed", gr_seed, "RNG seed")->required();
    gen_rand->add_option("--box-min", gr_box_min, "box lower corner x,y,z");
    gen_rand->add_option("--box-max", gr_box_max, "box upper corner x,y,z");
    gen_rand->add_option("--kernel", gr_kernel, "laplace|yukawa|stokes");
    gen_rand->add_option("--xi", gr_xi, "screening length (yukawa)");
    gen_rand->add_option("--out", gr_out, "output config path (default stdout)");

    // check
    auto* check = app.add_subcommand("check", "validate a configuration");
    std::string ck_config;
    double ck_kappa = 2.0, ck_alpha = 1.0;
    check->add_option("--config", ck_config, "config JSON path")->required();
    check->add_option("--kappa", ck_kappa, "separation condition factor (> 1)");
    check->add_option("--alpha", ck_alpha, "radius/screening condition factor");

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "convergence certificates");
    std::string dg_config, dg_radii, dg_out;
    diag->add_option("--config", dg_config, "config JSON path")->required();
    diag->add_option("--theta-radii", dg_radii, "comma list of radii for theta(R)");
    diag->add_option("--out", dg_out, "output JSON path (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "run the reflection iteration");
    std::string sv_config, sv_scheme = "plain", sv_out = "strengths.json", sv_trace;
    double sv_gamma = 0.0, sv_tol = 1e-10, sv_trunc = 0.0;
    int sv_max_iter = 200;
    bool sv_allow_div = false;
    SourceFlags sv_source;
    solve->add_option("--config", sv_config, "config JSON path")->required();
    solve->add_option("--scheme", sv_scheme, "plain|damped|cutoff-damped");
    solve->add_option("--gamma", sv_gamma, "relaxation factor (default 1/lambda_hat)");
    solve->add_option("--tol", sv_tol, "residual tolerance (max norm)");
    solve->add_option("--max-iter", sv_max_iter, "iteration cap");
    solve->add_option("--truncate", sv_trunc, "coupling cutoff radius (yukawa only)");
    solve->add_option("--out", sv_out, "strengths JSON path");
    solve->add_option("--trace", sv_trace, "trace CSV path");
    solve->add_flag("--allow-divergence", sv_allow_div, "exit 0 even when the scheme diverges");
    sv_source.attach(solve);

    // weights
    auto* weights = app.add_subcommand("weights", "summation weight table q(n,M,gamma)");
    int wt_M = 10;
    double wt_gamma = 0.5;
    std::string wt_out;
    weights->add_option("--M", wt_M, "table order")->required();
    weights->add_option("--gamma", wt_gamma, "relaxation factor in (0,1]")->required();
    weights->add_option("--out", wt_out, "output CSV path (default stdout)");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "dense reference solve and spectrum");
    std::string or_config, or_out;
    SourceFlags or_source;
    oracle_cmd->add_option("--config", or_config, "config JSON path")->required();
    oracle_cmd->add_option("--out", or_out, "output JSON path (default stdout)");
    or_source.attach(oracle_cmd);

    // homogenize
    auto* homog = app.add_subcommand("homogenize", "fixed-capacity lattice sweep");
    std::string hg_kernel = "laplace", hg_d_list = "0.5,0.25", hg_scheme = "damped", hg_out;
    std::string hg_probe_center;
    double hg_mu = 4.0, hg_xi = 0.0, hg_box_radius = 2.0, hg_gamma = 0.0, hg_tol = 1e-8;
    double hg_trunc = 0.0, hg_probe_radius = 1.0;
    int hg_max_iter = 400, hg_probes = 64;
    SourceFlags hg_source;
    hg_source.width = 0.5;
    homog->add_option("--kernel", hg_kernel, "laplace|yukawa|stokes");
    homog->add_option("--xi", hg_xi, "screening of the perforated problem (yukawa)");
    homog->add_option("--mu", hg_mu, "capacity density, fixed across rows")->required();
    homog->add_option("--d-list", hg_d_list, "comma list of lattice spacings");
    homog->add_option("--box-radius", hg_box_radius, "half-width of the lattice box");
    homog->add_option("--scheme", hg_scheme, "damped|cutoff-damped|plain");
    homog->add_option("--gamma", hg_gamma, "relaxation factor (default 1/lambda_hat)");
    homog->add_option("--tol", hg_tol, "row residual tolerance");
    homog->add_option("--max-iter", hg_max_iter, "row iteration cap");
    homog->add_option("--truncate", hg_trunc, "coupling cutoff radius (yukawa rows)");
    homog->add_option("--probes", hg_probes, "number of probe points");
    homog->add_option("--probe-radius", hg_probe_radius, "probe sphere radius");
    homog->add_option("--probe-center", hg_probe_center, "probe sphere center (default source)");
    homog->add_option("--out", hg_out, "output prefix; writes <prefix>.csv and <prefix>.json");
    hg_source.attach(homog);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (threads <= 0) {
        if (const char* env = std::getenv("REFLECT_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) omp_set_num_threads(threads);

    const std::vector<std::string> args = arg_vector(argc, argv);

    try {
        if (*gen_lattice) {
            LatticeSpec spec{gl_d, gl_r,
                             {parse_triple(gl_box_min, "--box-min"),
                              parse_triple(gl_box_max, "--box-max")}};
            const double xi = gl_xi > 0.0 ? gl_xi : infinite_xi;
            const auto config = generate_lattice(spec, kernel_from_name(gl_kernel), xi);
            emit(config_to_json(config, args), gl_out);
            return exit_ok;
        }

        if (*gen_rand) {
            const double xi = gr_xi > 0.0 ? gr_xi : infinite_xi;
            const auto config = generate_random(
                gr_n, gr_r, gr_kappa,
                {parse_triple(gr_box_min, "--box-min"), parse_triple(gr_box_max, "--box-max")},
                gr_seed, kernel_from_name(gr_kernel), xi);
            emit(config_to_json(config, args), gr_out);
            return exit_ok;
        }

        if (*check) {
            const auto config = read_config(ck_config);
            const auto report = check_conditions(config, ck_kappa, ck_alpha);
            std::cout << "mu0 = " << report.mu0 << "\n";
            std::cout << "kappa_ok = " << (report.kappa_ok ? "true" : "false") << "\n";
            std::cout << "alpha_ok = " << (report.alpha_ok ? "true" : "false") << "\n";
            for (std::size_t k = 0; k < report.violations.size(); ++k)
                std::cout << "violation: particle " << report.violations[k] << ": "
                          << report.violation_reasons[k] << "\n";
            return report.all_ok() ? exit_ok : exit_validation;
        }

        if (*diag) {
            const auto config = read_config(dg_config);
            std::vector<double> radii;
            if (!dg_radii.empty()) {
                radii = parse_list(dg_radii);
            } else {
                double extent = 0.0;
                for (const auto& p : config.particles)
                    extent = std::max(extent, norm(p.center) + p.radius);
                for (int k = 1; k <= 8; ++k) radii.push_back(extent * k / 8.0);
            }
            emit(report_to_json(diagnose(config, radii), args), dg_out);
            return exit_ok;
        }

        if (*solve) {
            const auto config = read_config(sv_config);
            const auto source = sv_source.build(config.kernel);
            IterationSettings settings;
            settings.scheme = scheme_from_name(sv_scheme);
            settings.gamma = sv_gamma;
            settings.tol = sv_tol;
            settings.max_iter = sv_max_iter;
            const auto result = iterate(config, source, settings, sv_trunc);
            write_text(sv_out, strengths_to_json(config, result.strengths, result.trace, args));
            if (!sv_trace.empty()) write_text(sv_trace, trace_to_csv(result.trace, args));
            if (result.trace.diverged && !sv_allow_div) {
                std::cerr << "reflect: scheme diverged (residual grew 10x over its minimum)\n";
                return exit_divergence;
            }
            return exit_ok;
        }

        if (*weights) {
            emit(weights_to_csv(make_weight_table(wt_M, wt_gamma), args), wt_out);
            return exit_ok;
        }

        if (*oracle_cmd) {
            const auto config = read_config(or_config);
            const auto source = or_source.build(config.kernel);
            const auto s = dense_solve(config, source);
            const auto spectrum = jacobi_spectrum(config, Scheme::plain);
            std::ostringstream out;
            out.precision(17);
            out << "{\n  \"tool\": \"reflect\", \"version\": \"" << version << "\",\n";
            out << "  \"strengths\": [";
            for (std::size_t k = 0; k < s.data.size(); ++k)
                out << (k ? ", " : "") << s.data[k];
            out << "],\n  \"eigenvalues\": [";
            for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k)
                out << (k ? ", " : "") << spectrum.eigenvalues[k];
            out << "],\n  \"iteration_spectral_radius\": " << spectrum.iteration_spectral_radius
                << "\n}\n";
            emit(out.str(), or_out);
            return exit_ok;
        }

        if (*homog) {
            SweepSpec spec;
            spec.kernel = kernel_from_name(hg_kernel);
            spec.xi = hg_xi > 0.0 ? hg_xi : infinite_xi;
            spec.mu = hg_mu;
            spec.d_list = parse_list(hg_d_list);
            spec.box = {{-hg_box_radius, -hg_box_radius, -hg_box_radius},
                        {hg_box_radius, hg_box_radius, hg_box_radius}};
            spec.source = hg_source.build(spec.kernel);
            const Vec3 center = hg_probe_center.empty()
                                    ? spec.source.location
                                    : parse_triple(hg_probe_center, "--probe-center");
            spec.probes = fibonacci_sphere(hg_probes, hg_probe_radius, center);
            spec.settings.scheme = scheme_from_name(hg_scheme);
            spec.settings.gamma = hg_gamma;
            spec.settings.tol = hg_tol;
            spec.settings.max_iter = hg_max_iter;
            spec.truncation = hg_trunc;
            const auto report = sweep(spec);
            const std::string csv = sweep_to_csv(report, args);
            if (hg_out.empty()) {
                std::cout << csv;
            } else {
                write_text(hg_out + ".csv", csv);
                write_text(hg_out + ".json", sweep_to_json(report, args));
            }
            return exit_ok;
        }
    } catch (const std::exception& e) {
        std::cerr << "reflect: " << e.what() << "\n";
        return exit_validation;
    }
    return exit_usage;
}
