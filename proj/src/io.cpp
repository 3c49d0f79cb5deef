#include "reflect/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "reflect/version.hpp"

namespace reflect {

using nlohmann::json;

namespace {

json meta(const std::vector<std::string>& args) {
    return json{{"tool", "reflect"}, {"version", version}, {"args", args}};
}

std::string args_line(const std::vector<std::string>& args) {
    std::string line = "# reflect ";
    line += version;
    for (const auto& a : args) {
        line += ' ';
        line += a;
    }
    return line;
}

json number_or_null(double v) {
    if (std::isinf(v)) return nullptr;
    return v;
}

}  // namespace

ParticleConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed config JSON: ") + e.what());
    }
    ParticleConfig config;
    try {
        config.kernel = kernel_from_name(j.at("kernel").get<std::string>());
        if (j.contains("xi") && !j.at("xi").is_null())
            config.xi = j.at("xi").get<double>();
        else
            config.xi = infinite_xi;
        for (const auto& p : j.at("particles")) {
            const auto& c = p.at("c");
            config.particles.push_back(
                {Vec3{c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()},
                 p.at("r").get<double>()});
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config missing or ill-typed field: ") + e.what());
    }
    return config;
}

ParticleConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string config_to_json(const ParticleConfig& config, const std::vector<std::string>& args) {
    json j = meta(args);
    j["kernel"] = kernel_name(config.kernel);
    j["xi"] = number_or_null(config.xi);
    j["particles"] = json::array();
    for (const auto& p : config.particles)
        j["particles"].push_back({{"c", {p.center.x, p.center.y, p.center.z}}, {"r", p.radius}});
    return j.dump(2) + "\n";
}

void write_config(const std::string& path, const ParticleConfig& config,
                  const std::vector<std::string>& args) {
    write_text(path, config_to_json(config, args));
}

std::string strengths_to_json(const ParticleConfig& config, const Strengths& s,
                              const IterationTrace& trace, const std::vector<std::string>& args) {
    json j = meta(args);
    j["kernel"] = kernel_name(config.kernel);
    j["xi"] = number_or_null(config.xi);
    j["scheme"] = scheme_name(trace.scheme);
    j["gamma"] = trace.gamma_used;
    j["converged"] = trace.converged;
    j["diverged"] = trace.diverged;
    j["iterations"] = trace.iterations;
    j["residual_max"] = trace.residual_max.empty() ? 0.0 : trace.residual_max.back();
    if (s.comps == 1) {
        j["strengths"] = s.data;
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < s.size(); ++i)
            rows.push_back({s.data[3 * i], s.data[3 * i + 1], s.data[3 * i + 2]});
        j["strengths"] = rows;
    }
    return j.dump(2) + "\n";
}

std::string report_to_json(const DiagnosticsReport& report, const std::vector<std::string>& args) {
    json j = meta(args);
    j["mu0"] = report.mu0;
    j["traytak"] = report.traytak;
    j["lambda_screen"] = number_or_null(report.lambda_screen);
    j["predicted_convergent"] = report.predicted_convergent;
    json theta = json::array();
    for (const auto& [R, t] : report.theta_of_R) theta.push_back({R, t});
    j["theta"] = theta;
    return j.dump(2) + "\n";
}

std::string trace_to_csv(const IterationTrace& trace, const std::vector<std::string>& args) {
    std::ostringstream out;
    out << args_line(args) << "\n";
    out << "step,residual_max,residual_rms,correction_norm\n";
    out.precision(17);
    for (std::size_t k = 0; k < trace.residual_max.size(); ++k)
        out << k << ',' << trace.residual_max[k] << ',' << trace.residual_rms[k] << ','
            << trace.correction_norm[k] << '\n';
    return out.str();
}

std::string sweep_to_csv(const SweepReport& report, const std::vector<std::string>& args) {
    std::ostringstream out;
    out << args_line(args) << "\n";
    out << "d,r,mu,n_particles,probe_rms_error,max_error,iters,seconds\n";
    out.precision(17);
    for (const auto& row : report.rows)
        out << row.d << ',' << row.r << ',' << row.mu << ',' << row.n_particles << ','
            << row.probe_rms_error << ',' << row.max_error << ',' << row.iterations << ','
            << row.seconds << '\n';
    return out.str();
}

std::string sweep_to_json(const SweepReport& report, const std::vector<std::string>& args) {
    json j = meta(args);
    j["mu"] = report.spec.mu;
    j["kernel"] = kernel_name(report.spec.kernel);
    j["xi"] = number_or_null(report.spec.xi);
    json probes = json::array();
    for (const auto& p : report.spec.probes) probes.push_back({p.x, p.y, p.z});
    j["probes"] = probes;
    j["rows"] = json::array();
    for (const auto& row : report.rows) {
        j["rows"].push_back({{"d", row.d},
                             {"r", row.r},
                             {"n_particles", row.n_particles},
                             {"converged", row.converged},
                             {"iterations", row.iterations},
                             {"seconds", row.seconds},
                             {"probe_rms_error", row.probe_rms_error},
                             {"max_error", row.max_error},
                             {"solver_values", row.solver_values},
                             {"limit_values", row.limit_values}});
    }
    return j.dump(2) + "\n";
}

std::string weights_to_csv(const WeightTable& table, const std::vector<std::string>& args) {
    std::ostringstream out;
    out << args_line(args) << "\n";
    out << "n,M,gamma,q\n";
    out.precision(17);
    for (int n = 0; n <= table.M; ++n)
        out << n << ',' << table.M << ',' << table.gamma << ',' << table.q[n] << '\n';
    return out.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace reflect
