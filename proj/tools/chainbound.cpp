#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "chainbound/covering.hpp"
#include "chainbound/fields.hpp"
#include "chainbound/grr.hpp"
#include "chainbound/measure.hpp"
#include "chainbound/metric_space.hpp"
#include "chainbound/orlicz.hpp"

using json = nlohmann::ordered_json;
using namespace chainbound;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::vector<double>> read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> read_csv_vector(const std::string& path) {
    std::vector<double> out;
    for (const auto& row : read_csv_matrix(path))
        for (double v : row) out.push_back(v);
    return out;
}

std::shared_ptr<const MetricSpace> parse_space(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = (colon == std::string::npos) ? "" : spec.substr(colon + 1);
    if (kind == "cycle") return std::make_shared<MetricSpace>(MetricSpace::cycle(std::stoi(rest)));
    if (kind == "grid") {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) throw ParameterError("grid spec needs grid:dims:points");
        return std::make_shared<MetricSpace>(
            MetricSpace::grid(std::stoi(rest.substr(0, c2)), std::stoi(rest.substr(c2 + 1))));
    }
    if (kind == "file")
        return std::make_shared<MetricSpace>(MetricSpace::from_matrix(read_csv_matrix(rest)));
    if (kind == "cloud")
        return std::make_shared<MetricSpace>(MetricSpace::point_cloud(read_csv_matrix(rest)));
    throw ParameterError("unknown space spec '" + spec + "'");
}

DiscreteMeasure parse_measure(const std::string& spec,
                              std::shared_ptr<const MetricSpace> space) {
    if (spec == "uniform") return DiscreteMeasure::uniform(space);
    if (spec.rfind("file:", 0) == 0)
        return DiscreteMeasure(space, read_csv_vector(spec.substr(5)));
    throw ParameterError("unknown measure spec '" + spec + "'");
}

YoungFunction parse_phi(const std::string& spec) {
    if (spec == "phi2" || spec == "expq") return YoungFunction::exp_quadratic();
    if (spec.rfind("power:", 0) == 0) return YoungFunction::power(std::stod(spec.substr(6)));
    throw ParameterError("unknown Young function spec '" + spec + "'");
}

SolveMode parse_mode(const std::string& s) {
    if (s == "exact") return SolveMode::Exact;
    if (s == "greedy") return SolveMode::Greedy;
    throw ParameterError("mode must be exact or greedy");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

RandomFieldModel parse_model(const std::string& cov_spec,
                             std::shared_ptr<const MetricSpace> space,
                             std::uint64_t seed) {
    const int n = space->size();
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = (n > 1) ? static_cast<double>(i) / (n - 1) : 0.0;
    if (cov_spec == "ou") return gaussian_model(space, cov_ou(t), seed);
    if (cov_spec == "iid") return gaussian_model(space, cov_iid(n), seed);
    if (cov_spec.rfind("fbm:", 0) == 0)
        return gaussian_model(space, cov_fbm(t, std::stod(cov_spec.substr(4))), seed);
    if (cov_spec.rfind("file:", 0) == 0) {
        const auto rows = read_csv_matrix(cov_spec.substr(5));
        std::vector<double> flat;
        for (const auto& r : rows)
            for (double v : r) flat.push_back(v);
        return gaussian_model(space, std::move(flat), seed);
    }
    throw ParameterError("unknown covariance spec '" + cov_spec + "'");
}

struct Output {
    std::string path;    // empty = stdout
    std::string format;  // csv | json

    void emit(const std::string& csv, const json& js) const {
        const std::string& body = (format == "json") ? js.dump(2) + "\n" : csv;
        if (path.empty()) {
            std::cout << body;
        } else {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw ParameterError("cannot write " + path);
            out << body;
        }
    }
};

json config_echo(const CLI::App* cmd) {
    json cfg;
    for (const auto* opt : cmd->get_options()) {
        if (opt->count() > 0 && !opt->get_name().empty())
            cfg[opt->get_name()] = opt->results().size() == 1 ? opt->results()[0] : "";
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite metric space covering, measure, and chaining tail bound toolkit"};
    app.require_subcommand(1);

    std::string space_spec, measure_spec = "uniform", phi_spec = "phi2";
    std::string mode_str = "exact", out_path, format = "csv", f_path, cov_spec = "ou";
    std::string u_list = "1,2,3,4";
    int exact_limit = 24, R = 10000, threads = 1;
    double eps = 0.0, radius = 0.0;
    std::uint64_t seed = 0;
    bool check = false;

    auto add_common = [&](CLI::App* cmd, bool with_space = true) {
        if (with_space) cmd->add_option("--space", space_spec, "space spec")->required();
        cmd->add_option("--mode", mode_str, "exact|greedy");
        cmd->add_option("--exact-limit", exact_limit, "exact solver size limit");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--format", format, "csv|json");
        cmd->add_flag("--check", check, "verify invariants, exit 3 on failure");
        cmd->add_option("--threads", threads, "parallelism degree");
    };

    auto* c_validate = app.add_subcommand("validate", "check metric axioms");
    add_common(c_validate);

    auto* c_profile = app.add_subcommand("profile", "covering/packing profile");
    add_common(c_profile);

    auto* c_net = app.add_subcommand("net", "optimal epsilon-net");
    add_common(c_net);
    c_net->add_option("--eps", eps, "net radius")->required();

    auto* c_measure = app.add_subcommand("measure", "uniform measure via stabilized nets");
    add_common(c_measure);
    c_measure->add_option("--eps", eps, "single net radius (default: full schedule)");

    auto* c_homog = app.add_subcommand("homogeneity", "weak homogeneity constant");
    add_common(c_homog);
    c_homog->add_option("--measure", measure_spec, "uniform|file:path");

    auto* c_grr = app.add_subcommand("grr", "modulus distance w and pair check");
    add_common(c_grr);
    c_grr->add_option("--f", f_path, "scalar f values CSV")->required();
    c_grr->add_option("--phi", phi_spec, "Young function spec");
    c_grr->add_option("--measure", measure_spec, "uniform|file:path");

    auto* c_gamma = app.add_subcommand("gamma", "majorizing measure functional");
    add_common(c_gamma);
    c_gamma->add_option("--phi", phi_spec, "Young function spec");
    c_gamma->add_option("--measure", measure_spec, "uniform|file:path");

    auto* c_entropy = app.add_subcommand("entropy", "entropy integral");
    add_common(c_entropy);
    c_entropy->add_option("--phi", phi_spec, "Young function spec");

    auto* c_tail = app.add_subcommand("tailbound", "chaining tail bound pipeline");
    add_common(c_tail);
    c_tail->add_option("--phi", phi_spec, "Young function spec");
    c_tail->add_option("--cov", cov_spec, "ou|fbm:H|iid|file:path");
    c_tail->add_option("--u", u_list, "comma-separated levels");
    c_tail->add_option("--R", R, "replications");
    c_tail->add_option("--seed", seed, "rng seed");

    auto* c_mc = app.add_subcommand("mc-verify", "tail bound vs Monte-Carlo exceedance");
    add_common(c_mc);
    c_mc->add_option("--phi", phi_spec, "Young function spec");
    c_mc->add_option("--cov", cov_spec, "ou|fbm:H|iid|file:path");
    c_mc->add_option("--u", u_list, "comma-separated levels");
    c_mc->add_option("--R", R, "replications");
    c_mc->add_option("--seed", seed, "rng seed");
    c_mc->add_option("--r", radius, "unused radius hook");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        const SolveMode mode = parse_mode(mode_str);
        CoverOptions opts;
        opts.exact_limit = exact_limit;
        Output out{out_path, format};

        if (cmd == c_validate) {
            auto space = parse_space(space_spec);
            const auto rep = space->validate();
            json js;
            js["config"] = config_echo(cmd);
            js["valid"] = rep.ok();
            for (const auto& v : rep.violations) {
                json row = {{"axiom", v.axiom}, {"i", v.i}, {"j", v.j},
                            {"k", v.k}, {"value", v.value}};
                js["violations"].push_back(row);
            }
            std::string csv = "valid\n" + std::string(rep.ok() ? "1" : "0") + "\n";
            for (const auto& v : rep.violations)
                csv += v.axiom + "," + std::to_string(v.i) + "," + std::to_string(v.j) + "," +
                       std::to_string(v.k) + "," + fmt(v.value) + "\n";
            out.emit(csv, js);
            return rep.ok() ? 0 : 1;
        }

        if (cmd == c_profile) {
            auto space = parse_space(space_spec);
            const auto prof = cover_profile(*space, mode, opts);
            json js;
            js["config"] = config_echo(cmd);
            js["eq"] = "1.0a/1.0b";
            std::string csv = "r,N,M\n";
            for (const auto& e : prof.entries) {
                csv += fmt(e.r) + "," + std::to_string(e.N) + "," + std::to_string(e.M) + "\n";
                json row = {{"r", e.r}, {"N", e.N}, {"M", e.M}};
                js["rows"].push_back(row);
            }
            out.emit(csv, js);
            return 0;
        }

        if (cmd == c_net) {
            auto space = parse_space(space_spec);
            const auto net = (mode == SolveMode::Exact) ? optimal_net(*space, eps, opts)
                                                        : greedy_net(*space, eps);
            json js;
            js["config"] = config_echo(cmd);
            js["eq"] = "1.0a";
            js["epsilon"] = net.epsilon;
            js["exact"] = net.exact;
            js["centers"] = net.centers;
            js["assignment"] = net.assignment;
            std::string csv = "center\n";
            for (int c : net.centers) csv += std::to_string(c) + "\n";
            out.emit(csv, js);
            return 0;
        }

        if (cmd == c_measure) {
            auto space = parse_space(space_spec);
            std::vector<double> schedule = space->positive_breakpoints();
            std::reverse(schedule.begin(), schedule.end());
            schedule.push_back(space->min_positive_distance() / 2.0);
            if (eps > 0.0) schedule = {eps};
            const auto res = uniform_measure(space, schedule, mode, opts);
            json js;
            js["config"] = config_echo(cmd);
            js["eq"] = "1.2";
            js["stabilized"] = res.stabilized;
            js["weights"] = res.measure.weights();
            js["wasserstein_gaps"] = res.wasserstein_gaps;
            std::string csv = "index,weight\n";
            for (size_t i = 0; i < res.measure.weights().size(); ++i)
                csv += std::to_string(i) + "," + fmt(res.measure.weights()[i]) + "\n";
            out.emit(csv, js);
            if (check) {
                for (double e : space->positive_breakpoints()) {
                    const auto sw = packing_sandwich(res.measure, e, mode, opts);
                    if (!sw.pass) return 3;
                }
            }
            return 0;
        }

        if (cmd == c_homog) {
            auto space = parse_space(space_spec);
            auto m = parse_measure(measure_spec, space);
            const auto rep = weak_homogeneity(space, mode, opts, &m);
            json js;
            js["config"] = config_echo(cmd);
            js["eq"] = "2.1";
            js["c_minus"] = rep.c_minus;
            js["quasi_ratio"] = rep.quasi_ratio;
            for (const auto& w : rep.witnesses) {
                json row = {{"r", w.r}, {"eps", w.epsilon}, {"value", w.value}};
                js["witnesses"].push_back(row);
            }
            std::string csv = "c_minus,quasi_ratio\n" + fmt(rep.c_minus) + "," +
                              fmt(rep.quasi_ratio) + "\n";
            out.emit(csv, js);
            if (check) {
                const auto rows = check_thm21(m, rep.c_minus, mode, opts);
                for (const auto& row : rows)
                    if (!row.pass) return 3;
            }
            return 0;
        }

        if (cmd == c_grr) {
            auto space = parse_space(space_spec);
            auto m = parse_measure(measure_spec, space);
            const auto f = read_csv_vector(f_path);
            if (static_cast<int>(f.size()) != space->size())
                throw ParameterError("f values size mismatch");
            const auto ctx = make_context(space, rho_from_scalar(f), m, parse_phi(phi_spec));
            const auto rep = check_arnold_imkeller(ctx);
            json js;
            js["config"] = config_echo(cmd);
            js["eq"] = "4.2/4.3/4.4";
            js["V"] = rep.V;
            js["minorizing"] = rep.minorizing;
            js["worst_ratio"] = rep.worst_ratio;
            js["pass"] = rep.pass;
            const int n = space->size();
            std::string csv;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j)
                    csv += fmt(i == j ? 0.0 : w_distance(ctx, i, j)) + (j + 1 < n ? "," : "");
                csv += "\n";
            }
            out.emit(csv, js);
            if (check && !rep.pass) return 3;
            return 0;
        }

        if (cmd == c_gamma) {
            auto space = parse_space(space_spec);
            auto m = parse_measure(measure_spec, space);
            const auto res = gamma_m(*space, m, parse_phi(phi_spec));
            json js;
            js["config"] = config_echo(cmd);
            js["eq"] = "5.2";
            js["gamma"] = res.gamma;
            js["argmax"] = res.argmax;
            std::string csv = "gamma\n" + fmt(res.gamma) + "\ndelta,truncated\n";
            for (size_t i = 0; i < res.delta_grid.size(); ++i) {
                csv += fmt(res.delta_grid[i]) + "," + fmt(res.truncated[i]) + "\n";
                json row = {{"delta", res.delta_grid[i]}, {"value", res.truncated[i]}};
                js["truncated"].push_back(row);
            }
            out.emit(csv, js);
            return 0;
        }

        if (cmd == c_entropy) {
            auto space = parse_space(space_spec);
            const double v = entropy_integral(*space, parse_phi(phi_spec), mode, opts);
            json js;
            js["config"] = config_echo(cmd);
            js["eq"] = "5.4";
            js["entropy_integral"] = v;
            out.emit("entropy_integral\n" + fmt(v) + "\n", js);
            return 0;
        }

        if (cmd == c_tail || cmd == c_mc) {
            auto space = parse_space(space_spec);
            const auto model = parse_model(cov_spec, space, seed);
            const auto Phi = parse_phi(phi_spec);
            const auto u_grid = parse_list(u_list);
            const auto res = mc_verify(model, Phi, u_grid, R, mode, opts);
            const auto& rep = res.report;
            json js;
            js["config"] = config_echo(cmd);
            js["eq"] = (cmd == c_mc) ? "6.9/6.9a/6.1" : "6.9/6.9a";
            js["K"] = res.K;
            js["mean_Z"] = res.mean_Z;
            js["se_Z"] = res.se_Z;
            js["D_zeta"] = rep.D_zeta;
            std::string csv = "u,bound,bound_abs,delta_star,empirical,se,dominated\n";
            for (size_t k = 0; k < u_grid.size(); ++k) {
                const bool with_mc = (cmd == c_mc);
                csv += fmt(u_grid[k]) + "," + fmt(rep.bound[k]) + "," + fmt(rep.bound_abs[k]) +
                       "," + fmt(rep.delta_star[k]) + "," +
                       (with_mc ? fmt(rep.empirical[k]) : "") + "," +
                       (with_mc ? fmt(rep.empirical_se[k]) : "") + "," +
                       (with_mc ? std::to_string(rep.dominated[k]) : "") + "\n";
                json row = {{"u", u_grid[k]},
                            {"bound", rep.bound[k]},
                            {"bound_abs", rep.bound_abs[k]},
                            {"delta_star", rep.delta_star[k]}};
                if (cmd == c_mc) {
                    row["empirical"] = rep.empirical[k];
                    row["se"] = rep.empirical_se[k];
                    row["dominated"] = rep.dominated[k] != 0;
                }
                js["rows"].push_back(row);
            }
            out.emit(csv, js);
            if (check && cmd == c_mc && !res.all_dominated) return 3;
            return 0;
        }
    } catch (const CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
