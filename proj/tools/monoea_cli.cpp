// monoea: command-line front end for the simulator and the Phi predictor.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "monoea/dichotomy.hpp"
#include "monoea/errors.hpp"
#include "monoea/experiment.hpp"

namespace {

using namespace monoea;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string join_path(const std::string& dir, const std::string& file) {
    if (dir.empty()) return file;
    return (std::filesystem::path(dir) / file).string();
}

void emit(const std::string& text, const std::string& out_dir, const std::string& file) {
    if (out_dir.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_file(join_path(out_dir, file), text);
    }
}

std::vector<std::string> run_and_write(ExperimentConfig& cfg, const std::string& out_dir, const std::string& format) {
    const auto problem = make_problem(cfg.function);
    auto warnings = cfg.algorithm.validate(cfg.function.n);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    const auto runs = run_batch(cfg, problem);
    const auto summary = summarize(cfg, problem, runs, warnings);

    std::string csv_path = cfg.output.trajectory_csv;
    std::string json_path = cfg.output.summary_json;
    if (!out_dir.empty()) {
        csv_path = join_path(out_dir, csv_path.empty() ? "trajectories.csv" : csv_path);
        json_path = join_path(out_dir, json_path.empty() ? "summary.json" : json_path);
    }
    const std::string csv = trajectory_csv(runs);
    const std::string js = summary.to_json().dump(2) + "\n";
    if (!csv_path.empty()) write_file(csv_path, csv);
    if (!json_path.empty()) write_file(json_path, js);
    if (csv_path.empty() && format == "csv") std::cout << csv;
    if (json_path.empty() && format == "json") std::cout << js;
    return warnings;
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
    std::vector<std::size_t> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoull(item, &pos);
            if (pos != item.size() || v < 2) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("bad dimension '" + item + "' in --n");
        }
    }
    if (out.empty()) throw ConfigError("--n needs at least one dimension");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary algorithms on monotone functions: simulator and Phi predictor"};
    app.require_subcommand(1);
    app.fallthrough();

    int threads = 0;
    std::string out_dir;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    app.add_option("--threads", threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "Base seed override");

    auto* predict = app.add_subcommand("predict", "Evaluate Phi over an alpha grid and classify a flip-count law");
    std::string dist_spec;
    std::size_t dist_n = 1000000;
    double grid_step = 0;
    double margin = 1e-3;
    double delta = 0.1;
    predict->add_option("--dist", dist_spec, "e.g. poisson:c=4, zipf:kappa=1.5, point:k=1")->required();
    predict->add_option("--n", dist_n, "Support bound for binomial/poisson/zipf")->capture_default_str();
    predict->add_option("--grid-step", grid_step, "Uniform grid step (default: 400-point hybrid grid)");
    predict->add_option("--margin", margin, "Classification margin")->capture_default_str();
    predict->add_option("--delta", delta, "delta of the moment criteria")->capture_default_str();

    auto* constants = app.add_subcommand("constants", "Print the critical constants alpha0 and c0");

    auto* run_cmd = app.add_subcommand("run", "Run a configured experiment batch");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "Experiment JSON")->required();

    auto* footnote = app.add_subcommand("footnote", "HotTopic stagnation experiment preset");
    double foot_c = 0.9;
    std::size_t foot_runs = 20;
    footnote->add_option("--c", foot_c, "Mutation parameter (0.9 or 4)")->required();
    footnote->add_option("--runs", foot_runs, "Number of runs")->capture_default_str();

    auto* scaling = app.add_subcommand("scaling", "Mean runtime over a list of dimensions");
    std::string template_path;
    std::string n_list;
    double budget_factor = 0;
    scaling->add_option("--config", template_path, "Experiment JSON template")->required();
    scaling->add_option("--n", n_list, "Comma-separated dimensions")->required();
    scaling->add_option("--budget-factor", budget_factor, "Budget = factor * n ln n (default: template budget)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*predict) {
            const auto dist = FlipCountDistribution::parse(dist_spec, dist_n);
            if (!(margin > 0)) throw ConfigError("--margin must be positive");
            if (grid_step != 0 && !(grid_step > 0 && grid_step < 0.5)) throw ConfigError("--grid-step must lie in (0, 0.5)");
            const auto grid = grid_step > 0 ? uniform_alpha_grid(grid_step) : default_alpha_grid();
            const auto report = classify(dist, grid, margin, delta);
            if (out_dir.empty()) {
                std::cout << (format == "csv" ? report.to_csv() : report.to_json() + "\n");
            } else {
                write_file(join_path(out_dir, "phi.csv"), report.to_csv());
                write_file(join_path(out_dir, "report.json"), report.to_json() + "\n");
                std::cout << to_string(report.classification) << '\n';
            }
        } else if (*constants) {
            const auto k = critical_constants();
            if (format == "json") {
                std::ostringstream os;
                os.setf(std::ios::fixed);
                os.precision(6);
                os << "{\"alpha0\": " << k.alpha0 << ", \"c0\": " << k.c0 << "}\n";
                emit(os.str(), out_dir, "constants.json");
            } else {
                char buf[96];
                std::snprintf(buf, sizeof buf, "alpha0,c0\n%.6f,%.6f\n", k.alpha0, k.c0);
                emit(buf, out_dir, "constants.csv");
            }
        } else if (*run_cmd) {
            auto cfg = ExperimentConfig::load(config_path);
            if (seed) cfg.seed = *seed;
            run_and_write(cfg, out_dir, format);
        } else if (*footnote) {
            auto cfg = seed ? footnote_preset(foot_c, *seed) : footnote_preset(foot_c);
            if (foot_runs < 1) throw ConfigError("--runs must be at least 1");
            cfg.runs = foot_runs;
            run_and_write(cfg, out_dir, format);
        } else if (*scaling) {
            std::ifstream in(template_path);
            if (!in) throw IoError("cannot read config file '" + template_path + "'");
            json tmpl;
            try {
                tmpl = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ConfigError("malformed JSON in '" + template_path + "': " + e.what());
            }
            std::ostringstream csv;
            csv.precision(10);
            csv << "n,runs,terminated,mean_runtime,ratio\n";
            for (std::size_t n : parse_sizes(n_list)) {
                json j = tmpl;
                if (!j.contains("function") || !j["function"].is_object()) {
                    throw ConfigError("missing key 'function' in config");
                }
                j["function"]["n"] = n;
                j.erase("output");
                const double nlogn = static_cast<double>(n) * std::log(static_cast<double>(n));
                if (budget_factor > 0) j["budget"] = static_cast<std::uint64_t>(std::ceil(budget_factor * nlogn));
                auto cfg = ExperimentConfig::from_json(j);
                if (seed) cfg.seed = *seed;
                cfg.sample_every = cfg.budget;
                const auto problem = make_problem(cfg.function);
                const auto runs = run_batch(cfg, problem);
                const auto summary = summarize(cfg, problem, runs);
                const double frac = static_cast<double>(summary.runs_terminated) / static_cast<double>(cfg.runs);
                if (frac < 0.9) {
                    std::cerr << "warning: n=" << n << ": only " << summary.runs_terminated << " of " << cfg.runs
                              << " runs found the optimum; partial results\n";
                }
                csv << n << ',' << cfg.runs << ',' << summary.runs_terminated << ',';
                if (summary.mean_runtime) {
                    csv << *summary.mean_runtime << ',' << *summary.mean_runtime / nlogn;
                } else {
                    csv << ',';
                }
                csv << '\n';
            }
            emit(csv.str(), out_dir, "scaling.csv");
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const UndefinedPhi& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
