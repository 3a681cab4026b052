#include "monoea/experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "monoea/errors.hpp"
#include "monoea/rng.hpp"

namespace monoea {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items()) {
        if (!keys.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
    }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + std::string(key) + "' in " + where + " has the wrong type");
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
    return j.contains(key) ? get<T>(j, key, where) : fallback;
}

FunctionSpec parse_function(const json& j) {
    const std::string where = "function";
    FunctionSpec f;
    if (!j.is_object()) throw ConfigError("function must be a JSON object");
    f.type = get<std::string>(j, "type", where);
    if (f.type == "hottopic") {
        reject_unknown(j, {"type", "n", "seed", "alpha", "beta", "eps", "levels"}, where);
    } else if (f.type == "linear") {
        reject_unknown(j, {"type", "n", "seed", "weights"}, where);
    } else if (f.type == "onemax" || f.type == "zeromax" || f.type == "binval") {
        reject_unknown(j, {"type", "n"}, where);
    } else {
        throw ConfigError("unknown function type '" + f.type + "'");
    }
    f.seed = get_or<std::uint64_t>(j, "seed", 0, where);
    if (j.contains("weights")) {
        f.weights = get<std::vector<std::int64_t>>(j, "weights", where);
        f.n = get_or<std::size_t>(j, "n", f.weights.size(), where);
        if (f.n != f.weights.size()) throw ConfigError("function.n does not match the number of weights");
    } else {
        f.n = get<std::size_t>(j, "n", where);
    }
    if (f.type == "hottopic") {
        auto& p = f.hottopic;
        p.n = f.n;
        p.seed = f.seed;
        p.alpha = get_or(j, "alpha", p.alpha, where);
        p.beta = get_or(j, "beta", p.beta, where);
        p.eps = get_or(j, "eps", p.eps, where);
        p.levels = get<std::size_t>(j, "levels", where);
        p.validate();
    }
    return f;
}

json function_to_json(const FunctionSpec& f) {
    json j{{"type", f.type}, {"n", f.n}};
    if (f.type == "hottopic") {
        j["seed"] = f.seed;
        j["alpha"] = f.hottopic.alpha;
        j["beta"] = f.hottopic.beta;
        j["eps"] = f.hottopic.eps;
        j["levels"] = f.hottopic.levels;
    } else if (f.type == "linear") {
        if (f.weights.empty()) {
            j["seed"] = f.seed;
        } else {
            j["weights"] = f.weights;
        }
    }
    return j;
}

AlgorithmSpec parse_algorithm(const json& j, std::size_t n) {
    const std::string where = "algorithm";
    reject_unknown(j, {"variant", "mu", "lambda", "c", "gamma", "dist", "adaptive"}, where);
    AlgorithmSpec a;
    a.variant = parse_variant(get<std::string>(j, "variant", where));
    a.mu = get_or<std::size_t>(j, "mu", 1, where);
    a.lambda = get_or<std::size_t>(j, "lambda", 1, where);
    a.c = get_or(j, "c", 1.0, where);
    if (j.contains("gamma")) a.gamma = get<double>(j, "gamma", where);
    if (j.contains("dist")) a.dist = FlipCountDistribution::parse(get<std::string>(j, "dist", where), n);
    if (j.contains("adaptive")) {
        const auto& ad = j.at("adaptive");
        reject_unknown(ad, {"factor", "lambda_max", "gamma_slack"}, "algorithm.adaptive");
        OneFifthRule r;
        r.factor = get_or(ad, "factor", r.factor, "algorithm.adaptive");
        r.lambda_max = get_or(ad, "lambda_max", r.lambda_max, "algorithm.adaptive");
        r.gamma_slack = get_or(ad, "gamma_slack", r.gamma_slack, "algorithm.adaptive");
        a.adaptive = r;
    }
    return a;
}

json algorithm_to_json(const AlgorithmSpec& a) {
    json j{{"variant", to_string(a.variant)}, {"mu", a.mu}, {"lambda", a.lambda}, {"c", a.c}};
    if (a.gamma) j["gamma"] = *a.gamma;
    if (a.dist) j["dist"] = a.dist->describe();
    if (a.adaptive) {
        j["adaptive"] = {{"factor", a.adaptive->factor},
                         {"lambda_max", a.adaptive->lambda_max},
                         {"gamma_slack", a.adaptive->gamma_slack}};
    }
    return j;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct MeanStd {
    double mean = 0;
    double std = 0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    const std::string where = "config";
    reject_unknown(j, {"function", "algorithm", "budget", "runs", "seed", "sample_every", "checkpoints", "output"}, where);
    ExperimentConfig c;
    if (!j.contains("function")) throw ConfigError("missing key 'function' in config");
    if (!j.contains("algorithm")) throw ConfigError("missing key 'algorithm' in config");
    c.function = parse_function(j.at("function"));
    c.algorithm = parse_algorithm(j.at("algorithm"), c.function.n);
    c.budget = get<std::uint64_t>(j, "budget", where);
    c.runs = get_or<std::size_t>(j, "runs", 1, where);
    c.seed = get_or<std::uint64_t>(j, "seed", 0, where);
    c.sample_every = get_or<std::uint64_t>(j, "sample_every", 1000, where);
    c.checkpoints = get_or<std::vector<std::uint64_t>>(j, "checkpoints", {}, where);
    if (j.contains("output")) {
        const auto& o = j.at("output");
        reject_unknown(o, {"trajectory_csv", "summary_json"}, "output");
        c.output.trajectory_csv = get_or<std::string>(o, "trajectory_csv", "", "output");
        c.output.summary_json = get_or<std::string>(o, "summary_json", "", "output");
    }
    if (c.runs < 1) throw ConfigError("runs must be at least 1");
    if (c.budget < 1) throw ConfigError("budget must be at least 1");
    if (c.sample_every < 1) throw ConfigError("sample_every must be at least 1");
    if (c.checkpoints.empty()) c.checkpoints.push_back(c.budget);
    c.algorithm.validate(c.function.n);
    if (c.budget < c.algorithm.mu) throw ConfigError("budget must be at least mu");
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json j{{"function", function_to_json(function)},
           {"algorithm", algorithm_to_json(algorithm)},
           {"budget", budget},
           {"runs", runs},
           {"seed", seed},
           {"sample_every", sample_every},
           {"checkpoints", checkpoints}};
    json o = json::object();
    if (!output.trajectory_csv.empty()) o["trajectory_csv"] = output.trajectory_csv;
    if (!output.summary_json.empty()) o["summary_json"] = output.summary_json;
    if (!o.empty()) j["output"] = o;
    return j;
}

std::uint64_t ExperimentConfig::run_seed(std::size_t run) const { return mix_seed(seed, run); }

Problem make_problem(const FunctionSpec& spec) {
    if (spec.type == "onemax") return OneMax(spec.n);
    if (spec.type == "zeromax") return ZeroMax(spec.n);
    if (spec.type == "binval") return BinVal(spec.n);
    if (spec.type == "linear") {
        return spec.weights.empty() ? Linear::random(spec.n, spec.seed) : Linear(spec.weights);
    }
    if (spec.type == "hottopic") {
        HotTopicParams p = spec.hottopic;
        p.n = spec.n;
        p.seed = spec.seed;
        return HotTopic(HotTopicInstance(p));
    }
    throw ConfigError("unknown function type '" + spec.type + "'");
}

int max_level(const Problem& p) {
    if (const auto* ht = std::get_if<HotTopic>(&p)) return static_cast<int>(ht->instance().num_levels());
    return 0;
}

std::vector<Trajectory> run_batch(const ExperimentConfig& cfg, const Problem& f) {
    std::vector<Trajectory> out(cfg.runs);
    std::vector<std::string> errors(cfg.runs);
    const auto count = static_cast<std::ptrdiff_t>(cfg.runs);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto r = static_cast<std::size_t>(i);
        try {
            out[r] = run(cfg.algorithm, f, cfg.budget, cfg.run_seed(r), cfg.sample_every);
        } catch (const std::exception& e) {
            errors[r] = e.what();
        }
    }
    for (const auto& e : errors) {
        if (!e.empty()) throw ConfigError(e);
    }
    return out;
}

std::vector<Trajectory> run_batch_serial(const ExperimentConfig& cfg, const Problem& f) {
    std::vector<Trajectory> out;
    out.reserve(cfg.runs);
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        out.push_back(run(cfg.algorithm, f, cfg.budget, cfg.run_seed(r), cfg.sample_every));
    }
    return out;
}

const Sample& sample_at(const Trajectory& t, std::uint64_t evaluations) {
    for (const auto& s : t.samples) {
        if (s.evaluations >= evaluations) return s;
    }
    return t.samples.back();
}

ExperimentSummary summarize(const ExperimentConfig& cfg, const Problem& f, const std::vector<Trajectory>& runs,
                            std::vector<std::string> warnings) {
    ExperimentSummary s;
    s.config_echo = cfg.to_json();
    s.config_echo["tie_policy"] = "accept offspring with fitness >= parent; (mu+lambda) removes a uniformly random argmin";
    s.config_echo["problem"] = problem_name(f);
    s.warnings = std::move(warnings);

    for (std::uint64_t cp : cfg.checkpoints) {
        std::vector<double> ones, levels;
        for (const auto& t : runs) {
            const auto& smp = sample_at(t, cp);
            ones.push_back(smp.ones_fraction);
            levels.push_back(smp.level);
        }
        const auto o = mean_std(ones);
        const auto l = mean_std(levels);
        s.checkpoints.push_back({cp, o.mean, o.std, l.mean, l.std});
    }

    const int top = max_level(f);
    std::size_t reached = 0;
    double runtime_sum = 0;
    Trajectory pooled;
    for (const auto& t : runs) {
        int m = 0;
        for (const auto& smp : t.samples) m = std::max(m, smp.level);
        s.max_level_per_run.push_back(m);
        if (top > 0 && m == top) ++reached;
        s.runtime_per_run.push_back(t.runtime);
        if (t.runtime) {
            ++s.runs_terminated;
            runtime_sum += static_cast<double>(*t.runtime);
        }
        auto& in = pooled.instrumentation;
        in.generations += t.instrumentation.generations;
        in.events += t.instrumentation.events;
        in.sum_s10 += t.instrumentation.sum_s10;
        in.sum_s10_sq += t.instrumentation.sum_s10_sq;
        in.sum_s01 += t.instrumentation.sum_s01;
    }
    if (top > 0) s.runs_reaching_max_level = static_cast<double>(reached) / static_cast<double>(runs.size());
    if (s.runs_terminated > 0) s.mean_runtime = runtime_sum / static_cast<double>(s.runs_terminated);
    s.selection_bias = selection_bias_estimate(pooled);
    return s;
}

json ExperimentSummary::to_json() const {
    json j;
    j["config_echo"] = config_echo;
    json cps = json::array();
    for (const auto& c : checkpoints) {
        cps.push_back({{"evaluations", c.evaluations},
                       {"ones_mean", c.ones_mean},
                       {"ones_std", c.ones_std},
                       {"level_mean", c.level_mean},
                       {"level_std", c.level_std}});
    }
    j["checkpoints"] = cps;
    j["max_level_per_run"] = max_level_per_run;
    j["runs_reaching_max_level"] = runs_reaching_max_level ? json(*runs_reaching_max_level) : json(nullptr);
    json rt = json::array();
    for (const auto& r : runtime_per_run) rt.push_back(r ? json(*r) : json(nullptr));
    j["runtime_per_run"] = rt;
    j["runs_terminated"] = runs_terminated;
    j["mean_runtime"] = mean_runtime ? json(*mean_runtime) : json(nullptr);
    if (selection_bias) {
        j["selection_bias"] = {{"estimate", selection_bias->estimate},
                               {"standard_error", selection_bias->standard_error},
                               {"events", selection_bias->events}};
    } else {
        j["selection_bias"] = nullptr;
    }
    j["warnings"] = warnings;
    return j;
}

std::string trajectory_csv(const std::vector<Trajectory>& runs) {
    std::string out = "run,evaluations,fitness,ones_fraction,level\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
        for (const auto& s : runs[r].samples) {
            out += std::to_string(r);
            out += ',';
            out += std::to_string(s.evaluations);
            out += ',';
            out += s.best_fitness.to_string();
            out += ',';
            out += format_double(s.ones_fraction);
            out += ',';
            out += std::to_string(s.level);
            out += '\n';
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

ExperimentConfig footnote_preset(double c, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.function.type = "hottopic";
    cfg.function.n = 10000;
    cfg.function.seed = seed;
    cfg.function.hottopic = {10000, 0.25, 0.05, 0.05, 100, seed};
    cfg.algorithm.variant = Variant::OnePlusLambdaEA;
    cfg.algorithm.c = c;
    cfg.budget = 500000;
    cfg.runs = 20;
    cfg.seed = mix64(seed);
    cfg.sample_every = 1000;
    cfg.checkpoints = {100000, 200000, 500000};
    return cfg;
}

}  // namespace monoea
