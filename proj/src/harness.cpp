#include "ddsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "ddsim/error.hpp"
#include "ddsim/io.hpp"
#include "ddsim/parallel.hpp"
#include "ddsim/rng.hpp"
#include "ddsim/smm.hpp"
#include "json_util.hpp"

namespace ddsim {

using Eigen::VectorXd;
using json_util::json;

double fit_metric(const Trajectory& y_true, const Trajectory& y_hat) {
    require(y_true.channels() == y_hat.channels() && y_true.length() == y_hat.length(),
            ErrorKind::InputContract, "fit needs trajectories of equal shape");
    require(!y_true.empty(), ErrorKind::InputContract, "fit needs nonempty trajectories");
    const VectorXd y = y_true.stacked();
    const VectorXd e = y - y_hat.stacked();
    const double den = (y.array() - y.mean()).matrix().norm();
    if (!(den > 0.0)) fail(ErrorKind::UndefinedFit, "fit is undefined for a constant true output");
    return 100.0 * (1.0 - e.norm() / den);
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
    require(L0 >= 1 && Ls >= 1, ErrorKind::InputContract, "L0 and Ls must be >= 1");
    require(E0 > 0.0 && std::isfinite(E0), ErrorKind::Domain, "E0 must be positive");
    require(realizations >= 1, ErrorKind::InputContract, "realizations must be >= 1");
    require(!N.empty() && !noise.empty() && !kinds.empty(), ErrorKind::InputContract,
            "N, noise and kind lists must be nonempty");
    for (std::size_t n : N)
        require(n >= L(), ErrorKind::InsufficientData,
                "every N must be >= L = " + std::to_string(L()) + " (got " + std::to_string(n) + ")");
    for (const auto& lv : noise) {
        if (lv.kind == NoiseLevel::Kind::Variance)
            require(lv.value >= 0.0 && std::isfinite(lv.value), ErrorKind::Domain,
                    "noise variance must be nonnegative");
        else
            require(lv.value > 0.0 && std::isfinite(lv.value), ErrorKind::Domain, "SNR must be positive");
    }
    require(baseline.length >= 1 && baseline.snr > 0.0, ErrorKind::InputContract,
            "baseline experiment needs a positive length and SNR");
    if (task.type == TaskType::Custom) {
        require(task.custom.has_value(), ErrorKind::InputContract, "custom task has no data");
        require(task.custom->L0() == L0 && task.custom->Ls() == Ls, ErrorKind::InputContract,
                "custom task horizons must match L0 and Ls");
    }
}

namespace {

const std::set<std::string> kConfigKeys{
    "L0", "Ls", "L", "E0", "N", "sigma2", "snr", "noise", "kinds", "kind", "realizations", "seed",
    "task", "design", "baseline", "design_options", "threads", "model", "model_file"};

std::size_t get_size(const json& j, const char* key) {
    const json& v = j.at(key);
    require(v.is_number_integer() && v.get<long long>() >= 0, ErrorKind::InputContract,
            std::string(key) + " must be a nonnegative integer");
    return v.get<std::size_t>();
}

double get_double(const json& j, const char* key) {
    const json& v = j.at(key);
    require(v.is_number(), ErrorKind::InputContract, std::string(key) + " must be a number");
    return v.get<double>();
}

std::vector<double> get_doubles(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_number()) return {v.get<double>()};
    require(v.is_array(), ErrorKind::InputContract, std::string(key) + " must be a number or array");
    std::vector<double> out;
    for (const auto& e : v) {
        require(e.is_number(), ErrorKind::InputContract, std::string(key) + " entries must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

TaskSpec parse_task_spec(const json& j, const std::filesystem::path& base_dir) {
    TaskSpec spec;
    require(j.is_object(), ErrorKind::InputContract, "task must be an object");
    const std::string type = j.value("type", std::string("impulse"));
    if (type == "impulse") {
        spec.type = TaskType::Impulse;
    } else if (type == "damped_sine" || type == "damped-sine") {
        spec.type = TaskType::DampedSine;
        if (j.contains("omega")) spec.omega = get_double(j, "omega");
        if (j.contains("zeta")) spec.zeta = get_double(j, "zeta");
    } else if (type == "custom") {
        spec.type = TaskType::Custom;
        if (j.contains("file")) {
            std::filesystem::path p = j.at("file").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            spec.custom = load_task_json(p);
        } else {
            spec.custom = json_util::task_from_json(j);
        }
    } else {
        fail(ErrorKind::InputContract, "unknown task type '" + type + "'");
    }
    if (j.contains("random_initial_state")) spec.random_initial_state = j.at("random_initial_state").get<bool>();
    return spec;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    const json j = json_util::parse(text, "config");
    require(j.is_object(), ErrorKind::InputContract, "config must be a JSON object");
    for (const auto& [key, _] : j.items())
        require(kConfigKeys.count(key) > 0, ErrorKind::InputContract, "unknown config key '" + key + "'");
    ExperimentConfig c;
    try {
        if (j.contains("L0")) c.L0 = get_size(j, "L0");
        if (j.contains("Ls")) c.Ls = get_size(j, "Ls");
        if (j.contains("L"))
            require(get_size(j, "L") == c.L0 + c.Ls, ErrorKind::InputContract, "L must equal L0 + Ls");
        if (j.contains("E0")) c.E0 = get_double(j, "E0");
        if (j.contains("N")) {
            c.N.clear();
            for (double v : get_doubles(j, "N")) {
                require(v >= 0 && v == std::floor(v), ErrorKind::InputContract, "N must be integers");
                c.N.push_back(static_cast<std::size_t>(v));
            }
        }
        if (j.contains("sigma2") || j.contains("snr") || j.contains("noise")) c.noise.clear();
        if (j.contains("sigma2"))
            for (double v : get_doubles(j, "sigma2")) c.noise.push_back({NoiseLevel::Kind::Variance, v});
        if (j.contains("snr"))
            for (double v : get_doubles(j, "snr")) c.noise.push_back({NoiseLevel::Kind::Snr, v});
        if (j.contains("noise")) {
            for (const auto& e : j.at("noise")) {
                if (e.contains("snr"))
                    c.noise.push_back({NoiseLevel::Kind::Snr, get_double(e, "snr")});
                else
                    c.noise.push_back({NoiseLevel::Kind::Variance, get_double(e, "sigma2")});
            }
        }
        for (const char* key : {"kinds", "kind"}) {
            if (!j.contains(key)) continue;
            c.kinds.clear();
            const json& v = j.at(key);
            if (v.is_string()) {
                c.kinds.push_back(parse_matrix_kind(v.get<std::string>()));
            } else {
                for (const auto& e : v) c.kinds.push_back(parse_matrix_kind(e.get<std::string>()));
            }
        }
        if (j.contains("realizations")) c.realizations = get_size(j, "realizations");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("task")) c.task = parse_task_spec(j.at("task"), base_dir);
        if (j.contains("design")) c.design = j.at("design").get<bool>();
        if (j.contains("threads")) c.threads = get_size(j, "threads");
        if (j.contains("baseline")) {
            const json& b = j.at("baseline");
            if (b.contains("length")) c.baseline.length = get_size(b, "length");
            if (b.contains("snr")) c.baseline.snr = get_double(b, "snr");
            if (b.contains("n_h")) c.baseline.n_h = get_size(b, "n_h");
        }
        if (j.contains("design_options")) {
            const json& d = j.at("design_options");
            auto& o = c.design_options;
            if (d.contains("multistart")) o.multistart = get_size(d, "multistart");
            if (d.contains("threads")) o.threads = get_size(d, "threads");
            if (d.contains("max_outer_iterations")) o.max_outer_iterations = get_size(d, "max_outer_iterations");
            if (d.contains("max_inner_iterations")) o.max_inner_iterations = get_size(d, "max_inner_iterations");
            if (d.contains("lbfgs_memory")) o.lbfgs_memory = get_size(d, "lbfgs_memory");
            if (d.contains("constraint_tolerance")) o.constraint_tolerance = get_double(d, "constraint_tolerance");
            if (d.contains("kkt_tolerance")) o.kkt_tolerance = get_double(d, "kkt_tolerance");
            if (d.contains("stationarity_tolerance"))
                o.stationarity_tolerance = get_double(d, "stationarity_tolerance");
            if (d.contains("tie_break_tolerance")) o.tie_break_tolerance = get_double(d, "tie_break_tolerance");
        }
        if (j.contains("model")) c.model = json_util::model_from_json(j.at("model"));
        if (j.contains("model_file")) {
            std::filesystem::path p = j.at("model_file").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            c.model = load_model_json(p);
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::InputContract, std::string("invalid config: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) { return parse_config(json_text, {}); }

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_config(read_text(path), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
    json noise = json::array();
    for (const auto& lv : c.noise) {
        if (lv.kind == NoiseLevel::Kind::Snr)
            noise.push_back({{"snr", lv.value}});
        else
            noise.push_back({{"sigma2", lv.value}});
    }
    json kinds = json::array();
    for (auto k : c.kinds) kinds.push_back(std::string(to_string(k)));
    json task;
    switch (c.task.type) {
        case TaskType::Impulse: task = {{"type", "impulse"}}; break;
        case TaskType::DampedSine:
            task = {{"type", "damped_sine"}, {"omega", c.task.omega}, {"zeta", c.task.zeta}};
            break;
        case TaskType::Custom:
            task = json_util::task_to_json(*c.task.custom);
            task["type"] = "custom";
            break;
    }
    task["random_initial_state"] = c.task.random_initial_state;
    const auto& o = c.design_options;
    json j = {{"L0", c.L0},
              {"Ls", c.Ls},
              {"L", c.L()},
              {"E0", c.E0},
              {"N", c.N},
              {"noise", noise},
              {"kinds", kinds},
              {"realizations", c.realizations},
              {"seed", c.seed},
              {"task", task},
              {"design", c.design},
              {"threads", c.threads},
              {"baseline", {{"length", c.baseline.length}, {"snr", c.baseline.snr}, {"n_h", c.baseline.n_h}}},
              {"design_options",
               {{"multistart", o.multistart},
                {"threads", o.threads},
                {"max_outer_iterations", o.max_outer_iterations},
                {"max_inner_iterations", o.max_inner_iterations},
                {"lbfgs_memory", o.lbfgs_memory},
                {"constraint_tolerance", o.constraint_tolerance},
                {"kkt_tolerance", o.kkt_tolerance},
                {"stationarity_tolerance", o.stationarity_tolerance},
                {"tie_break_tolerance", o.tie_break_tolerance}}}};
    if (c.model) j["model"] = json_util::model_to_json(*c.model);
    return j.dump(2);
}

void apply_seed_override(ExperimentConfig& config) {
    const char* env = std::getenv("DDSIM_SEED");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    require(end != env && *end == '\0', ErrorKind::InputContract,
            std::string("DDSIM_SEED is not an unsigned integer: ") + env);
    config.seed = v;
}

// ---------------------------------------------------------------------------
// Pipeline pieces

StateSpaceModel experiment_model(const ExperimentConfig& config) {
    return config.model ? *config.model : benchmark_system();
}

GroundTruth make_ground_truth(const ExperimentConfig& config) {
    const StateSpaceModel model = experiment_model(config);
    require(model.nu() == 1 && model.ny() == 1, ErrorKind::Unsupported,
            "experiments support scalar-input scalar-output systems only");
    GroundTruth gt;
    const TaskSpec& spec = config.task;
    if (spec.type == TaskType::Custom) {
        gt.task = *spec.custom;
        gt.x0 = estimate_x0(model, gt.task.u_ini, gt.task.y_ini);
        const auto sim = simulate(model, gt.x0, gt.task.u_ini.concat(gt.task.u_s));
        gt.y_s = sim.y.slice(config.L0, config.Ls);
        return gt;
    }
    std::vector<double> us(config.Ls, 0.0);
    if (spec.type == TaskType::Impulse) {
        us[0] = 1.0;
    } else {
        for (std::size_t t = 0; t < config.Ls; ++t) {
            const double td = static_cast<double>(t);
            us[t] = std::sin(spec.omega * td) * std::exp(-spec.zeta * td);
        }
    }
    gt.x0 = VectorXd::Zero(static_cast<Eigen::Index>(model.nx()));
    Trajectory u_ini = Trajectory::zeros(1, config.L0);
    if (spec.random_initial_state) {
        RandomStream rng(config.seed, {streams::task});
        for (Eigen::Index i = 0; i < gt.x0.size(); ++i) gt.x0(i) = rng.normal();
        for (std::size_t t = 0; t < config.L0; ++t) u_ini(t) = rng.normal();
    }
    const Trajectory u_s = Trajectory::scalar(std::move(us));
    const auto sim = simulate(model, gt.x0, u_ini.concat(u_s));
    gt.task = {u_ini, sim.y.slice(0, config.L0), u_s};
    gt.y_s = sim.y.slice(config.L0, config.Ls);
    return gt;
}

BaselineModel estimate_experiment_baseline(const ExperimentConfig& config) {
    const StateSpaceModel model = experiment_model(config);
    const std::size_t n_h = config.baseline.n_h > 0 ? config.baseline.n_h : 4 * config.Ls;
    RandomStream input_rng(config.seed, {streams::baseline, 0});
    const Trajectory u = Trajectory::scalar(input_rng.normal_vector(config.baseline.length));
    Trajectory y = simulate(model, VectorXd::Zero(static_cast<Eigen::Index>(model.nx())), u).y;
    const VectorXd yv = y.stacked();
    const double var = (yv.array() - yv.mean()).square().mean();
    RandomStream noise_rng(config.seed, {streams::baseline, 1});
    const double sd = std::sqrt(var / config.baseline.snr);
    for (double& v : y.values()) v += sd * noise_rng.normal();
    return estimate_baseline_fir(u, y, n_h);
}

double cell_sigma2(const NoiseLevel& level, const ExperimentConfig& config, const BaselineModel& baseline) {
    if (level.kind == NoiseLevel::Kind::Variance) return level.value;
    double h2 = 0.0;
    for (double v : baseline.h) h2 += v * v;
    return config.E0 * h2 / level.value;
}

CellSetup prepare_cell(const ExperimentConfig& config, const GroundTruth& truth, const BaselineModel& baseline,
                       MatrixKind kind, std::size_t N_index, std::size_t noise_index) {
    CellSetup cell;
    cell.kind = kind;
    cell.N = config.N.at(N_index);
    cell.N_index = N_index;
    cell.noise_index = noise_index;
    cell.sigma2 = cell_sigma2(config.noise.at(noise_index), config, baseline);
    if (config.design) {
        const DesignProblem problem{truth.task, baseline, cell.sigma2, cell.N, kind, config.E0};
        DesignOptions opts = config.design_options;
        opts.seed = config.seed;
        cell.design = design_input(problem, opts);
        cell.u_d = cell.design->u_d_opt;
    } else {
        RandomStream rng(config.seed, {streams::random_input, N_index});
        std::vector<double> v = rng.normal_vector(cell.N);
        double e = 0.0;
        for (double x : v) e += x * x;
        const double scale = std::sqrt(config.E0 * static_cast<double>(cell.N) / e);
        for (double& x : v) x *= scale;
        cell.u_d = Trajectory::scalar(std::move(v));
    }
    const StateSpaceModel model = experiment_model(config);
    cell.y_d = simulate(model, VectorXd::Zero(static_cast<Eigen::Index>(model.nx())), cell.u_d).y;
    return cell;
}

std::uint64_t noise_realization(std::size_t N_index, std::size_t noise_index, std::size_t trial) {
    return (static_cast<std::uint64_t>(N_index) << 44) ^ (static_cast<std::uint64_t>(noise_index) << 32) ^
           static_cast<std::uint64_t>(trial);
}

TrialOutcome run_trial(const ExperimentConfig& config, const GroundTruth& truth, const CellSetup& cell,
                       std::size_t trial) {
    TrialOutcome out;
    try {
        const Trajectory y_noisy = noise_inject(
            cell.y_d, {cell.sigma2, config.seed}, noise_realization(cell.N_index, cell.noise_index, trial));
        const PartitionedData part = partition_data(cell.u_d, y_noisy, config.L0, config.Ls, cell.kind);
        const SmmSolution sol = solve_smm_relaxed(part, truth.task, cell.sigma2);
        out.W = fit_metric(truth.y_s, sol.y_s_hat);
        out.ok = std::isfinite(out.W);
        if (!out.ok) out.error = "non-finite fit";
    } catch (const Error& e) {
        out.ok = false;
        out.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    return out;
}

FitStatistics summarize(const std::vector<TrialOutcome>& trials) {
    FitStatistics s;
    std::vector<double> w;
    for (const auto& t : trials) {
        if (t.ok)
            w.push_back(t.W);
        else
            ++s.failures;
    }
    s.count = w.size();
    if (w.empty()) {
        s.mean = s.median = s.q1 = s.q3 = s.min = s.max = std::nan("");
        return s;
    }
    double sum = 0.0;
    for (double v : w) sum += v;
    s.mean = sum / static_cast<double>(w.size());
    std::sort(w.begin(), w.end());
    auto quantile = [&](double p) {
        const double h = p * static_cast<double>(w.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, w.size() - 1);
        return w[lo] + (h - static_cast<double>(lo)) * (w[hi] - w[lo]);
    };
    s.median = quantile(0.5);
    s.q1 = quantile(0.25);
    s.q3 = quantile(0.75);
    s.min = w.front();
    s.max = w.back();
    return s;
}

double sign_test_p_value(std::size_t wins, std::size_t losses) {
    const std::size_t n = wins + losses;
    if (n == 0) return 1.0;
    const std::size_t k = std::min(wins, losses);
    // P(X <= k) for X ~ Bin(n, 1/2), summed in log space.
    const double log_half_n = static_cast<double>(n) * std::log(0.5);
    double tail = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
        const double lc = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
                          std::lgamma(static_cast<double>(n - i) + 1.0);
        tail += std::exp(lc + log_half_n);
    }
    return std::min(1.0, 2.0 * tail);
}

SignTest paired_sign_test(const FitReport& hankel, const FitReport& page) {
    require(hankel.trials.size() == page.trials.size(), ErrorKind::InputContract,
            "sign test needs paired trials of equal count");
    SignTest st;
    st.N = page.N;
    st.noise_index = page.noise_index;
    st.sigma2 = page.sigma2;
    for (std::size_t i = 0; i < page.trials.size(); ++i) {
        if (!hankel.trials[i].ok || !page.trials[i].ok) continue;
        const double d = page.trials[i].W - hankel.trials[i].W;
        if (d > 0)
            ++st.wins;
        else if (d < 0)
            ++st.losses;
        else
            ++st.ties;
    }
    st.p_value = sign_test_p_value(st.wins, st.losses);
    return st;
}

const FitReport* ExperimentResult::find(MatrixKind kind, std::size_t N, std::size_t noise_index) const {
    for (const auto& c : cells)
        if (c.kind == kind && c.N == N && c.noise_index == noise_index) return &c;
    return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.baseline = estimate_experiment_baseline(config);
    const GroundTruth truth = make_ground_truth(config);

    struct CellKey {
        MatrixKind kind;
        std::size_t n, s;
    };
    std::vector<CellKey> keys;
    for (std::size_t n = 0; n < config.N.size(); ++n)
        for (std::size_t s = 0; s < config.noise.size(); ++s)
            for (auto kind : config.kinds) keys.push_back({kind, n, s});

    std::vector<CellSetup> setups(keys.size());
    parallel_for(keys.size(), config.threads, [&](std::size_t i) {
        try {
            setups[i] = prepare_cell(config, truth, result.baseline, keys[i].kind, keys[i].n, keys[i].s);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "cell " << to_string(keys[i].kind) << " N=" << config.N[keys[i].n] << " noise#" << keys[i].s
               << ": input design failed: " << e.what();
            throw Error(e.kind(), os.str());
        }
    });

    for (std::size_t i = 0; i < keys.size(); ++i) {
        const CellSetup& cell = setups[i];
        FitReport rep;
        rep.kind = cell.kind;
        rep.N = cell.N;
        rep.noise_index = cell.noise_index;
        rep.sigma2 = cell.sigma2;
        if (cell.design) rep.design_objective = cell.design->objective;
        rep.u_d = cell.u_d;
        rep.trials.resize(config.realizations);
        parallel_for(config.realizations, config.threads,
                     [&](std::size_t t) { rep.trials[t] = run_trial(config, truth, cell, t); });
        rep.stats = summarize(rep.trials);
        if (2 * rep.stats.failures > rep.trials.size()) {
            std::string first;
            for (const auto& t : rep.trials)
                if (!t.ok) {
                    first = t.error;
                    break;
                }
            std::ostringstream os;
            os << "cell " << to_string(cell.kind) << " N=" << cell.N << " sigma2=" << cell.sigma2 << ": "
               << rep.stats.failures << " of " << rep.trials.size() << " trials failed (first: " << first << ")";
            fail(ErrorKind::SolverFailure, os.str());
        }
        result.cells.push_back(std::move(rep));
    }

    for (std::size_t n = 0; n < config.N.size(); ++n)
        for (std::size_t s = 0; s < config.noise.size(); ++s) {
            const FitReport* h = result.find(MatrixKind::Hankel, config.N[n], s);
            const FitReport* p = result.find(MatrixKind::Page, config.N[n], s);
            if (h && p) result.sign_tests.push_back(paired_sign_test(*h, *p));
        }
    return result;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json stats_json(const FitStatistics& s) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return {{"count", s.count},   {"failures", s.failures}, {"mean", num(s.mean)}, {"median", num(s.median)},
            {"q1", num(s.q1)},    {"q3", num(s.q3)},        {"min", num(s.min)},   {"max", num(s.max)}};
}

}  // namespace

std::string raw_csv(const ExperimentResult& result) {
    std::string out = "kind,N,noise_index,sigma2,trial,W,status\n";
    for (const auto& c : result.cells)
        for (std::size_t t = 0; t < c.trials.size(); ++t) {
            const auto& tr = c.trials[t];
            out += std::string(to_string(c.kind)) + ',' + std::to_string(c.N) + ',' + std::to_string(c.noise_index) +
                   ',' + fmt(c.sigma2) + ',' + std::to_string(t) + ',' + (tr.ok ? fmt(tr.W) : std::string()) + ',' +
                   (tr.ok ? "ok" : "failed") + '\n';
        }
    return out;
}

std::string summary_csv(const ExperimentResult& result) {
    std::string out = "kind,N,noise_index,sigma2,count,failures,mean,median,q1,q3,min,max,design_objective\n";
    for (const auto& c : result.cells) {
        const auto& s = c.stats;
        out += std::string(to_string(c.kind)) + ',' + std::to_string(c.N) + ',' + std::to_string(c.noise_index) + ',' +
               fmt(c.sigma2) + ',' + std::to_string(s.count) + ',' + std::to_string(s.failures) + ',' + fmt(s.mean) +
               ',' + fmt(s.median) + ',' + fmt(s.q1) + ',' + fmt(s.q3) + ',' + fmt(s.min) + ',' + fmt(s.max) + ',' +
               (c.design_objective ? fmt(*c.design_objective) : std::string()) + '\n';
    }
    return out;
}

std::string report_json(const ExperimentResult& result) {
    json cells = json::array();
    for (const auto& c : result.cells) {
        json errors = json::array();
        for (std::size_t t = 0; t < c.trials.size(); ++t)
            if (!c.trials[t].ok) errors.push_back({{"trial", t}, {"error", c.trials[t].error}});
        json cell = {{"kind", std::string(to_string(c.kind))},
                     {"N", c.N},
                     {"noise_index", c.noise_index},
                     {"sigma2", c.sigma2},
                     {"stats", stats_json(c.stats)},
                     {"errors", errors}};
        if (c.design_objective) cell["design_objective"] = *c.design_objective;
        cells.push_back(std::move(cell));
    }
    json tests = json::array();
    for (const auto& s : result.sign_tests)
        tests.push_back({{"N", s.N},
                         {"noise_index", s.noise_index},
                         {"sigma2", s.sigma2},
                         {"page_wins", s.wins},
                         {"hankel_wins", s.losses},
                         {"ties", s.ties},
                         {"p_value", s.p_value}});
    json baseline = json::array();
    for (double v : result.baseline.h) baseline.push_back(v);
    return json({{"cells", cells}, {"sign_tests", tests}, {"baseline_h", baseline}}).dump(2);
}

void write_experiment(const ExperimentResult& result, const ExperimentConfig& config,
                      const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "designs", ec);
    if (ec) fail(ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());
    write_text(out_dir / "raw.csv", raw_csv(result));
    write_text(out_dir / "summary.csv", summary_csv(result));
    write_text(out_dir / "report.json", report_json(result));
    write_text(out_dir / "config.json", config_to_json(config));
    for (const auto& c : result.cells) {
        const std::string name = std::string(to_string(c.kind)) + "_N" + std::to_string(c.N) + "_noise" +
                                 std::to_string(c.noise_index) + ".csv";
        save_trajectory_csv(out_dir / "designs" / name, c.u_d);
    }
}

}  // namespace ddsim
