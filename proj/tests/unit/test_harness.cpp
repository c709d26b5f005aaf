#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "ddsim/error.hpp"
#include "ddsim/harness.hpp"

using namespace ddsim;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig c;
    c.N = {28};
    c.noise = {{NoiseLevel::Kind::Variance, 0.01}};
    c.realizations = 6;
    c.design_options.multistart = 1;
    c.threads = 2;
    return c;
}

std::vector<double> parse_raw_W(const std::string& csv, const std::string& kind) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<double> w;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (f[0] == kind && f.size() > 6 && f[6] == "ok") w.push_back(std::stod(f[5]));
    }
    return w;
}

}  // namespace

TEST_SUITE("harness") {
    TEST_CASE("fit metric") {
        Trajectory y = Trajectory::scalar({0, 2});
        CHECK(fit_metric(y, y) == 100.0);
        CHECK(fit_metric(y, Trajectory::scalar({1, 1})) == doctest::Approx(0.0));
        Trajectory z = Trajectory::scalar({1, 4, 2, 8});
        CHECK(fit_metric(z, Trajectory::scalar({3.75, 3.75, 3.75, 3.75})) == doctest::Approx(0.0));
        CHECK(fit_metric(z, Trajectory::scalar({1, 4, 2, 7})) < 100.0);
        try {
            (void)fit_metric(Trajectory::scalar({2, 2}), Trajectory::scalar({1, 1}));
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::UndefinedFit);
        }
        CHECK_THROWS_AS((void)fit_metric(y, Trajectory::scalar({1, 2, 3})), Error);
    }

    TEST_CASE("config parsing and validation") {
        auto c = parse_experiment_config(R"({"N": [28, 56], "sigma2": [0.001], "snr": 100, "kinds": ["page"],
            "realizations": 3, "seed": 9, "task": {"type": "damped_sine", "zeta": 0.03}})");
        CHECK(c.N == std::vector<std::size_t>{28, 56});
        REQUIRE(c.noise.size() == 2);
        CHECK(c.noise[1].kind == NoiseLevel::Kind::Snr);
        CHECK(c.kinds == std::vector<MatrixKind>{MatrixKind::Page});
        CHECK(c.task.type == TaskType::DampedSine);
        CHECK(c.task.zeta == 0.03);
        CHECK(c.seed == 9);
        auto back = parse_experiment_config(config_to_json(c));
        CHECK(back.N == c.N);
        CHECK(back.noise.size() == 2);
        CHECK(back.task.zeta == 0.03);
        CHECK_THROWS_AS((void)parse_experiment_config(R"({"N": [10]})"), Error);
        CHECK_THROWS_AS((void)parse_experiment_config(R"({"realizations": 0})"), Error);
        CHECK_THROWS_AS((void)parse_experiment_config(R"({"L0": 4, "Ls": 10, "L": 13})"), Error);
        CHECK_THROWS_AS((void)parse_experiment_config(R"({"bogus": 1})"), Error);
        CHECK_THROWS_AS((void)parse_experiment_config("{not json"), Error);
    }

    TEST_CASE("seed override from the environment") {
        ExperimentConfig c;
        c.seed = 1;
        setenv("DDSIM_SEED", "77", 1);
        apply_seed_override(c);
        CHECK(c.seed == 77);
        setenv("DDSIM_SEED", "x", 1);
        CHECK_THROWS_AS(apply_seed_override(c), Error);
        unsetenv("DDSIM_SEED");
        apply_seed_override(c);
        CHECK(c.seed == 77);
    }

    TEST_CASE("summary statistics") {
        std::vector<TrialOutcome> t{{1, true, ""}, {2, true, ""}, {3, true, ""}, {4, true, ""}, {0, false, "x"}};
        auto s = summarize(t);
        CHECK(s.count == 4);
        CHECK(s.failures == 1);
        CHECK(s.mean == 2.5);
        CHECK(s.median == 2.5);
        CHECK(s.q1 == 1.75);
        CHECK(s.q3 == 3.25);
        CHECK(s.min == 1);
        CHECK(s.max == 4);
    }

    TEST_CASE("sign test") {
        CHECK(sign_test_p_value(10, 0) == doctest::Approx(2.0 / 1024.0));
        CHECK(sign_test_p_value(5, 5) == 1.0);
        CHECK(sign_test_p_value(0, 0) == 1.0);
        // P(X <= 2) for n = 10 doubled: 2 * 56 / 1024
        CHECK(sign_test_p_value(8, 2) == doctest::Approx(112.0 / 1024.0));
        CHECK(sign_test_p_value(150, 50) < 1e-10);
    }

    TEST_CASE("ground truth tasks") {
        ExperimentConfig c;
        auto gt = make_ground_truth(c);
        CHECK(gt.task.u_s(0) == 1.0);
        CHECK(gt.task.y_ini.squared_norm() == 0.0);
        CHECK(gt.y_s(0) == 0.0);
        CHECK(gt.y_s(1) == doctest::Approx(0.1159));
        c.task.type = TaskType::DampedSine;
        auto ds = make_ground_truth(c);
        CHECK(ds.task.u_s(1) == doctest::Approx(std::sin(0.5) * std::exp(-0.3)));
        c.task.random_initial_state = true;
        auto rs = make_ground_truth(c);
        CHECK(rs.x0.norm() > 0.0);
        CHECK(rs.task.y_ini.squared_norm() > 0.0);
    }

    TEST_CASE("noise-free trials are exact") {
        ExperimentConfig c = tiny_config();
        // long enough for exact representation with both matrix kinds
        c.N = {280};
        c.design = false;
        c.noise = {{NoiseLevel::Kind::Variance, 0.0}};
        c.realizations = 2;
        auto r = run_experiment(c);
        for (const auto& cell : r.cells)
            for (const auto& t : cell.trials) {
                CHECK(t.ok);
                CHECK(t.W >= 99.99);
            }
    }

    TEST_CASE("small experiment: determinism, pairing, statistics integrity") {
        ExperimentConfig c = tiny_config();
        auto a = run_experiment(c);
        c.threads = 1;
        auto b = run_experiment(c);
        CHECK(raw_csv(a) == raw_csv(b));
        CHECK(a.cells.size() == 2);
        CHECK(a.sign_tests.size() == 1);
        const std::string raw = raw_csv(a);
        for (auto kind : {MatrixKind::Hankel, MatrixKind::Page}) {
            auto w = parse_raw_W(raw, std::string(to_string(kind)));
            double sum = 0.0;
            for (double v : w) sum += v;
            const auto* cell = a.find(kind, 28, 0);
            REQUIRE(cell != nullptr);
            CHECK(std::abs(sum / static_cast<double>(w.size()) - cell->stats.mean) <= 1e-12);
        }
        c.realizations = 1;
        auto one = run_experiment(c);
        const auto& cell = one.cells.front();
        CHECK(cell.stats.mean == cell.trials[0].W);
        CHECK(cell.stats.median == cell.trials[0].W);
        CHECK(cell.trials[0].W == a.cells.front().trials[0].W);
    }

    TEST_CASE("undesigned Page input below the column bound fails every trial and aborts") {
        ExperimentConfig c = tiny_config();
        c.design = false;
        c.kinds = {MatrixKind::Page};
        try {
            (void)run_experiment(c);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::SolverFailure);
            CHECK(std::string(e.what()).find("trials failed") != std::string::npos);
        }
    }
}
