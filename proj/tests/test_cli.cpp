/// @file test_cli.cpp
/// @brief End-to-end checks of the command line tool as a subprocess: the
/// synth -> label -> extract -> train -> predict -> evaluate pipeline, the
/// scenario runner, exit codes and the machine-readable error line.
///
/// Compiled only when the CLI target is built; TURBUQ_CLI_PATH points at the
/// binary.

#ifdef TURBUQ_CLI_PATH

#include "doctest.h"
#include "test_support.hpp"

#include "turbuq/dataset.hpp"
#include "turbuq/evaluation.hpp"
#include "turbuq/features.hpp"
#include "turbuq/version.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace turbuq;
using turbuq::test::TempDir;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args, const TempDir& dir) {
    const auto out_path = dir / "_stdout.txt";
    const auto err_path = dir / "_stderr.txt";
    const std::string cmd = std::string("'") + TURBUQ_CLI_PATH + "' " + args + " > '" +
                            out_path.string() + "' 2> '" + err_path.string() + "'";
    const int status = std::system(cmd.c_str());
    CliResult r;
    if (status >= 0 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

/// Last non-empty stderr line parsed as the JSON error object.
nlohmann::json error_object(const CliResult& r) {
    std::istringstream lines(r.err);
    std::string line, last;
    while (std::getline(lines, line)) {
        if (!line.empty()) last = line;
    }
    REQUIRE_FALSE(last.empty());
    return nlohmann::json::parse(last);
}

std::string q(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("version and help") {
    TempDir dir("cli_meta");
    const CliResult version = run_cli("--version", dir);
    CHECK(version.exit_code == 0);
    CHECK(version.out.find(kVersion) != std::string::npos);

    const CliResult help = run_cli("--help", dir);
    CHECK(help.exit_code == 0);
    for (const char* sub : {"extract", "label", "train", "predict", "evaluate", "kde",
                            "importance", "scenario", "synth"}) {
        CHECK(help.out.find(sub) != std::string::npos);
    }
}

TEST_CASE("usage errors exit 1 with a JSON error line") {
    TempDir dir("cli_usage");
    const CliResult none = run_cli("", dir);
    CHECK(none.exit_code == 1);
    CHECK(error_object(none)["error"]["type"] == "usage");

    const CliResult unknown = run_cli("frobnicate", dir);
    CHECK(unknown.exit_code == 1);

    // Parameter validation inside a subcommand also counts as usage.
    const CliResult small = run_cli("synth --kind channel-like --n 5 --rans " +
                                        q(dir / "r.csv") + " --hifi " + q(dir / "h.csv"),
                                    dir);
    CHECK(small.exit_code == 1);
    CHECK(error_object(small)["error"]["type"] == "usage");
}

TEST_CASE("data errors exit 2 with a JSON error line") {
    TempDir dir("cli_data");
    const CliResult missing = run_cli("extract --input " + q(dir / "absent.csv") +
                                          " --output " + q(dir / "f.csv"),
                                      dir);
    CHECK(missing.exit_code == 2);
    const nlohmann::json err = error_object(missing);
    CHECK(err["error"]["type"] == "data");
    CHECK(err["error"]["message"].get<std::string>().find("absent.csv") != std::string::npos);

    const CliResult kind = run_cli("synth --kind pipe-like --rans " + q(dir / "r.csv") +
                                       " --hifi " + q(dir / "h.csv"),
                                   dir);
    CHECK(kind.exit_code == 2);
    CHECK(error_object(kind)["error"]["type"] == "data");
}

TEST_CASE("pipeline from synthetic case to metrics") {
    TempDir dir("cli_pipeline");
    const auto rans = dir / "rans.csv";
    const auto hifi = dir / "hifi.csv";
    const auto labels_true = dir / "labels_true.csv";
    const auto labels = dir / "labels.csv";
    const auto features = dir / "features.csv";
    const auto model = dir / "model.json";
    const auto pred = dir / "pred.csv";
    const auto kde_out = dir / "kde.csv";
    const auto metrics = dir / "metrics.json";

    const CliResult synth = run_cli("synth --kind channel-like --n 60 --seed 9 --rans " +
                                        q(rans) + " --hifi " + q(hifi) + " --labels " +
                                        q(labels_true),
                                    dir);
    REQUIRE(synth.exit_code == 0);
    CHECK(std::filesystem::exists(rans));
    CHECK(std::filesystem::exists(hifi));

    // Labels recomputed from the two stress tables match the generator's
    // closed-form values.
    const CliResult label = run_cli("label --rans " + q(rans) + " --hifi " + q(hifi) +
                                        " --output " + q(labels),
                                    dir);
    REQUIRE(label.exit_code == 0);
    const LabeledDataset recomputed = read_labels_csv(labels);
    const LabeledDataset truth = read_labels_csv(labels_true);
    REQUIRE(recomputed.targets.size() == truth.targets.size());
    for (std::size_t i = 0; i < truth.targets.size(); ++i) {
        CHECK(std::abs(recomputed.targets[i] - truth.targets[i]) < 1e-10);
    }

    const CliResult extract = run_cli("extract --input " + q(rans) + " --output " + q(features),
                                      dir);
    REQUIRE(extract.exit_code == 0);
    CHECK(read_features_csv(features).size() == 60);

    const CliResult train = run_cli("train --features " + q(features) + " --labels " +
                                        q(labels) + " --model " + q(model) +
                                        " --trees 5 --seed 3 --threads 1",
                                    dir);
    REQUIRE(train.exit_code == 0);

    const CliResult predict = run_cli("predict --model " + q(model) + " --features " +
                                          q(features) + " --output " + q(pred),
                                      dir);
    REQUIRE(predict.exit_code == 0);
    {
        std::ifstream in(pred);
        std::string header;
        REQUIRE(std::getline(in, header));
        CHECK(header == "point_id,p_pred");
        std::string line;
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            REQUIRE(comma != std::string::npos);
            const double v = std::stod(line.substr(comma + 1));
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            ++rows;
        }
        CHECK(rows == 60);
    }

    const CliResult kde = run_cli("kde --train " + q(features) + " --test " + q(features) +
                                      " --out " + q(kde_out),
                                  dir);
    REQUIRE(kde.exit_code == 0);
    {
        std::ifstream in(kde_out);
        std::string header;
        REQUIRE(std::getline(in, header));
        CHECK(header == "point_id,f_kde,d_kde");
        std::string line;
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            const auto first = line.find(',');
            const auto second = line.find(',', first + 1);
            REQUIRE(second != std::string::npos);
            const double f = std::stod(line.substr(first + 1, second - first - 1));
            const double d = std::stod(line.substr(second + 1));
            CHECK(f >= 0.0);
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
            ++rows;
        }
        CHECK(rows == 60);
    }

    const CliResult evaluate = run_cli("evaluate --predictions " + q(pred) + " --labels " +
                                           q(labels) + " --kde " + q(kde_out) + " --output " +
                                           q(metrics),
                                       dir);
    REQUIRE(evaluate.exit_code == 0);
    const nlohmann::json m = nlohmann::json::parse(slurp(metrics));
    CHECK(m.at("n").get<std::size_t>() == 60);
    CHECK(m.at("rmse").get<double>() >= 0.0);

    const auto importance_out = dir / "importance.csv";
    const CliResult importance = run_cli("importance --model " + q(model) + " --features " +
                                             q(features) + " --labels " + q(labels) +
                                             " --repeats 2 --output " + q(importance_out),
                                         dir);
    REQUIRE(importance.exit_code == 0);
    {
        std::ifstream in(importance_out);
        std::string header;
        REQUIRE(std::getline(in, header));
        CHECK(header == "rank,index,name,delta_rmse");
        std::string line;
        std::size_t rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == kNumFeatures);
    }
}

TEST_CASE("training is byte-identical across thread counts") {
    TempDir dir("cli_threads");
    const auto rans = dir / "rans.csv";
    const auto hifi = dir / "hifi.csv";
    const auto labels = dir / "labels.csv";
    const auto features = dir / "features.csv";

    REQUIRE(run_cli("synth --kind hill-like --n 50 --seed 4 --rans " + q(rans) + " --hifi " +
                        q(hifi) + " --labels " + q(labels),
                    dir)
                .exit_code == 0);
    REQUIRE(run_cli("extract --input " + q(rans) + " --output " + q(features), dir).exit_code ==
            0);

    const auto model1 = dir / "model_t1.json";
    const auto model8 = dir / "model_t8.json";
    REQUIRE(run_cli("train --features " + q(features) + " --labels " + q(labels) + " --model " +
                        q(model1) + " --trees 8 --seed 5 --threads 1",
                    dir)
                .exit_code == 0);
    REQUIRE(run_cli("train --features " + q(features) + " --labels " + q(labels) + " --model " +
                        q(model8) + " --trees 8 --seed 5 --threads 8",
                    dir)
                .exit_code == 0);
    CHECK(slurp(model1) == slurp(model8));
}

TEST_CASE("scenario runner writes reports and tables") {
    TempDir dir("cli_scenario");
    const auto ch_rans = dir / "ch.csv", ch_hifi = dir / "ch_hifi.csv";
    const auto hl_rans = dir / "hl.csv", hl_hifi = dir / "hl_hifi.csv";
    REQUIRE(run_cli("synth --kind channel-like --n 40 --seed 2 --rans " + q(ch_rans) +
                        " --hifi " + q(ch_hifi),
                    dir)
                .exit_code == 0);
    REQUIRE(run_cli("synth --kind hill-like --n 40 --seed 2 --rans " + q(hl_rans) + " --hifi " +
                        q(hl_hifi),
                    dir)
                .exit_code == 0);

    ScenarioConfig cfg;
    cfg.scenario = "cli-demo";
    cfg.hyperparameters.n_trees = 5;
    cfg.importance_repeats = 1;
    cfg.cases.push_back({"channel-like", ch_rans, ch_hifi, CaseRole::Train});
    cfg.cases.push_back({"hill-like", hl_rans, hl_hifi, CaseRole::Test});
    const auto config_path = dir / "scenario.json";
    {
        std::ofstream out(config_path);
        out << cfg.to_json_text();
    }

    const auto out_dir = dir / "out";
    const std::string args = "scenario --config " + q(config_path) + " --out-dir " + q(out_dir);
    REQUIRE(run_cli(args, dir).exit_code == 0);

    const auto report_path = out_dir / "cli-demo_report.json";
    REQUIRE(std::filesystem::exists(report_path));
    CHECK(std::filesystem::exists(out_dir / "cli-demo_points.csv"));
    CHECK(std::filesystem::exists(out_dir / "scenario_table.csv"));
    CHECK(std::filesystem::exists(out_dir / "scenario_table.txt"));

    const EvaluationReport report = EvaluationReport::from_json_file(report_path);
    CHECK(report.scenario == "cli-demo");
    CHECK(report.n_test == 40);
    CHECK(report.per_point.size() == 40);

    // A rerun reproduces the report byte for byte.
    const std::string first = slurp(report_path);
    REQUIRE(run_cli(args, dir).exit_code == 0);
    CHECK(slurp(report_path) == first);
}

} // TEST_SUITE("cli")

#endif // TURBUQ_CLI_PATH
