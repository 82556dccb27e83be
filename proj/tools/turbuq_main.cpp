/// @file turbuq_main.cpp
/// Command line front end. Subcommands compose the pipeline: feature
/// extraction, labeling, forest training and prediction, evaluation, the
/// KDE extrapolation metric, permutation importance, scenario runs and
/// synthetic fixture generation.
///
/// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
/// On nonzero exit the last stderr line is a machine-readable JSON object.

#include "turbuq/csv.hpp"
#include "turbuq/dataset.hpp"
#include "turbuq/errors.hpp"
#include "turbuq/evaluation.hpp"
#include "turbuq/features.hpp"
#include "turbuq/forest.hpp"
#include "turbuq/kde.hpp"
#include "turbuq/parallel.hpp"
#include "turbuq/synthetic.hpp"
#include "turbuq/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace {

using namespace turbuq;

std::string error_json(const char* type, const std::string& message) {
    nlohmann::json j;
    j["error"] = {{"type", type}, {"message", message}};
    return j.dump();
}

/// Targets reordered to the feature table's point order. Ids must match
/// exactly in both directions; mismatches are listed (up to 20 each way).
std::vector<double> align_targets(const FeatureTable& features, const LabeledDataset& labels,
                                  const std::string& what) {
    std::unordered_map<std::int64_t, double> by_id;
    by_id.reserve(labels.point_ids.size());
    for (std::size_t i = 0; i < labels.point_ids.size(); ++i) {
        by_id.emplace(labels.point_ids[i], labels.targets[i]);
    }

    std::vector<double> targets;
    targets.reserve(features.size());
    std::vector<std::int64_t> missing;
    for (std::int64_t id : features.point_ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            missing.push_back(id);
        } else {
            targets.push_back(it->second);
        }
    }
    auto list_ids = [](const std::vector<std::int64_t>& ids) {
        std::ostringstream os;
        for (std::size_t i = 0; i < ids.size() && i < 20; ++i) {
            if (i) os << ", ";
            os << ids[i];
        }
        if (ids.size() > 20) os << ", ... (" << ids.size() << " total)";
        return os.str();
    };
    if (!missing.empty()) {
        throw data_error(what + ": no label for point_id " + list_ids(missing));
    }
    if (labels.point_ids.size() != features.size()) {
        std::vector<std::int64_t> extra;
        std::unordered_map<std::int64_t, bool> have;
        for (std::int64_t id : features.point_ids) have.emplace(id, true);
        for (std::int64_t id : labels.point_ids) {
            if (!have.count(id)) extra.push_back(id);
        }
        throw data_error(what + ": labels for unknown point_id " + list_ids(extra));
    }
    return targets;
}

struct IdColumn {
    std::vector<std::int64_t> ids;
    std::vector<double> values;
};

/// Reads a two-column CSV `point_id,<value_column>`.
IdColumn read_id_column_csv(const std::filesystem::path& path, const std::string& value_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open '" + path.string() + "'");
    const std::string origin = path.filename().string();
    const csv::Table raw = csv::read_stream(in, origin);
    csv::require_columns(raw, {"point_id", value_column}, origin);
    const int id_col = raw.column("point_id");
    const int val_col = raw.column(value_column);
    IdColumn out;
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        out.ids.push_back(csv::parse_int(raw, i, id_col, origin));
        out.values.push_back(csv::parse_double(raw, i, val_col, origin));
    }
    return out;
}

/// Values of `column` reordered to match `ids`.
std::vector<double> align_by_id(const std::vector<std::int64_t>& ids, const IdColumn& column,
                                const std::string& what) {
    std::unordered_map<std::int64_t, double> by_id;
    for (std::size_t i = 0; i < column.ids.size(); ++i) by_id.emplace(column.ids[i], column.values[i]);
    std::vector<double> out;
    out.reserve(ids.size());
    for (std::int64_t id : ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw data_error(what + ": missing point_id " + std::to_string(id));
        }
        out.push_back(it->second);
    }
    return out;
}

std::vector<std::size_t> kde_feature_columns(const std::string& spec) {
    std::vector<std::size_t> cols;
    std::string name;
    std::istringstream list(spec);
    while (std::getline(list, name, ',')) {
        if (name.empty()) throw data_error("empty feature name in '" + spec + "'");
        const std::size_t col = feature_index(name);
        for (std::size_t c : cols) {
            if (c == col) throw data_error("duplicate feature '" + name + "' in '" + spec + "'");
        }
        cols.push_back(col);
    }
    if (cols.empty()) throw data_error("no feature names in '" + spec + "'");
    return cols;
}

Matrix select_columns(const Matrix& table, const std::vector<std::size_t>& cols) {
    Matrix out(table.rows(), cols.size());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const double* src = table.row(i);
        double* dst = out.row(i);
        for (std::size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
    }
    return out;
}

std::string sanitize_filename(const std::string& id) {
    std::string out;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? std::string("scenario") : out;
}

// --------------------------------------------------------------------------
// subcommand bodies

void run_extract(const std::string& input, const std::string& output) {
    const std::vector<FlowRecord> records = read_flow_csv(input);
    if (records.empty()) throw data_error(input + ": no data rows");
    const FeatureTable table = extract_features(records);
    csv::atomic_write(output, [&](std::ostream& out) { write_features_csv(out, table); });
    std::cout << "wrote " << output << " (" << table.size() << " points, " << kNumFeatures
              << " features)\n";
}

void run_label(const std::string& rans, const std::string& hifi, const std::string& output) {
    const FlowCase flow_case = load_case("cli", rans, hifi);
    const LabeledDataset labels = compute_labels(flow_case);
    csv::atomic_write(output,
                      [&](std::ostream& out) { write_labels_csv(out, labels.point_ids, labels.targets); });
    std::cout << "wrote " << output << " (" << labels.targets.size() << " labels)\n";
}

void run_train(const std::string& features_path, const std::string& labels_path,
               const std::string& model_path, const ForestHyperparameters& hp) {
    const FeatureTable features = read_features_csv(features_path);
    const LabeledDataset labels = read_labels_csv(labels_path);
    const std::vector<double> targets = align_targets(features, labels, labels_path);
    const ForestModel model = train_forest(features.values, targets, hp, feature_names());
    csv::atomic_write(model_path, [&](std::ostream& out) { save_model(model, out); });
    std::cout << "wrote " << model_path << " (" << hp.n_trees << " trees, "
              << features.size() << " training points)\n";
}

void run_predict(const std::string& model_path, const std::string& features_path,
                 const std::string& output) {
    const ForestModel model = load_model(std::filesystem::path(model_path));
    if (model.feature_names != feature_names()) {
        throw data_error(model_path + ": model features do not match the canonical feature set");
    }
    const FeatureTable features = read_features_csv(features_path);
    const std::vector<double> pred = predict(model, features.values);
    csv::atomic_write(output, [&](std::ostream& out) {
        out << "point_id,p_pred\n";
        for (std::size_t i = 0; i < pred.size(); ++i) {
            out << features.point_ids[i] << ',' << csv::format_double(pred[i]) << '\n';
        }
    });
    std::cout << "wrote " << output << " (" << pred.size() << " predictions)\n";
}

void run_evaluate(const std::string& pred_path, const std::string& labels_path,
                  const std::string& kde_path, const std::string& output) {
    const IdColumn pred = read_id_column_csv(pred_path, "p_pred");
    const LabeledDataset labels = read_labels_csv(labels_path);
    IdColumn truth;
    truth.ids = labels.point_ids;
    truth.values = labels.targets;
    const std::vector<double> y = align_by_id(pred.ids, truth, labels_path);

    nlohmann::json metrics;
    metrics["n"] = pred.ids.size();
    metrics["rmse"] = rmse(pred.values, y);
    if (!kde_path.empty()) {
        const IdColumn kde = read_id_column_csv(kde_path, "d_kde");
        const std::vector<double> d = align_by_id(pred.ids, kde, kde_path);
        std::vector<double> abs_error(pred.values.size());
        for (std::size_t i = 0; i < pred.values.size(); ++i) {
            abs_error[i] = std::abs(pred.values[i] - y[i]);
        }
        try {
            metrics["pearson_r"] = pearson(d, abs_error);
        } catch (const constant_input_error&) {
            // correlation undefined for a constant column; omit the field
        }
    }
    csv::atomic_write(output, [&](std::ostream& out) { out << metrics.dump(2) << '\n'; });
    std::cout << "wrote " << output << " (rmse " << csv::format_double(metrics["rmse"].get<double>())
              << ")\n";
}

void run_kde(const std::string& train_path, const std::string& test_path,
             const std::string& feature_spec, const std::string& output,
             std::size_t max_train_points, std::uint64_t seed) {
    const std::vector<std::size_t> cols = kde_feature_columns(feature_spec);
    const FeatureTable train = read_features_csv(train_path);
    const FeatureTable test = read_features_csv(test_path);
    const KdeTrainingSet kde = build_kde(train.values, cols, max_train_points, seed);
    const Matrix queries = select_columns(test.values, cols);
    std::vector<double> f_kde, d_kde;
    kde.evaluate(queries, f_kde, d_kde);
    csv::atomic_write(output, [&](std::ostream& out) {
        out << "point_id,f_kde,d_kde\n";
        for (std::size_t i = 0; i < d_kde.size(); ++i) {
            out << test.point_ids[i] << ',' << csv::format_double(f_kde[i]) << ','
                << csv::format_double(d_kde[i]) << '\n';
        }
    });
    std::cout << "wrote " << output << " (" << d_kde.size() << " points, " << cols.size()
              << " kde features)\n";
}

void run_importance(const std::string& model_path, const std::string& features_path,
                    const std::string& labels_path, const std::string& output, int repeats,
                    std::uint64_t seed) {
    const ForestModel model = load_model(std::filesystem::path(model_path));
    if (model.feature_names != feature_names()) {
        throw data_error(model_path + ": model features do not match the canonical feature set");
    }
    const FeatureTable features = read_features_csv(features_path);
    const LabeledDataset labels = read_labels_csv(labels_path);
    const std::vector<double> targets = align_targets(features, labels, labels_path);
    const std::vector<FeatureImportance> ranking =
        permutation_importance(model, features.values, targets, repeats, seed);
    csv::atomic_write(output, [&](std::ostream& out) {
        out << "rank,index,name,delta_rmse\n";
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            out << (i + 1) << ',' << ranking[i].feature << ',' << ranking[i].name << ','
                << csv::format_double(ranking[i].delta_rmse) << '\n';
        }
    });
    std::cout << "wrote " << output << " (top feature: " << ranking.front().name << ")\n";
}

void run_scenarios(const std::vector<std::string>& config_paths, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<EvaluationReport> reports;
    for (const std::string& path : config_paths) {
        const ScenarioConfig cfg = ScenarioConfig::from_json_file(path);
        EvaluationReport report = run_scenario(cfg);
        const std::string stem = sanitize_filename(report.scenario);
        const std::filesystem::path report_path =
            std::filesystem::path(out_dir) / (stem + "_report.json");
        const std::filesystem::path points_path =
            std::filesystem::path(out_dir) / (stem + "_points.csv");
        report.write_json(report_path);
        csv::atomic_write(points_path, [&](std::ostream& out) { report.write_points_csv(out); });
        std::cout << "scenario " << report.scenario << ": rmse "
                  << csv::format_double(report.rmse) << ", baseline "
                  << csv::format_double(report.baseline_rmse) << ", n_test " << report.n_test
                  << "\n";
        reports.push_back(std::move(report));
    }
    const ScenarioTable table = scenario_table(reports);
    csv::atomic_write(std::filesystem::path(out_dir) / "scenario_table.csv",
                      [&](std::ostream& out) { table.write_csv(out); });
    csv::atomic_write(std::filesystem::path(out_dir) / "scenario_table.txt",
                      [&](std::ostream& out) { table.write_text(out); });
    std::cout << "wrote " << out_dir << "/scenario_table.{csv,txt} (" << reports.size()
              << " scenarios)\n";
}

void run_synth(const std::string& kind_name, std::size_t n_points, std::uint64_t seed,
               const std::string& rans_path, const std::string& hifi_path,
               const std::string& labels_path, const SyntheticProfileParams& params) {
    const SyntheticKind kind = synthetic_kind_from_name(kind_name);
    const SyntheticCase sc = generate_synthetic_case(kind, n_points, seed, params);
    csv::atomic_write(rans_path,
                      [&](std::ostream& out) { write_flow_csv(out, sc.flow.records); });
    csv::atomic_write(hifi_path,
                      [&](std::ostream& out) { write_hifi_csv(out, sc.flow.hifi_stress); });
    if (!labels_path.empty()) {
        std::vector<std::int64_t> ids;
        ids.reserve(sc.flow.records.size());
        for (const FlowRecord& rec : sc.flow.records) ids.push_back(rec.point_id);
        csv::atomic_write(labels_path,
                          [&](std::ostream& out) { write_labels_csv(out, ids, sc.p_true); });
    }
    std::cout << "wrote " << rans_path << " + " << hifi_path << " (" << kind_name << ", "
              << n_points << " points)\n";
}

void add_threads_flag(CLI::App* sub, int& threads) {
    sub->add_option("--threads", threads, "Worker thread cap (0 = all cores)")
        ->envname("TURBUQ_THREADS");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Turbulence model uncertainty toolkit: eigenvalue perturbations in the "
                 "barycentric triangle, random-forest perturbation strength, KDE "
                 "extrapolation metric"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    int threads = 0;

    auto* extract = app.add_subcommand("extract", "Flow CSV -> 56-column feature CSV");
    std::string ex_input, ex_output;
    extract->add_option("--input", ex_input, "Flow state CSV")->required();
    extract->add_option("--output", ex_output, "Feature CSV to write")->required();
    add_threads_flag(extract, threads);
    extract->callback([&] { run_extract(ex_input, ex_output); });

    auto* label = app.add_subcommand(
        "label", "Modeled + high-fidelity stresses -> perturbation strength labels");
    std::string lb_rans, lb_hifi, lb_output;
    label->add_option("--rans", lb_rans, "Flow state CSV with modeled stresses")->required();
    label->add_option("--hifi", lb_hifi, "High-fidelity stress CSV")->required();
    label->add_option("--output", lb_output, "Labels CSV to write")->required();
    add_threads_flag(label, threads);
    label->callback([&] { run_label(lb_rans, lb_hifi, lb_output); });

    auto* train = app.add_subcommand("train", "Train the random forest on features + labels");
    std::string tr_features, tr_labels, tr_model;
    ForestHyperparameters tr_hp;
    train->add_option("--features", tr_features, "Feature CSV")->required();
    train->add_option("--labels", tr_labels, "Labels CSV")->required();
    train->add_option("--model", tr_model, "Model JSON to write")->required();
    train->add_option("--trees", tr_hp.n_trees, "Number of trees");
    train->add_option("--max-depth", tr_hp.max_depth, "Maximum tree depth");
    train->add_option("--min-split", tr_hp.min_samples_split, "Minimum samples to split a node");
    train->add_option("--max-features", tr_hp.max_split_features,
                      "Candidate features per split");
    train->add_option("--seed", tr_hp.seed, "Training RNG seed");
    add_threads_flag(train, threads);
    train->callback([&] { run_train(tr_features, tr_labels, tr_model, tr_hp); });

    auto* predict_cmd = app.add_subcommand("predict", "Apply a trained model to a feature CSV");
    std::string pr_model, pr_features, pr_output;
    predict_cmd->add_option("--model", pr_model, "Model JSON")->required();
    predict_cmd->add_option("--features", pr_features, "Feature CSV")->required();
    predict_cmd->add_option("--output", pr_output, "Prediction CSV to write")->required();
    add_threads_flag(predict_cmd, threads);
    predict_cmd->callback([&] { run_predict(pr_model, pr_features, pr_output); });

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against labels");
    std::string ev_pred, ev_labels, ev_kde, ev_output;
    evaluate->add_option("--predictions", ev_pred, "Prediction CSV")->required();
    evaluate->add_option("--labels", ev_labels, "Labels CSV")->required();
    evaluate->add_option("--kde", ev_kde,
                         "Optional d_KDE CSV; adds the error/extrapolation correlation");
    evaluate->add_option("--output", ev_output, "Metrics JSON to write")->required();
    add_threads_flag(evaluate, threads);
    evaluate->callback([&] { run_evaluate(ev_pred, ev_labels, ev_kde, ev_output); });

    auto* kde = app.add_subcommand("kde", "Extrapolation metric of test points vs training data");
    std::string kd_train, kd_test, kd_output;
    std::string kd_features = "q8,q3,q7,q2,q1";
    std::size_t kd_cap = 0;
    std::uint64_t kd_seed = 42;
    kde->add_option("--train", kd_train, "Training feature CSV")->required();
    kde->add_option("--test", kd_test, "Test feature CSV")->required();
    kde->add_option("--features", kd_features, "Comma-separated feature subset");
    kde->add_option("--max-train-points", kd_cap,
                    "Subsample cap on the training set (0 = use all)");
    kde->add_option("--seed", kd_seed, "Subsampling RNG seed");
    kde->add_option("--out", kd_output, "Density/distance CSV to write")->required();
    add_threads_flag(kde, threads);
    kde->callback([&] { run_kde(kd_train, kd_test, kd_features, kd_output, kd_cap, kd_seed); });

    auto* importance = app.add_subcommand("importance", "Permutation feature importance ranking");
    std::string im_model, im_features, im_labels, im_output;
    int im_repeats = 10;
    std::uint64_t im_seed = 42;
    importance->add_option("--model", im_model, "Model JSON")->required();
    importance->add_option("--features", im_features, "Feature CSV")->required();
    importance->add_option("--labels", im_labels, "Labels CSV")->required();
    importance->add_option("--repeats", im_repeats, "Shuffles per feature");
    importance->add_option("--seed", im_seed, "Shuffle RNG seed");
    importance->add_option("--output", im_output, "Importance CSV to write")->required();
    add_threads_flag(importance, threads);
    importance->callback(
        [&] { run_importance(im_model, im_features, im_labels, im_output, im_repeats, im_seed); });

    auto* scenario = app.add_subcommand("scenario", "Run train/test scenarios from JSON configs");
    std::vector<std::string> sc_configs;
    std::string sc_out_dir = ".";
    scenario->add_option("--config", sc_configs, "Scenario config JSON (repeatable)")->required();
    scenario->add_option("--out-dir", sc_out_dir, "Directory for reports and tables");
    add_threads_flag(scenario, threads);
    scenario->callback([&] { run_scenarios(sc_configs, sc_out_dir); });

    auto* synth = app.add_subcommand("synth", "Generate a synthetic flow case with known labels");
    std::string sy_kind, sy_rans, sy_hifi, sy_labels;
    std::size_t sy_n = 200;
    std::uint64_t sy_seed = 42;
    SyntheticProfileParams sy_params;
    synth->add_option("--kind", sy_kind,
                      "Case family: channel-like, hill-like, wavy-like, convdiv-like")
        ->required();
    synth->add_option("--n", sy_n, "Number of points (>= 10)");
    synth->add_option("--seed", sy_seed, "Profile jitter seed");
    synth->add_option("--perturbation-scale", sy_params.perturbation_scale,
                      "Label field scale in [0, 1]; 0 makes all labels zero");
    synth->add_option("--anisotropy-amplitude", sy_params.anisotropy_amplitude,
                      "Barycentric walk amplitude in [0, 1]");
    synth->add_option("--rans", sy_rans, "Flow state CSV to write")->required();
    synth->add_option("--hifi", sy_hifi, "High-fidelity stress CSV to write")->required();
    synth->add_option("--labels", sy_labels, "Optional closed-form labels CSV to write");
    add_threads_flag(synth, threads);
    synth->callback(
        [&] { run_synth(sy_kind, sy_n, sy_seed, sy_rans, sy_hifi, sy_labels, sy_params); });

    for (CLI::App* sub : app.get_subcommands({})) {
        sub->parse_complete_callback([&] { set_default_threads(threads); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_json("usage", e.what()) << std::endl;
        return 1;
    } catch (const data_error& e) {
        std::cerr << error_json("data", e.what()) << std::endl;
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << error_json("numeric", e.what()) << std::endl;
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << error_json("usage", e.what()) << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what()) << std::endl;
        return 3;
    }
    return 0;
}
