#include "turbuq/evaluation.hpp"

#include "turbuq/csv.hpp"
#include "turbuq/kde.hpp"
#include "turbuq/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace turbuq {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("pearson: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    }
    if (a.size() < 2) throw std::invalid_argument("pearson: need at least 2 samples");
    const auto n = static_cast<double>(a.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0) throw constant_input_error("pearson: first input is constant");
    if (sbb <= 0.0) throw constant_input_error("pearson: second input is constant");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CaseData case_data_from(const FlowCase& flow_case, int threads) {
    CaseData data;
    data.name = flow_case.name;
    data.features = extract_features(flow_case.records, threads);
    const LabeledDataset labels = compute_labels(flow_case);
    data.targets = labels.targets;
    data.positions.reserve(flow_case.records.size());
    for (const FlowRecord& rec : flow_case.records) {
        data.positions.push_back({rec.position[0], rec.position[1]});
    }
    return data;
}

const char* case_role_name(CaseRole role) {
    switch (role) {
    case CaseRole::Train: return "train";
    case CaseRole::Test: return "test";
    case CaseRole::Both: return "both";
    }
    throw std::invalid_argument("unknown case role");
}

CaseRole case_role_from_name(const std::string& name) {
    if (name == "train") return CaseRole::Train;
    if (name == "test") return CaseRole::Test;
    if (name == "both") return CaseRole::Both;
    throw data_error("unknown case role '" + name + "' (expected train, test or both)");
}

void ScenarioConfig::validate() const {
    if (scenario.empty()) throw data_error("scenario config: missing scenario id");
    hyperparameters.validate();
    bool has_train = false, has_test = false;
    for (const ScenarioCase& c : cases) {
        if (c.role != CaseRole::Test) has_train = true;
        if (c.role != CaseRole::Train) has_test = true;
        if (c.name.empty()) throw data_error("scenario '" + scenario + "': case without a name");
    }
    for (std::size_t i = 0; i < cases.size(); ++i) {
        for (std::size_t j = i + 1; j < cases.size(); ++j) {
            if (cases[i].name == cases[j].name) {
                throw data_error("scenario '" + scenario + "': duplicate case name '" +
                                 cases[i].name + "'");
            }
        }
    }
    if (!has_train) throw data_error("scenario '" + scenario + "': no training case");
    if (!has_test) throw data_error("scenario '" + scenario + "': no test case");
    for (const std::string& f : kde_features) feature_index(f); // throws on unknown names
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw data_error(origin + ": malformed JSON: " + e.what());
    }
    try {
        ScenarioConfig cfg;
        cfg.scenario = j.at("scenario").get<std::string>();
        cfg.seed = j.value("seed", std::uint64_t{42});
        if (j.contains("hyperparameters")) {
            const auto& hp = j.at("hyperparameters");
            cfg.hyperparameters.n_trees = hp.value("n_trees", cfg.hyperparameters.n_trees);
            cfg.hyperparameters.max_depth = hp.value("max_depth", cfg.hyperparameters.max_depth);
            cfg.hyperparameters.min_samples_split =
                hp.value("min_samples_split", cfg.hyperparameters.min_samples_split);
            cfg.hyperparameters.max_split_features =
                hp.value("max_split_features", cfg.hyperparameters.max_split_features);
            cfg.hyperparameters.bootstrap = hp.value("bootstrap", cfg.hyperparameters.bootstrap);
        }
        cfg.hyperparameters.seed = cfg.seed;
        cfg.kde_features = j.value("kde_features", std::vector<std::string>{});
        cfg.importance_repeats = j.value("importance_repeats", 10);
        for (const auto& cj : j.at("cases")) {
            ScenarioCase c;
            c.name = cj.at("name").get<std::string>();
            c.rans_path = cj.at("rans").get<std::string>();
            c.hifi_path = cj.at("hifi").get<std::string>();
            c.role = case_role_from_name(cj.at("role").get<std::string>());
            cfg.cases.push_back(std::move(c));
        }
        cfg.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(origin + ": invalid scenario config: " + e.what());
    }
}

ScenarioConfig ScenarioConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), path.filename().string());
}

std::string ScenarioConfig::to_json_text() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["hyperparameters"] = {{"n_trees", hyperparameters.n_trees},
                            {"max_depth", hyperparameters.max_depth},
                            {"min_samples_split", hyperparameters.min_samples_split},
                            {"max_split_features", hyperparameters.max_split_features},
                            {"bootstrap", hyperparameters.bootstrap}};
    j["kde_features"] = kde_features;
    j["importance_repeats"] = importance_repeats;
    j["cases"] = nlohmann::json::array();
    for (const ScenarioCase& c : cases) {
        j["cases"].push_back({{"name", c.name},
                              {"rans", c.rans_path.string()},
                              {"hifi", c.hifi_path.string()},
                              {"role", case_role_name(c.role)}});
    }
    return j.dump(2) + "\n";
}

std::string EvaluationReport::to_json_text() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["hyperparameters"] = {{"n_trees", hyperparameters.n_trees},
                            {"max_depth", hyperparameters.max_depth},
                            {"min_samples_split", hyperparameters.min_samples_split},
                            {"max_split_features", hyperparameters.max_split_features},
                            {"bootstrap", hyperparameters.bootstrap}};
    j["train_cases"] = train_cases;
    j["test_cases"] = test_cases;
    j["n_train"] = n_train;
    j["n_test"] = n_test;
    j["rmse"] = rmse;
    j["baseline_rmse"] = baseline_rmse;
    if (pearson_r) j["pearson_r"] = *pearson_r;
    j["kde_features"] = kde_features;
    j["importance"] = nlohmann::json::array();
    for (const FeatureImportance& fi : importance) {
        j["importance"].push_back(
            {{"feature", fi.feature}, {"name", fi.name}, {"delta_rmse", fi.delta_rmse}});
    }
    j["per_point"] = nlohmann::json::array();
    for (const PerPointRow& r : per_point) {
        j["per_point"].push_back(
            {r.point_id, r.x, r.y, r.p_true, r.p_pred, r.abs_error, r.d_kde});
    }
    j["toolkit_version"] = toolkit_version;
    return j.dump(2) + "\n";
}

EvaluationReport EvaluationReport::from_json_text(const std::string& text,
                                                  const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw data_error(origin + ": malformed JSON: " + e.what());
    }
    try {
        EvaluationReport r;
        r.scenario = j.at("scenario").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        const auto& hp = j.at("hyperparameters");
        r.hyperparameters.n_trees = hp.at("n_trees").get<int>();
        r.hyperparameters.max_depth = hp.at("max_depth").get<int>();
        r.hyperparameters.min_samples_split = hp.at("min_samples_split").get<int>();
        r.hyperparameters.max_split_features = hp.at("max_split_features").get<int>();
        r.hyperparameters.bootstrap = hp.value("bootstrap", true);
        r.hyperparameters.seed = r.seed;
        r.train_cases = j.at("train_cases").get<std::vector<std::string>>();
        r.test_cases = j.at("test_cases").get<std::vector<std::string>>();
        r.n_train = j.at("n_train").get<std::size_t>();
        r.n_test = j.at("n_test").get<std::size_t>();
        r.rmse = j.at("rmse").get<double>();
        r.baseline_rmse = j.at("baseline_rmse").get<double>();
        if (j.contains("pearson_r")) r.pearson_r = j.at("pearson_r").get<double>();
        r.kde_features = j.at("kde_features").get<std::vector<std::string>>();
        for (const auto& fj : j.at("importance")) {
            r.importance.push_back({fj.at("feature").get<int>(), fj.at("name").get<std::string>(),
                                    fj.at("delta_rmse").get<double>()});
        }
        for (const auto& pj : j.at("per_point")) {
            PerPointRow row;
            row.point_id = pj.at(0).get<std::int64_t>();
            row.x = pj.at(1).get<double>();
            row.y = pj.at(2).get<double>();
            row.p_true = pj.at(3).get<double>();
            row.p_pred = pj.at(4).get<double>();
            row.abs_error = pj.at(5).get<double>();
            row.d_kde = pj.at(6).get<double>();
            r.per_point.push_back(row);
        }
        r.toolkit_version = j.at("toolkit_version").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(origin + ": invalid report: " + e.what());
    }
}

void EvaluationReport::write_json(const std::filesystem::path& path) const {
    csv::atomic_write(path, [&](std::ostream& out) { out << to_json_text(); });
}

EvaluationReport EvaluationReport::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), path.filename().string());
}

void EvaluationReport::write_points_csv(std::ostream& out) const {
    out << "point_id,x,y,p_true,p_pred,abs_error,d_kde\n";
    for (const PerPointRow& r : per_point) {
        out << r.point_id << ',' << csv::format_double(r.x) << ',' << csv::format_double(r.y)
            << ',' << csv::format_double(r.p_true) << ',' << csv::format_double(r.p_pred) << ','
            << csv::format_double(r.abs_error) << ',' << csv::format_double(r.d_kde) << '\n';
    }
}

namespace {

/// Concatenates the feature rows and targets of the selected cases.
void concatenate(const std::vector<CaseData>& cases, const std::vector<std::size_t>& which,
                 Matrix& features, std::vector<double>& targets) {
    std::size_t rows = 0;
    for (std::size_t c : which) rows += cases[c].features.size();
    features = Matrix(rows, kNumFeatures);
    targets.clear();
    targets.reserve(rows);
    std::size_t at = 0;
    for (std::size_t c : which) {
        const Matrix& src = cases[c].features.values;
        std::copy(src.data().begin(), src.data().end(), features.row(at));
        at += src.rows();
        targets.insert(targets.end(), cases[c].targets.begin(), cases[c].targets.end());
    }
}

double constant_prediction_rmse(double value, const std::vector<double>& truth) {
    return rmse(std::vector<double>(truth.size(), value), truth);
}

} // namespace

EvaluationReport run_scenario(const ScenarioConfig& cfg, int threads) {
    cfg.validate();
    try {
        std::vector<CaseData> data;
        data.reserve(cfg.cases.size());
        for (const ScenarioCase& c : cfg.cases) {
            data.push_back(case_data_from(load_case(c.name, c.rans_path, c.hifi_path), threads));
        }

        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
            if (cfg.cases[i].role != CaseRole::Test) train_idx.push_back(i);
            if (cfg.cases[i].role != CaseRole::Train) test_idx.push_back(i);
        }

        Matrix train_x, test_x;
        std::vector<double> train_y, test_y;
        concatenate(data, train_idx, train_x, train_y);
        concatenate(data, test_idx, test_x, test_y);

        EvaluationReport report;
        report.scenario = cfg.scenario;
        report.seed = cfg.seed;
        report.hyperparameters = cfg.hyperparameters;
        report.hyperparameters.seed = cfg.seed;
        for (std::size_t i : train_idx) report.train_cases.push_back(cfg.cases[i].name);
        for (std::size_t i : test_idx) report.test_cases.push_back(cfg.cases[i].name);
        report.n_train = train_y.size();
        report.n_test = test_y.size();
        report.toolkit_version = kVersion;

        const ForestModel model =
            train_forest(train_x, train_y, report.hyperparameters, feature_names(), threads);
        const std::vector<double> pred = predict(model, test_x, threads);
        report.rmse = rmse(pred, test_y);

        double train_mean = 0.0;
        for (double y : train_y) train_mean += y;
        train_mean /= static_cast<double>(train_y.size());
        report.baseline_rmse = constant_prediction_rmse(train_mean, test_y);

        report.importance = permutation_importance(model, test_x, test_y, cfg.importance_repeats,
                                                   cfg.seed, threads);

        report.kde_features = cfg.kde_features.empty() ? default_kde_features() : cfg.kde_features;
        std::vector<std::size_t> kde_cols;
        for (const std::string& f : report.kde_features) kde_cols.push_back(feature_index(f));
        const KdeTrainingSet kde = build_kde(train_x, kde_cols);
        Matrix test_subset(test_x.rows(), kde_cols.size());
        for (std::size_t i = 0; i < test_x.rows(); ++i) {
            for (std::size_t j = 0; j < kde_cols.size(); ++j) {
                test_subset.row(i)[j] = test_x.row(i)[kde_cols[j]];
            }
        }
        std::vector<double> f_kde, d_kde;
        kde.evaluate(test_subset, f_kde, d_kde, threads);

        std::vector<double> abs_error(pred.size());
        for (std::size_t i = 0; i < pred.size(); ++i) abs_error[i] = std::abs(pred[i] - test_y[i]);
        try {
            report.pearson_r = pearson(d_kde, abs_error);
        } catch (const constant_input_error&) {
            report.pearson_r.reset();
        }

        std::size_t at = 0;
        for (std::size_t c : test_idx) {
            for (std::size_t i = 0; i < data[c].features.size(); ++i, ++at) {
                PerPointRow row;
                row.point_id = data[c].features.point_ids[i];
                row.x = data[c].positions[i][0];
                row.y = data[c].positions[i][1];
                row.p_true = test_y[at];
                row.p_pred = pred[at];
                row.abs_error = abs_error[at];
                row.d_kde = d_kde[at];
                report.per_point.push_back(row);
            }
        }
        return report;
    } catch (const data_error& e) {
        throw data_error("scenario '" + cfg.scenario + "': " + e.what());
    } catch (const numeric_error& e) {
        throw numeric_error("scenario '" + cfg.scenario + "': " + e.what());
    }
}

ScenarioTable scenario_table(const std::vector<EvaluationReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("scenario_table: no reports");
    ScenarioTable table;
    for (const EvaluationReport& r : reports) {
        table.scenario_ids.push_back(r.scenario);
        table.rmse.push_back(r.rmse);
        for (const std::string& name : r.train_cases) {
            if (std::find(table.case_names.begin(), table.case_names.end(), name) ==
                table.case_names.end()) {
                table.case_names.push_back(name);
            }
        }
        for (const std::string& name : r.test_cases) {
            if (std::find(table.case_names.begin(), table.case_names.end(), name) ==
                table.case_names.end()) {
                table.case_names.push_back(name);
            }
        }
    }
    table.cells.assign(table.case_names.size(),
                       std::vector<std::string>(table.scenario_ids.size()));
    for (std::size_t s = 0; s < reports.size(); ++s) {
        for (std::size_t c = 0; c < table.case_names.size(); ++c) {
            const std::string& name = table.case_names[c];
            const bool in_train = std::find(reports[s].train_cases.begin(),
                                            reports[s].train_cases.end(),
                                            name) != reports[s].train_cases.end();
            const bool in_test = std::find(reports[s].test_cases.begin(),
                                           reports[s].test_cases.end(),
                                           name) != reports[s].test_cases.end();
            if (in_train && in_test) {
                table.cells[c][s] = "xo";
            } else if (in_train) {
                table.cells[c][s] = "x";
            } else if (in_test) {
                table.cells[c][s] = "o";
            }
        }
    }
    return table;
}

void ScenarioTable::write_csv(std::ostream& out) const {
    out << "case";
    for (const std::string& id : scenario_ids) out << ',' << id;
    out << '\n';
    for (std::size_t c = 0; c < case_names.size(); ++c) {
        out << case_names[c];
        for (std::size_t s = 0; s < scenario_ids.size(); ++s) out << ',' << cells[c][s];
        out << '\n';
    }
    out << "RMSE";
    // The table is a rounded digest; full-precision errors live in the report
    // JSON. Keep both renderings rounding identically.
    for (double v : rmse) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", v);
        out << ',' << buf;
    }
    out << '\n';
}

void ScenarioTable::write_text(std::ostream& out) const {
    std::vector<std::string> rmse_text(rmse.size());
    for (std::size_t s = 0; s < rmse.size(); ++s) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", rmse[s]);
        rmse_text[s] = buf;
    }
    std::size_t name_width = 4; // "RMSE"
    for (const std::string& n : case_names) name_width = std::max(name_width, n.size());
    std::vector<std::size_t> col_width(scenario_ids.size());
    for (std::size_t s = 0; s < scenario_ids.size(); ++s) {
        col_width[s] = std::max(scenario_ids[s].size(), rmse_text[s].size());
        for (std::size_t c = 0; c < case_names.size(); ++c) {
            col_width[s] = std::max(col_width[s], cells[c][s].size());
        }
    }
    auto pad_left = [&out](const std::string& text, std::size_t width) {
        for (std::size_t i = text.size(); i < width; ++i) out << ' ';
        out << text;
    };
    auto pad_right = [&out](const std::string& text, std::size_t width) {
        out << text;
        for (std::size_t i = text.size(); i < width; ++i) out << ' ';
    };
    pad_right("case", name_width);
    for (std::size_t s = 0; s < scenario_ids.size(); ++s) {
        out << "  ";
        pad_left(scenario_ids[s], col_width[s]);
    }
    out << '\n';
    for (std::size_t c = 0; c < case_names.size(); ++c) {
        pad_right(case_names[c], name_width);
        for (std::size_t s = 0; s < scenario_ids.size(); ++s) {
            out << "  ";
            pad_left(cells[c][s].empty() ? "-" : cells[c][s], col_width[s]);
        }
        out << '\n';
    }
    pad_right("RMSE", name_width);
    for (std::size_t s = 0; s < scenario_ids.size(); ++s) {
        out << "  ";
        pad_left(rmse_text[s], col_width[s]);
    }
    out << '\n';
}

GridSearchResult loco_grid_search(const std::vector<CaseData>& cases,
                                  const HyperparameterGrid& grid, std::uint64_t seed,
                                  int threads) {
    if (cases.size() < 2) {
        throw data_error("leave-one-case-out search needs at least 2 cases, got " +
                         std::to_string(cases.size()));
    }
    if (grid.n_trees.empty() || grid.max_depth.empty() || grid.min_samples_split.empty() ||
        grid.max_split_features.empty()) {
        throw std::invalid_argument("loco_grid_search: empty grid dimension");
    }

    GridSearchResult result;
    bool have_best = false;
    double best_mean = 0.0;
    for (int n_trees : grid.n_trees) {
        for (int max_depth : grid.max_depth) {
            for (int min_split : grid.min_samples_split) {
                for (int max_feat : grid.max_split_features) {
                    GridSearchEntry entry;
                    entry.hyperparameters = {n_trees, max_depth, min_split, max_feat, seed, true};
                    entry.hyperparameters.validate();
                    double sum = 0.0;
                    for (std::size_t held = 0; held < cases.size(); ++held) {
                        std::vector<std::size_t> train_idx;
                        for (std::size_t i = 0; i < cases.size(); ++i) {
                            if (i != held) train_idx.push_back(i);
                        }
                        Matrix train_x;
                        std::vector<double> train_y;
                        concatenate(cases, train_idx, train_x, train_y);
                        const ForestModel model = train_forest(train_x, train_y,
                                                               entry.hyperparameters,
                                                               feature_names(), threads);
                        const double fold = rmse(
                            predict(model, cases[held].features.values, threads),
                            cases[held].targets);
                        entry.fold_rmse.push_back(fold);
                        sum += fold;
                    }
                    entry.mean_rmse = sum / static_cast<double>(cases.size());

                    const auto& hp = entry.hyperparameters;
                    const auto& best = result.best;
                    const bool better =
                        !have_best || entry.mean_rmse < best_mean ||
                        (entry.mean_rmse == best_mean &&
                         (hp.n_trees < best.n_trees ||
                          (hp.n_trees == best.n_trees && hp.max_depth < best.max_depth)));
                    if (better) {
                        result.best = hp;
                        best_mean = entry.mean_rmse;
                        have_best = true;
                    }
                    result.entries.push_back(std::move(entry));
                }
            }
        }
    }
    return result;
}

} // namespace turbuq
