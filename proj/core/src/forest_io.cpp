/// @file forest_io.cpp
/// @brief Versioned JSON model format. The writer renders every number with
/// 17 significant digits so a reloaded model predicts bit-identically and
/// the byte stream is stable across runs and platforms.

#include "turbuq/forest.hpp"

#include "turbuq/csv.hpp"
#include "turbuq/errors.hpp"

#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace turbuq {

namespace {

constexpr int kModelFormatVersion = 1;

void write_string(std::ostream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        switch (c) {
        case '"': out << "\\\""; break;
        case '\\': out << "\\\\"; break;
        case '\n': out << "\\n"; break;
        default: out << c;
        }
    }
    out << '"';
}

void write_node(std::ostream& out, const RegressionTree& tree, std::size_t index) {
    const TreeNode& node = tree.nodes[index];
    if (node.feature < 0) {
        out << "{\"value\":" << csv::format_double(node.value)
            << ",\"n_samples\":" << node.n_samples << "}";
        return;
    }
    out << "{\"feature\":" << node.feature
        << ",\"threshold\":" << csv::format_double(node.threshold)
        << ",\"n_samples\":" << node.n_samples << ",\"left\":";
    write_node(out, tree, static_cast<std::size_t>(node.left));
    out << ",\"right\":";
    write_node(out, tree, static_cast<std::size_t>(node.right));
    out << "}";
}

int append_node(RegressionTree& tree, const nlohmann::json& j, const std::string& origin) {
    if (!j.is_object()) throw data_error(origin + ": tree node is not an object");
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (j.contains("feature")) {
        tree.nodes[static_cast<std::size_t>(index)].feature = j.at("feature").get<int>();
        tree.nodes[static_cast<std::size_t>(index)].threshold = j.at("threshold").get<double>();
        tree.nodes[static_cast<std::size_t>(index)].n_samples = j.at("n_samples").get<int>();
        const int left = append_node(tree, j.at("left"), origin);
        const int right = append_node(tree, j.at("right"), origin);
        tree.nodes[static_cast<std::size_t>(index)].left = left;
        tree.nodes[static_cast<std::size_t>(index)].right = right;
    } else {
        tree.nodes[static_cast<std::size_t>(index)].value = j.at("value").get<double>();
        tree.nodes[static_cast<std::size_t>(index)].n_samples = j.at("n_samples").get<int>();
    }
    return index;
}

} // namespace

void save_model(const ForestModel& model, std::ostream& out) {
    out << "{\n";
    out << "  \"version\": " << kModelFormatVersion << ",\n";
    const auto& hp = model.hyperparameters;
    out << "  \"hyperparameters\": {\"n_trees\": " << hp.n_trees
        << ", \"max_depth\": " << hp.max_depth
        << ", \"min_samples_split\": " << hp.min_samples_split
        << ", \"max_split_features\": " << hp.max_split_features << ", \"seed\": " << hp.seed
        << ", \"bootstrap\": " << (hp.bootstrap ? "true" : "false") << "},\n";

    out << "  \"feature_names\": [";
    for (std::size_t i = 0; i < model.feature_names.size(); ++i) {
        if (i) out << ", ";
        write_string(out, model.feature_names[i]);
    }
    out << "],\n";

    out << "  \"scaler\": {\"mean\": [";
    for (std::size_t i = 0; i < model.scaler.mean().size(); ++i) {
        if (i) out << ", ";
        out << csv::format_double(model.scaler.mean()[i]);
    }
    out << "], \"std\": [";
    for (std::size_t i = 0; i < model.scaler.std().size(); ++i) {
        if (i) out << ", ";
        out << csv::format_double(model.scaler.std()[i]);
    }
    out << "]},\n";

    out << "  \"trees\": [\n";
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        out << "    ";
        write_node(out, model.trees[t], 0);
        out << (t + 1 < model.trees.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
}

void save_model(const ForestModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot create '" + path.string() + "'");
    save_model(model, out);
    if (!out.good()) throw data_error("write to '" + path.string() + "' failed");
}

ForestModel load_model(std::istream& in, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw data_error(origin + ": malformed model file: " + e.what());
    }
    try {
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion) {
            std::ostringstream os;
            os << origin << ": unsupported model format version " << version << " (expected "
               << kModelFormatVersion << ")";
            throw data_error(os.str());
        }
        ForestModel model;
        const auto& hp = j.at("hyperparameters");
        model.hyperparameters.n_trees = hp.at("n_trees").get<int>();
        model.hyperparameters.max_depth = hp.at("max_depth").get<int>();
        model.hyperparameters.min_samples_split = hp.at("min_samples_split").get<int>();
        model.hyperparameters.max_split_features = hp.at("max_split_features").get<int>();
        model.hyperparameters.seed = hp.at("seed").get<std::uint64_t>();
        model.hyperparameters.bootstrap = hp.value("bootstrap", true);

        model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        model.scaler = FeatureScaler(j.at("scaler").at("mean").get<std::vector<double>>(),
                                     j.at("scaler").at("std").get<std::vector<double>>());
        if (model.scaler.dimension() != model.feature_names.size()) {
            throw data_error(origin + ": scaler dimension does not match feature_names");
        }

        const auto& trees = j.at("trees");
        if (!trees.is_array() || trees.empty()) {
            throw data_error(origin + ": model has no trees");
        }
        for (const auto& tj : trees) {
            RegressionTree tree;
            append_node(tree, tj, origin);
            model.trees.push_back(std::move(tree));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(origin + ": invalid model file: " + e.what());
    }
}

ForestModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open '" + path.string() + "'");
    return load_model(in, path.filename().string());
}

} // namespace turbuq
