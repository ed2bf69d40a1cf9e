#include "ovcyst/model.hpp"

#include "ovcyst/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ovcyst {
namespace {

using nlohmann::json;

template <typename Leaf, typename LeafToJson>
json tree_to_json(const BinaryTree<Leaf>& tree, int index, const LeafToJson& leaf_to_json) {
    const auto& node = tree.nodes[static_cast<std::size_t>(index)];
    if (node.is_leaf()) return json{{"leaf", leaf_to_json(node.leaf)}};
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", tree_to_json(tree, node.left, leaf_to_json)},
                {"right", tree_to_json(tree, node.right, leaf_to_json)}};
}

template <typename Leaf, typename LeafFromJson>
int tree_from_json(const json& j, BinaryTree<Leaf>& tree, const LeafFromJson& leaf_from_json) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (j.contains("leaf")) {
        tree.nodes[static_cast<std::size_t>(index)].leaf = leaf_from_json(j.at("leaf"));
        return index;
    }
    const int feature = j.at("feature").get<int>();
    if (feature < 0) throw ValidationError("model: negative split feature");
    tree.nodes[static_cast<std::size_t>(index)].feature = feature;
    tree.nodes[static_cast<std::size_t>(index)].threshold = j.at("threshold").get<double>();
    const int l = tree_from_json(j.at("left"), tree, leaf_from_json);
    const int r = tree_from_json(j.at("right"), tree, leaf_from_json);
    tree.nodes[static_cast<std::size_t>(index)].left = l;
    tree.nodes[static_cast<std::size_t>(index)].right = r;
    return index;
}

json distribution_to_json(const ClassProbabilities& p) { return json::array({p(0), p(1), p(2)}); }

ClassProbabilities distribution_from_json(const json& j) {
    if (!j.is_array() || j.size() != kNumClasses) throw ValidationError("model: leaf distribution must have 3 entries");
    ClassProbabilities p;
    for (int c = 0; c < kNumClasses; ++c) p(c) = j.at(static_cast<std::size_t>(c)).get<double>();
    return p;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, Index cols) {
    Matrix m(static_cast<Index>(j.size()), cols);
    for (Index r = 0; r < m.rows(); ++r) {
        const auto& row = j.at(static_cast<std::size_t>(r));
        if (row.size() != static_cast<std::size_t>(cols)) throw ValidationError("model: ragged training matrix");
        for (Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

json to_json(const KnnClassifier& m) {
    json labels = json::array();
    for (ClassLabel l : m.labels) labels.push_back(class_id(l));
    return {{"k", m.k}, {"n_features", m.train.cols()}, {"train", matrix_to_json(m.train)}, {"labels", labels}};
}

json to_json(const RandomForestModel& m) {
    json trees = json::array();
    for (const auto& tree : m.trees) trees.push_back(tree_to_json(tree, 0, distribution_to_json));
    return {{"n_features", m.n_features},
            {"features_per_split", m.features_per_split},
            {"seed", m.seed},
            {"trees", std::move(trees)}};
}

json to_json(const GbtModel& m) {
    auto weight = [](double w) { return w; };
    json rounds = json::array();
    for (const auto& round : m.rounds) {
        json per_class = json::array();
        for (const auto& tree : round) per_class.push_back(tree_to_json(tree, 0, weight));
        rounds.push_back(std::move(per_class));
    }
    return {{"n_features", m.n_features},
            {"seed", m.seed},
            {"learning_rate", m.params.learning_rate},
            {"max_depth", m.params.max_depth},
            {"lambda", m.params.lambda},
            {"gamma", m.params.gamma},
            {"base_score", distribution_to_json(m.base_score)},
            {"rounds", std::move(rounds)}};
}

KnnClassifier knn_from_json(const json& j) {
    KnnClassifier m;
    m.k = j.at("k").get<int>();
    m.train = matrix_from_json(j.at("train"), j.at("n_features").get<Index>());
    for (const auto& l : j.at("labels")) m.labels.push_back(class_from_id(l.get<int>()));
    if (m.labels.size() != static_cast<std::size_t>(m.train.rows())) throw ValidationError("model: label count mismatch");
    if (m.k < 1 || m.k > m.train.rows()) throw ValidationError("model: invalid KNN k");
    return m;
}

RandomForestModel forest_from_json(const json& j) {
    RandomForestModel m;
    m.n_features = j.at("n_features").get<Index>();
    m.features_per_split = j.at("features_per_split").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& t : j.at("trees")) {
        ClassificationTree tree;
        tree_from_json(t, tree, distribution_from_json);
        m.trees.push_back(std::move(tree));
    }
    if (m.trees.empty()) throw ValidationError("model: forest has no trees");
    return m;
}

GbtModel gbt_from_json(const json& j) {
    GbtModel m;
    m.n_features = j.at("n_features").get<Index>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.params.learning_rate = j.at("learning_rate").get<double>();
    m.params.max_depth = j.at("max_depth").get<int>();
    m.params.lambda = j.at("lambda").get<double>();
    m.params.gamma = j.at("gamma").get<double>();
    m.base_score = distribution_from_json(j.at("base_score"));
    auto weight = [](const json& w) { return w.get<double>(); };
    for (const auto& round : j.at("rounds")) {
        if (round.size() != kNumClasses) throw ValidationError("model: each round needs 3 trees");
        auto& trees = m.rounds.emplace_back();
        for (int k = 0; k < kNumClasses; ++k) tree_from_json(round.at(static_cast<std::size_t>(k)), trees[static_cast<std::size_t>(k)], weight);
    }
    m.params.rounds = static_cast<int>(m.rounds.size());
    return m;
}

}  // namespace

std::string_view model_name(const TrainedModel& model) {
    switch (model.index()) {
        case 0: return "knn";
        case 1: return "random_forest";
        default: return "gbt";
    }
}

ClassProbabilities predict_proba(const TrainedModel& model, const Eigen::Ref<const RowVector>& x) {
    struct Visitor {
        const Eigen::Ref<const RowVector>& x;
        ClassProbabilities operator()(const KnnClassifier& m) const { return knn_predict_proba(m, x); }
        ClassProbabilities operator()(const RandomForestModel& m) const { return rf_predict_proba(m, x); }
        ClassProbabilities operator()(const GbtModel& m) const { return gbt_predict_proba(m, x); }
    };
    return std::visit(Visitor{x}, model);
}

ProbabilityMatrix predict_proba_rows(const TrainedModel& model, const Matrix& rows) {
    ProbabilityMatrix out(rows.rows(), kNumClasses);
    for (Index r = 0; r < rows.rows(); ++r) out.row(r) = predict_proba(model, rows.row(r)).transpose();
    return out;
}

std::vector<ClassLabel> hard_predictions(const ProbabilityMatrix& proba) {
    std::vector<ClassLabel> out(static_cast<std::size_t>(proba.rows()));
    for (Index r = 0; r < proba.rows(); ++r) out[static_cast<std::size_t>(r)] = class_from_id(static_cast<int>(argmax(proba.row(r))));
    return out;
}

std::string serialize_model(const TrainedModel& model) {
    json body = std::visit([](const auto& m) { return to_json(m); }, model);
    json doc = {{"format", "ovcyst-model"}, {"version", kModelFormatVersion}, {"kind", model_name(model)}, {"model", std::move(body)}};
    return doc.dump(1) + "\n";
}

TrainedModel deserialize_model(std::string_view text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != "ovcyst-model") throw ValidationError("model: unknown format");
        if (doc.at("version").get<int>() != kModelFormatVersion) throw ValidationError("model: unsupported version");
        const std::string kind = doc.at("kind").get<std::string>();
        const json& body = doc.at("model");
        if (kind == "knn") return knn_from_json(body);
        if (kind == "random_forest") return forest_from_json(body);
        if (kind == "gbt") return gbt_from_json(body);
        throw ValidationError("model: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << serialize_model(model);
    if (!out) throw IoError(path.string(), "write failed");
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return deserialize_model(buffer.str());
}

}  // namespace ovcyst
