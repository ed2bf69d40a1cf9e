#include "ovcyst/config.hpp"

#include "detail/config_json.hpp"
#include "ovcyst/error.hpp"

#include <algorithm>
#include <fstream>
#include <vector>
#include <sstream>

namespace ovcyst {
namespace {

using nlohmann::json;

// Typed access to one JSON object whose keys must come from a fixed list.
class Section {
public:
    Section(const json& node, std::string path, const std::vector<std::string_view>& allowed)
        : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ValidationError("config: '" + path_ + "' must be an object");
        for (const auto& [key, value] : node_.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                throw ValidationError("config: unknown key '" + where(key) + "'");
            }
        }
    }

    bool has(const std::string& key) const { return node_.contains(key) && !node_.at(key).is_null(); }

    template <typename T>
    T get(const std::string& key, T fallback) const {
        if (!has(key)) return fallback;
        return convert<T>(key);
    }

    template <typename T>
    T require(const std::string& key) const {
        if (!has(key)) throw ValidationError("config: missing required key '" + where(key) + "'");
        return convert<T>(key);
    }

    std::optional<Section> child(const std::string& key, const std::vector<std::string_view>& allowed) const {
        if (!has(key)) return std::nullopt;
        return std::optional<Section>(std::in_place, node_.at(key), where(key), allowed);
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    template <typename T>
    T convert(const std::string& key) const {
        try {
            return node_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ValidationError("config: key '" + where(key) + "' has the wrong type");
        }
    }

    const json& node_;
    std::string path_;
};

const std::vector<std::string_view> kGeneratorKeys = {"n_rows", "class_priors", "signal_strength", "missing_rate",
                                                      "seed"};

GeneratorSpec read_generator(const Section& s) {
    GeneratorSpec spec;
    spec.n_rows = s.get<std::size_t>("n_rows", spec.n_rows);
    if (s.has("class_priors")) {
        const auto priors = s.require<std::vector<double>>("class_priors");
        if (priors.size() != kNumClasses) throw ValidationError("config: class_priors needs 3 entries");
        std::copy(priors.begin(), priors.end(), spec.class_priors.begin());
    }
    spec.signal_strength = s.get<double>("signal_strength", spec.signal_strength);
    spec.missing_rate = s.get<double>("missing_rate", spec.missing_rate);
    spec.seed = s.require<std::uint64_t>("seed");
    try {
        validate(spec);
    } catch (const InvalidArgument& e) {
        throw ValidationError(std::string("config: generator: ") + e.what());
    }
    return spec;
}

void positive(int value, const std::string& name) {
    if (value < 1) throw ValidationError("config: '" + name + "' must be at least 1");
}

json generator_json(const GeneratorSpec& g) {
    return {{"n_rows", g.n_rows},
            {"class_priors", g.class_priors},
            {"signal_strength", g.signal_strength},
            {"missing_rate", g.missing_rate},
            {"seed", g.seed}};
}

}  // namespace

std::string_view to_string(Protocol protocol) {
    return protocol == Protocol::kPaperOrder ? "paper-order" : "leakage-safe";
}

Protocol protocol_from_string(std::string_view text) {
    if (text == "leakage-safe") return Protocol::kLeakageSafe;
    if (text == "paper-order") return Protocol::kPaperOrder;
    throw ValidationError("config: unknown protocol '" + std::string(text) + "'");
}

PipelineConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }

    PipelineConfig cfg;
    const Section root(doc, "", {"input", "protocol", "threads", "filter", "imputer", "scaler", "smote", "split",
                                 "models", "output"});
    {
        auto input = root.child("input", {"csv", "generator"});
        if (!input) throw ValidationError("config: missing required section 'input'");
        const bool has_csv = input->has("csv");
        const bool has_gen = input->has("generator");
        if (has_csv == has_gen) throw ValidationError("config: 'input' needs exactly one of 'csv' or 'generator'");
        if (has_csv) cfg.csv = input->require<std::string>("csv");
        if (has_gen) {
            auto gen = input->child("generator", kGeneratorKeys);
            cfg.generator = read_generator(*gen);
        }
    }
    cfg.protocol = protocol_from_string(root.get<std::string>("protocol", std::string(to_string(cfg.protocol))));
    cfg.threads = root.get<int>("threads", cfg.threads);
    positive(cfg.threads, "threads");

    if (auto s = root.child("filter", {"max_row_missing_fraction"})) {
        cfg.max_row_missing_fraction = s->get<double>("max_row_missing_fraction", cfg.max_row_missing_fraction);
    }
    if (!(cfg.max_row_missing_fraction >= 0.0 && cfg.max_row_missing_fraction <= 1.0)) {
        throw ValidationError("config: 'filter.max_row_missing_fraction' must lie in [0, 1]");
    }
    if (auto s = root.child("imputer", {"k"})) cfg.imputer_k = s->get<int>("k", cfg.imputer_k);
    positive(cfg.imputer_k, "imputer.k");
    if (auto s = root.child("scaler", {"kind"})) {
        try {
            cfg.scaler = scaler_kind_from_string(s->get<std::string>("kind", "minmax"));
        } catch (const InvalidArgument& e) {
            throw ValidationError(std::string("config: ") + e.what());
        }
    }

    {
        auto s = root.child("smote", {"k", "seed"});
        if (!s) throw ValidationError("config: missing required section 'smote' (smote.seed is required)");
        cfg.smote.k_neighbors = s->get<int>("k", cfg.smote.k_neighbors);
        cfg.smote.seed = s->require<std::uint64_t>("seed");
        positive(cfg.smote.k_neighbors, "smote.k");
    }
    {
        auto s = root.child("split", {"train_fraction", "seed"});
        if (!s) throw ValidationError("config: missing required section 'split' (split.seed is required)");
        cfg.train_fraction = s->get<double>("train_fraction", cfg.train_fraction);
        cfg.split_seed = s->require<std::uint64_t>("seed");
        if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
            throw ValidationError("config: 'split.train_fraction' must lie strictly between 0 and 1");
        }
    }
    {
        auto models = root.child("models", {"knn", "random_forest", "gbt"});
        if (!models) throw ValidationError("config: missing required section 'models' (model seeds are required)");
        if (auto s = models->child("knn", {"k"})) cfg.knn_k = s->get<int>("k", cfg.knn_k);
        positive(cfg.knn_k, "models.knn.k");

        auto rf = models->child("random_forest", {"n_trees", "features_per_split", "bootstrap", "max_depth",
                                                  "min_samples_leaf", "seed"});
        if (!rf) throw ValidationError("config: missing required section 'models.random_forest'");
        cfg.forest.n_trees = rf->get<int>("n_trees", cfg.forest.n_trees);
        positive(cfg.forest.n_trees, "models.random_forest.n_trees");
        if (rf->has("features_per_split")) {
            cfg.forest.features_per_split = rf->require<int>("features_per_split");
            positive(*cfg.forest.features_per_split, "models.random_forest.features_per_split");
        }
        cfg.forest.bootstrap = rf->get<bool>("bootstrap", cfg.forest.bootstrap);
        if (rf->has("max_depth")) {
            cfg.forest.max_depth = rf->require<int>("max_depth");
            if (*cfg.forest.max_depth < 0) throw ValidationError("config: 'models.random_forest.max_depth' must be >= 0");
        }
        cfg.forest.min_samples_leaf = rf->get<int>("min_samples_leaf", cfg.forest.min_samples_leaf);
        positive(cfg.forest.min_samples_leaf, "models.random_forest.min_samples_leaf");
        cfg.forest_seed = rf->require<std::uint64_t>("seed");

        auto gbt = models->child("gbt", {"rounds", "learning_rate", "max_depth", "lambda", "gamma", "seed"});
        if (!gbt) throw ValidationError("config: missing required section 'models.gbt'");
        cfg.boosting.rounds = gbt->get<int>("rounds", cfg.boosting.rounds);
        cfg.boosting.learning_rate = gbt->get<double>("learning_rate", cfg.boosting.learning_rate);
        cfg.boosting.max_depth = gbt->get<int>("max_depth", cfg.boosting.max_depth);
        cfg.boosting.lambda = gbt->get<double>("lambda", cfg.boosting.lambda);
        cfg.boosting.gamma = gbt->get<double>("gamma", cfg.boosting.gamma);
        cfg.boosting_seed = gbt->require<std::uint64_t>("seed");
        if (cfg.boosting.rounds < 0 || !(cfg.boosting.learning_rate > 0.0) || cfg.boosting.max_depth < 0 ||
            cfg.boosting.lambda < 0.0 || cfg.boosting.gamma < 0.0) {
            throw ValidationError("config: invalid 'models.gbt' parameters");
        }
    }
    if (auto s = root.child("output", {"dir"})) cfg.output_dir = s->get<std::string>("dir", cfg.output_dir.string());
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open config for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

GeneratorSpec parse_generator_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("generator spec: ") + e.what());
    }
    return read_generator(Section(doc, "", kGeneratorKeys));
}

GeneratorSpec load_generator_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open generator spec for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_generator_spec(buffer.str());
}

namespace detail {

json config_echo(const PipelineConfig& c) {
    json input;
    if (c.csv) input["csv"] = c.csv->generic_string();
    if (c.generator) input["generator"] = generator_json(*c.generator);
    json rf = {{"n_trees", c.forest.n_trees},
               {"features_per_split", c.forest.features_per_split ? json(*c.forest.features_per_split) : json()},
               {"bootstrap", c.forest.bootstrap},
               {"max_depth", c.forest.max_depth ? json(*c.forest.max_depth) : json()},
               {"min_samples_leaf", c.forest.min_samples_leaf},
               {"seed", c.forest_seed}};
    json gbt = {{"rounds", c.boosting.rounds},
                {"learning_rate", c.boosting.learning_rate},
                {"max_depth", c.boosting.max_depth},
                {"lambda", c.boosting.lambda},
                {"gamma", c.boosting.gamma},
                {"seed", c.boosting_seed}};
    return {{"input", std::move(input)},
            {"protocol", to_string(c.protocol)},
            {"threads", c.threads},
            {"filter", {{"max_row_missing_fraction", c.max_row_missing_fraction}}},
            {"imputer", {{"k", c.imputer_k}}},
            {"scaler", {{"kind", to_string(c.scaler)}}},
            {"smote", {{"k", c.smote.k_neighbors}, {"seed", c.smote.seed}}},
            {"split", {{"train_fraction", c.train_fraction}, {"seed", c.split_seed}}},
            {"models", {{"knn", {{"k", c.knn_k}}}, {"random_forest", std::move(rf)}, {"gbt", std::move(gbt)}}},
            {"output", {{"dir", c.output_dir.generic_string()}}}};
}

}  // namespace detail

std::string config_to_json(const PipelineConfig& config, int indent) {
    return detail::config_echo(config).dump(indent);
}

}  // namespace ovcyst
