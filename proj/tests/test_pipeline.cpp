#include "ovcyst/config.hpp"
#include "ovcyst/csv.hpp"
#include "ovcyst/error.hpp"
#include "ovcyst/pipeline.hpp"
#include "ovcyst/split.hpp"
#include "ovcyst/synthgen.hpp"

#include "fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace ovcyst;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ovcyst_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string small_config(const std::string& extra = "") {
    return R"({
  "input": {"generator": {"n_rows": 300, "class_priors": [0.6, 0.2, 0.2], "signal_strength": 2.0,
                          "missing_rate": 0.05, "seed": 4}},
  "smote": {"seed": 1},
  "split": {"seed": 2},
  "models": {"random_forest": {"seed": 3, "n_trees": 10}, "gbt": {"seed": 4, "rounds": 10}})" +
           extra + "\n}";
}

int run_cli(const std::string& args) {
    const std::string command = std::string(OVCYST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::set<std::string> listing(const fs::path& dir) {
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) names.insert(entry.path().filename().string());
    return names;
}

}  // namespace

TEST_CASE("config parsing fills defaults and rejects bad input") {
    const PipelineConfig cfg = parse_config(small_config());
    CHECK(cfg.generator.has_value());
    CHECK_FALSE(cfg.csv.has_value());
    CHECK(cfg.protocol == Protocol::kLeakageSafe);
    CHECK(cfg.imputer_k == 5);
    CHECK(cfg.knn_k == 9);
    CHECK(cfg.train_fraction == 0.8);
    CHECK(cfg.forest.n_trees == 10);
    CHECK(cfg.boosting.learning_rate == 0.3);
    CHECK(cfg.smote.k_neighbors == 5);

    CHECK_THROWS_AS(parse_config("{"), ValidationError);
    CHECK_THROWS_AS(parse_config(small_config(R"(, "mystery": 1)")), ValidationError);
    CHECK_THROWS_AS(parse_config(small_config(R"(, "protocol": "sideways")")), ValidationError);
    CHECK_THROWS_AS(parse_config(small_config(R"(, "scaler": {"kind": "robust"})")), ValidationError);

    // Both inputs.
    std::string both = small_config();
    both.replace(both.find("\"input\": {"), 10, R"("input": {"csv": "x.csv", )");
    CHECK_THROWS_AS(parse_config(both), ValidationError);

    // A missing seed.
    std::string no_seed = small_config();
    no_seed.replace(no_seed.find(R"("split": {"seed": 2},)"), 22, "");
    CHECK_THROWS_AS(parse_config(no_seed), ValidationError);

    PipelineConfig none;
    CHECK_THROWS_AS(run(none), ValidationError);
}

TEST_CASE("config echo spells out every default") {
    const auto echo = nlohmann::json::parse(config_to_json(parse_config(small_config())));
    CHECK(echo.at("imputer").at("k") == 5);
    CHECK(echo.at("scaler").at("kind") == "minmax");
    CHECK(echo.at("smote").at("k") == 5);
    CHECK(echo.at("split").at("train_fraction") == 0.8);
    CHECK(echo.at("models").at("knn").at("k") == 9);
    CHECK(echo.at("models").at("gbt").at("lambda") == 1.0);
    CHECK(echo.at("models").at("random_forest").at("bootstrap") == true);
    CHECK(echo.at("protocol") == "leakage-safe");
    // The echo parses back to the same config.
    CHECK(config_to_json(parse_config(echo.dump())) == echo.dump(2));
}

TEST_CASE("a small run produces three evaluated models and balanced training counts") {
    const auto report = run(parse_config(small_config()));
    REQUIRE(report.models.size() == 3);
    CHECK(report.models[0].name == "knn");
    CHECK(report.models[1].name == "random_forest");
    CHECK(report.models[2].name == "gbt");
    for (const auto& m : report.models) {
        CHECK(m.confusion.sum() == static_cast<std::int64_t>(report.test_rows));
        for (const auto& roc : m.roc) CHECK(roc.has_value());
    }
    REQUIRE(report.class_counts.size() == 3);
    CHECK(report.class_counts[0].after == report.class_counts[1].after);
    CHECK(report.class_counts[1].after == report.class_counts[2].after);
    CHECK(report.config.forest.features_per_split == 4);
    CHECK(report.source_rows == 300);
    CHECK(report.test_rows == 60);
}

TEST_CASE("emit_report writes the twelve files and reruns byte for byte") {
    const fs::path dir = scratch("inventory");
    const auto config = parse_config(small_config());
    emit_report(run(config), dir);
    const auto names = listing(dir);
    CHECK(names.size() == 12);
    for (const char* n : {"report.json", "correlation.csv", "class_counts.csv"}) CHECK(names.count(n) == 1);
    for (const char* model : {"knn", "random_forest", "gbt"}) {
        for (ClassLabel label : kAllClasses) {
            CHECK(names.count(std::string("roc_") + model + "_" + std::string(slug(label)) + ".csv") == 1);
        }
    }
    std::map<std::string, std::string> first;
    for (const auto& n : names) first[n] = slurp(dir / n);

    emit_report(run(config), dir);
    for (const auto& n : names) CHECK(slurp(dir / n) == first[n]);

    const auto doc = nlohmann::json::parse(first["report.json"]);
    CHECK(doc.at("protocol") == "leakage-safe");
    CHECK(doc.at("models").size() == 3);
    CHECK(doc.at("class_counts").size() == 3);
    CHECK(doc.at("correlation").at("matrix").size() == 18);
    CHECK(first["correlation.csv"].find("numcystl") != std::string::npos);
    CHECK(first["roc_gbt_negative.csv"].rfind("fpr,tpr,threshold\n", 0) == 0);
    CHECK(summarize_report(dir).find("random_forest") != std::string::npos);
}

TEST_CASE("emit_report names the path it cannot write") {
    const fs::path dir = scratch("blocked");
    const fs::path blocker = dir / "file";
    write_file(blocker, "x");
    try {
        emit_report(run(parse_config(small_config())), blocker / "out");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
    }
}

TEST_CASE("leakage-safe fitting never sees test rows") {
    GeneratorSpec spec;
    spec.n_rows = 250;
    spec.signal_strength = 2.0;
    spec.missing_rate = 0.05;
    spec.seed = 21;
    const LabeledDataset data = generate(spec);
    const SplitPair split = stratified_split(data, 0.8, 2);

    // Same labels, wildly different test features.
    Matrix perturbed = data.features.raw();
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    for (std::size_t r : split.test_rows) {
        for (Index c = 0; c < perturbed.cols(); ++c) perturbed(static_cast<Index>(r), c) = u(gen);
    }
    const LabeledDataset tampered(FeatureMatrix(data.features.schema(), perturbed), data.labels);

    const fs::path dir = scratch("leakage");
    save_csv(dir / "clean.csv", data);
    save_csv(dir / "tampered.csv", tampered);

    const auto config_for = [&](const fs::path& csv, const std::string& protocol) {
        PipelineConfig cfg = parse_config(small_config(R"(, "protocol": ")" + protocol + "\""));
        cfg.generator.reset();
        cfg.csv = csv;
        return cfg;
    };

    const auto clean = run(config_for(dir / "clean.csv", "leakage-safe"));
    const auto dirty = run(config_for(dir / "tampered.csv", "leakage-safe"));
    CHECK(clean.imputer_donors == split.train.rows());
    CHECK(clean.correlation.matrix == dirty.correlation.matrix);
    for (std::size_t m = 0; m < 3; ++m) CHECK(serialize_model(clean.fitted[m]) == serialize_model(dirty.fitted[m]));

    // paper-order fits on every row, so the same tampering shows up.
    const auto paper_clean = run(config_for(dir / "clean.csv", "paper-order"));
    const auto paper_dirty = run(config_for(dir / "tampered.csv", "paper-order"));
    CHECK(paper_clean.imputer_donors == 250);
    CHECK(serialize_model(paper_clean.fitted[0]) != serialize_model(paper_dirty.fitted[0]));
}

TEST_CASE("paper-order runs report their protocol") {
    const auto report = run(parse_config(small_config(R"(, "protocol": "paper-order")")));
    CHECK(report.config.protocol == Protocol::kPaperOrder);
    CHECK(nlohmann::json::parse(report_json(report)).at("protocol") == "paper-order");
    CHECK(report.models.size() == 3);
}

TEST_CASE("stage failures carry the stage name") {
    // A single suspicious case cannot be split.
    const fs::path dir = scratch("stage");
    Matrix m = Matrix::Random(12, 18).cwiseAbs();
    std::vector<int> labels(12, 0);
    labels[0] = 1;
    const LabeledDataset data(FeatureMatrix(canonical_schema(), m), [&] {
        std::vector<ClassLabel> l;
        for (int v : labels) l.push_back(class_from_id(v));
        return l;
    }());
    save_csv(dir / "one.csv", data);
    PipelineConfig cfg = parse_config(small_config());
    cfg.generator.reset();
    cfg.csv = dir / "one.csv";
    try {
        run(cfg);
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == "split");
        CHECK_FALSE(e.is_validation());
    }
}

TEST_CASE("command line exit codes and outputs") {
    const fs::path dir = scratch("cli");
    write_file(dir / "config.json", small_config());
    CHECK(run_cli("run --config " + (dir / "config.json").string() + " --out " + (dir / "out").string()) == 0);
    CHECK(listing(dir / "out").size() == 12);
    CHECK(run_cli("report --dir " + (dir / "out").string()) == 0);

    CHECK(run_cli("run --config " + (dir / "config.json").string() + " --out " + (dir / "multi").string() +
                  " --seeds 5,6") == 0);
    CHECK(listing(dir / "multi") == std::set<std::string>{"seed_5", "seed_6"});
    CHECK(slurp(dir / "multi/seed_5/report.json") != slurp(dir / "multi/seed_6/report.json"));

    write_file(dir / "spec.json", R"({"n_rows": 120, "class_priors": [0.5, 0.25, 0.25], "seed": 8})");
    CHECK(run_cli("generate --spec " + (dir / "spec.json").string() + " --out " + (dir / "gen.csv").string()) == 0);
    CHECK(load_csv(dir / "gen.csv", canonical_schema()).rows() == 120);

    std::string csv_config = small_config();
    csv_config.replace(csv_config.find("\"input\""), csv_config.find("\"smote\"") - csv_config.find("\"input\""),
                       "\"input\": {\"csv\": \"" + (dir / "gen.csv").string() + "\"},\n  ");
    write_file(dir / "csv.json", csv_config);
    CHECK(run_cli("run --config " + (dir / "csv.json").string() + " --out " + (dir / "from_csv").string()) == 0);

    // Validation errors.
    CHECK(run_cli("") == 1);
    CHECK(run_cli("run") == 1);
    write_file(dir / "bad.json", small_config(R"(, "mystery": true)"));
    CHECK(run_cli("run --config " + (dir / "bad.json").string()) == 1);
    write_file(dir / "bad.csv", "numcystl\n1\n");
    std::string bad_csv = csv_config;
    bad_csv.replace(bad_csv.find("gen.csv"), 7, "bad.csv");
    write_file(dir / "bad_csv.json", bad_csv);
    CHECK(run_cli("run --config " + (dir / "bad_csv.json").string()) == 1);

    // Runtime errors.
    std::string missing = csv_config;
    missing.replace(missing.find("gen.csv"), 7, "absent.csv");
    write_file(dir / "missing.json", missing);
    CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 2);
    write_file(dir / "blocker", "x");
    CHECK(run_cli("run --config " + (dir / "config.json").string() + " --out " + (dir / "blocker/out").string()) == 2);
    CHECK(run_cli("report --dir " + (dir / "nowhere").string()) == 2);
    CHECK(run_cli("run --config " + (dir / "absent.json").string()) == 2);
}
