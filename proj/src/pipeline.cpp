#include "ovcyst/pipeline.hpp"

#include "detail/config_json.hpp"
#include "ovcyst/csv.hpp"
#include "ovcyst/error.hpp"
#include "ovcyst/imputer.hpp"
#include "ovcyst/split.hpp"
#include "ovcyst/synthgen.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace ovcyst {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Test rows are only reachable through fitted transforms until evaluation.
class SealedPartition {
public:
    explicit SealedPartition(LabeledDataset data) : data_(std::move(data)) {}

    template <typename Transform>
    SealedPartition map_features(const Transform& transform) const {
        return SealedPartition(LabeledDataset(transform(data_.features), data_.labels));
    }

    const LabeledDataset& unseal() const { return data_; }

private:
    LabeledDataset data_;
};

class StageRunner {
public:
    explicit StageRunner(std::vector<StageTiming>& timings) : timings_(timings) {}

    template <typename F>
    auto operator()(const std::string& stage, F&& body) {
        const auto start = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(body())>) {
                body();
                record(stage, start);
            } else {
                auto result = body();
                record(stage, start);
                return result;
            }
        } catch (const StageError&) {
            throw;
        } catch (const ValidationError& e) {
            throw StageError(stage, e.what(), true);
        } catch (const std::exception& e) {
            throw StageError(stage, e.what(), false);
        }
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        timings_.push_back({stage, elapsed.count()});
    }

    std::vector<StageTiming>& timings_;
};

double round12(double value) {
    if (!std::isfinite(value)) return value;
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return std::strtod(buffer, nullptr);
}

std::string fmt12(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

std::string csv_quote(std::string_view text) {
    if (text.find_first_of(",\"") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string roc_file_name(const std::string& model, ClassLabel label) {
    return "roc_" + model + "_" + std::string(slug(label)) + ".csv";
}

TrainedModel fit_model(int which, const LabeledDataset& train, const PipelineConfig& cfg) {
    switch (which) {
        case 0: return knn_fit(train, cfg.knn_k);
        case 1: return rf_fit(train, cfg.forest, cfg.forest_seed);
        default: return gbt_fit(train, cfg.boosting, cfg.boosting_seed);
    }
}

ModelEvaluation evaluate(const TrainedModel& model, const LabeledDataset& test, std::vector<std::string>& warnings) {
    ModelEvaluation out;
    out.name = std::string(model_name(model));
    const ProbabilityMatrix proba = predict_proba_rows(model, test.features.dense());
    const auto predicted = hard_predictions(proba);
    out.confusion = confusion(test.labels, predicted);
    out.metrics = eq_metrics(out.confusion);
    for (auto& w : out.metrics.warnings) warnings.push_back(out.name + ": " + w);

    const ClassCounts counts = class_counts(test.labels);
    int present = 0;
    for (std::size_t c : counts) present += c > 0 ? 1 : 0;
    out.metrics.per_class_auc.assign(kNumClasses, std::nullopt);
    if (present >= 2) {
        const OvrAuc aucs = macro_ovr_auc(test.labels, proba);
        for (auto& w : aucs.warnings) warnings.push_back(out.name + ": " + w);
        out.metrics.macro_auc = aucs.macro;
        std::vector<int> positive(test.labels.size());
        for (int c = 0; c < kNumClasses; ++c) {
            out.metrics.per_class_auc[static_cast<std::size_t>(c)] = aucs.per_class[static_cast<std::size_t>(c)];
            if (!aucs.per_class[static_cast<std::size_t>(c)]) continue;
            for (std::size_t i = 0; i < positive.size(); ++i) positive[i] = class_id(test.labels[i]) == c ? 1 : 0;
            out.roc[static_cast<std::size_t>(c)] = roc_curve(positive, proba.col(c));
        }
    } else {
        warnings.push_back(out.name + ": fewer than two classes in the test partition, AUC not computed");
    }
    return out;
}

}  // namespace

RunReport run(const PipelineConfig& input_config) {
    if (input_config.csv.has_value() == input_config.generator.has_value()) {
        throw ValidationError("config: exactly one input source is required");
    }
    RunReport report;
    report.config = input_config;
    PipelineConfig& cfg = report.config;
    StageRunner stage(report.timings);

    LabeledDataset data = stage("load", [&] {
        return cfg.csv ? load_csv(*cfg.csv, canonical_schema()) : generate(*cfg.generator);
    });
    const Schema& schema = data.features.schema();
    report.columns = schema.names();
    report.schema_fingerprint = schema.fingerprint();
    report.source_rows = static_cast<std::size_t>(data.rows());
    if (!cfg.forest.features_per_split) {
        cfg.forest.features_per_split =
            std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(schema.size())))));
    }
    cfg.forest.threads = cfg.threads;

    data = stage("filter", [&] { return filter_rows_by_missingness(data, cfg.max_row_missing_fraction); });
    report.filtered_rows = static_cast<std::size_t>(data.rows());
    report.imputer_k = cfg.imputer_k;

    LabeledDataset train;
    std::optional<SealedPartition> test;
    LabeledDataset before_smote;

    if (cfg.protocol == Protocol::kLeakageSafe) {
        SplitPair split = stage("split", [&] { return stratified_split(data, cfg.train_fraction, cfg.split_seed); });
        train = std::move(split.train);
        test.emplace(std::move(split.test));

        const KnnImputerModel imputer = stage("impute", [&] {
            KnnImputerModel model = fit_imputer(train.features, cfg.imputer_k);
            train = LabeledDataset(impute(model, train.features), train.labels);
            test = test->map_features([&model](const FeatureMatrix& f) { return impute(model, f); });
            return model;
        });
        report.imputer_donors = static_cast<std::size_t>(imputer.donors.rows());
        report.correlation = stage("correlation", [&] { return pearson_correlation_matrix(train.features); });

        report.scaler = stage("scale", [&] {
            ScalerModel scaler = fit_scaler(train.features, cfg.scaler);
            train = LabeledDataset(scale(scaler, train.features), train.labels);
            test = test->map_features([&scaler](const FeatureMatrix& f) { return scale(scaler, f); });
            return scaler;
        });

        before_smote = train;
        SmoteResult balanced = stage("smote", [&] { return smote_oversample(train, cfg.smote); });
        for (auto& w : balanced.warnings) report.warnings.push_back(w);
        train = std::move(balanced.data);
    } else {
        data = stage("impute", [&] {
            const KnnImputerModel model = fit_imputer(data.features, cfg.imputer_k);
            report.imputer_donors = static_cast<std::size_t>(model.donors.rows());
            return LabeledDataset(impute(model, data.features), data.labels);
        });
        report.correlation = stage("correlation", [&] { return pearson_correlation_matrix(data.features); });

        before_smote = data;
        SmoteResult balanced = stage("smote", [&] { return smote_oversample(data, cfg.smote); });
        for (auto& w : balanced.warnings) report.warnings.push_back(w);
        data = std::move(balanced.data);

        SplitPair split = stage("split", [&] { return stratified_split(data, cfg.train_fraction, cfg.split_seed); });
        train = std::move(split.train);
        test.emplace(std::move(split.test));

        report.scaler = stage("scale", [&] {
            ScalerModel scaler = fit_scaler(data.features, cfg.scaler);
            train = LabeledDataset(scale(scaler, train.features), train.labels);
            test = test->map_features([&scaler](const FeatureMatrix& f) { return scale(scaler, f); });
            return scaler;
        });
    }
    report.class_counts = stage("class_counts", [&] { return imbalance_report(before_smote, train); });
    for (std::size_t c : report.correlation.zero_variance_columns) {
        report.warnings.push_back("correlation: column '" + report.columns[c] + "' has zero variance");
    }
    report.train_rows = static_cast<std::size_t>(train.rows());
    report.test_rows = static_cast<std::size_t>(test->unseal().rows());

    static constexpr std::array<const char*, 3> kFitStages = {"fit_knn", "fit_random_forest", "fit_gbt"};
    report.fitted.resize(3);
    if (cfg.threads > 1) {
        std::array<std::future<TrainedModel>, 3> jobs;
        std::array<std::vector<StageTiming>, 3> job_timings;
        for (int m = 0; m < 3; ++m) {
            jobs[static_cast<std::size_t>(m)] = std::async(std::launch::async, [&, m] {
                StageRunner runner(job_timings[static_cast<std::size_t>(m)]);
                return runner(kFitStages[static_cast<std::size_t>(m)], [&] { return fit_model(m, train, cfg); });
            });
        }
        for (int m = 0; m < 3; ++m) report.fitted[static_cast<std::size_t>(m)] = jobs[static_cast<std::size_t>(m)].get();
        for (auto& t : job_timings) report.timings.insert(report.timings.end(), t.begin(), t.end());
    } else {
        for (int m = 0; m < 3; ++m) {
            report.fitted[static_cast<std::size_t>(m)] =
                stage(kFitStages[static_cast<std::size_t>(m)], [&] { return fit_model(m, train, cfg); });
        }
    }

    stage("evaluate", [&] {
        const LabeledDataset& held_out = test->unseal();
        for (const auto& model : report.fitted) report.models.push_back(evaluate(model, held_out, report.warnings));
    });
    return report;
}

std::string report_json(const RunReport& report) {
    ordered_json doc;
    doc["format"] = "ovcyst-run-report";
    doc["version"] = 1;
    doc["protocol"] = to_string(report.config.protocol);
    doc["config"] = ordered_json::parse(detail::config_echo(report.config).dump());
    doc["schema"] = {{"fingerprint", report.schema_fingerprint}, {"columns", report.columns},
                     {"target", std::string(kTargetColumn)}};
    doc["rows"] = {{"source", report.source_rows},
                   {"after_filter", report.filtered_rows},
                   {"train", report.train_rows},
                   {"test", report.test_rows}};

    ordered_json counts = ordered_json::array();
    for (const auto& row : report.class_counts) {
        counts.push_back({{"class", display_name(row.label)}, {"before_smote", row.before}, {"after_smote", row.after}});
    }
    doc["class_counts"] = std::move(counts);

    ordered_json matrix = ordered_json::array();
    for (Index i = 0; i < report.correlation.matrix.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Index j = 0; j < report.correlation.matrix.cols(); ++j) row.push_back(round12(report.correlation.matrix(i, j)));
        matrix.push_back(std::move(row));
    }
    ordered_json zero_var = ordered_json::array();
    for (std::size_t c : report.correlation.zero_variance_columns) zero_var.push_back(report.columns[c]);
    doc["correlation"] = {{"computed_on", report.config.protocol == Protocol::kLeakageSafe ? "imputed train partition"
                                                                                         : "imputed full dataset"},
                          {"matrix", std::move(matrix)},
                          {"zero_variance_columns", std::move(zero_var)},
                          {"file", "correlation.csv"}};

    ordered_json scaler;
    std::visit(
        [&scaler](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            auto vec = [](const RowVector& v) {
                ordered_json a = ordered_json::array();
                for (Index i = 0; i < v.size(); ++i) a.push_back(round12(v(i)));
                return a;
            };
            if constexpr (std::is_same_v<T, MinMaxScalerModel>) {
                scaler = {{"kind", "minmax"}, {"min", vec(m.min)}, {"max", vec(m.max)}};
            } else {
                scaler = {{"kind", "standard"}, {"mean", vec(m.mean)}, {"stddev", vec(m.stddev)}};
            }
        },
        report.scaler);
    doc["preprocessing"] = {{"imputer", {{"k", report.imputer_k}, {"donor_rows", report.imputer_donors}, {"weighting", "uniform"}}},
                            {"scaler", std::move(scaler)}};

    ordered_json models = ordered_json::object();
    for (const auto& eval : report.models) {
        ordered_json per_class = ordered_json::array();
        for (int c = 0; c < kNumClasses; ++c) {
            const auto& m = eval.metrics.per_class[static_cast<std::size_t>(c)];
            const auto& a = eval.metrics.per_class_auc[static_cast<std::size_t>(c)];
            per_class.push_back({{"class", display_name(class_from_id(c))},
                                 {"precision", round12(m.precision)},
                                 {"recall", round12(m.recall)},
                                 {"f1", round12(m.f1)},
                                 {"auc", a ? ordered_json(round12(*a)) : ordered_json()}});
        }
        ordered_json cm = ordered_json::array();
        for (Index t = 0; t < eval.confusion.rows(); ++t) {
            ordered_json row = ordered_json::array();
            for (Index p = 0; p < eval.confusion.cols(); ++p) row.push_back(eval.confusion(t, p));
            cm.push_back(std::move(row));
        }
        ordered_json roc_files = ordered_json::array();
        for (ClassLabel label : kAllClasses) roc_files.push_back(roc_file_name(eval.name, label));
        models[eval.name] = {{"accuracy", round12(eval.metrics.accuracy)},
                             {"macro_precision", round12(eval.metrics.macro_precision)},
                             {"macro_recall", round12(eval.metrics.macro_recall)},
                             {"macro_f1", round12(eval.metrics.macro_f1)},
                             {"macro_auc", round12(eval.metrics.macro_auc)},
                             {"averaging", "macro, one-vs-rest"},
                             {"per_class", std::move(per_class)},
                             {"confusion_matrix", std::move(cm)},
                             {"roc_files", std::move(roc_files)}};
    }
    doc["models"] = std::move(models);
    doc["warnings"] = report.warnings;
    return doc.dump(2) + "\n";
}

void emit_report(const RunReport& report, const std::filesystem::path& dir) {
    std::map<std::string, std::string> files;
    files["report.json"] = report_json(report);

    std::ostringstream corr;
    for (const auto& name : report.columns) corr << ',' << name;
    corr << '\n';
    for (Index i = 0; i < report.correlation.matrix.rows(); ++i) {
        corr << report.columns[static_cast<std::size_t>(i)];
        for (Index j = 0; j < report.correlation.matrix.cols(); ++j) corr << ',' << fmt12(report.correlation.matrix(i, j));
        corr << '\n';
    }
    files["correlation.csv"] = corr.str();

    std::ostringstream counts;
    counts << "class,before_smote,after_smote\n";
    for (const auto& row : report.class_counts) {
        counts << csv_quote(display_name(row.label)) << ',' << row.before << ',' << row.after << '\n';
    }
    files["class_counts.csv"] = counts.str();

    for (const auto& eval : report.models) {
        for (ClassLabel label : kAllClasses) {
            std::ostringstream roc;
            roc << "fpr,tpr,threshold\n";
            if (const auto& curve = eval.roc[static_cast<std::size_t>(class_id(label))]) {
                for (const auto& p : curve->points) roc << fmt12(p.fpr) << ',' << fmt12(p.tpr) << ',' << fmt12(p.threshold) << '\n';
            }
            files[roc_file_name(eval.name, label)] = roc.str();
        }
    }

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
    for (const auto& [name, content] : files) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path.string(), "cannot open for writing");
        out << content;
        out.close();
        if (!out) throw IoError(path.string(), "write failed");
    }
}

std::string summarize_report(const std::filesystem::path& dir) {
    const auto path = dir / "report.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const ordered_json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }

    std::ostringstream out;
    char line[256];
    try {
        out << "protocol: " << doc.at("protocol").get<std::string>() << '\n';
        out << "schema:   " << doc.at("schema").at("fingerprint").get<std::string>() << " ("
            << doc.at("schema").at("columns").size() << " features)\n";
        const auto& rows = doc.at("rows");
        out << "rows:     source " << rows.at("source") << ", after filter " << rows.at("after_filter") << ", train "
            << rows.at("train") << ", test " << rows.at("test") << "\n\n";
        out << "class counts (before -> after SMOTE)\n";
        for (const auto& row : doc.at("class_counts")) {
            std::snprintf(line, sizeof line, "  %-26s %8llu -> %llu\n", row.at("class").get<std::string>().c_str(),
                          row.at("before_smote").get<unsigned long long>(), row.at("after_smote").get<unsigned long long>());
            out << line;
        }
        out << '\n';
        std::snprintf(line, sizeof line, "  %-14s %9s %9s %9s %9s %9s\n", "model", "accuracy", "precision", "recall",
                      "f1", "auc");
        out << line;
        for (const auto& [name, m] : doc.at("models").items()) {
            std::snprintf(line, sizeof line, "  %-14s %9.4f %9.4f %9.4f %9.4f %9.4f\n", name.c_str(),
                          m.at("accuracy").get<double>(), m.at("macro_precision").get<double>(),
                          m.at("macro_recall").get<double>(), m.at("macro_f1").get<double>(),
                          m.at("macro_auc").get<double>());
            out << line;
        }
        const auto& warnings = doc.at("warnings");
        if (!warnings.empty()) {
            out << "\nwarnings\n";
            for (const auto& w : warnings) out << "  " << w.get<std::string>() << '\n';
        }
    } catch (const ordered_json::exception& e) {
        throw ValidationError(path.string() + ": malformed report: " + e.what());
    }
    return out.str();
}

}  // namespace ovcyst
