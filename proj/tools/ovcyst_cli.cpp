// ovcyst: batch runner for the cyst classification pipeline.
//
//   ovcyst run --config <path> [--out <dir>] [--seeds 1,2,3]
//   ovcyst generate --spec <path> --out <csv>
//   ovcyst report --dir <path>
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include "ovcyst/config.hpp"
#include "ovcyst/csv.hpp"
#include "ovcyst/error.hpp"
#include "ovcyst/pipeline.hpp"
#include "ovcyst/synthgen.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

void print_timings(const ovcyst::RunReport& report) {
    for (const auto& t : report.timings) std::fprintf(stderr, "  %-20s %8.3f s\n", t.stage.c_str(), t.seconds);
}

int run_command(const std::string& config_path, const std::string& out_override, const std::vector<std::uint64_t>& seeds) {
    ovcyst::PipelineConfig config = ovcyst::load_config(config_path);
    if (!out_override.empty()) config.output_dir = out_override;

    if (seeds.empty()) {
        const auto report = ovcyst::run(config);
        ovcyst::emit_report(report, config.output_dir);
        std::fprintf(stderr, "wrote %s\n", config.output_dir.string().c_str());
        print_timings(report);
        return 0;
    }
    const auto base = config.output_dir;
    for (std::uint64_t seed : seeds) {
        ovcyst::PipelineConfig per_seed = config;
        per_seed.split_seed = seed;
        per_seed.output_dir = base / ("seed_" + std::to_string(seed));
        const auto report = ovcyst::run(per_seed);
        ovcyst::emit_report(report, per_seed.output_dir);
        std::fprintf(stderr, "wrote %s\n", per_seed.output_dir.string().c_str());
        print_timings(report);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cyst-feature ovarian screening classifier pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::uint64_t> seeds;
    auto* run = app.add_subcommand("run", "Run the pipeline described by a config file");
    run->add_option("--config", config_path, "Pipeline config (JSON)")->required();
    run->add_option("--out", out_dir, "Override the output directory");
    run->add_option("--seeds", seeds, "Split seeds; one report per seed under <out>/seed_<n>")->delimiter(',');

    std::string spec_path;
    std::string csv_out;
    auto* generate = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
    generate->add_option("--spec", spec_path, "Generator spec (JSON)")->required();
    generate->add_option("--out", csv_out, "Output CSV path")->required();

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Pretty-print a run report");
    report->add_option("--dir", report_dir, "Directory holding report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*run) return run_command(config_path, out_dir, seeds);
        if (*generate) {
            const auto spec = ovcyst::load_generator_spec(spec_path);
            ovcyst::save_csv(csv_out, ovcyst::generate(spec));
            return 0;
        }
        if (*report) {
            std::cout << ovcyst::summarize_report(report_dir);
            return 0;
        }
    } catch (const ovcyst::StageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_validation() ? kExitValidation : kExitRuntime;
    } catch (const ovcyst::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
