#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcrs/metrics.hpp"
#include "gcrs/scenario.hpp"
#include "gcrs/sim.hpp"
#include "gcrs/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;

int cmd_validate(const std::string& scenario_path) {
    const gcrs::LoadResult loaded = gcrs::load_scenario(scenario_path);
    if (loaded.ok()) {
        std::cout << "ok: " << scenario_path << "\n";
        return kExitOk;
    }
    for (const auto& err : loaded.errors) {
        std::cerr << "error: " << err << "\n";
    }
    return kExitDataError;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out.is_open()) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    out << content;
    return true;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_trace, const std::string& out_metrics,
            const std::string& format) {
    const gcrs::LoadResult loaded = gcrs::load_scenario(scenario_path);
    if (!loaded.ok()) {
        for (const auto& err : loaded.errors) {
            std::cerr << "error: " << err << "\n";
        }
        return kExitDataError;
    }
    const gcrs::SimResult result = gcrs::run_simulation(*loaded.config, seed);

    if (!out_trace.empty()) {
        std::string blob;
        for (const auto& line : result.trace_lines) {
            blob += line;
            blob += '\n';
        }
        if (!write_file(out_trace, blob)) {
            return kExitDataError;
        }
    }
    const std::string metrics_json = gcrs::metrics_to_json(result.metrics);
    if (!out_metrics.empty() && !write_file(out_metrics, metrics_json + "\n")) {
        return kExitDataError;
    }
    if (format == "json") {
        std::cout << metrics_json << "\n";
    } else {
        std::cout << gcrs::metrics_to_table(result.metrics);
    }
    return kExitOk;
}

int cmd_metrics(const std::string& scenario_path, const std::string& trace_path,
                const std::string& format) {
    const gcrs::LoadResult loaded = gcrs::load_scenario(scenario_path);
    if (!loaded.ok()) {
        for (const auto& err : loaded.errors) {
            std::cerr << "error: " << err << "\n";
        }
        return kExitDataError;
    }
    const gcrs::ParsedTrace trace = gcrs::parse_trace_file(trace_path);
    if (!trace.ok()) {
        for (const auto& err : trace.errors) {
            std::cerr << "error: " << err << "\n";
        }
        return kExitDataError;
    }
    const gcrs::MetricsReport report = gcrs::compute_metrics(trace.events, *loaded.config);
    if (format == "json") {
        std::cout << gcrs::metrics_to_json(report) << "\n";
    } else {
        std::cout << gcrs::metrics_to_table(report);
    }
    return kExitOk;
}

std::optional<std::vector<std::string>> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        std::cerr << "error: cannot open " << path << "\n";
        return std::nullopt;
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

int cmd_diff_trace(const std::string& left_path, const std::string& right_path) {
    const auto left = read_lines(left_path);
    const auto right = read_lines(right_path);
    if (!left.has_value() || !right.has_value()) {
        return kExitDataError;
    }
    const gcrs::TraceDiff diff = gcrs::diff_traces(*left, *right);
    if (diff.identical) {
        std::cout << "traces identical (" << left->size() << " lines)\n";
        return kExitOk;
    }
    std::cout << "traces diverge at line " << diff.first_divergent_line << "\n"
              << "  left:  " << diff.left << "\n"
              << "  right: " << diff.right << "\n";
    return kExitDataError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Global cognitive-radio spectrum simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string trace_path;
    std::string left_path;
    std::string right_path;
    std::string out_trace;
    std::string out_metrics;
    std::string format = "table";
    std::optional<std::uint64_t> seed;

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("scenario", scenario_path, "scenario JSON path")->required();

    auto* run = app.add_subcommand("run", "Run a scenario");
    run->add_option("scenario", scenario_path, "scenario JSON path")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out-trace", out_trace, "write the JSONL event trace here");
    run->add_option("--out-metrics", out_metrics, "write the metrics JSON here");
    run->add_option("--format", format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));

    auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a trace");
    metrics->add_option("scenario", scenario_path, "scenario JSON path")->required();
    metrics->add_option("trace", trace_path, "trace JSONL path")->required();
    metrics->add_option("--format", format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));

    auto* diff = app.add_subcommand("diff-trace", "Compare two traces");
    diff->add_option("left", left_path, "first trace")->required();
    diff->add_option("right", right_path, "second trace")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (validate->parsed()) {
        return cmd_validate(scenario_path);
    }
    if (run->parsed()) {
        return cmd_run(scenario_path, seed, out_trace, out_metrics, format);
    }
    if (metrics->parsed()) {
        return cmd_metrics(scenario_path, trace_path, format);
    }
    if (diff->parsed()) {
        return cmd_diff_trace(left_path, right_path);
    }
    return kExitUsage;
}
