#include "gauntlet/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gauntlet/error.hpp"
#include "gauntlet/gateway.hpp"
#include "gauntlet/json_io.hpp"
#include "gauntlet/report.hpp"
#include "gauntlet/runlog.hpp"
#include "gauntlet/session.hpp"

namespace gauntlet {
namespace {

namespace fs = std::filesystem;

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

CalibrationTable load_table(const fs::path& path) {
    try {
        CalibrationTable t = calibration_from_json(read_json_file(path));
        t.validate();
        return t;
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::vector<double> counts_of(const std::vector<RunRecord>& records) {
    std::vector<double> out;
    for (long c : challenge_counts(records)) out.push_back(static_cast<double>(c));
    return out;
}

LoadedLog load_arm(const fs::path& dir, std::ostream& err) {
    const fs::path log = fs::is_directory(dir) ? dir / "runs.jsonl" : dir;
    LoadedLog loaded = load_log(log);
    for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
    if (loaded.records.empty()) throw InputError(fmt::format("{} holds no runs", log.string()));
    return loaded;
}

std::string arm_label(const fs::path& dir) {
    const fs::path config = dir / "config.json";
    if (fs::is_directory(dir) && fs::exists(config)) {
        const json j = read_json_file(config);
        if (j.contains("preset") && j["preset"].is_string()) return j["preset"].get<std::string>();
    }
    const fs::path clean = dir.has_filename() ? dir : dir.parent_path();
    return clean.filename().string();
}

struct RunArgs {
    std::optional<std::string> preset;
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::string out;
    int threads = 0;
    std::optional<std::string> table;
    std::string format = "csv";
};

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    if (a.config) {
        json j = read_json_file(*a.config);
        if (a.preset) j["preset"] = *a.preset;
        config = experiment_config_from_json(j);
    } else {
        config = preset(a.preset.value_or("vpn_on"));
    }
    if (a.seed) config.master_seed = *a.seed;
    if (a.runs) config.runs = *a.runs;
    if (a.table) config.calibration = load_table(*a.table);
    config.validate();

    const int threads = a.threads > 0 ? a.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const ExperimentResult result = run_experiment(config, threads);

    const fs::path dir(a.out);
    fs::create_directories(dir);
    const fs::path log = dir / "runs.jsonl";
    fs::remove(log);
    persist_log(result.records, log);
    write_text(dir / "config.json", json(config).dump(2) + "\n");
    export_report(result, dir, parse_report_format(a.format));

    long unsolved = 0;
    for (const auto& r : result.records) unsolved += r.solved ? 0 : 1;
    out << summary_csv(result.summary);
    err << fmt::format("{}: {} runs, {} unsolved -> {}\n", config.preset, result.records.size(), unsolved,
                       dir.string());
    return kExitOk;
}

int do_compare(const std::string& arm_a, const std::string& arm_b, const std::optional<std::string>& out_dir,
               const std::string& format, std::ostream& out, std::ostream& err) {
    const auto a = load_arm(arm_a, err);
    const auto b = load_arm(arm_b, err);
    const auto xa = counts_of(a.records);
    const auto xb = counts_of(b.records);
    if (xa.size() < 2 || xb.size() < 2) throw InputError("each arm needs at least two runs for a t-test");
    const SummaryStats sa = summarize(xa);
    const SummaryStats sb = summarize(xb);
    const TTestResult t = welch_t(xa, xb);
    const std::string la = arm_label(arm_a);
    const std::string lb = arm_label(arm_b);
    out << comparison_csv(la, sa, lb, sb, t);
    if (out_dir) export_comparison(la, sa, lb, sb, t, *out_dir, parse_report_format(format));
    return kExitOk;
}

int do_calibrate(const std::optional<std::string>& table, const std::optional<std::string>& write,
                 std::ostream& out) {
    const CalibrationTable t = table ? load_table(*table) : CalibrationTable::defaults();
    const std::string text = json(t).dump(2) + "\n";
    if (write) write_text(*write, text);
    out << text;
    return kExitOk;
}

int do_replay(const std::string& log, const std::optional<std::string>& out_dir, std::ostream& out,
              std::ostream& err) {
    const auto loaded = load_arm(log, err);
    const SummaryStats s = summarize(challenge_counts(loaded.records));
    if (out_dir) {
        fs::create_directories(*out_dir);
        write_text(fs::path(*out_dir) / "series.csv", series_csv(loaded.records));
        write_text(fs::path(*out_dir) / "summary.csv", summary_csv(s));
    }
    out << summary_csv(s);
    return kExitOk;
}

int do_serve(const std::string& host, int port, const std::optional<std::string>& log, bool debug,
             const std::optional<std::string>& static_dir, std::optional<std::uint64_t> seed,
             const std::optional<std::string>& table, std::ostream& out) {
    GatewayOptions options;
    options.debug = debug;
    if (log) options.log_path = *log;
    if (seed) options.seed = *seed;
    if (table) options.calibration = load_table(*table);
    Gateway gateway(options);
    std::optional<fs::path> root;
    if (static_dir) root = *static_dir;
    HttpGateway http(gateway, root);
    const int bound = http.bind(host, port);
    out << fmt::format("gateway listening on http://{}:{}\n", host, bound) << std::flush;
    http.listen();
    return kExitOk;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"reCAPTCHA v2 behaviour simulator", "gauntlet"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "run a preset or configured experiment");
    run_cmd->add_option("--preset", run.preset, "preset name");
    run_cmd->add_option("--config", run.config, "experiment config file (JSON)");
    run_cmd->add_option("--seed", run.seed, "master seed");
    run_cmd->add_option("--runs", run.runs, "number of captcha sessions")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", run.out, "output directory")->required();
    run_cmd->add_option("--threads", run.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--table", run.table, "calibration table override");
    run_cmd->add_option("--format", run.format, "report format")->check(CLI::IsMember({"csv", "json"}));

    std::string arm_a;
    std::string arm_b;
    std::optional<std::string> compare_out;
    std::string compare_format = "csv";
    auto* compare_cmd = app.add_subcommand("compare", "Welch t-test between two experiment outputs");
    compare_cmd->add_option("--arm-a", arm_a, "first run directory or log")->required();
    compare_cmd->add_option("--arm-b", arm_b, "second run directory or log")->required();
    compare_cmd->add_option("--out", compare_out, "write the comparison here");
    compare_cmd->add_option("--format", compare_format)->check(CLI::IsMember({"csv", "json"}));

    std::optional<std::string> table;
    std::optional<std::string> table_write;
    auto* calibrate_cmd = app.add_subcommand("calibrate", "dump the effective calibration table");
    calibrate_cmd->add_option("--table", table, "table overriding the defaults");
    calibrate_cmd->add_option("--write", table_write, "also write the effective table here");

    std::string host = "127.0.0.1";
    int port = default_port();
    std::optional<std::string> serve_log;
    bool debug = false;
    std::optional<std::string> static_dir;
    std::optional<std::uint64_t> serve_seed;
    std::optional<std::string> serve_table;
    auto* serve_cmd = app.add_subcommand("serve", "serve challenges to human participants over HTTP");
    serve_cmd->add_option("--port", port, "listen port (default $GAUNTLET_PORT or 8080)")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", host, "listen address");
    serve_cmd->add_option("--log", serve_log, "append completed captchas to this log");
    serve_cmd->add_flag("--debug", debug, "include ground truth in challenge payloads");
    serve_cmd->add_option("--static", static_dir, "directory served at /")->check(CLI::ExistingDirectory);
    serve_cmd->add_option("--seed", serve_seed, "seed for tokens and challenges");
    serve_cmd->add_option("--table", serve_table, "calibration table override");

    std::string replay_log;
    std::optional<std::string> replay_out;
    auto* replay_cmd = app.add_subcommand("replay", "recompute statistics from a run log");
    replay_cmd->add_option("--log", replay_log, "run log (or a run directory)")->required();
    replay_cmd->add_option("--out", replay_out, "write series.csv and summary.csv here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (*run_cmd) return do_run(run, out, err);
        if (*compare_cmd) return do_compare(arm_a, arm_b, compare_out, compare_format, out, err);
        if (*calibrate_cmd) return do_calibrate(table, table_write, out);
        if (*replay_cmd) return do_replay(replay_log, replay_out, out, err);
        if (*serve_cmd) return do_serve(host, port, serve_log, debug, static_dir, serve_seed, serve_table, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace gauntlet
