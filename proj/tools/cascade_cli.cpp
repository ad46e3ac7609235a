// cascade: edge-cloud coarse-to-fine audio reasoning harness.
//
// Subcommands:
//   run        execute a run config (policy sweep) over a dataset
//   replay     recompute a report from an existing trace log
//   segment    dump the segment proposal for a WAV file or synthetic spec
//   report     score several trace logs and print the trade-off table
//   mock-cloud serve the gate/plan/reason protocol from a scripted fixture

#include <atomic>
#include <csignal>
#include <cstdio>
#include <thread>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cascade/backends.hpp"
#include "cascade/config.hpp"
#include "cascade/dataset.hpp"
#include "cascade/mock_cloud.hpp"
#include "cascade/orchestrator.hpp"
#include "cascade/remote.hpp"
#include "cascade/report.hpp"
#include "cascade/synth.hpp"
#include "cascade/wav.hpp"

namespace {

using namespace cascade;

struct BackendSet {
    std::shared_ptr<const ScriptedFixture> fixture;
    std::unique_ptr<EdgePerceptionBackend> edge;
    std::unique_ptr<AsrBackend> asr;
    std::unique_ptr<CloudControllerBackend> controller;

    Backends view() const {
        return Backends{edge.get(), asr.get(), controller.get()};
    }
};

BackendSet build_backends(const RunConfig& config) {
    BackendSet set;
    const bool needs_fixture = config.edge_backend == "scripted" ||
                               config.asr_backend == "scripted" ||
                               config.controller_backend == "scripted";
    if (needs_fixture || config.mode == RunMode::Sim) {
        if (config.fixture_path.empty()) {
            throw ConfigError("simulation mode requires a scripted fixture (--fixture)");
        }
        set.fixture = std::make_shared<const ScriptedFixture>(load_fixture(config.fixture_path));
    }
    if (config.edge_backend == "scripted") {
        set.edge = std::make_unique<ScriptedEdgeBackend>(set.fixture);
    } else {
        throw ConfigError("unknown edge backend '" + config.edge_backend + "'");
    }
    if (config.asr_backend == "scripted") {
        set.asr = std::make_unique<ScriptedAsrBackend>(set.fixture);
    } else {
        throw ConfigError("unknown asr backend '" + config.asr_backend + "'");
    }
    if (config.controller_backend == "scripted") {
        set.controller = std::make_unique<ScriptedControllerBackend>(set.fixture);
    } else if (config.controller_backend == "local") {
        set.controller = std::make_unique<LocalControllerBackend>(config.configs.gate);
    } else if (config.controller_backend == "remote") {
        set.controller = std::make_unique<RemoteControllerBackend>(config.controller_url);
    } else {
        throw ConfigError("unknown controller backend '" + config.controller_backend + "'");
    }
    return set;
}

int cmd_run(const RunConfig& config, bool verbose) {
    if (config.dataset_path.empty()) {
        throw ConfigError("run: no dataset configured");
    }
    if (config.policies.empty()) {
        throw ConfigError("run: no policies configured");
    }
    const std::vector<DatasetRecord> dataset = load_dataset(config.dataset_path);
    const auto gold = gold_answers(dataset);
    const std::string dataset_dir =
        std::filesystem::path(config.dataset_path).parent_path().string();
    const BackendSet backends = build_backends(config);
    std::filesystem::create_directories(config.out_dir);

    std::vector<RunReport> reports;
    for (const std::string& policy_name : config.policies) {
        const Policy policy = policy_from_name(policy_name);
        std::unique_ptr<WireLog> wire_log;
        if (!config.wire_log_path.empty()) {
            wire_log = std::make_unique<WireLog>(config.wire_log_path + "-" + policy_name +
                                                 ".jsonl");
        }
        const auto backend_view = backends.view();
        const std::vector<TraceRecord> traces =
            run_dataset(dataset, policy, backend_view, config.configs, config.workers,
                        wire_log.get(), dataset_dir);

        const auto trace_path =
            std::filesystem::path(config.out_dir) / ("traces-" + policy_name + ".jsonl");
        write_trace_log(trace_path.string(), traces);

        const RunReport report = score(traces, gold, policy_name);
        const auto report_path =
            std::filesystem::path(config.out_dir) / ("report-" + policy_name + ".json");
        std::ofstream out(report_path);
        out << report_to_json(report) << '\n';

        std::cout << render_report_table(report) << '\n';
        if (verbose) {
            std::cout << render_breakdown_table(breakdown(traces)) << '\n';
        }
        reports.push_back(report);
    }

    if (reports.size() >= 2) {
        const std::vector<TradeoffRow> rows = compare_policies(reports);
        std::cout << render_tradeoff_table(rows);
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const TradeoffRow& row : rows) {
            nlohmann::ordered_json r;
            r["policy"] = row.policy;
            r["accuracy"] = row.accuracy;
            r["mean_latency_s"] = row.mean_latency_s;
            r["pareto_dominated"] = row.pareto_dominated;
            j.push_back(std::move(r));
        }
        std::ofstream out(std::filesystem::path(config.out_dir) / "tradeoff.json");
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_replay(const std::string& traces_path, const std::string& dataset_path,
               const std::string& label) {
    const std::vector<TraceRecord> traces = read_trace_log(traces_path);
    const auto gold = gold_answers(load_dataset(dataset_path));
    const RunReport report = score(traces, gold, label);
    std::cout << render_report_table(report);
    std::cout << render_breakdown_table(breakdown(traces));
    return 0;
}

int cmd_segment(const std::string& wav_path, const std::string& synth_spec,
                const std::string& config_path) {
    SegmenterConfig seg_config;
    if (!config_path.empty()) {
        seg_config = load_run_config(config_path).configs.segmenter;
    }
    AudioClip clip;
    if (!synth_spec.empty()) {
        clip = synthesize_clip("synthetic", synth_spec);
    } else if (!wav_path.empty()) {
        clip = read_wav(wav_path, std::filesystem::path(wav_path).stem().string());
    } else {
        throw InvalidInputError("segment: pass --audio <wav> or --synth <spec>");
    }
    const SegmentProposal proposal = propose(clip, seg_config);
    std::printf("clip %s  duration %.3f s  windows %zu\n", proposal.clip_id.c_str(),
                proposal.clip_duration, proposal.windows.size());
    std::printf("index  start_s    end_s      source        energy\n");
    for (const RoiWindow& w : proposal.windows) {
        if (w.energy_score) {
            std::printf("%5d  %8.3f  %8.3f   %-12s  %.6f\n", w.index, w.start_s, w.end_s,
                        window_source_name(w.source), *w.energy_score);
        } else {
            std::printf("%5d  %8.3f  %8.3f   %-12s  -\n", w.index, w.start_s, w.end_s,
                        window_source_name(w.source));
        }
    }
    return 0;
}

int cmd_report(const std::vector<std::string>& trace_paths, const std::string& dataset_path) {
    const auto gold = gold_answers(load_dataset(dataset_path));
    std::vector<RunReport> reports;
    for (const std::string& path : trace_paths) {
        std::string label = std::filesystem::path(path).stem().string();
        if (label.rfind("traces-", 0) == 0) label = label.substr(7);
        reports.push_back(score(read_trace_log(path), gold, label));
        std::cout << render_report_table(reports.back()) << '\n';
    }
    if (reports.size() >= 2) {
        std::cout << render_tradeoff_table(compare_policies(reports));
    }
    return 0;
}

std::atomic<bool> g_shutdown{false};

int cmd_mock_cloud(const std::string& fixture_path, const std::string& host, int port,
                   const std::string& capture_path) {
    auto fixture = std::make_shared<const ScriptedFixture>(load_fixture(fixture_path));
    MockCloudServer server(fixture, capture_path);
    server.start(host, port);
    std::printf("mock cloud serving %zu fixture records at %s\n", fixture->size(),
                server.url().c_str());
    std::fflush(stdout);
    // Serve until interrupted.
    std::signal(SIGINT, [](int) { g_shutdown = true; });
    std::signal(SIGTERM, [](int) { g_shutdown = true; });
    while (!g_shutdown) {
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
    server.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edge-cloud coarse-to-fine audio reasoning harness"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "execute a policy sweep over a dataset");
    std::string run_config_path;
    std::string run_dataset_path, run_fixture_path, run_out_dir, run_mode, run_wire_log;
    std::vector<std::string> run_policies;
    int run_workers = 0;
    std::int64_t run_seed = -1;
    bool run_verbose = false;
    run->add_option("--config", run_config_path, "run configuration file")->required();
    run->add_flag("-v,--verbose", run_verbose, "also print per-policy stage breakdowns");
    run->add_option("--dataset", run_dataset_path, "dataset override");
    run->add_option("--fixture", run_fixture_path, "scripted fixture override");
    run->add_option("--policy", run_policies, "policy override (repeatable)");
    run->add_option("--seed", run_seed, "network seed override");
    run->add_option("--workers", run_workers, "worker count override");
    run->add_option("--out", run_out_dir, "output directory override");
    run->add_option("--mode", run_mode, "sim|live override");
    run->add_option("--wire-log", run_wire_log, "wire log path prefix");

    // replay
    auto* replay = app.add_subcommand("replay", "recompute a report from a trace log");
    std::string replay_traces, replay_dataset, replay_label = "replay";
    replay->add_option("--traces", replay_traces, "trace log")->required();
    replay->add_option("--dataset", replay_dataset, "dataset (for gold answers)")->required();
    replay->add_option("--label", replay_label, "policy label for the report");

    // segment
    auto* segment = app.add_subcommand("segment", "dump a segment proposal");
    std::string seg_wav, seg_synth, seg_config;
    segment->add_option("--audio", seg_wav, "mono PCM WAV file");
    segment->add_option("--synth", seg_synth, "synthetic audio spec");
    segment->add_option("--config", seg_config, "run config providing the segmenter block");

    // report
    auto* report = app.add_subcommand("report", "score trace logs and compare policies");
    std::vector<std::string> report_traces;
    std::string report_dataset;
    report->add_option("--traces", report_traces, "trace logs (repeatable)")->required();
    report->add_option("--dataset", report_dataset, "dataset (for gold answers)")->required();

    // mock-cloud
    auto* mock = app.add_subcommand("mock-cloud", "serve the controller protocol");
    std::string mock_fixture, mock_host = "127.0.0.1", mock_capture;
    int mock_port = 8787;
    mock->add_option("--fixture", mock_fixture, "scripted fixture")->required();
    mock->add_option("--host", mock_host, "bind host");
    mock->add_option("--port", mock_port, "bind port (0 = any)");
    mock->add_option("--capture", mock_capture, "capture served requests to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            RunConfig config = load_run_config(run_config_path);
            if (!run_dataset_path.empty()) config.dataset_path = run_dataset_path;
            if (!run_fixture_path.empty()) config.fixture_path = run_fixture_path;
            if (!run_policies.empty()) config.policies = run_policies;
            if (run_workers > 0) config.workers = run_workers;
            if (run_seed >= 0) config.configs.network.seed = static_cast<std::uint64_t>(run_seed);
            if (!run_out_dir.empty()) config.out_dir = run_out_dir;
            if (!run_wire_log.empty()) config.wire_log_path = run_wire_log;
            if (!run_mode.empty()) {
                config.mode = run_mode_from_name(run_mode);
                config.configs.mode = config.mode;
            }
            for (const std::string& p : config.policies) policy_from_name(p);
            return cmd_run(config, run_verbose);
        }
        if (replay->parsed()) {
            return cmd_replay(replay_traces, replay_dataset, replay_label);
        }
        if (segment->parsed()) {
            return cmd_segment(seg_wav, seg_synth, seg_config);
        }
        if (report->parsed()) {
            return cmd_report(report_traces, report_dataset);
        }
        if (mock->parsed()) {
            return cmd_mock_cloud(mock_fixture, mock_host, mock_port, mock_capture);
        }
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"]["type"] = "run_failure";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << std::endl;
        return 1;
    }
    return 0;
}
