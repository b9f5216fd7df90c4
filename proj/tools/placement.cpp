// SPDX-License-Identifier: Apache-2.0
// Command line front end: game server, agent client, log analysis, self-play.
#include <pthread.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "placement/agent.hpp"
#include "placement/analysis.hpp"
#include "placement/event_log.hpp"
#include "placement/llm_parser.hpp"
#include "placement/selfplay.hpp"
#include "placement/server.hpp"
#include "placement/ws_client.hpp"

namespace fs = std::filesystem;
using namespace placement;

namespace {

SceneCatalog scenes_from(const std::string& path) {
    return path.empty() ? default_scenes() : load_scenes(path);
}

SynonymTable synonyms_from(const std::string& path) {
    return path.empty() ? default_synonyms() : load_synonyms(path);
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::trunc);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

fs::path text_path_for(const fs::path& json_path) {
    fs::path p = json_path;
    p.replace_extension(".txt");
    return p;
}

int serve(const ServerOptions& options) {
    // Block the signals before any worker thread exists, then wait for them here.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    GameServer server(options);
    const auto port = server.start();
    std::cout << "listening on " << options.address << ":" << port << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    std::cout << "shutting down" << std::endl;
    server.stop();
    return 0;
}

int agent(const std::string& room, const std::string& server_addr, const std::string& parser_kind,
          const std::string& scenes_path, const std::string& synonyms_path, const std::string& name) {
    std::shared_ptr<InstructionParser> rules = std::make_shared<RuleParser>();
    std::shared_ptr<InstructionParser> parser = rules;
    std::shared_ptr<InstructionParser> fallback;
    if (parser_kind == "llm") {
        if (auto config = LlmConfig::from_env()) {
            parser = std::make_shared<RemoteLLMParser>(std::make_shared<HttpCompletionClient>(*config));
            fallback = rules;
        } else {
            std::cerr << "AGENT_LLM_ENDPOINT is not set, using the rule parser\n";
        }
    }
    Agent bot(scenes_from(scenes_path), synonyms_from(synonyms_path), parser, fallback);
    const auto address = parse_server_address(server_addr);
    WsClient client(address.host, address.port, address.path, std::chrono::hours(1));
    const auto end = run_agent(client, bot, room, name);
    std::cout << end.dump() << std::endl;
    if (bot.fallbacks_used() > 0) {
        std::cerr << "rule parser fallback used " << bot.fallbacks_used() << " times\n";
    }
    return end.value("type", "") == "game_end" ? 0 : 1;
}

int analyze(const fs::path& log_dir, double theta, const std::string& unit, const fs::path& out) {
    std::vector<analysis::GameInput> games;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(log_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".log") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        try {
            games.push_back(analysis::game_from_log(file.stem().string(), read_log(file)));
        } catch (const LogError& e) {
            std::cerr << file.string() << ": skipped, " << e.what() << "\n";
        }
    }
    if (games.empty()) {
        std::cerr << "no readable logs in " << log_dir.string() << "\n";
        return 1;
    }
    analysis::ReportOptions options;
    options.theta = theta;
    options.unit = analysis::parse_length_unit(unit);
    const auto table = analysis::report(games, options);
    write_file(out, table.to_json().dump(2) + "\n");
    write_file(text_path_for(out), table.to_text());
    std::cout << table.to_text();
    return 0;
}

int selfplay(const std::vector<std::string>& matchups, int seeds, std::uint64_t first_seed,
             const fs::path& out, const std::string& scenes_path, const std::string& synonyms_path) {
    BatchConfig config;
    for (const auto& m : matchups) {
        config.matchups.push_back(parse_matchup(m));
    }
    for (int i = 0; i < seeds; ++i) {
        config.seeds.push_back(first_seed + static_cast<std::uint64_t>(i));
    }
    config.context.scenes = scenes_from(scenes_path);
    config.context.synonyms = synonyms_from(synonyms_path);
    config.out_dir = out;
    const auto result = batch_run(config);

    for (const auto& s : result.summaries) {
        std::cout << s.matchup.name() << ": " << s.games << " games, " << s.aborted << " aborted";
        for (std::size_t r = 0; r < 2; ++r) {
            std::cout << ", round " << r + 1 << " score " << s.mean_score[r] << " diff "
                      << s.mean_dominance_diff[r];
        }
        std::cout << "\n";
    }
    for (const auto& record : result.records) {
        if (record.aborted) {
            std::cout << record.room_id << ": " << record.abort_reason << "\n";
        }
    }
    if (result.report) {
        write_file(out / "report.json", result.report->to_json().dump(2) + "\n");
        write_file(out / "report.txt", result.report->to_text());
        std::cout << result.report->to_text();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collaborative object placement game: server, agent and analysis tools"};
    app.require_subcommand(1);

    ServerOptions server_options;
    std::string scenes_path;
    std::string log_dir;
    std::string app_dir;
    auto* serve_cmd = app.add_subcommand("serve", "Run the websocket game server");
    serve_cmd->add_option("--port", server_options.port, "Port, 0 for any free one")->capture_default_str();
    serve_cmd->add_option("--address", server_options.address, "Bind address")->capture_default_str();
    serve_cmd->add_option("--scenes", scenes_path, "Scene config (JSON)")->check(CLI::ExistingFile);
    serve_cmd->add_option("--log-dir", log_dir, "Directory for per-room logs");
    serve_cmd->add_option("--seed", server_options.seed, "Root seed")->capture_default_str();
    serve_cmd->add_option("--app-dir", app_dir, "Static files served under /app")->check(CLI::ExistingDirectory);
    serve_cmd->add_option("--threads", server_options.threads, "Worker threads")->capture_default_str();

    std::string room;
    std::string server_addr = "127.0.0.1:8080";
    std::string parser_kind = "rule";
    std::string synonyms_path;
    std::string agent_name = "agent";
    auto* agent_cmd = app.add_subcommand("agent", "Join a room as the baseline agent");
    agent_cmd->add_option("--room", room, "Room id")->required();
    agent_cmd->add_option("--server", server_addr, "host:port of the server")->capture_default_str();
    agent_cmd->add_option("--parser", parser_kind, "Instruction parser")
        ->check(CLI::IsMember({"rule", "llm"}))
        ->capture_default_str();
    agent_cmd->add_option("--scenes", scenes_path, "Scene config (JSON)")->check(CLI::ExistingFile);
    agent_cmd->add_option("--synonyms", synonyms_path, "Synonym table (JSON)")->check(CLI::ExistingFile);
    agent_cmd->add_option("--name", agent_name, "Display name")->capture_default_str();

    std::string analyze_dir;
    double theta = analysis::kDefaultTheta;
    std::string unit = "tokens";
    std::string report_out;
    auto* analyze_cmd = app.add_subcommand("analyze", "Classify logged games and tabulate scores");
    analyze_cmd->add_option("--log-dir", analyze_dir, "Directory of room logs")
        ->required()
        ->check(CLI::ExistingDirectory);
    analyze_cmd->add_option("--theta", theta, "Strategy threshold")->capture_default_str();
    analyze_cmd->add_option("--length-unit", unit, "Message length unit")
        ->check(CLI::IsMember({"tokens", "chars"}))
        ->capture_default_str();
    analyze_cmd->add_option("--out", report_out, "Report path (JSON; a .txt table is written next to it)")
        ->required();

    std::vector<std::string> matchups;
    int seeds = 10;
    std::uint64_t first_seed = 1;
    std::string selfplay_out;
    auto* selfplay_cmd = app.add_subcommand("selfplay", "Play scripted matchups in-process");
    selfplay_cmd->add_option("--matchup", matchups, "a:b, repeatable (e.g. leader:agent)")->required();
    selfplay_cmd->add_option("--seeds", seeds, "Games per matchup")->capture_default_str()->check(CLI::PositiveNumber);
    selfplay_cmd->add_option("--first-seed", first_seed, "Seed of the first game")->capture_default_str();
    selfplay_cmd->add_option("--out", selfplay_out, "Output directory for logs and report")->required();
    selfplay_cmd->add_option("--scenes", scenes_path, "Scene config (JSON)")->check(CLI::ExistingFile);
    selfplay_cmd->add_option("--synonyms", synonyms_path, "Synonym table (JSON)")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve_cmd) {
            server_options.scenes = scenes_from(scenes_path);
            if (!log_dir.empty()) {
                server_options.log_dir = log_dir;
            }
            if (!app_dir.empty()) {
                server_options.app_dir = app_dir;
            }
            return serve(server_options);
        }
        if (*agent_cmd) {
            return agent(room, server_addr, parser_kind, scenes_path, synonyms_path, agent_name);
        }
        if (*analyze_cmd) {
            return analyze(analyze_dir, theta, unit, report_out);
        }
        if (*selfplay_cmd) {
            return selfplay(matchups, seeds, first_seed, selfplay_out, scenes_path, synonyms_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
