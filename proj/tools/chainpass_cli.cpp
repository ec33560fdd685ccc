#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "chainpass/scenarios.hpp"

namespace {

using namespace chainpass;

enum class LogLevel { quiet, info, trace };

void print_header(uint64_t seed, uint32_t chain_length) {
    std::cout << "# chainpass transcript seed=" << seed << " chain_length=" << chain_length
              << "\n";
}

void print_transcript(const Transcript& transcript, LogLevel level) {
    if (level == LogLevel::trace) {
        std::cout << transcript.format();
    } else if (level == LogLevel::info) {
        for (const auto& e : transcript.entries)
            std::cout << e.tick << '\t' << to_string(e.channel) << '\t' << e.src << "->" << e.dst
                      << '\t' << e.kind << '\t' << e.outcome << '\n';
    }
}

int run_command(const std::string& target, uint64_t seed, uint32_t chain_length,
                LogLevel level) {
    Scenario scenario;
    bool found = false;
    for (auto& builtin : builtin_scenarios()) {
        if (builtin.name == target) {
            scenario = std::move(builtin);
            found = true;
            break;
        }
    }
    if (!found) {
        if (!std::filesystem::exists(target)) {
            std::cerr << "no such scenario or file: " << target << "\n";
            return 2;
        }
        auto loaded = load_scenario_file(target);
        if (!loaded) {
            std::cerr << "bad scenario file: " << to_string(loaded.error()) << "\n";
            return 2;
        }
        scenario = loaded.value();
    }
    if (chain_length != 0) scenario.chain_length = chain_length;

    print_header(seed, scenario.chain_length);
    Verdict verdict = run_scenario(scenario, seed);
    print_transcript(verdict.transcript, level);
    std::cout << "scenario " << verdict.scenario_name << ": "
              << (verdict.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& line : verdict.evidence) std::cout << "  evidence: " << line << "\n";
    return verdict.pass ? 0 : 1;
}

int demo_command(uint64_t seed, uint32_t chain_length, LogLevel level) {
    Scenario scenario = demo_scenario();
    if (chain_length != 0) scenario.chain_length = chain_length;
    print_header(seed, scenario.chain_length);
    Verdict verdict = run_scenario(scenario, seed);
    if (level == LogLevel::quiet) level = LogLevel::info;  // demo exists to be read
    print_transcript(verdict.transcript, level);
    std::cout << "demo: " << (verdict.pass ? "PASS" : "FAIL") << "\n";
    return verdict.pass ? 0 : 1;
}

int list_command(const std::vector<std::string>& files) {
    std::vector<std::filesystem::path> paths(files.begin(), files.end());
    auto catalog = scenario_catalog(paths);
    if (!catalog) {
        std::cerr << "catalog error: " << to_string(catalog.error()) << "\n";
        return 2;
    }
    for (const auto& s : catalog.value())
        std::cout << s.name << "\t" << s.description << "\n";
    return 0;
}

int store_dump_command(const std::string& path) {
    ServerAgent server("dump", PhoneNumber::parse("000000").value(), 2);
    auto loaded = server.load(path);
    if (!loaded) {
        std::cerr << "cannot read store: " << to_string(loaded.error()) << "\n";
        return 2;
    }
    std::cout << server.store_text();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chainpass: SMS one-time-password protocol simulator and attack harness"};
    app.require_subcommand(1);

    uint64_t seed = 42;
    uint32_t chain_length = 0;  // 0: keep the scenario's own value
    std::string log_level_name = "quiet";
    app.add_option("--seed", seed, "RNG seed (echoed into the transcript header)");
    app.add_option("--chain-length", chain_length, "hash chain length N (min 2)")
        ->check(CLI::Range(2u, 1000000u));
    app.add_option("--log-level", log_level_name, "quiet | info | trace")
        ->check(CLI::IsMember({"quiet", "info", "trace"}));

    std::string run_target;
    auto* run = app.add_subcommand("run", "run a built-in or file-defined scenario");
    run->add_option("scenario", run_target, "built-in name or scenario file path")->required();

    auto* demo = app.add_subcommand("demo", "registration + login + recovery walk-through");

    std::vector<std::string> extra_files;
    auto* list = app.add_subcommand("list-scenarios", "print the scenario catalog");
    list->add_option("--scenario-file", extra_files, "additional scenario file(s)");

    auto* store = app.add_subcommand("store", "account store utilities");
    store->require_subcommand(1);
    std::string store_path;
    auto* dump = store->add_subcommand("dump", "validate and print a store file");
    dump->add_option("path", store_path, "store file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    LogLevel level = log_level_name == "trace"  ? LogLevel::trace
                     : log_level_name == "info" ? LogLevel::info
                                                : LogLevel::quiet;
    if (run->parsed()) return run_command(run_target, seed, chain_length, level);
    if (demo->parsed()) return demo_command(seed, chain_length, level);
    if (list->parsed()) return list_command(extra_files);
    if (dump->parsed()) return store_dump_command(store_path);
    return 2;
}
