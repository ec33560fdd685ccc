#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "chainpass/scenarios.hpp"

using namespace chainpass;

namespace {

struct FileGuard {
    std::filesystem::path path;
    ~FileGuard() { std::filesystem::remove(path); }
};

FileGuard write_temp(const char* tag, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / (std::string("chainpass-scn-") + tag);
    std::ofstream(path) << text;
    return FileGuard{path};
}

std::string evidence_text(const Verdict& v) {
    std::string out;
    for (const auto& e : v.evidence) out += e + "\n";
    return out;
}

}  // namespace

TEST_CASE("all built-in scenarios reach their expected verdict") {
    for (const auto& scenario : builtin_scenarios()) {
        CAPTURE(scenario.name);
        Verdict v = run_scenario(scenario, 42);
        INFO(evidence_text(v));
        CHECK(v.pass);
    }
}

TEST_CASE("built-in scenarios hold up under a different seed") {
    for (const auto& scenario : builtin_scenarios()) {
        CAPTURE(scenario.name);
        Verdict v = run_scenario(scenario, 1337);
        INFO(evidence_text(v));
        CHECK(v.pass);
    }
}

TEST_CASE("the demo flow passes and logs every phase") {
    Verdict v = run_scenario(demo_scenario(), 42);
    INFO(evidence_text(v));
    REQUIRE(v.pass);
    std::string text = v.transcript.format();
    CHECK(text.find("RegistrationSms") != std::string::npos);
    CHECK(text.find("LoginSms") != std::string::npos);
    CHECK(text.find("RecoverySms") != std::string::npos);
    CHECK(text.find("registration-complete") != std::string::npos);
    CHECK(text.find("login-accepted;next_index=1") != std::string::npos);
    CHECK(text.find("recovery-accepted") != std::string::npos);
}

TEST_CASE("scenario runs are a pure function of the seed") {
    for (const auto& scenario : builtin_scenarios()) {
        CAPTURE(scenario.name);
        Verdict a = run_scenario(scenario, 7);
        // Closures carry per-run state, so rebuild before the second run.
        Verdict b;
        for (const auto& again : builtin_scenarios())
            if (again.name == scenario.name) b = run_scenario(again, 7);
        CHECK(a.transcript.format() == b.transcript.format());
        CHECK(a.pass == b.pass);
    }
}

TEST_CASE("the built-in catalog has the eight documented scenarios") {
    std::set<std::string> names;
    for (const auto& s : builtin_scenarios()) names.insert(s.name);
    CHECK(names == std::set<std::string>{"honest_multi_server", "replay", "sms_spoof",
                                         "phishing_mitm", "keylogger_kiosk", "password_reuse",
                                         "phone_loss_recovery", "chain_exhaustion"});
}

static const char* kValidScenario = R"(# custom flow: one user, two logins, a dropped SMS
name = custom_drop
description = second login SMS is dropped in flight
expectation = all_logins_succeed
expected_logins = 1

[server bank.example]
phone = 155500110011

[user carol]
phone = 155577665544
password = carols password
sim = sim-carol

[action]
at = 0
do = register carol bank.example

[action]
at = 100
do = login carol bank.example

[action]
at = 200
do = login carol bank.example

[tap sms]
match = LoginSms
nth = 2
do = drop
)";

TEST_CASE("a scenario file loads, lists and runs") {
    auto guard = write_temp("valid", kValidScenario);
    auto loaded = load_scenario_file(guard.path);
    REQUIRE(loaded.ok());
    const Scenario& s = loaded.value();
    CHECK(s.name == "custom_drop");
    CHECK(s.expected_server_accepts == 1);

    Verdict v = run_scenario(s, 42);
    INFO(evidence_text(v));
    CHECK(v.pass);
    CHECK(v.transcript.format().find("dropped-by-adversary") != std::string::npos);

    auto catalog = scenario_catalog({guard.path});
    REQUIRE(catalog.ok());
    CHECK(catalog.value().size() == 9);
}

TEST_CASE("scenario files with grammar errors are refused") {
    auto expect_config_error = [](const char* tag, const std::string& text) {
        auto guard = write_temp(tag, text);
        auto loaded = load_scenario_file(guard.path);
        REQUIRE(!loaded.ok());
        CHECK(loaded.error() == Err::config_error);
    };

    expect_config_error("noname",
                        "[server s.example]\nphone = 123456\n"
                        "[user u]\nphone = 234567\npassword = p\nsim = sim-u\n");
    expect_config_error("badkey", "name = x\nflavor = vanilla\n");
    expect_config_error("badaction",
                        "name = x\n[server s.example]\nphone = 123456\n"
                        "[user u]\nphone = 234567\npassword = p\nsim = sim-u\n"
                        "[action]\nat = 1\ndo = teleport u\n");
    expect_config_error("badchannel",
                        "name = x\n[server s.example]\nphone = 123456\n"
                        "[user u]\nphone = 234567\npassword = p\nsim = sim-u\n"
                        "[tap carrier_pigeon]\ndo = drop\n");
    expect_config_error("badexpect", "name = x\nexpectation = attack_rejected bogus_err\n");
    expect_config_error("shortchain", "name = x\nchain_length = 1\n");

    auto missing = load_scenario_file("/nonexistent/scenario.ini");
    REQUIRE(!missing.ok());
    CHECK(missing.error() == Err::io_error);
}

TEST_CASE("a file scenario that shadows a built-in name is refused") {
    auto guard = write_temp("shadow",
                            "name = replay\n[server s.example]\nphone = 123456\n"
                            "[user u]\nphone = 234567\npassword = p\nsim = sim-u\n");
    auto catalog = scenario_catalog({guard.path});
    REQUIRE(!catalog.ok());
    CHECK(catalog.error() == Err::config_error);
}
