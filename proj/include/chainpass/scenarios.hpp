#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chainpass/phone.hpp"
#include "chainpass/server.hpp"
#include "chainpass/simnet.hpp"
#include "chainpass/tsp.hpp"

namespace chainpass {

struct WorldConfig {
    uint64_t seed = 42;
    uint32_t chain_length = 100;
};

// Wires phones, servers, the TSP and the kiosk onto a Simnet and exposes
// scripted user actions. Passwords live here (the "user's head"), never in
// agent state.
class World {
public:
    explicit World(WorldConfig config);

    void add_server(const std::string& server_id, const std::string& phone_digits);
    void add_user(const std::string& user_id, const std::string& sim_id,
                  const std::string& phone_digits, const std::string& password);

    // Scripted user actions at absolute ticks.
    void do_register(uint64_t tick, const std::string& user_id, const std::string& server_id);
    void do_login(uint64_t tick, const std::string& user_id, const std::string& server_id);
    void do_recover(uint64_t tick, const std::string& user_id, const std::string& server_id);
    void do_disable_sim(uint64_t tick, const std::string& user_id);
    void do_reissue_sim(uint64_t tick, const std::string& user_id, const std::string& new_sim_id);
    void do_replace_phone(uint64_t tick, const std::string& user_id);  // lost phone: wipe records

    Result<Transcript> run(uint64_t event_budget = 1'000'000);

    Simnet& net() { return net_; }
    const WorldConfig& config() const { return config_; }
    ServerAgent& server(const std::string& server_id);
    PhoneAgent& phone(const std::string& user_id);
    TspAgent& tsp() { return tsp_; }
    const std::string& user_password(const std::string& user_id) const;
    const PhoneNumber& user_number(const std::string& user_id) const;

    static std::string phone_endpoint(const std::string& user_id) { return "phone:" + user_id; }
    static std::string server_endpoint(const std::string& server_id) {
        return "server:" + server_id;
    }

private:
    struct UserInfo {
        std::string sim_id;
        PhoneNumber number;
        std::string password;
        std::unique_ptr<PhoneAgent> agent;
    };

    std::string endpoint_for_number(const PhoneNumber& number) const;
    std::string handle_phone_frame(const std::string& user_id, Simnet& net, const Frame& frame);
    std::string handle_server_frame(const std::string& server_id, Simnet& net,
                                    const Frame& frame);
    std::string handle_tsp_frame(Simnet& net, const Frame& frame);
    std::string handle_kiosk_frame(Simnet& net, const Frame& frame);

    WorldConfig config_;
    Simnet net_;
    TspAgent tsp_;
    std::map<std::string, std::unique_ptr<ServerAgent>> servers_;
    std::map<std::string, UserInfo> users_;
    std::map<std::string, std::string> number_to_endpoint_;
    std::map<std::string, std::deque<std::string>> tsp_pending_registrations_;
    std::map<std::string, std::deque<std::string>> tsp_pending_recoveries_;
    std::string kiosk_user_;
    std::string kiosk_target_;
};

enum class Expectation { all_logins_succeed, attack_rejected, attacker_never_authenticates };

struct Scenario {
    std::string name;
    std::string description;
    uint32_t chain_length = 100;
    Expectation expectation = Expectation::all_logins_succeed;
    std::optional<Err> expected_error;  // for attack_rejected
    int expected_server_accepts = -1;   // -1: not checked
    std::function<void(World&)> setup;
    // Extra scenario-specific oracle, run after the transcript is complete.
    std::function<bool(World&, const Transcript&, std::vector<std::string>&)> extra_check;
};

struct Verdict {
    std::string scenario_name;
    bool pass = false;
    std::vector<std::string> evidence;
    Transcript transcript;
};

// Transcript outcome classification shared by verdicts and tests.
bool is_acceptance_outcome(const std::string& outcome);
bool is_rejection_outcome(const std::string& outcome);

Verdict run_scenario(const Scenario& scenario, uint64_t seed);

// Fresh instances of the 8 built-in attack/flow scenarios (they carry
// per-run state in their closures, so each call rebuilds them).
std::vector<Scenario> builtin_scenarios();

// The honest demo flow used by the CLI: registration, one login, recovery.
Scenario demo_scenario();

Result<Scenario> load_scenario_file(const std::filesystem::path& path);

// Built-ins plus any file-defined scenarios; duplicate names are an error.
Result<std::vector<Scenario>> scenario_catalog(
    const std::vector<std::filesystem::path>& scenario_files);

}  // namespace chainpass
