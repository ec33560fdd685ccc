#include "chainpass/scenarios.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace chainpass {

namespace {

std::string entry_line(size_t index, const TranscriptEntry& e) {
    std::ostringstream out;
    out << "line " << index << ": tick=" << e.tick << " " << to_string(e.channel) << " " << e.src
        << "->" << e.dst << " " << e.kind << " origin=" << e.origin << " outcome=" << e.outcome;
    return out.str();
}

bool contains_bytes(const Bytes& haystack, BytesView needle) {
    if (needle.empty()) return false;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
           haystack.end();
}

Credential credential_of(World& world, const std::string& user_id, const std::string& server_id,
                         const ServerSeed& seed) {
    auto password = LongTermPassword::from_string(world.user_password(user_id));
    return derive_credential(password.value(), server_id, seed).value();
}

constexpr const char* kBank = "bank.example";
constexpr const char* kBankPhone = "155500100100";
constexpr const char* kAlice = "alice";
constexpr const char* kAlicePhone = "155510001000";
constexpr const char* kAliceSim = "sim-alice-1";
constexpr const char* kAlicePassword = "correct horse battery";

void add_bank_and_alice(World& world) {
    world.add_server(kBank, kBankPhone);
    world.add_user(kAlice, kAliceSim, kAlicePhone, kAlicePassword);
}

}  // namespace

bool is_acceptance_outcome(const std::string& outcome) {
    return outcome.rfind("login-accepted", 0) == 0 ||
           outcome.rfind("recovery-accepted", 0) == 0 || outcome == "registration-complete" ||
           outcome == "success-verified";
}

bool is_rejection_outcome(const std::string& outcome) {
    return outcome.rfind("rejected:", 0) == 0;
}

Verdict run_scenario(const Scenario& scenario, uint64_t seed) {
    Verdict verdict;
    verdict.scenario_name = scenario.name;

    World world(WorldConfig{seed, scenario.chain_length});
    scenario.setup(world);
    auto transcript = world.run();
    if (!transcript) {
        verdict.pass = false;
        verdict.evidence.push_back(std::string("run failed: ") + to_string(transcript.error()));
        return verdict;
    }
    verdict.transcript = transcript.value();
    const auto& entries = verdict.transcript.entries;

    size_t attacker_accepts = 0, honest_rejections = 0, server_accepts = 0,
           expected_rejections = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (is_acceptance_outcome(e.outcome) && e.origin == "adversary") {
            ++attacker_accepts;
            verdict.evidence.push_back("attacker-attributed acceptance: " + entry_line(i, e));
        }
        if (is_rejection_outcome(e.outcome) && e.origin == "honest") ++honest_rejections;
        if (e.outcome.rfind("login-accepted", 0) == 0) ++server_accepts;
        if (scenario.expected_error &&
            e.outcome == std::string("rejected:") + to_string(*scenario.expected_error))
            ++expected_rejections;
    }

    bool ok = true;
    switch (scenario.expectation) {
        case Expectation::all_logins_succeed: {
            if (attacker_accepts != 0) ok = false;
            if (honest_rejections != 0) {
                ok = false;
                for (size_t i = 0; i < entries.size(); ++i)
                    if (is_rejection_outcome(entries[i].outcome) && entries[i].origin == "honest")
                        verdict.evidence.push_back("honest rejection: " +
                                                   entry_line(i, entries[i]));
            }
            break;
        }
        case Expectation::attack_rejected: {
            if (attacker_accepts != 0) ok = false;
            if (expected_rejections == 0) {
                ok = false;
                verdict.evidence.push_back(
                    std::string("no rejection with expected kind ") +
                    (scenario.expected_error ? to_string(*scenario.expected_error) : "?"));
            }
            break;
        }
        case Expectation::attacker_never_authenticates: {
            if (attacker_accepts != 0) ok = false;
            break;
        }
    }

    if (scenario.expected_server_accepts >= 0 &&
        server_accepts != static_cast<size_t>(scenario.expected_server_accepts)) {
        ok = false;
        verdict.evidence.push_back("server accepted " + std::to_string(server_accepts) +
                                   " logins, expected " +
                                   std::to_string(scenario.expected_server_accepts));
    }

    if (scenario.extra_check && !scenario.extra_check(world, verdict.transcript, verdict.evidence))
        ok = false;

    verdict.pass = ok;
    if (!verdict.pass && verdict.evidence.empty())
        verdict.evidence.push_back("expectation not met (no further detail)");
    return verdict;
}

// ---------------------------------------------------------------------------
// Built-in scenarios
// ---------------------------------------------------------------------------

namespace {

Scenario make_honest_multi_server() {
    Scenario s;
    s.name = "honest_multi_server";
    s.description = "one user, three servers, five logins each; all must succeed";
    s.expectation = Expectation::all_logins_succeed;
    s.expected_server_accepts = 15;
    s.setup = [](World& world) {
        world.add_user(kAlice, kAliceSim, kAlicePhone, kAlicePassword);
        const std::vector<std::string> servers = {"bank.example", "shop.example", "mail.example"};
        uint64_t tick = 0;
        for (size_t i = 0; i < servers.size(); ++i) {
            world.add_server(servers[i], "1555000" + std::to_string(100 + i));
            world.do_register(tick, kAlice, servers[i]);
            tick += 20;
        }
        tick = 100;
        for (int round = 0; round < 5; ++round)
            for (const auto& server : servers) {
                world.do_login(tick, kAlice, server);
                tick += 20;
            }
    };
    s.extra_check = [](World& world, const Transcript&, std::vector<std::string>& evidence) {
        for (const auto* server : {"bank.example", "shop.example", "mail.example"}) {
            const AccountRecord* rec = world.server(server).account(kAlice);
            if (!rec || rec->next_index != 5) {
                evidence.push_back(std::string(server) + ": next_index != 5");
                return false;
            }
        }
        return true;
    };
    return s;
}

Scenario make_replay() {
    Scenario s;
    s.name = "replay";
    s.description = "captured login SMS replayed against a fresh challenge";
    s.expectation = Expectation::attack_rejected;
    s.expected_error = Err::nonce_mismatch;
    s.expected_server_accepts = 1;

    auto captured = std::make_shared<std::optional<Frame>>();
    auto counters = std::make_shared<std::pair<int, int>>();  // login-sms seen, challenges seen

    s.setup = [captured, counters](World& world) {
        captured->reset();
        *counters = {0, 0};
        add_bank_and_alice(world);
        world.do_register(0, kAlice, kBank);
        world.do_login(50, kAlice, kBank);   // this attempt is captured and suppressed
        world.do_login(100, kAlice, kBank);  // the replay races this honest attempt

        world.net().tap(ChannelKind::sms, [captured, counters](Frame& frame, Simnet&) {
            auto decoded = wire::decode(frame.payload);
            if (decoded && std::holds_alternative<LoginSms>(decoded.value()) &&
                frame.origin == "honest") {
                if (++counters->first == 1) {
                    *captured = frame;
                    return TapDecision::drop();
                }
            }
            return TapDecision::pass();
        });
        // The adversary watches the kiosk channel; when the second challenge
        // appears it fires the stored SMS so it lands before the honest one.
        world.net().tap(ChannelKind::kiosk_http, [captured, counters](Frame& frame, Simnet& net) {
            auto decoded = wire::decode(frame.payload);
            if (decoded && std::holds_alternative<ServerChallenge>(decoded.value())) {
                if (++counters->second == 2 && *captured) {
                    Frame replay = **captured;
                    replay.id = 0;
                    net.inject(replay, 1);
                }
            }
            return TapDecision::pass();
        });
    };
    s.extra_check = [](World& world, const Transcript&, std::vector<std::string>& evidence) {
        const AccountRecord* rec = world.server(kBank).account(kAlice);
        if (!rec || rec->next_index != 1) {
            evidence.push_back("server next_index advanced to " +
                               (rec ? std::to_string(rec->next_index) : "<none>") +
                               ", expected exactly 1");
            return false;
        }
        return true;
    };
    return s;
}

Scenario make_sms_spoof() {
    Scenario s;
    s.name = "sms_spoof";
    s.description = "forged sender number on registration and login SMS";
    s.expectation = Expectation::attack_rejected;
    s.expected_error = Err::spoofed_source;

    struct State {
        std::vector<std::pair<std::string, std::string>> store_snapshots;  // pre/post pairs
        int registration_sms_seen = 0;
        int login_sms_seen = 0;
    };
    auto state = std::make_shared<State>();

    s.setup = [state](World& world) {
        *state = State{};
        world.add_server(kBank, kBankPhone);
        world.add_user("bob", "sim-bob-1", "155520002000", "bob long secret");
        world.add_user(kAlice, kAliceSim, kAlicePhone, kAlicePassword);

        world.do_register(0, "bob", kBank);     // honest, becomes active
        world.do_register(50, kAlice, kBank);   // registration SMS gets spoofed
        world.do_login(100, "bob", kBank);      // login SMS gets spoofed

        PhoneNumber attacker = PhoneNumber::parse("159900009999").value();
        world.net().tap(ChannelKind::sms, [state, attacker, &world](Frame& frame, Simnet& net) {
            auto decoded = wire::decode(frame.payload);
            if (!decoded) return TapDecision::pass();
            bool spoof = false;
            if (std::holds_alternative<RegistrationSms>(decoded.value()))
                spoof = ++state->registration_sms_seen == 2;  // alice's, not bob's
            if (std::holds_alternative<LoginSms>(decoded.value()))
                spoof = ++state->login_sms_seen == 1;
            if (spoof) {
                frame.sender_phone = attacker;
                frame.origin = "adversary";
                std::string pre = world.server(kBank).store_text();
                // Runs immediately after this delivery: the rejection must
                // leave the persisted store byte-identical.
                net.at(net.now(), [state, pre, &world](Simnet&) {
                    state->store_snapshots.emplace_back(pre, world.server(kBank).store_text());
                });
            }
            return TapDecision::pass();
        });
    };
    s.extra_check = [state](World&, const Transcript& t, std::vector<std::string>& evidence) {
        size_t spoof_rejections = 0;
        for (const auto& e : t.entries)
            if (e.outcome == "rejected:spoofed-source") ++spoof_rejections;
        if (spoof_rejections < 2) {
            evidence.push_back("expected spoofed-source rejections on both paths, saw " +
                               std::to_string(spoof_rejections));
            return false;
        }
        if (state->store_snapshots.size() != 2) {
            evidence.push_back("expected 2 store snapshots, saw " +
                               std::to_string(state->store_snapshots.size()));
            return false;
        }
        for (const auto& [pre, post] : state->store_snapshots)
            if (pre != post) {
                evidence.push_back("server store mutated across a spoofed delivery");
                return false;
            }
        return true;
    };
    return s;
}

Scenario make_phishing_mitm() {
    Scenario s;
    s.name = "phishing_mitm";
    s.description = "MITM relays the challenge but cannot mint the success digest";
    s.expectation = Expectation::attacker_never_authenticates;

    s.setup = [](World& world) {
        add_bank_and_alice(world);
        world.do_register(0, kAlice, kBank);
        world.do_login(100, kAlice, kBank);

        // The phisher sits between kiosk and server: it relays the challenge
        // untouched, swallows the login SMS so the real server never answers,
        // then forges success messages hoping the phone accepts one.
        world.net().tap(ChannelKind::sms, [](Frame& frame, Simnet& net) {
            auto decoded = wire::decode(frame.payload);
            if (decoded && std::holds_alternative<LoginSms>(decoded.value())) {
                for (uint64_t attempt = 1; attempt <= 3; ++attempt) {
                    LoginSuccess forged;
                    net.rng().fill(forged.digest.data(), forged.digest.size());
                    net.inject(Frame{ChannelKind::secure_3g, "phisher",
                                     World::phone_endpoint(kAlice), PhoneNumber{},
                                     wire::encode(Message{forged})},
                               attempt);
                }
                return TapDecision::drop();
            }
            return TapDecision::pass();
        });
    };
    s.extra_check = [](World& world, const Transcript& t, std::vector<std::string>& evidence) {
        size_t forged_rejections = 0;
        for (const auto& e : t.entries)
            if (e.origin == "adversary" && is_rejection_outcome(e.outcome)) ++forged_rejections;
        if (forged_rejections < 3) {
            evidence.push_back("expected 3 forged-success rejections, saw " +
                               std::to_string(forged_rejections));
            return false;
        }
        const DeviceRecord* rec = world.phone(kAlice).record(kBank);
        if (!rec || rec->next_index != 0) {
            evidence.push_back("phone next_index changed despite failed verification");
            return false;
        }
        return true;
    };
    return s;
}

Scenario make_keylogger_kiosk() {
    Scenario s;
    s.name = "keylogger_kiosk";
    s.description = "kiosk records every byte it sees; log is replayed at the server";
    s.expectation = Expectation::attacker_never_authenticates;

    auto log = std::make_shared<std::vector<Frame>>();

    s.setup = [log](World& world) {
        log->clear();
        add_bank_and_alice(world);
        world.do_register(0, kAlice, kBank);
        world.do_login(100, kAlice, kBank);
        world.do_login(150, kAlice, kBank);

        auto record = [log](Frame& frame, Simnet&) {
            log->push_back(frame);
            return TapDecision::pass();
        };
        world.net().tap(ChannelKind::kiosk_http, record);
        world.net().tap(ChannelKind::local_link, record);

        // The user (and their phone) leaves the kiosk before the attack, so
        // nothing forwarded over the local link reaches a phone afterwards.
        world.net().tap(ChannelKind::local_link, [](Frame&, Simnet& net) {
            return net.now() >= 300 ? TapDecision::drop() : TapDecision::pass();
        });

        // After the honest session, the attacker replays everything the
        // kiosk ever saw straight at the server.
        world.net().at(300, [log](Simnet& net) {
            uint64_t delay = 1;
            for (const auto& seen : *log) {
                Frame replay = seen;
                replay.id = 0;
                replay.dst = World::server_endpoint(kBank);
                net.inject(replay, delay++);
            }
        });
    };
    s.extra_check = [log](World& world, const Transcript&, std::vector<std::string>& evidence) {
        Bytes kiosk_bytes;
        for (const auto& frame : *log)
            kiosk_bytes.insert(kiosk_bytes.end(), frame.payload.begin(), frame.payload.end());
        if (kiosk_bytes.empty()) {
            evidence.push_back("kiosk log is empty; scenario did not exercise the kiosk");
            return false;
        }

        const std::string& password = world.user_password(kAlice);
        if (contains_bytes(kiosk_bytes, BytesView(to_bytes(password)))) {
            evidence.push_back("kiosk log contains long-term password bytes");
            return false;
        }
        const AccountRecord* rec = world.server(kBank).account(kAlice);
        Credential credential = credential_of(world, kAlice, kBank, rec->seed);
        if (contains_bytes(kiosk_bytes, BytesView(credential.digest))) {
            evidence.push_back("kiosk log contains credential bytes");
            return false;
        }
        for (uint32_t i = 0; i <= rec->chain_length; ++i) {
            auto otp = otp_at_index(credential, rec->chain_length, i);
            if (contains_bytes(kiosk_bytes, BytesView(otp.value().digest))) {
                evidence.push_back("kiosk log contains OTP digest at index " + std::to_string(i));
                return false;
            }
        }
        return true;
    };
    return s;
}

Scenario make_password_reuse() {
    Scenario s;
    s.name = "password_reuse";
    s.description = "full compromise of server A's store must not open server B";
    s.expectation = Expectation::attacker_never_authenticates;

    auto captured_sms = std::make_shared<std::vector<Bytes>>();

    s.setup = [captured_sms](World& world) {
        captured_sms->clear();
        world.add_server("a.example", "155500110011");
        world.add_server("b.example", "155500220022");
        world.add_user(kAlice, kAliceSim, kAlicePhone, kAlicePassword);
        world.do_register(0, kAlice, "a.example");
        world.do_register(30, kAlice, "b.example");
        for (uint64_t t : {100, 140})
            world.do_login(t, kAlice, "a.example");
        for (uint64_t t : {180, 220})
            world.do_login(t, kAlice, "b.example");

        // The adversary records every SMS frame in transit.
        world.net().tap(ChannelKind::sms, [captured_sms](Frame& frame, Simnet&) {
            captured_sms->push_back(frame.payload);
            return TapDecision::pass();
        });
    };
    s.extra_check = [captured_sms](World& world, const Transcript&,
                                   std::vector<std::string>& evidence) {
        if (captured_sms->empty()) {
            evidence.push_back("no SMS traffic captured; scenario broken");
            return false;
        }
        const AccountRecord* compromised = world.server("a.example").account(kAlice);
        if (!compromised) {
            evidence.push_back("server A has no account to compromise");
            return false;
        }
        ServerAgent& target = world.server("b.example");
        const PhoneNumber& sender = world.user_number(kAlice);
        uint32_t n = compromised->chain_length;

        // Exhaustive budget: replays, byte mutations of captured traffic,
        // and fresh envelopes keyed from A's chain with the correct live
        // nonce (the attacker reads n_s off the kiosk channel).
        Rng attack_rng(0x70617373);
        size_t accepted = 0;
        const size_t budget = 10'000;
        for (size_t attempt = 0; attempt < budget; ++attempt) {
            auto challenge = target.issue_challenge(LoginRequest{kAlice}, attack_rng);
            if (!challenge) {
                evidence.push_back("target refused to issue challenge mid-attack");
                return false;
            }
            Result<Message> forged = Err::malformed_frame;
            switch (attempt % 3) {
                case 0:
                    forged = wire::decode((*captured_sms)[attempt % captured_sms->size()]);
                    break;
                case 1: {
                    Bytes mutated = (*captured_sms)[attempt % captured_sms->size()];
                    mutated[(attempt * 7) % mutated.size()] ^= 0xFF;
                    forged = wire::decode(mutated);
                    break;
                }
                case 2: {
                    auto otp = otp_at_index(compromised->credential, n,
                                            static_cast<uint32_t>(attempt / 3) % (n + 1));
                    Nonce device_nonce = Nonce::random(attack_rng);
                    Bytes plaintext = length_prefixed_concat(
                        {BytesView(device_nonce.bytes),
                         BytesView(challenge.value().server_nonce.bytes)});
                    auto env = seal(otp.value().key(), kAlice, plaintext, attack_rng);
                    forged = Message{LoginSms{kAlice, env.value()}};
                    break;
                }
            }
            if (!forged || !std::holds_alternative<LoginSms>(forged.value())) continue;
            auto outcome =
                target.verify_login_sms(std::get<LoginSms>(forged.value()), sender);
            if (outcome) ++accepted;
        }
        if (accepted != 0) {
            evidence.push_back("attacker authenticated at server B " + std::to_string(accepted) +
                               " times");
            return false;
        }
        return true;
    };
    return s;
}

Scenario make_phone_loss_recovery() {
    Scenario s;
    s.name = "phone_loss_recovery";
    s.description = "lost phone: reissued SIM, recovery, login resumes two indices later";
    s.expectation = Expectation::all_logins_succeed;
    s.expected_server_accepts = 4;

    s.setup = [](World& world) {
        add_bank_and_alice(world);
        world.do_register(0, kAlice, kBank);
        for (uint64_t t : {100, 130, 160})
            world.do_login(t, kAlice, kBank);  // consumes indices 0,1,2
        world.do_disable_sim(200, kAlice);
        world.do_reissue_sim(210, kAlice, "sim-alice-2");
        world.do_replace_phone(220, kAlice);
        world.do_recover(230, kAlice, kBank);  // consumes index 3
        world.do_login(300, kAlice, kBank);    // must consume index 4
    };
    s.extra_check = [](World& world, const Transcript& t, std::vector<std::string>& evidence) {
        const AccountRecord* rec = world.server(kBank).account(kAlice);
        if (!rec || rec->next_index != 5 || rec->status != AccountStatus::active) {
            evidence.push_back("expected active account with next_index 5 after recovery+login");
            return false;
        }
        bool resumed_at_plus_two = false;
        for (const auto& e : t.entries)
            if (e.outcome == "login-accepted;next_index=5") resumed_at_plus_two = true;
        if (!resumed_at_plus_two) {
            evidence.push_back("post-recovery login did not consume index 4");
            return false;
        }
        return true;
    };
    return s;
}

Scenario make_chain_exhaustion() {
    Scenario s;
    s.name = "chain_exhaustion";
    s.description = "short chain forces a reseed via recovery, then logins continue";
    s.chain_length = 4;
    s.expectation = Expectation::all_logins_succeed;
    s.expected_server_accepts = 6;

    auto original_seed = std::make_shared<std::optional<ServerSeed>>();

    s.setup = [original_seed](World& world) {
        original_seed->reset();
        add_bank_and_alice(world);
        world.do_register(0, kAlice, kBank);
        world.net().at(50, [original_seed, &world](Simnet&) {
            if (const AccountRecord* rec = world.server(kBank).account(kAlice))
                *original_seed = rec->seed;
        });
        for (uint64_t t : {100, 130, 160})
            world.do_login(t, kAlice, kBank);  // N-1 = 3 logins exhaust the usable chain
        world.do_recover(200, kAlice, kBank);  // carries a fresh seed
        for (uint64_t t : {300, 330, 360})
            world.do_login(t, kAlice, kBank);
    };
    s.extra_check = [original_seed](World& world, const Transcript&,
                                    std::vector<std::string>& evidence) {
        const AccountRecord* rec = world.server(kBank).account(kAlice);
        if (!rec || !*original_seed) {
            evidence.push_back("missing account record or seed snapshot");
            return false;
        }
        if (rec->seed == **original_seed) {
            evidence.push_back("recovery did not carry a fresh seed");
            return false;
        }
        if (rec->next_index != 4 || rec->status != AccountStatus::active) {
            evidence.push_back("post-reseed logins did not land on next_index 4");
            return false;
        }
        return true;
    };
    return s;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> all;
    all.push_back(make_honest_multi_server());
    all.push_back(make_replay());
    all.push_back(make_sms_spoof());
    all.push_back(make_phishing_mitm());
    all.push_back(make_keylogger_kiosk());
    all.push_back(make_password_reuse());
    all.push_back(make_phone_loss_recovery());
    all.push_back(make_chain_exhaustion());
    return all;
}

Scenario demo_scenario() {
    Scenario s;
    s.name = "demo";
    s.description = "registration, one login, recovery on a fresh phone";
    s.expectation = Expectation::all_logins_succeed;
    s.expected_server_accepts = 1;
    s.setup = [](World& world) {
        add_bank_and_alice(world);
        world.do_register(0, kAlice, kBank);
        world.do_login(100, kAlice, kBank);
        world.do_recover(200, kAlice, kBank);
    };
    return s;
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_words(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

std::optional<Err> err_from_name(const std::string& name) {
    for (int code = 0; code <= static_cast<int>(Err::runaway_scenario); ++code) {
        Err e = static_cast<Err>(code);
        if (name == to_string(e)) return e;
    }
    return std::nullopt;
}

std::optional<ChannelKind> channel_from_name(const std::string& name) {
    if (name == "sms") return ChannelKind::sms;
    if (name == "secure_3g") return ChannelKind::secure_3g;
    if (name == "kiosk_http") return ChannelKind::kiosk_http;
    if (name == "local_link") return ChannelKind::local_link;
    return std::nullopt;
}

struct ScriptAction {
    uint64_t at = 0;
    std::vector<std::string> words;
};

struct ScriptTap {
    ChannelKind channel = ChannelKind::sms;
    std::string match_kind;  // empty: every frame
    int nth = 0;             // 0: every matching frame, otherwise 1-based
    std::vector<std::string> words;
};

bool apply_action(World& world, const ScriptAction& a) {
    const auto& w = a.words;
    if (w.size() == 3 && w[0] == "register") {
        world.do_register(a.at, w[1], w[2]);
    } else if (w.size() == 3 && w[0] == "login") {
        world.do_login(a.at, w[1], w[2]);
    } else if (w.size() == 3 && w[0] == "recover") {
        world.do_recover(a.at, w[1], w[2]);
    } else if (w.size() == 2 && w[0] == "disable_sim") {
        world.do_disable_sim(a.at, w[1]);
    } else if (w.size() == 3 && w[0] == "reissue_sim") {
        world.do_reissue_sim(a.at, w[1], w[2]);
    } else if (w.size() == 2 && w[0] == "replace_phone") {
        world.do_replace_phone(a.at, w[1]);
    } else {
        return false;
    }
    return true;
}

bool install_tap(World& world, const ScriptTap& tap) {
    const auto& w = tap.words;
    auto count = std::make_shared<int>(0);
    auto matches = [tap, count](const Frame& frame) {
        if (!tap.match_kind.empty()) {
            auto decoded = wire::decode(frame.payload);
            if (!decoded || tap.match_kind != wire::kind_name(decoded.value())) return false;
        }
        ++*count;
        return tap.nth == 0 || *count == tap.nth;
    };

    if (w.size() == 1 && w[0] == "drop") {
        world.net().tap(tap.channel, [matches](Frame& f, Simnet&) {
            return matches(f) ? TapDecision::drop() : TapDecision::pass();
        });
    } else if (w.size() == 2 && w[0] == "delay") {
        uint64_t ticks = std::stoull(w[1]);
        world.net().tap(tap.channel, [matches, ticks](Frame& f, Simnet&) {
            return matches(f) ? TapDecision::delay(ticks) : TapDecision::pass();
        });
    } else if (w.size() == 2 && w[0] == "spoof_sender") {
        auto number = PhoneNumber::parse(w[1]);
        if (!number) return false;
        PhoneNumber num = number.value();
        world.net().tap(tap.channel, [matches, num](Frame& f, Simnet&) {
            if (matches(f)) {
                f.sender_phone = num;
                f.origin = "adversary";
            }
            return TapDecision::pass();
        });
    } else if (w.size() == 2 && w[0] == "replay") {
        uint64_t delay = std::stoull(w[1]);
        world.net().tap(tap.channel, [matches, delay](Frame& f, Simnet& net) {
            if (matches(f)) {
                Frame replay = f;
                replay.id = 0;
                net.inject(replay, delay);
            }
            return TapDecision::pass();
        });
    } else if (w.size() == 2 && w[0] == "corrupt") {
        size_t index = std::stoull(w[1]);
        world.net().tap(tap.channel, [matches, index](Frame& f, Simnet&) {
            if (matches(f) && !f.payload.empty()) {
                f.payload[index % f.payload.size()] ^= 0xFF;
                f.origin = "adversary";
            }
            return TapDecision::pass();
        });
    } else {
        return false;
    }
    return true;
}

}  // namespace

Result<Scenario> load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return Err::io_error;

    Scenario scenario;
    struct ServerDef {
        std::string id, phone;
    };
    struct UserDef {
        std::string id, phone, password, sim;
    };
    std::vector<ServerDef> servers;
    std::vector<UserDef> users;
    std::vector<ScriptAction> actions;
    std::vector<ScriptTap> taps;

    enum class Section { top, server, user, action, tap };
    Section section = Section::top;

    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        line = line.substr(first);

        if (line.front() == '[') {
            auto close = line.find(']');
            if (close == std::string::npos) return Err::config_error;
            auto words = split_words(line.substr(1, close - 1));
            if (words.empty()) return Err::config_error;
            if (words[0] == "server" && words.size() == 2) {
                servers.push_back(ServerDef{words[1], {}});
                section = Section::server;
            } else if (words[0] == "user" && words.size() == 2) {
                users.push_back(UserDef{words[1], {}, {}, {}});
                section = Section::user;
            } else if (words[0] == "action") {
                actions.push_back({});
                section = Section::action;
            } else if (words[0] == "tap" && words.size() == 2) {
                auto channel = channel_from_name(words[1]);
                if (!channel) return Err::config_error;
                taps.push_back(ScriptTap{*channel, {}, 0, {}});
                section = Section::tap;
            } else {
                return Err::config_error;
            }
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) return Err::config_error;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) return Err::config_error;

        try {
            switch (section) {
                case Section::top:
                    if (key == "name") {
                        scenario.name = value;
                    } else if (key == "description") {
                        scenario.description = value;
                    } else if (key == "chain_length") {
                        scenario.chain_length = static_cast<uint32_t>(std::stoul(value));
                        if (scenario.chain_length < 2) return Err::config_error;
                    } else if (key == "expected_logins") {
                        scenario.expected_server_accepts = std::stoi(value);
                    } else if (key == "expectation") {
                        auto words = split_words(value);
                        if (words[0] == "all_logins_succeed") {
                            scenario.expectation = Expectation::all_logins_succeed;
                        } else if (words[0] == "attacker_never_authenticates") {
                            scenario.expectation = Expectation::attacker_never_authenticates;
                        } else if (words[0] == "attack_rejected" && words.size() == 2) {
                            scenario.expectation = Expectation::attack_rejected;
                            scenario.expected_error = err_from_name(words[1]);
                            if (!scenario.expected_error) return Err::config_error;
                        } else {
                            return Err::config_error;
                        }
                    } else {
                        return Err::config_error;
                    }
                    break;
                case Section::server:
                    if (key == "phone") servers.back().phone = value;
                    else return Err::config_error;
                    break;
                case Section::user:
                    if (key == "phone") users.back().phone = value;
                    else if (key == "password") users.back().password = value;
                    else if (key == "sim") users.back().sim = value;
                    else return Err::config_error;
                    break;
                case Section::action:
                    if (key == "at") actions.back().at = std::stoull(value);
                    else if (key == "do") actions.back().words = split_words(value);
                    else return Err::config_error;
                    break;
                case Section::tap:
                    if (key == "match") taps.back().match_kind = value;
                    else if (key == "nth") taps.back().nth = std::stoi(value);
                    else if (key == "do") taps.back().words = split_words(value);
                    else return Err::config_error;
                    break;
            }
        } catch (const std::exception&) {
            return Err::config_error;
        }
    }

    if (scenario.name.empty() || servers.empty() || users.empty()) return Err::config_error;
    for (const auto& sv : servers)
        if (sv.phone.empty()) return Err::config_error;
    for (const auto& u : users)
        if (u.phone.empty() || u.password.empty() || u.sim.empty()) return Err::config_error;
    for (const auto& a : actions)
        if (a.words.empty()) return Err::config_error;
    for (const auto& t : taps)
        if (t.words.empty()) return Err::config_error;

    // Dry-run the grammar-sensitive parts now so config errors surface at
    // load time, not mid-simulation.
    for (const auto& a : actions) {
        static const std::set<std::string> known = {"register",    "login",       "recover",
                                                    "disable_sim", "reissue_sim", "replace_phone"};
        if (!known.contains(a.words[0])) return Err::config_error;
    }

    scenario.setup = [servers, users, actions, taps](World& world) {
        for (const auto& sv : servers) world.add_server(sv.id, sv.phone);
        for (const auto& u : users) world.add_user(u.id, u.sim, u.phone, u.password);
        for (const auto& a : actions) apply_action(world, a);
        for (const auto& t : taps) install_tap(world, t);
    };
    return scenario;
}

Result<std::vector<Scenario>> scenario_catalog(
    const std::vector<std::filesystem::path>& scenario_files) {
    std::vector<Scenario> all = builtin_scenarios();
    for (const auto& path : scenario_files) {
        auto loaded = load_scenario_file(path);
        if (!loaded) return loaded.error();
        all.push_back(loaded.value());
    }
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j)
            if (all[i].name == all[j].name) return Err::config_error;
    return all;
}

}  // namespace chainpass
