#include <doctest.h>

#include <algorithm>

#include "agent_fixture.hpp"

using namespace chainpass;
using fixture::Trio;

namespace {

bool contains_bytes(const Bytes& haystack, BytesView needle) {
    if (needle.empty()) return true;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
           haystack.end();
}

}  // namespace

TEST_CASE("registration forward carries the subscriber's real number") {
    Trio t;
    auto request = t.phone.begin_registration("bank.example");
    REQUIRE(request.ok());
    auto forward = t.tsp.forward_registration(request.value(), "sim-alice", t.rng);
    REQUIRE(forward.ok());
    CHECK(forward.value().user_id == "alice");
    CHECK(forward.value().user_phone == t.alice_number);
}

TEST_CASE("each registration forward gets a distinct session key") {
    Trio t;
    RegistrationRequest r{"alice", "bank.example"};
    auto a = t.tsp.forward_registration(r, "sim-alice", t.rng);
    auto b = t.tsp.forward_registration(r, "sim-alice", t.rng);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(!(a.value().key == b.value().key));
}

TEST_CASE("the provider keeps no copy of any session key it issued") {
    Trio t;
    RegistrationRequest r{"alice", "bank.example"};
    auto forward = t.tsp.forward_registration(r, "sim-alice", t.rng);
    REQUIRE(forward.ok());
    auto snapshot = t.tsp.state_snapshot();
    CHECK(!contains_bytes(snapshot, BytesView(forward.value().key.bytes)));
}

TEST_CASE("unknown subscribers and unknown servers are refused") {
    Trio t;
    RegistrationRequest r{"alice", "bank.example"};
    auto no_sim = t.tsp.forward_registration(r, "sim-ghost", t.rng);
    REQUIRE(!no_sim.ok());
    CHECK(no_sim.error() == Err::unknown_subscriber);

    RegistrationRequest bad_server{"alice", "nowhere.example"};
    auto no_server = t.tsp.forward_registration(bad_server, "sim-alice", t.rng);
    REQUIRE(!no_server.ok());
    CHECK(no_server.error() == Err::unknown_server);

    auto no_sim_recovery = t.tsp.forward_recovery(RecoveryRequest{"alice", "bank.example"},
                                                  "sim-ghost");
    REQUIRE(!no_sim_recovery.ok());
    CHECK(no_sim_recovery.error() == Err::unknown_subscriber);
}

TEST_CASE("a disabled SIM can neither register nor recover") {
    Trio t;
    REQUIRE(t.tsp.disable_sim("sim-alice").ok());

    RegistrationRequest r{"alice", "bank.example"};
    auto reg = t.tsp.forward_registration(r, "sim-alice", t.rng);
    REQUIRE(!reg.ok());
    CHECK(reg.error() == Err::sim_disabled);

    auto rec = t.tsp.forward_recovery(RecoveryRequest{"alice", "bank.example"}, "sim-alice");
    REQUIRE(!rec.ok());
    CHECK(rec.error() == Err::sim_disabled);

    CHECK(t.tsp.disable_sim("sim-alice").ok());  // idempotent
    auto ghost = t.tsp.disable_sim("sim-ghost");
    REQUIRE(!ghost.ok());
    CHECK(ghost.error() == Err::unknown_subscriber);
}

TEST_CASE("a reissued SIM inherits the number and disables the old card") {
    Trio t;
    REQUIRE(t.tsp.reissue_sim("sim-alice", "sim-alice-2").ok());

    const TspAgent::SimEntry* old_sim = t.tsp.sim("sim-alice");
    REQUIRE(old_sim != nullptr);
    CHECK(!old_sim->enabled);

    const TspAgent::SimEntry* new_sim = t.tsp.sim("sim-alice-2");
    REQUIRE(new_sim != nullptr);
    CHECK(new_sim->enabled);
    CHECK(new_sim->number == t.alice_number);

    // The replacement card works for recovery; the lost one stays dead.
    auto rec = t.tsp.forward_recovery(RecoveryRequest{"alice", "bank.example"}, "sim-alice-2");
    REQUIRE(rec.ok());
    CHECK(rec.value().user_phone == t.alice_number);
    auto stale = t.tsp.forward_recovery(RecoveryRequest{"alice", "bank.example"}, "sim-alice");
    REQUIRE(!stale.ok());
    CHECK(stale.error() == Err::sim_disabled);
}
