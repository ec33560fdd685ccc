#include <doctest.h>

#include <set>

#include "chainpass/wire.hpp"

using namespace chainpass;

namespace {

PhoneNumber num(const std::string& d) { return PhoneNumber::parse(d).value(); }

std::string random_id(Rng& rng) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz.-0123456789";
    size_t len = 1 + rng.next_u64() % 24;
    std::string s;
    for (size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.next_u64() % (sizeof(alphabet) - 1)]);
    return s;
}

PhoneNumber random_phone(Rng& rng) {
    size_t len = 6 + rng.next_u64() % 10;
    std::string s;
    for (size_t i = 0; i < len; ++i) s.push_back(char('0' + rng.next_u64() % 10));
    return num(s);
}

AuthenticatedEnvelope random_envelope(Rng& rng) {
    AuthenticatedEnvelope env;
    env.ciphertext.resize(16 * (1 + rng.next_u64() % 4));
    rng.fill(env.ciphertext.data(), env.ciphertext.size());
    env.iv = rng.block<16>();
    env.mac = rng.block<20>();
    return env;
}

Message random_message(Rng& rng, size_t kind) {
    switch (kind) {
        case 0: return RegistrationRequest{random_id(rng), random_id(rng)};
        case 1:
            return TspRegistrationForward{random_id(rng), random_phone(rng),
                                          SessionKey::random(rng)};
        case 2:
            return RegistrationResponse{random_id(rng), ServerSeed::random(rng),
                                        random_phone(rng), SessionKey::random(rng)};
        case 3: return RegistrationSms{random_id(rng), random_envelope(rng)};
        case 4: return LoginRequest{random_id(rng)};
        case 5: return ServerChallenge{random_id(rng), Nonce::random(rng)};
        case 6: return LoginSms{random_id(rng), random_envelope(rng)};
        case 7: return LoginSuccess{rng.block<32>()};
        case 8: return RecoveryRequest{random_id(rng), random_id(rng)};
        case 9: return TspRecoveryForward{random_id(rng), random_phone(rng)};
        case 10:
            return RecoveryResponse{random_id(rng), ServerSeed::random(rng), random_phone(rng),
                                    uint32_t(rng.next_u64()), Nonce::random(rng)};
        default: return RecoverySms{random_id(rng), random_envelope(rng)};
    }
}

}  // namespace

TEST_CASE("phone number validation") {
    CHECK(PhoneNumber::parse("123456"));
    CHECK(PhoneNumber::parse("123456789012345"));
    CHECK(!PhoneNumber::parse("12345"));
    CHECK(!PhoneNumber::parse("1234567890123456"));
    CHECK(!PhoneNumber::parse("12345a"));
    CHECK(!PhoneNumber::parse("+123456"));
}

TEST_CASE("login request has the documented byte layout") {
    Bytes encoded = wire::encode(Message{LoginRequest{"alice"}});
    Bytes expected = {0x4F, 0x01, 0x05, 0x00, 0x00, 0x00, 0x05, 'a', 'l', 'i', 'c', 'e'};
    CHECK(encoded == expected);
}

TEST_CASE("round trip identity for every kind, randomized") {
    Rng rng(99);
    for (int trial = 0; trial < 1200; ++trial) {
        Message m = random_message(rng, trial % 12);
        Bytes encoded = wire::encode(m);
        auto decoded = wire::decode(encoded);
        REQUIRE(decoded.ok());
        CHECK(decoded.value() == m);
        // Determinism: structural equality implies byte equality.
        CHECK(wire::encode(decoded.value()) == encoded);
    }
}

TEST_CASE("canonical form: distinct messages encode distinctly") {
    Rng rng(123);
    std::set<Bytes> seen;
    for (int trial = 0; trial < 500; ++trial) {
        Message m = random_message(rng, trial % 12);
        seen.insert(wire::encode(m));
    }
    CHECK(seen.size() == 500);  // id collision odds are negligible at these lengths
}

TEST_CASE("decode rejections") {
    Bytes good = wire::encode(Message{LoginRequest{"alice"}});

    SUBCASE("wrong magic") {
        Bytes bad = good;
        bad[0] = 0x00;
        CHECK(wire::decode(bad).error() == Err::unsupported_frame);
    }
    SUBCASE("wrong version") {
        Bytes bad = good;
        bad[1] = 0x02;
        CHECK(wire::decode(bad).error() == Err::unsupported_frame);
    }
    SUBCASE("unknown kind") {
        Bytes bad = good;
        bad[2] = 0x7F;
        CHECK(wire::decode(bad).error() == Err::unknown_kind);
    }
    SUBCASE("trailing byte") {
        Bytes bad = good;
        bad.push_back(0x00);
        CHECK(wire::decode(bad).error() == Err::malformed_frame);
    }
    SUBCASE("truncated field") {
        Bytes bad(good.begin(), good.end() - 2);
        CHECK(wire::decode(bad).error() == Err::malformed_frame);
    }
    SUBCASE("wrong arity") {
        Bytes bad = good;
        bad[2] = 0x01;  // RegistrationRequest wants two fields
        CHECK(wire::decode(bad).error() == Err::malformed_frame);
    }
    SUBCASE("empty input") { CHECK(wire::decode(Bytes{}).error() == Err::unsupported_frame); }
}

TEST_CASE("decode is total over arbitrary bytes") {
    Rng rng(7777);
    for (int trial = 0; trial < 2000; ++trial) {
        Bytes junk(rng.next_u64() % 65536);
        rng.fill(junk.data(), junk.size());
        wire::decode(junk);  // must not crash or read out of bounds
    }
    // Mutated valid frames must decode or reject, never crash.
    Rng rng2(13);
    for (int trial = 0; trial < 2000; ++trial) {
        Message m = random_message(rng2, trial % 12);
        Bytes bytes = wire::encode(m);
        bytes[rng2.next_u64() % bytes.size()] ^= uint8_t(1 + rng2.next_u64() % 255);
        wire::decode(bytes);
    }
}
