#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "chainpass/bytes.hpp"
#include "chainpass/errors.hpp"
#include "chainpass/rng.hpp"

namespace chainpass {

using Digest32 = std::array<uint8_t, 32>;
using Mac20 = std::array<uint8_t, 20>;
using Block16 = std::array<uint8_t, 16>;

Digest32 sha256(BytesView data);
Mac20 hmac_sha1(BytesView key, BytesView data);

namespace detail {
// Raw AES-128-CBC on pre-padded data (length must be a multiple of 16).
// Exposed so known-answer tests can drive it with a fixed IV.
Bytes aes128_cbc(const Block16& key, const Block16& iv, BytesView data, bool encrypt);
}  // namespace detail

// The only secret the user memorizes. Never serialized, never persisted.
class LongTermPassword {
public:
    static Result<LongTermPassword> from_bytes(Bytes b);
    static Result<LongTermPassword> from_string(const std::string& s);
    BytesView bytes() const { return bytes_; }

private:
    explicit LongTermPassword(Bytes b) : bytes_(std::move(b)) {}
    Bytes bytes_;
};

struct ServerSeed {
    Block16 bytes{};
    static ServerSeed random(Rng& rng) { return ServerSeed{rng.block<16>()}; }
    friend bool operator==(const ServerSeed&, const ServerSeed&) = default;
};

struct SessionKey {
    Block16 bytes{};
    static SessionKey random(Rng& rng) { return SessionKey{rng.block<16>()}; }
    friend bool operator==(const SessionKey&, const SessionKey&) = default;
};

struct Nonce {
    Block16 bytes{};
    static Nonce random(Rng& rng) { return Nonce{rng.block<16>()}; }
    friend bool operator==(const Nonce&, const Nonce&) = default;
};

struct Credential {
    Digest32 digest{};
    friend bool operator==(const Credential&, const Credential&) = default;
};

struct OneTimePassword {
    Digest32 digest{};
    uint32_t index = 0;

    // Envelope key rule: first 16 bytes of the OTP digest.
    Block16 key() const {
        Block16 k{};
        std::copy(digest.begin(), digest.begin() + 16, k.begin());
        return k;
    }
    friend bool operator==(const OneTimePassword&, const OneTimePassword&) = default;
};

struct HashChainCursor {
    ServerSeed seed;
    uint32_t chain_length = 0;
    uint32_t next_index = 0;
};

struct AuthenticatedEnvelope {
    Bytes ciphertext;  // positive multiple of 16 bytes
    Block16 iv{};
    Mac20 mac{};
    friend bool operator==(const AuthenticatedEnvelope&, const AuthenticatedEnvelope&) = default;
};

// C = SHA-256(len(P_u) || P_u || len(ID_s) || ID_s || len(seed) || seed)
Result<Credential> derive_credential(const LongTermPassword& password,
                                     const std::string& server_id,
                                     const ServerSeed& seed);

// OTP i is SHA-256 applied (chain_length - index) times to the credential.
Result<OneTimePassword> otp_at_index(const Credential& credential,
                                     uint32_t chain_length, uint32_t index);

// True iff hashing the candidate once yields its chain predecessor.
bool chain_step_verify(const OneTimePassword& candidate, const Digest32& predecessor_digest);

// AES-128-CBC with PKCS#7 padding and a fresh IV, then HMAC-SHA1 over the
// length-prefixed (associated_id, ciphertext, iv). Encrypt-then-MAC.
Result<AuthenticatedEnvelope> seal(const Block16& key, const std::string& associated_id,
                                   BytesView plaintext, Rng& rng);

// MAC is verified before any decryption; a failed MAC releases nothing.
Result<Bytes> open(const Block16& key, const std::string& associated_id,
                   const AuthenticatedEnvelope& envelope);

// H(n_d || delta_i), the value the server returns on an accepted login.
Digest32 success_digest(const Nonce& device_nonce, const OneTimePassword& otp);

}  // namespace chainpass
