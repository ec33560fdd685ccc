#include "chainpass/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <memory>
#include <stdexcept>

namespace chainpass {

Digest32 sha256(BytesView data) {
    Digest32 out{};
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) ||
        len != out.size())
        throw std::runtime_error("sha256 failed");
    return out;
}

Mac20 hmac_sha1(BytesView key, BytesView data) {
    Mac20 out{};
    unsigned int len = 0;
    if (!HMAC(EVP_sha1(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
              out.data(), &len) ||
        len != out.size())
        throw std::runtime_error("hmac-sha1 failed");
    return out;
}

namespace detail {

Bytes aes128_cbc(const Block16& key, const Block16& iv, BytesView data, bool encrypt) {
    if (data.size() % 16 != 0) throw std::invalid_argument("aes128_cbc: unpadded input");
    std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(EVP_CIPHER_CTX_new(),
                                                                        EVP_CIPHER_CTX_free);
    if (!ctx) throw std::runtime_error("cipher ctx");
    if (!EVP_CipherInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.data(), iv.data(),
                           encrypt ? 1 : 0))
        throw std::runtime_error("cipher init");
    EVP_CIPHER_CTX_set_padding(ctx.get(), 0);  // padding handled by seal/open

    Bytes out(data.size() + 16);
    int n1 = 0, n2 = 0;
    if (!EVP_CipherUpdate(ctx.get(), out.data(), &n1, data.data(), static_cast<int>(data.size())))
        throw std::runtime_error("cipher update");
    if (!EVP_CipherFinal_ex(ctx.get(), out.data() + n1, &n2))
        throw std::runtime_error("cipher final");
    out.resize(static_cast<size_t>(n1 + n2));
    return out;
}

}  // namespace detail

Result<LongTermPassword> LongTermPassword::from_bytes(Bytes b) {
    if (b.empty() || b.size() > 64) return Err::invalid_argument;
    return LongTermPassword(std::move(b));
}

Result<LongTermPassword> LongTermPassword::from_string(const std::string& s) {
    return from_bytes(to_bytes(s));
}

Result<Credential> derive_credential(const LongTermPassword& password,
                                     const std::string& server_id, const ServerSeed& seed) {
    if (server_id.empty()) return Err::invalid_argument;
    Bytes input = length_prefixed_concat(
        {password.bytes(), BytesView(to_bytes(server_id)), BytesView(seed.bytes)});
    return Credential{sha256(input)};
}

Result<OneTimePassword> otp_at_index(const Credential& credential, uint32_t chain_length,
                                     uint32_t index) {
    if (index > chain_length) return Err::index_out_of_range;
    Digest32 d = credential.digest;
    for (uint32_t k = 0; k < chain_length - index; ++k) d = sha256(d);
    return OneTimePassword{d, index};
}

bool chain_step_verify(const OneTimePassword& candidate, const Digest32& predecessor_digest) {
    return sha256(candidate.digest) == predecessor_digest;
}

static Mac20 envelope_mac(const Block16& key, const std::string& associated_id,
                          BytesView ciphertext, const Block16& iv) {
    Bytes mac_input = length_prefixed_concat(
        {BytesView(to_bytes(associated_id)), ciphertext, BytesView(iv)});
    return hmac_sha1(key, mac_input);
}

Result<AuthenticatedEnvelope> seal(const Block16& key, const std::string& associated_id,
                                   BytesView plaintext, Rng& rng) {
    if (plaintext.empty()) return Err::invalid_argument;

    Bytes padded(plaintext.begin(), plaintext.end());
    uint8_t pad = static_cast<uint8_t>(16 - padded.size() % 16);
    padded.insert(padded.end(), pad, pad);

    AuthenticatedEnvelope env;
    env.iv = rng.block<16>();
    env.ciphertext = detail::aes128_cbc(key, env.iv, padded, /*encrypt=*/true);
    env.mac = envelope_mac(key, associated_id, env.ciphertext, env.iv);
    return env;
}

Result<Bytes> open(const Block16& key, const std::string& associated_id,
                   const AuthenticatedEnvelope& envelope) {
    if (envelope.ciphertext.empty() || envelope.ciphertext.size() % 16 != 0)
        return Err::corrupt_envelope;
    if (envelope_mac(key, associated_id, envelope.ciphertext, envelope.iv) != envelope.mac)
        return Err::authentication_failure;

    Bytes padded = detail::aes128_cbc(key, envelope.iv, envelope.ciphertext, /*encrypt=*/false);
    uint8_t pad = padded.back();
    if (pad == 0 || pad > 16 || pad > padded.size()) return Err::corrupt_envelope;
    for (size_t k = padded.size() - pad; k < padded.size(); ++k)
        if (padded[k] != pad) return Err::corrupt_envelope;
    padded.resize(padded.size() - pad);
    return padded;
}

Digest32 success_digest(const Nonce& device_nonce, const OneTimePassword& otp) {
    Bytes input = length_prefixed_concat({BytesView(device_nonce.bytes), BytesView(otp.digest)});
    return sha256(input);
}

}  // namespace chainpass
