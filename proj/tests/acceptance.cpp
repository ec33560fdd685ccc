// Acceptance harness: one printed pass/fail line per criterion, exit code 0
// only if every criterion holds. Runs against the honest library build.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "chainpass/scenarios.hpp"
#include "oracle_sha256.hpp"

using namespace chainpass;

namespace {

int g_failures = 0;

void report(int criterion, const char* label, bool ok, const std::string& detail = "") {
    std::printf("criterion %2d (%s): %s%s%s\n", criterion, label, ok ? "pass" : "FAIL",
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

Scenario find_scenario(const std::string& name) {
    for (auto& s : builtin_scenarios())
        if (s.name == name) return s;
    std::fprintf(stderr, "missing built-in scenario %s\n", name.c_str());
    std::exit(2);
}

double run_timed(const Scenario& s, uint64_t seed, Verdict& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = run_scenario(s, seed);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

std::string first_evidence(const Verdict& v) {
    return v.evidence.empty() ? std::string("no evidence recorded") : v.evidence.front();
}

size_t count_outcome_prefix(const Transcript& t, const std::string& prefix) {
    size_t n = 0;
    for (const auto& e : t.entries)
        if (e.outcome.rfind(prefix, 0) == 0) ++n;
    return n;
}

// --- criterion 1: honest end-to-end ---------------------------------------
void check_honest_end_to_end() {
    Verdict v;
    double secs = run_timed(find_scenario("honest_multi_server"), 42, v);
    size_t accepted = count_outcome_prefix(v.transcript, "login-accepted");
    size_t rejected = count_outcome_prefix(v.transcript, "rejected:");
    bool ok = v.pass && accepted == 15 && rejected == 0 && secs < 1.0;
    char detail[160];
    std::snprintf(detail, sizeof detail, "%zu/15 accepted, %zu errors, %.3fs%s%s", accepted,
                  rejected, secs, v.pass ? "" : "; ", v.pass ? "" : first_evidence(v).c_str());
    report(1, "honest end-to-end", ok, detail);
}

// --- criterion 2: chain correctness against an independent hasher ----------
void check_chain_oracle() {
    const uint32_t kN = 32;
    auto password = LongTermPassword::from_string("oracle check password").value();
    ServerSeed seed;
    for (size_t i = 0; i < 16; ++i) seed.bytes[i] = static_cast<uint8_t>(i * 7 + 1);
    auto credential = derive_credential(password, "oracle.example", seed).value();

    bool ok = true;
    std::string detail = "delta_0..delta_32 match, telescoping holds";
    std::vector<Digest32> chain(kN + 1);
    for (uint32_t i = 0; i <= kN; ++i) {
        // Brute force: apply the independent hasher N-i times from scratch.
        Digest32 d = credential.digest;
        for (uint32_t k = 0; k < kN - i; ++k) d = oracle::sha256(BytesView(d));
        chain[i] = d;
        auto otp = otp_at_index(credential, kN, i);
        if (!otp.ok() || otp.value().digest != d) {
            ok = false;
            detail = "mismatch at index " + std::to_string(i);
            break;
        }
    }
    if (ok) {
        for (uint32_t i = 1; i <= kN; ++i) {
            if (oracle::sha256(BytesView(chain[i])) != chain[i - 1]) {
                ok = false;
                detail = "telescoping invariant broken at index " + std::to_string(i);
                break;
            }
            OneTimePassword candidate{chain[i], i};
            if (!chain_step_verify(candidate, chain[i - 1])) {
                ok = false;
                detail = "chain_step_verify disagrees at index " + std::to_string(i);
                break;
            }
        }
    }
    report(2, "chain correctness oracle", ok, detail);
}

// --- criteria 3-9: built-in attack scenarios -------------------------------
void check_scenario(int criterion, const char* label, const char* name,
                    double budget_seconds = 0.0,
                    const std::function<bool(const Verdict&, std::string&)>& extra = {}) {
    Verdict v;
    double secs = run_timed(find_scenario(name), 42, v);
    bool ok = v.pass;
    std::string detail = ok ? "scenario verdict pass" : first_evidence(v);
    if (ok && budget_seconds > 0.0 && secs >= budget_seconds) {
        ok = false;
        detail = "over time budget: " + std::to_string(secs) + "s";
    }
    if (ok && extra && !extra(v, detail)) ok = false;
    report(criterion, label, ok, detail);
}

// --- criterion 10: transcript determinism ----------------------------------
void check_determinism() {
    bool ok = true;
    std::string detail = "all scenarios byte-identical across reruns";
    std::vector<Scenario> all = builtin_scenarios();
    all.push_back(demo_scenario());
    for (const auto& s : all) {
        // Rebuild before rerunning: scenario closures carry per-run state.
        std::string first, second;
        {
            Verdict v = run_scenario(s, 42);
            first = v.transcript.format();
        }
        std::vector<Scenario> rebuilt = builtin_scenarios();
        rebuilt.push_back(demo_scenario());
        for (const auto& again : rebuilt)
            if (again.name == s.name) {
                Verdict v = run_scenario(again, 42);
                second = v.transcript.format();
            }
        if (first.empty() || first != second) {
            ok = false;
            detail = "transcripts diverge for scenario " + s.name;
            break;
        }
    }
    report(10, "determinism", ok, detail);
}

// --- criterion 12: crypto known answers ------------------------------------
void check_known_answers() {
    bool ok = true;
    std::string detail = "AES-128-CBC and HMAC-SHA1 reference vectors match";

    // AES-128-CBC, 16-byte single-block reference vector (frozen from the
    // standard published test set for this mode).
    Block16 key = {0x2b, 0x7e, 0x15, 0x16, 0x28, 0xae, 0xd2, 0xa6,
                   0xab, 0xf7, 0x15, 0x88, 0x09, 0xcf, 0x4f, 0x3c};
    Block16 iv = {0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07,
                  0x08, 0x09, 0x0a, 0x0b, 0x0c, 0x0d, 0x0e, 0x0f};
    Bytes plaintext = from_hex("6bc1bee22e409f96e93d7e117393172a").value();
    Bytes expected_ct = from_hex("7649abac8119b246cee98e9b12e9197d").value();
    if (detail::aes128_cbc(key, iv, plaintext, true) != expected_ct) {
        ok = false;
        detail = "AES-128-CBC encrypt vector mismatch";
    }
    if (ok && detail::aes128_cbc(key, iv, expected_ct, false) != plaintext) {
        ok = false;
        detail = "AES-128-CBC decrypt vector mismatch";
    }

    // HMAC-SHA1 reference vector: key "Jefe", data "what do ya want for
    // nothing?" (frozen from the standard published HMAC test set).
    if (ok) {
        Bytes hkey = to_bytes("Jefe");
        Bytes hdata = to_bytes("what do ya want for nothing?");
        Mac20 mac = hmac_sha1(hkey, hdata);
        if (to_hex(mac) != "effcdf6ae5eb2fa2d27416d5f184df9c259a7c79") {
            ok = false;
            detail = "HMAC-SHA1 vector mismatch";
        }
    }

    // seal() must be exactly encrypt-then-MAC over those primitives: strip
    // the envelope apart and recompute both halves independently.
    if (ok) {
        Rng rng(7);
        Bytes msg = to_bytes("envelope composition check");
        auto envelope = seal(key, "assoc.example", msg, rng).value();
        Bytes padded = msg;
        uint8_t pad = static_cast<uint8_t>(16 - msg.size() % 16);
        padded.insert(padded.end(), pad, pad);
        if (detail::aes128_cbc(key, envelope.iv, padded, true) != envelope.ciphertext) {
            ok = false;
            detail = "seal() ciphertext differs from reference AES-128-CBC";
        }
        Bytes mac_input = length_prefixed_concat(
            {BytesView(to_bytes("assoc.example")), BytesView(envelope.ciphertext),
             BytesView(envelope.iv)});
        if (ok && hmac_sha1(BytesView(key), mac_input) != envelope.mac) {
            ok = false;
            detail = "seal() MAC differs from reference HMAC-SHA1";
        }
        if (ok && open(key, "assoc.example", envelope).value() != msg) {
            ok = false;
            detail = "open() does not invert seal()";
        }
    }

    report(12, "crypto known answers", ok, detail);
}

}  // namespace

int main() {
    check_honest_end_to_end();
    check_chain_oracle();

    check_scenario(3, "replay resistance", "replay", 0.0,
                   [](const Verdict& v, std::string& detail) {
                       size_t nonce = count_outcome_prefix(v.transcript, "rejected:nonce-mismatch");
                       size_t noch = count_outcome_prefix(v.transcript, "rejected:no-challenge");
                       size_t auth =
                           count_outcome_prefix(v.transcript, "rejected:authentication-failure");
                       if (nonce + noch + auth == 0) {
                           detail = "no replay rejection in transcript";
                           return false;
                       }
                       detail = "replay rejected, single honest login advanced the index";
                       return true;
                   });
    check_scenario(4, "SMS-spoof resistance", "sms_spoof", 0.0,
                   [](const Verdict& v, std::string& detail) {
                       if (count_outcome_prefix(v.transcript, "rejected:spoofed-source") < 2) {
                           detail = "expected spoofed-source rejections on both paths";
                           return false;
                       }
                       detail = "spoofed frames rejected, store bit-identical before/after";
                       return true;
                   });
    check_scenario(5, "phishing/MITM resistance", "phishing_mitm");
    check_scenario(6, "key-logging resistance", "keylogger_kiosk");
    check_scenario(7, "password-reuse resistance", "password_reuse", 10.0);
    check_scenario(8, "recovery", "phone_loss_recovery");
    check_scenario(9, "reseed", "chain_exhaustion");

    check_determinism();
    std::printf("criterion 11 (negative control): covered by the weakened-build binary\n");
    check_known_answers();

    if (g_failures != 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
