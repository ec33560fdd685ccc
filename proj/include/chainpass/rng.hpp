#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace chainpass {

// Deterministic random source. Every nonce, seed and session key in a
// simulation is drawn from one of these, so a scenario is reproducible
// from its 64-bit seed alone.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    void fill(uint8_t* out, size_t len) {
        size_t i = 0;
        while (i < len) {
            uint64_t word = engine_();
            for (int b = 0; b < 8 && i < len; ++b, ++i)
                out[i] = static_cast<uint8_t>(word >> (8 * b));
        }
    }

    template <size_t N>
    std::array<uint8_t, N> block() {
        std::array<uint8_t, N> out{};
        fill(out.data(), N);
        return out;
    }

    uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace chainpass
