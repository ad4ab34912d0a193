#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace teflow {

// Generator used for every random draw in the library. mt19937_64 is fully
// specified by the C++ standard, so streams are identical across platforms.
using Engine = std::mt19937_64;

inline constexpr std::string_view kEngineName = "mt19937_64";
inline constexpr std::string_view kSeedDerivation = "splitmix64-chain";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Derives a sub-seed from a master seed and a sequence of integer tags
// (stage id, pair index, realization index, ...).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept;

// Stable 64-bit hash of a stage name, for use as a derive_seed tag.
std::uint64_t stage_tag(std::string_view name) noexcept;

// Uniform integer in [0, bound) by rejection; bound must be > 0.
// std::uniform_int_distribution is implementation-defined, this is not.
std::uint64_t uniform_below(Engine& eng, std::uint64_t bound);

// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Engine& eng);

template <typename T>
void fisher_yates(std::span<T> values, Engine& eng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(eng, i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace teflow
