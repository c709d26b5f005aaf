#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ddsim {

// Seeded generator with explicit stream splitting: the engine state is a pure
// function of (seed, stream ids), so parallel Monte-Carlo trials never share
// state and results do not depend on thread count or scheduling.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::vector<double> normal_vector(std::size_t n, double stddev = 1.0);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Well-known stream tags so different consumers of one seed never collide.
namespace streams {
inline constexpr std::uint64_t noise = 1;
inline constexpr std::uint64_t baseline = 2;
inline constexpr std::uint64_t design_start = 3;
inline constexpr std::uint64_t random_input = 4;
inline constexpr std::uint64_t task = 5;
}  // namespace streams

}  // namespace ddsim
