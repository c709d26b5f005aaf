#include "ddsim/rng.hpp"

namespace ddsim {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * stream.size());
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (std::uint64_t s : stream) push(s);
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream)
    : engine_(make_engine(seed, stream)) {}

std::vector<double> RandomStream::normal_vector(std::size_t n, double stddev) {
    std::vector<double> v(n);
    for (double& x : v) x = stddev * normal();
    return v;
}

}  // namespace ddsim
