#include "ddsim/trajectory.hpp"

#include <algorithm>
#include <numeric>

#include "ddsim/error.hpp"

namespace ddsim {

Trajectory::Trajectory(std::size_t channels, std::size_t length)
    : channels_(channels), length_(length), values_(channels * length, 0.0) {
    require(channels >= 1, ErrorKind::InputContract, "trajectory needs at least one channel");
}

Trajectory::Trajectory(std::size_t channels, std::vector<double> values)
    : channels_(channels), values_(std::move(values)) {
    require(channels >= 1, ErrorKind::InputContract, "trajectory needs at least one channel");
    require(values_.size() % channels == 0, ErrorKind::InputContract,
            "trajectory value count is not a multiple of the channel count");
    length_ = values_.size() / channels;
}

Trajectory Trajectory::scalar(std::vector<double> values) { return {1, std::move(values)}; }

Trajectory Trajectory::zeros(std::size_t channels, std::size_t length) {
    return {channels, length};
}

Trajectory Trajectory::from_vector(std::size_t channels, const Eigen::VectorXd& stacked) {
    return {channels, std::vector<double>(stacked.data(), stacked.data() + stacked.size())};
}

Eigen::VectorXd Trajectory::stacked() const { return as_vector(); }

Trajectory Trajectory::slice(std::size_t begin, std::size_t count) const {
    require(begin + count <= length_, ErrorKind::InputContract, "trajectory slice out of range");
    auto first = values_.begin() + static_cast<std::ptrdiff_t>(begin * channels_);
    return {channels_, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(count * channels_))};
}

Trajectory Trajectory::concat(const Trajectory& tail) const {
    require(tail.channels_ == channels_, ErrorKind::InputContract,
            "cannot concatenate trajectories with different channel counts");
    std::vector<double> v = values_;
    v.insert(v.end(), tail.values_.begin(), tail.values_.end());
    return {channels_, std::move(v)};
}

Trajectory Trajectory::channel_range(std::size_t first, std::size_t count) const {
    require(count >= 1 && first + count <= channels_, ErrorKind::InputContract,
            "channel range out of bounds");
    Trajectory out(count, length_);
    for (std::size_t t = 0; t < length_; ++t)
        for (std::size_t c = 0; c < count; ++c) out(t, c) = (*this)(t, first + c);
    return out;
}

double Trajectory::squared_norm() const {
    return std::inner_product(values_.begin(), values_.end(), values_.begin(), 0.0);
}

Trajectory join_channels(const Trajectory& a, const Trajectory& b) {
    require(a.length() == b.length(), ErrorKind::InputContract,
            "join_channels: trajectories differ in length");
    Trajectory out(a.channels() + b.channels(), a.length());
    for (std::size_t t = 0; t < a.length(); ++t) {
        for (std::size_t c = 0; c < a.channels(); ++c) out(t, c) = a(t, c);
        for (std::size_t c = 0; c < b.channels(); ++c) out(t, a.channels() + c) = b(t, c);
    }
    return out;
}

}  // namespace ddsim
