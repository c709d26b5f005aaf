#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace ddsim {

// A finite multichannel signal z_[0, T-1] stored time-major: value(t, c) is
// values()[t * channels + c]. The flat storage doubles as the stacked vector
// [z_0; z_1; ...; z_{T-1}].
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::size_t channels, std::size_t length);
    Trajectory(std::size_t channels, std::vector<double> values);

    static Trajectory scalar(std::vector<double> values);
    static Trajectory zeros(std::size_t channels, std::size_t length);
    static Trajectory from_vector(std::size_t channels, const Eigen::VectorXd& stacked);

    [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
    [[nodiscard]] std::size_t length() const noexcept { return length_; }
    [[nodiscard]] bool empty() const noexcept { return length_ == 0; }

    [[nodiscard]] double operator()(std::size_t t, std::size_t c = 0) const {
        return values_[t * channels_ + c];
    }
    double& operator()(std::size_t t, std::size_t c = 0) { return values_[t * channels_ + c]; }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::span<const double> sample(std::size_t t) const {
        return std::span<const double>(values_).subspan(t * channels_, channels_);
    }

    [[nodiscard]] Eigen::VectorXd stacked() const;
    [[nodiscard]] Eigen::Map<const Eigen::VectorXd> as_vector() const {
        return {values_.data(), static_cast<Eigen::Index>(values_.size())};
    }

    // Samples [begin, begin + count).
    [[nodiscard]] Trajectory slice(std::size_t begin, std::size_t count) const;
    [[nodiscard]] Trajectory concat(const Trajectory& tail) const;
    // Selects a subset of channels, keeping time order.
    [[nodiscard]] Trajectory channel_range(std::size_t first, std::size_t count) const;

    [[nodiscard]] double squared_norm() const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    std::size_t channels_ = 1;
    std::size_t length_ = 0;
    std::vector<double> values_;
};

// Interleaves two trajectories of equal length channel-wise: [a_t; b_t].
[[nodiscard]] Trajectory join_channels(const Trajectory& a, const Trajectory& b);

}  // namespace ddsim
