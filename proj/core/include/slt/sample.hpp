#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace slt {

enum class Label : std::uint8_t { Zero = 0, One = 1 };

constexpr Label flip(Label y) noexcept {
  return y == Label::Zero ? Label::One : Label::Zero;
}
constexpr int to_int(Label y) noexcept { return static_cast<int>(y); }
constexpr Label to_label(bool positive) noexcept {
  return positive ? Label::One : Label::Zero;
}
/// Throws InvalidArgument for anything other than 0 or 1.
Label label_from_int(long long v);

/// A point of the instance space. Coordinates are finite; discrete domains
/// are embedded as distinct reals.
class Instance {
public:
  Instance() = default;
  explicit Instance(std::vector<double> coords);
  Instance(std::initializer_list<double> coords);

  std::size_t dimension() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const Instance&, const Instance&) = default;
  friend auto operator<=>(const Instance& a, const Instance& b) {
    return a.coords_ <=> b.coords_;
  }

private:
  std::vector<double> coords_;
};

struct Example {
  Instance x;
  Label y = Label::Zero;

  friend bool operator==(const Example&, const Example&) = default;
};

/// Ordered finite sequence of labeled instances sharing one dimension.
class LabeledSample {
public:
  LabeledSample() = default;
  explicit LabeledSample(std::vector<Example> pairs);

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  /// Dimension of the instances; 0 for an empty sample.
  std::size_t dimension() const noexcept { return dimension_; }

  const Example& operator[](std::size_t i) const noexcept { return pairs_[i]; }
  std::span<const Example> pairs() const noexcept { return pairs_; }
  auto begin() const noexcept { return pairs_.begin(); }
  auto end() const noexcept { return pairs_.end(); }

  void push_back(Example e);

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;

private:
  std::vector<Example> pairs_;
  std::size_t dimension_ = 0;
};

}  // namespace slt
