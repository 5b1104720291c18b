#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qdiff {

using Index = std::int64_t;

/// Closed interval [lo, hi] known to contain the value of an infinite series.
/// Threshold tests that need "small enough" must read `hi`.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;

  Enclosure() = default;
  Enclosure(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi)) throw std::invalid_argument("Enclosure requires lo <= hi");
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool operator==(const Enclosure&) const = default;
};

/// Finite slice x_start .. x_end of a real sequence on N_1.
///
/// Reads below `start` return 0: a window models an element of the zero-prefix
/// ball, where every coordinate before the first stored index vanishes.
/// Reads past the end also return 0; callers that truncate account for that.
class Window {
 public:
  Window(Index start, std::vector<double> values) : start_(start), values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("Window must hold at least one value");
    if (start_ < 0) throw std::invalid_argument("Window start must be nonnegative");
  }

  static Window zeros(Index start, Index end) {
    if (end < start) throw std::invalid_argument("Window::zeros: end < start");
    return Window(start, std::vector<double>(static_cast<std::size_t>(end - start + 1), 0.0));
  }

  Index start() const { return start_; }
  Index end() const { return start_ + static_cast<Index>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  bool contains(Index n) const { return n >= start_ && n <= end(); }

  double at(Index n) const { return contains(n) ? values_[static_cast<std::size_t>(n - start_)] : 0.0; }
  double& operator[](Index n) { return values_.at(static_cast<std::size_t>(n - start_)); }
  double operator[](Index n) const { return values_.at(static_cast<std::size_t>(n - start_)); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool operator==(const Window&) const = default;

 private:
  Index start_;
  std::vector<double> values_;
};

}  // namespace qdiff
