#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace superosc {

// Monotone increasing sample times.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> times);

  // Inclusive of `stop` when it lies on the lattice (within 1e-9 steps).
  static TimeGrid uniform(double start, double stop, double step);
  // Parses "start:stop:step".
  static TimeGrid parse(std::string_view text);

  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }
  double operator[](std::size_t k) const { return times_[k]; }

  // Merge with another grid, keeping order and dropping exact duplicates.
  TimeGrid merged(const TimeGrid& other) const;

 private:
  std::vector<double> times_;
};

}  // namespace superosc
