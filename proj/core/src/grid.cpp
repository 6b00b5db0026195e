#include "superosc/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "superosc/error.hpp"

namespace superosc {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  for (double t : times_) require(std::isfinite(t), "grid times must be finite");
  for (std::size_t k = 1; k < times_.size(); ++k)
    require(times_[k] > times_[k - 1], "grid must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double start, double stop, double step) {
  require(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step),
          "grid bounds must be finite");
  require(step > 0.0, "grid step must be positive");
  require(stop >= start, "grid stop must not precede start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> times(n);
  for (std::size_t k = 0; k < n; ++k) times[k] = start + static_cast<double>(k) * step;
  return TimeGrid(std::move(times));
}

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first != last && *first == ' ') ++first;
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  require(ec == std::errc() && ptr == last, "bad number in grid: '" + std::string(text) + "'");
  return value;
}

}  // namespace

TimeGrid TimeGrid::parse(std::string_view text) {
  const auto c1 = text.find(':');
  require(c1 != std::string_view::npos, "grid must be start:stop:step");
  const auto c2 = text.find(':', c1 + 1);
  require(c2 != std::string_view::npos, "grid must be start:stop:step");
  return uniform(parse_number(text.substr(0, c1)), parse_number(text.substr(c1 + 1, c2 - c1 - 1)),
                 parse_number(text.substr(c2 + 1)));
}

TimeGrid TimeGrid::merged(const TimeGrid& other) const {
  std::vector<double> all;
  all.reserve(times_.size() + other.times_.size());
  std::merge(times_.begin(), times_.end(), other.times_.begin(), other.times_.end(),
             std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return TimeGrid(std::move(all));
}

}  // namespace superosc
