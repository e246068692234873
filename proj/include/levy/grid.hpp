#pragma once

#include <span>
#include <vector>

namespace levy {

/// Strictly increasing time points on [0, T]. Base points are the multiples
/// of dt; event times (jump epochs, integrand switch epochs) are merged in by
/// refined(). Points closer than 1e-12 are treated as the same instant.
class TimeGrid {
 public:
  static constexpr double kMergeTol = 1e-12;

  static TimeGrid regular(double horizon, double dt);

  /// Takes ownership of an already valid point list (0 = front, T = back).
  static TimeGrid from_points(std::vector<double> points);

  /// Merged grid; extra times outside [0, T] are an input error.
  TimeGrid refined(std::span<const double> extra) const;

  double horizon() const { return t_.back(); }
  std::size_t size() const { return t_.size(); }
  std::span<const double> times() const { return t_; }
  double operator[](std::size_t i) const { return t_[i]; }

  /// Index of the grid point equal to t (within kMergeTol); input error if absent.
  std::size_t index_of(double t) const;

  /// Largest index i with t_[i] <= t (+tol).
  std::size_t floor_index(double t) const;

 private:
  std::vector<double> t_;
};

}  // namespace levy
