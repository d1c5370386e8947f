#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace surfstates {

/// Axis-aligned box of interior grid points with Dirichlet boundary.
///
/// Along axis a the unknowns sit at corner(a) + (i + 1) h for i = 0 .. count(a) - 1,
/// where corner(a) = center[a] - side[a] / 2. Flattening is row-major (last axis fastest).
class LatticeWindow {
 public:
  LatticeWindow() = default;

  static LatticeWindow cube(int d, double L, double h, std::vector<double> center = {});
  static LatticeWindow box(std::vector<double> sides, double h, std::vector<double> center = {});

  int dimension() const { return static_cast<int>(sides_.size()); }
  double spacing() const { return h_; }
  double side(int axis) const { return sides_[axis]; }
  const std::vector<double>& sides() const { return sides_; }
  const std::vector<double>& center() const { return center_; }
  int count(int axis) const { return counts_[axis]; }
  const std::vector<int>& counts() const { return counts_; }
  /// Cube side length; throws for non-cubic boxes.
  double length() const;
  bool is_cube() const;

  double corner(int axis) const { return center_[axis] - 0.5 * sides_[axis]; }
  double coordinate(int axis, int i) const { return corner(axis) + (i + 1) * h_; }
  std::size_t size() const;
  double volume() const;

  std::size_t flatten(const std::vector<int>& index) const;
  std::vector<int> unflatten(std::size_t flat) const;
  std::vector<double> point(std::size_t flat) const;

  LatticeWindow translated(const std::vector<std::int64_t>& shift) const;

 private:
  std::vector<double> sides_;
  std::vector<double> center_;
  std::vector<int> counts_;
  double h_ = 0.0;
};

}  // namespace surfstates
