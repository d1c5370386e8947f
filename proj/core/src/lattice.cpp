#include "surfstates/lattice.hpp"

#include <cmath>
#include <string>

#include "surfstates/error.hpp"

namespace surfstates {

LatticeWindow LatticeWindow::cube(int d, double L, double h, std::vector<double> center) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "window dimension must be positive");
  return box(std::vector<double>(static_cast<std::size_t>(d), L), h, std::move(center));
}

LatticeWindow LatticeWindow::box(std::vector<double> sides, double h, std::vector<double> center) {
  if (sides.empty()) throw Error(ErrorKind::InvalidArgument, "window needs at least one axis");
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  if (center.empty()) center.assign(sides.size(), 0.0);
  if (center.size() != sides.size()) {
    throw Error(ErrorKind::InvalidArgument, "window center has the wrong dimension");
  }
  LatticeWindow w;
  w.h_ = h;
  for (double s : sides) {
    const double ratio = s / h;
    const double cells = std::round(ratio);
    if (!(s > 0.0) || std::abs(ratio - cells) > 1e-9 * std::max(1.0, ratio) || cells < 2.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "side/h must be an integer >= 2 (side " + std::to_string(s) + ", h " +
                      std::to_string(h) + ")");
    }
    w.counts_.push_back(static_cast<int>(cells) - 1);
  }
  w.sides_ = std::move(sides);
  w.center_ = std::move(center);
  return w;
}

bool LatticeWindow::is_cube() const {
  for (double s : sides_) {
    if (s != sides_.front()) return false;
  }
  return true;
}

double LatticeWindow::length() const {
  if (!is_cube()) throw Error(ErrorKind::InvalidArgument, "window is not a cube");
  return sides_.front();
}

std::size_t LatticeWindow::size() const {
  std::size_t n = 1;
  for (int c : counts_) n *= static_cast<std::size_t>(c);
  return n;
}

double LatticeWindow::volume() const {
  double v = 1.0;
  for (double s : sides_) v *= s;
  return v;
}

std::size_t LatticeWindow::flatten(const std::vector<int>& index) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    flat = flat * static_cast<std::size_t>(counts_[a]) + static_cast<std::size_t>(index[a]);
  }
  return flat;
}

std::vector<int> LatticeWindow::unflatten(std::size_t flat) const {
  std::vector<int> index(counts_.size());
  for (std::size_t a = counts_.size(); a-- > 0;) {
    index[a] = static_cast<int>(flat % static_cast<std::size_t>(counts_[a]));
    flat /= static_cast<std::size_t>(counts_[a]);
  }
  return index;
}

std::vector<double> LatticeWindow::point(std::size_t flat) const {
  const auto index = unflatten(flat);
  std::vector<double> x(index.size());
  for (std::size_t a = 0; a < index.size(); ++a) x[a] = coordinate(static_cast<int>(a), index[a]);
  return x;
}

LatticeWindow LatticeWindow::translated(const std::vector<std::int64_t>& shift) const {
  if (shift.size() != center_.size()) {
    throw Error(ErrorKind::InvalidArgument, "translation has the wrong dimension");
  }
  LatticeWindow w = *this;
  for (std::size_t a = 0; a < shift.size(); ++a) w.center_[a] += static_cast<double>(shift[a]);
  return w;
}

}  // namespace surfstates
