#ifndef COGSEC_GRID_HPP
#define COGSEC_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace cogsec {

// Uniform grid of n nodes spanning [lo, hi], both endpoints included.
class Grid {
 public:
  Grid(double lo, double hi, std::size_t n);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return (hi_ - lo_) / static_cast<double>(n_ - 1); }
  double midpoint() const noexcept { return 0.5 * (lo_ + hi_); }

  double node(std::size_t i) const noexcept;
  std::vector<double> nodes() const;
  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }
  std::size_t nearest(double x) const noexcept;

  // Trapezoid quadrature weight of node i (Δ inside, Δ/2 at the ends).
  double quadrature_weight(std::size_t i) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double lo_;
  double hi_;
  std::size_t n_;
};

// The [1,6] veracity rating scale at 0.01 resolution.
inline Grid rating_grid(std::size_t n = 501) { return Grid(1.0, 6.0, n); }

// Probability mass per grid node. Entries are nonnegative and sum to one.
class MassFunction {
 public:
  // Validates an already-normalized vector (tolerance 1e-9 on the sum).
  MassFunction(Grid grid, std::vector<double> mass);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> mass() const noexcept { return mass_; }
  double operator[](std::size_t i) const noexcept { return mass_[i]; }
  std::size_t size() const noexcept { return mass_.size(); }

  friend bool operator==(const MassFunction&, const MassFunction&) = default;

 private:
  Grid grid_;
  std::vector<double> mass_;
};

// Rescale nonnegative finite values to unit sum.
MassFunction normalize(std::span<const double> values, const Grid& grid);

double mean(const MassFunction& m);
double variance(const MassFunction& m);
double entropy(const MassFunction& m);

// Node of maximal mass; ties resolve to the lowest index.
double mode(const MassFunction& m);
std::size_t mode_index(const MassFunction& m);

// Gaussian kernel evaluated on the nodes, truncated to the grid and renormalized.
MassFunction gaussian_mass(const Grid& grid, double mu, double sigma);

}  // namespace cogsec

#endif  // COGSEC_GRID_HPP
