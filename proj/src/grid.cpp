#include "cogsec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cogsec/error.hpp"

namespace cogsec {

Grid::Grid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw InvalidParameter("grid bounds must be finite with lo < hi");
  }
  if (n < 2) {
    throw InvalidParameter("grid needs at least 2 nodes");
  }
}

double Grid::node(std::size_t i) const noexcept {
  if (i + 1 == n_) return hi_;
  return lo_ + static_cast<double>(i) * (hi_ - lo_) / static_cast<double>(n_ - 1);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

std::size_t Grid::nearest(double x) const noexcept {
  const double t = std::round((x - lo_) / spacing());
  if (t <= 0.0) return 0;
  if (t >= static_cast<double>(n_ - 1)) return n_ - 1;
  return static_cast<std::size_t>(t);
}

double Grid::quadrature_weight(std::size_t i) const noexcept {
  const double d = spacing();
  return (i == 0 || i + 1 == n_) ? 0.5 * d : d;
}

MassFunction::MassFunction(Grid grid, std::vector<double> mass) : grid_(grid), mass_(std::move(mass)) {
  if (mass_.size() != grid_.size()) {
    throw InvalidParameter("mass vector length " + std::to_string(mass_.size()) + " does not match grid size " +
                           std::to_string(grid_.size()));
  }
  double total = 0.0;
  for (double v : mass_) {
    if (!std::isfinite(v) || v < 0.0) throw DegenerateMass("mass entries must be finite and nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DegenerateMass("mass does not sum to one (sum = " + std::to_string(total) + ")");
  }
}

MassFunction normalize(std::span<const double> values, const Grid& grid) {
  if (values.size() != grid.size()) {
    throw InvalidParameter("value vector length does not match grid size");
  }
  double total = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw DegenerateMass("cannot normalize negative or non-finite values");
    total += v;
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw DegenerateMass("cannot normalize an all-zero vector");
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v /= total;
  return MassFunction(grid, std::move(out));
}

double mean(const MassFunction& m) {
  const Grid& g = m.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) acc += m[i] * g.node(i);
  return std::clamp(acc, g.lo(), g.hi());
}

double variance(const MassFunction& m) {
  const double mu = mean(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double d = m.grid().node(i) - mu;
    acc += m[i] * d * d;
  }
  return acc;
}

double entropy(const MassFunction& m) {
  double acc = 0.0;
  for (double p : m.mass()) {
    if (p > 0.0) acc -= p * std::log(p);
  }
  return acc;
}

std::size_t mode_index(const MassFunction& m) {
  const auto mass = m.mass();
  return static_cast<std::size_t>(std::distance(mass.begin(), std::max_element(mass.begin(), mass.end())));
}

double mode(const MassFunction& m) { return m.grid().node(mode_index(m)); }

MassFunction gaussian_mass(const Grid& grid, double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameter("gaussian sigma must be positive");
  if (!std::isfinite(mu)) throw InvalidParameter("gaussian mean must be finite");
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = (grid.node(i) - mu) / sigma;
    w[i] = std::exp(-0.5 * z * z);
  }
  // A very narrow kernel far outside the grid underflows everywhere; fall
  // back to the nearest node so the limit stays well defined.
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
    w[grid.nearest(mu)] = 1.0;
  }
  return normalize(w, grid);
}

}  // namespace cogsec
