#include "softmin/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softmin/errors.hpp"

namespace softmin {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ContractViolation("Matrix: data length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  }
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Swarm::Swarm(Matrix positions, double time) : positions_(std::move(positions)), time_(time) {
  if (positions_.rows() < 1 || positions_.cols() < 1) {
    throw ContractViolation("Swarm: need at least one particle and one dimension");
  }
  if (!positions_.all_finite()) {
    throw ContractViolation("Swarm: positions must be finite");
  }
}

Swarm Swarm::from_points(const std::vector<Point>& points, double time) {
  if (points.empty()) {
    throw ContractViolation("Swarm: need at least one particle");
  }
  const std::size_t d = points.front().size();
  Matrix m(points.size(), d);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != d) {
      throw ContractViolation("Swarm: ragged particle coordinates");
    }
    std::copy(points[k].begin(), points[k].end(), m.row(k).begin());
  }
  return Swarm(std::move(m), time);
}

Point Swarm::point(std::size_t k) const {
  auto r = row(k);
  return Point(r.begin(), r.end());
}

}  // namespace softmin
