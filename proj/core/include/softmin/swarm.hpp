#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace softmin {

using Point = std::vector<double>;

/// Dense row-major matrix; row k holds the d coordinates of particle k.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Particle configuration x = (x_1, ..., x_n), x_k in R^d, at model time t.
class Swarm {
 public:
  Swarm() = default;
  // Throws ContractViolation unless n >= 1, d >= 1 and every entry is finite.
  explicit Swarm(Matrix positions, double time = 0.0);
  static Swarm from_points(const std::vector<Point>& points, double time = 0.0);

  std::size_t size() const noexcept { return positions_.rows(); }
  std::size_t dim() const noexcept { return positions_.cols(); }
  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  std::span<double> row(std::size_t k) { return positions_.row(k); }
  std::span<const double> row(std::size_t k) const { return positions_.row(k); }
  Point point(std::size_t k) const;

  Matrix& positions() noexcept { return positions_; }
  const Matrix& positions() const noexcept { return positions_; }

  friend bool operator==(const Swarm&, const Swarm&) = default;

 private:
  Matrix positions_;
  double time_ = 0.0;
};

}  // namespace softmin
