#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "blowup/dimension.hpp"
#include "blowup/error.hpp"

namespace blowup::conformal {

/// Fixed-length point of R^n. Binary operations require equal lengths.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : c_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : c_(coords) {}

  static Point zero(std::size_t n) { return Point(std::vector<double>(n, 0.0)); }
  static Point axis(std::size_t n, std::size_t i, double scale = 1.0) {
    Point p = zero(n);
    p.c_.at(i) = scale;
    return p;
  }

  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  const std::vector<double>& coords() const { return c_; }

  double norm2() const {
    double s = 0.0;
    for (double x : c_) s += x * x;
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  friend Point operator+(const Point& a, const Point& b) {
    check(a, b);
    Point r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend Point operator-(const Point& a, const Point& b) {
    check(a, b);
    Point r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }
  friend Point operator*(double s, const Point& a) {
    Point r = a;
    for (double& x : r.c_) x *= s;
    return r;
  }
  friend double dot(const Point& a, const Point& b) {
    check(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.c_[i] * b.c_[i];
    return s;
  }
  friend double distance(const Point& a, const Point& b) { return (a - b).norm(); }
  friend bool operator==(const Point&, const Point&) = default;

 private:
  static void check(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw InvalidArgument("point dimensions differ");
  }

  std::vector<double> c_;
};

inline void require_dimension(const Dimension& dim, const Point& x) {
  if (x.size() != static_cast<std::size_t>(dim.n())) throw InvalidArgument("point does not match the dimension");
}

}  // namespace blowup::conformal
