#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace cylspec {

using Complex = std::complex<double>;

std::vector<double> linspace(double a, double b, int n);

// Trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> y, double h);

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration on
// the Legendre recurrence (accurate to ~1e-15 for n <= 128).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre_64();

// Composite Gauss-Legendre integration of f over [a,b] split into `panels`
// equal panels, 64 nodes per panel.
double integrate_gl64(const std::function<double(double)>& f, double a,
                      double b, int panels);

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter = 200);

// Sixth-order central first/second derivatives on a uniform grid. The
// periodic variants treat y as one full period (y[n] == y[0] implied).
std::vector<double> d1_center6(std::span<const double> y, double h,
                               bool periodic);
std::vector<double> d2_center6(std::span<const double> y, double h,
                               bool periodic);

double norm2(std::span<const double> v);
double norm2(std::span<const Complex> v);
void scale(std::span<double> v, double s);
void scale(std::span<Complex> v, Complex s);
double dot(std::span<const double> a, std::span<const double> b);
Complex dotc(std::span<const Complex> a, std::span<const Complex> b);  // conj(a).b

// Deterministic RNG used for solver start vectors and randomized tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Least-squares line y = slope*x + intercept; returns R^2 of the fit.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace cylspec
