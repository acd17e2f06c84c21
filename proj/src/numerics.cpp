#include "cylspec/numerics.hpp"

#include <cmath>
#include <cstddef>

#include "cylspec/error.hpp"

namespace cylspec {

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw Error(ErrorKind::invalid_parameter, "linspace needs n >= 2");
  std::vector<double> x(n);
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) x[i] = a + i * h;
  x.back() = b;
  return x;
}

double trapezoid(std::span<const double> y, double h) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

namespace {

GaussRule make_gauss(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess, Newton on the three-term recurrence.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre_64() {
  static const GaussRule rule = make_gauss(64);
  return rule;
}

double integrate_gl64(const std::function<double(double)>& f, double a,
                      double b, int panels) {
  const GaussRule& gl = gauss_legendre_64();
  double total = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    double s = 0.0;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j)
      s += gl.weights[j] * f(mid + 0.5 * w * gl.nodes[j]);
    total += 0.5 * w * s;
  }
  return total;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error(ErrorKind::bracket_failure, "bisect endpoints have equal sign");
  for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// 6th-order central stencils; one-sided fallback is not provided, interior
// points only for the non-periodic case (callers keep 3-point margins).
constexpr double kD1[7] = {-1.0 / 60, 9.0 / 60,  -45.0 / 60, 0.0,
                           45.0 / 60, -9.0 / 60, 1.0 / 60};
constexpr double kD2[7] = {1.0 / 90,   -3.0 / 20, 3.0 / 2, -49.0 / 18,
                           3.0 / 2,    -3.0 / 20, 1.0 / 90};

std::vector<double> stencil_apply(std::span<const double> y, double scale_,
                                  const double (&c)[7], bool periodic) {
  const int n = static_cast<int>(y.size());
  std::vector<double> out(n, 0.0);
  if (periodic) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = -3; k <= 3; ++k) {
        int j = (i + k) % n;
        if (j < 0) j += n;
        s += c[k + 3] * y[j];
      }
      out[i] = s * scale_;
    }
  } else {
    for (int i = 3; i + 3 < n; ++i) {
      double s = 0.0;
      for (int k = -3; k <= 3; ++k) s += c[k + 3] * y[i + k];
      out[i] = s * scale_;
    }
  }
  return out;
}

}  // namespace

std::vector<double> d1_center6(std::span<const double> y, double h,
                               bool periodic) {
  return stencil_apply(y, 1.0 / h, kD1, periodic);
}

std::vector<double> d2_center6(std::span<const double> y, double h,
                               bool periodic) {
  return stencil_apply(y, 1.0 / (h * h), kD2, periodic);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& x : v) s += std::norm(x);
  return std::sqrt(s);
}

void scale(std::span<double> v, double s) {
  for (double& x : v) x *= s;
}

void scale(std::span<Complex> v, Complex s) {
  for (Complex& x : v) x *= s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Complex dotc(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw Error(ErrorKind::invalid_parameter, "fit_line needs >= 2 points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0)
    throw Error(ErrorKind::invalid_parameter, "fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (f.slope * x[i] + f.intercept);
      ss_res += r * r;
    }
    f.r_squared = 1.0 - ss_res / syy;
  }
  return f;
}

}  // namespace cylspec
