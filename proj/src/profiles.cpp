#include "cylspec/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "cylspec/error.hpp"
#include "cylspec/numerics.hpp"

namespace cylspec {

namespace {

constexpr int kRk4Steps = 2048;
constexpr int kPeriodPanels = 16;

// Energy window for closed orbits around the center at u = a. The admissible
// band is F(a) < E < min(F(0), F(1)).
struct EnergyWindow {
  double floor;
  double ceiling;
};

EnergyWindow energy_window(const Nonlinearity& f) {
  const double fa = f.potential(f.a());
  const double cap = std::min(f.potential(0.0), f.potential(1.0));
  return {fa, cap};
}

struct TurningPoints {
  double lo;
  double hi;
};

// F is strictly monotone on (0, a) and (a, 1) within the admissible band, so
// plain bisection brackets are (0, a) and (a, 1). Newton polish afterwards:
// the turning points must vary smoothly with the energy, otherwise the period
// function inherits step noise and the downstream period bisection stalls.
TurningPoints turning_points(const Nonlinearity& f, double energy) {
  const double a = f.a();
  auto g = [&](double w) { return f.potential(w) - energy; };
  TurningPoints t;
  t.lo = bisect(g, 0.0, a, 1e-10);
  t.hi = bisect(g, a, 1.0, 1e-10);
  for (int it = 0; it < 4; ++it) {
    const double flo = f(t.lo), fhi = f(t.hi);
    if (flo != 0.0) t.lo -= (f.potential(t.lo) - energy) / flo;
    if (fhi != 0.0) t.hi -= (f.potential(t.hi) - energy) / fhi;
  }
  return t;
}

}  // namespace

double min_period(const Nonlinearity& f) {
  return 2.0 * M_PI / std::sqrt(f.deriv(f.a()));
}

double period_of_energy(const Nonlinearity& f, double energy) {
  const EnergyWindow win = energy_window(f);
  if (!(energy > win.floor && energy < win.ceiling))
    throw Error(ErrorKind::invalid_parameter,
                "energy outside the closed-orbit band");
  const TurningPoints t = turning_points(f, energy);
  const double mid = 0.5 * (t.hi + t.lo);
  const double amp = 0.5 * (t.hi - t.lo);
  // Substitution w = mid + amp*sin(s) removes the inverse-square-root
  // endpoint singularities; the integrand extends continuously to s = ±pi/2.
  // E - F(w) is evaluated as the antiderivative difference from the nearer
  // turning point: the direct subtraction cancels catastrophically near the
  // endpoints and leaves ~1e-6 noise on the computed period.
  auto integrand = [&](double s) {
    const double w = mid + amp * std::sin(s);
    const double under =
        s >= 0.0
            ? integrate_gl64([&](double u) { return f(u); }, w, t.hi, 1)
            : integrate_gl64([&](double u) { return -f(u); }, t.lo, w, 1);
    if (under <= 0.0) {
      // Endpoint limit: E - F(w) ~ f(w±) amp cos(s)^2 / 2.
      const double dF = std::abs(f(s > 0.0 ? t.hi : t.lo));
      return dF > 0.0 ? std::sqrt(2.0 * amp / dF) : 0.0;
    }
    return amp * std::cos(s) / std::sqrt(under);
  };
  return std::sqrt(2.0) *
         integrate_gl64(integrand, -0.5 * M_PI, 0.5 * M_PI, kPeriodPanels);
}

StandingWaveProfile periodic_wave(const Nonlinearity& f, double L,
                                  double tol) {
  const double Lmin = min_period(f);
  if (!(L > Lmin))
    throw Error(ErrorKind::no_periodic_orbit,
                "period must exceed the small-orbit limit 2*pi/sqrt(f'(a))");

  const EnergyWindow win = energy_window(f);
  const double span = win.ceiling - win.floor;
  double lo = win.floor + 1e-13 * span;
  double hi = win.ceiling - 1e-13 * span;
  if (period_of_energy(f, hi) < L)
    throw Error(ErrorKind::bracket_failure,
                "period function does not reach L inside the energy band");

  double energy = 0.0, T = 0.0;
  for (int it = 0; it < 200; ++it) {
    energy = 0.5 * (lo + hi);
    T = period_of_energy(f, energy);
    if (std::abs(T - L) <= tol) break;
    (T < L ? lo : hi) = energy;
    if (hi - lo < 1e-17 * span)
      throw Error(ErrorKind::convergence_failure,
                  "period bisection exhausted the energy interval");
  }
  if (std::abs(T - L) > tol)
    throw Error(ErrorKind::convergence_failure,
                "period bisection did not reach tolerance");

  const TurningPoints t = turning_points(f, energy);

  StandingWaveProfile wave;
  wave.period = L;
  wave.energy = energy;
  wave.w_minus = t.lo;
  wave.w_plus = t.hi;

  // RK4 from the left turning point (w', w'' ) = (0, -f(w-)). Starting at a
  // turning point makes the closure error quadratic in the period tolerance.
  const int n = kRk4Steps;
  const double h = L / n;
  wave.x.resize(n + 1);
  wave.w.resize(n + 1);
  wave.dw.resize(n + 1);
  double w = t.lo, v = 0.0;
  wave.x[0] = 0.0;
  wave.w[0] = w;
  wave.dw[0] = v;
  for (int i = 0; i < n; ++i) {
    const double k1w = v, k1v = -f(w);
    const double k2w = v + 0.5 * h * k1v, k2v = -f(w + 0.5 * h * k1w);
    const double k3w = v + 0.5 * h * k2v, k3v = -f(w + 0.5 * h * k2w);
    const double k4w = v + h * k3v, k4v = -f(w + h * k3w);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    wave.x[i + 1] = (i + 1) * h;
    wave.w[i + 1] = w;
    wave.dw[i + 1] = v;
  }
  // Distribute the closure defect linearly so the stored samples are exactly
  // periodic; the adjustment is O(RK4 drift) and shows up in the residual.
  const double dw_end = wave.w[n] - wave.w[0];
  const double dv_end = wave.dw[n] - wave.dw[0];
  for (int i = 0; i <= n; ++i) {
    const double frac = static_cast<double>(i) / n;
    wave.w[i] -= frac * dw_end;
    wave.dw[i] -= frac * dv_end;
  }
  wave.x[n] = L;
  return wave;
}

namespace {

// Cubic Hermite on one sample interval of a uniform grid.
double hermite(double t, double h, double y0, double y1, double d0,
               double d1) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

double hermite_deriv(double t, double h, double y0, double y1, double d0,
                     double d1) {
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 +
          (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * h * d1) /
         h;
}

}  // namespace

double StandingWaveProfile::value(double xq) const {
  const int n = static_cast<int>(w.size()) - 1;
  const double h = period / n;
  double r = std::fmod(xq, period);
  if (r < 0) r += period;
  int i = std::min(static_cast<int>(r / h), n - 1);
  const double t = (r - i * h) / h;
  // dw stores w'; the (w, w') pair gives O(h^4) interpolation.
  return hermite(t, h, w[i], w[i + 1], dw[i], dw[i + 1]);
}

double StandingWaveProfile::deriv_value(double xq) const {
  const int n = static_cast<int>(w.size()) - 1;
  const double h = period / n;
  double r = std::fmod(xq, period);
  if (r < 0) r += period;
  int i = std::min(static_cast<int>(r / h), n - 1);
  const double t = (r - i * h) / h;
  return hermite_deriv(t, h, w[i], w[i + 1], dw[i], dw[i + 1]);
}

FrontProfile exact_front(double a, double z_min, double z_max, double step) {
  if (!(a > 0.0 && a < 1.0))
    throw Error(ErrorKind::invalid_parameter, "front needs 0 < a < 1");
  if (!(z_max > z_min) || step <= 0.0)
    throw Error(ErrorKind::invalid_parameter, "bad front sampling window");
  FrontProfile fr;
  fr.a = a;
  fr.speed = std::sqrt(2.0) * (0.5 - a);
  const int n = static_cast<int>(std::round((z_max - z_min) / step));
  fr.z.resize(n + 1);
  fr.u.resize(n + 1);
  fr.du.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double z = z_min + i * step;
    fr.z[i] = z;
    fr.u[i] = fr.value(z);
    fr.du[i] = fr.deriv_value(z);
  }
  return fr;
}

double FrontProfile::value(double zq) const {
  return 1.0 / (1.0 + std::exp(zq / std::sqrt(2.0)));
}

double FrontProfile::deriv_value(double zq) const {
  const double u = value(zq);
  return -u * (1.0 - u) / std::sqrt(2.0);
}

double wave_ode_residual(const StandingWaveProfile& wave,
                         const Nonlinearity& f) {
  // Drop the duplicated closing sample; the remaining sequence is exactly
  // periodic by construction.
  const int n = static_cast<int>(wave.w.size()) - 1;
  std::vector<double> dwp(wave.dw.begin(), wave.dw.begin() + n);
  const double h = wave.period / n;
  const std::vector<double> wpp = d1_center6(dwp, h, true);
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    r = std::max(r, std::abs(wpp[i] + f(wave.w[i])));
  return r;
}

double front_ode_residual(const FrontProfile& front, const Nonlinearity& f) {
  // u' and u'' are pointwise functions of u for the logistic profile:
  // u' = -u(1-u)/sqrt(2), u'' = u(1-u)(1-2u)/2.
  double r = 0.0;
  for (double u : front.u) {
    const double up = -u * (1.0 - u) / std::sqrt(2.0);
    const double upp = 0.5 * u * (1.0 - u) * (1.0 - 2.0 * u);
    r = std::max(r, std::abs(upp + front.speed * up + f(u)));
  }
  return r;
}

}  // namespace cylspec
