#include "nmrsp/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nmrsp {

using std::numbers::pi;

namespace {

void require_time(double t, const char* who) {
  if (!std::isfinite(t) || t < 0.0) {
    std::ostringstream os;
    os << who << ": time must be finite and non-negative, got " << t;
    throw InvalidInput(os.str());
  }
}

// Relative slack on the window edges so that control times typed with five or
// six significant digits (0.62832 for 2 pi / 10) are accepted.
constexpr double kWindowSlack = 1e-5;

bool in_window(double tau_c, double lo, double hi) {
  const double slack = kWindowSlack * hi;
  return tau_c >= lo - slack && tau_c <= hi + slack;
}

struct SimpsonState {
  double error_sum = 0.0;
  bool exhausted = false;
};

template <class F>
std::complex<double> adaptive_simpson(const F& f, double a, double b, std::complex<double> fa,
                                      std::complex<double> fm, std::complex<double> fb,
                                      std::complex<double> whole, double tol, int depth,
                                      SimpsonState& state) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const auto flm = f(lm);
  const auto frm = f(rm);
  const auto left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const auto right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const auto delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    state.error_sum += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    state.exhausted = true;
    state.error_sum += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, state) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, state);
}

}  // namespace

void DephasingSpec::validate() const {
  if (!std::isfinite(theta) || theta < 0.0 || theta > pi / 2 + 1e-12) {
    throw InvalidInput("DephasingSpec: theta must lie in [0, pi/2]");
  }
  if (!std::isfinite(omega1) || !std::isfinite(omega2) || !(omega2 > omega1)) {
    throw InvalidInput("DephasingSpec: require omega2 > omega1");
  }
  if (!std::isfinite(sigma) || !(sigma > 0.0)) throw InvalidInput("DephasingSpec: sigma must be positive");
}

double LorentzSpec::epsilon() const noexcept { return std::sqrt(std::abs(Gamma * Gamma - 2.0 * gamma0 * Gamma)); }

void LorentzSpec::validate() const {
  if (!std::isfinite(gamma0) || !(gamma0 > 0.0)) throw InvalidInput("LorentzSpec: gamma0 must be positive");
  if (!std::isfinite(Gamma) || !(Gamma > 0.0)) throw InvalidInput("LorentzSpec: Gamma must be positive");
}

std::complex<double> kappa_complex(const DephasingSpec& spec, double tau) {
  spec.validate();
  require_time(tau, "kappa_complex");
  const double envelope = std::exp(-0.5 * spec.sigma * spec.sigma * tau * tau);
  const double c2 = std::cos(spec.theta) * std::cos(spec.theta);
  const double s2 = std::sin(spec.theta) * std::sin(spec.theta);
  return envelope * (c2 * std::polar(1.0, spec.omega1 * tau) + s2 * std::polar(1.0, spec.omega2 * tau));
}

double kappa_abs(const DephasingSpec& spec, double tau) {
  spec.validate();
  require_time(tau, "kappa_abs");
  // 1 - sin^2(2 theta) sin^2(x) rewritten as a sum of squares so that the
  // exact zeros at theta = pi/4 survive in floating point.
  const double half_phase = 0.5 * spec.delta_omega() * tau;
  const double s = std::sin(half_phase);
  const double c = std::cos(half_phase);
  const double c2t = std::cos(2.0 * spec.theta);
  const double envelope = std::exp(-0.5 * spec.sigma * spec.sigma * tau * tau);
  return envelope * std::sqrt(c * c + c2t * c2t * s * s);
}

std::complex<double> kappa_quadrature(const DephasingSpec& spec, double tau, double abs_tol, int max_depth) {
  spec.validate();
  require_time(tau, "kappa_quadrature");
  if (!(abs_tol > 0.0)) throw InvalidInput("kappa_quadrature: tolerance must be positive");

  const double c2 = std::cos(spec.theta) * std::cos(spec.theta);
  const double s2 = std::sin(spec.theta) * std::sin(spec.theta);
  const double norm = 1.0 / (std::sqrt(2.0 * pi) * spec.sigma);
  const double inv_two_var = 1.0 / (2.0 * spec.sigma * spec.sigma);
  auto density = [&](double w) {
    const double d1 = w - spec.omega1;
    const double d2 = w - spec.omega2;
    return norm * (c2 * std::exp(-d1 * d1 * inv_two_var) + s2 * std::exp(-d2 * d2 * inv_two_var));
  };
  auto integrand = [&](double w) { return density(w) * std::polar(1.0, w * tau); };

  const double a = spec.omega1 - 10.0 * spec.sigma;
  const double b = spec.omega2 + 10.0 * spec.sigma;
  // Panels no wider than sigma so that neither peak can be stepped over by the
  // first Simpson estimate.
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / spec.sigma)));
  const double h = (b - a) / panels;

  SimpsonState state;
  std::complex<double> total{0.0, 0.0};
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == panels) ? b : lo + h;
    const double mid = 0.5 * (lo + hi);
    const auto flo = integrand(lo);
    const auto fmid = integrand(mid);
    const auto fhi = integrand(hi);
    const auto whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += adaptive_simpson(integrand, lo, hi, flo, fmid, fhi, whole, abs_tol / panels, max_depth, state);
  }
  if (state.exhausted && state.error_sum > abs_tol) {
    std::ostringstream os;
    os << "kappa_quadrature: tolerance " << abs_tol << " not reached at tau=" << tau << " (estimated error "
       << state.error_sum << ")";
    throw QuadratureError(os.str(), state.error_sum);
  }
  return total;
}

double chi(const LorentzSpec& spec, double t) {
  spec.validate();
  require_time(t, "chi");
  const double G = spec.Gamma;
  const double disc = G * G - 2.0 * spec.gamma0 * G;
  const double decay = std::exp(-0.5 * G * t);
  if (std::abs(disc) < 1e-12 * spec.gamma0 * spec.gamma0) return decay * (1.0 + 0.5 * G * t);
  const double eps = std::sqrt(std::abs(disc));
  const double x = 0.5 * eps * t;
  if (disc < 0.0) return decay * (std::cos(x) + G / eps * std::sin(x));
  return decay * (std::cosh(x) + G / eps * std::sinh(x));
}

double lorentz_revival_time(const LorentzSpec& spec) {
  spec.validate();
  const double eps = spec.epsilon();
  if (!(spec.Gamma < 2.0 * spec.gamma0) || !(eps > 0.0)) {
    throw InvalidInput("lorentz_revival_time: requires Gamma < 2 gamma0 (oscillatory regime)");
  }
  return 2.0 * pi / eps;
}

double blp_offset(const DephasingSpec& spec) {
  spec.validate();
  const double r = pi * spec.sigma / spec.delta_omega();
  return std::abs(std::cos(2.0 * spec.theta)) * std::exp(-0.5 * r * r);
}

double analytic_blp_dephasing(const DephasingSpec& spec, double tau_c) {
  spec.validate();
  const double lo = pi / spec.delta_omega();
  const double hi = 2.0 * pi / spec.delta_omega();
  if (!std::isfinite(tau_c) || !in_window(tau_c, lo, hi)) {
    std::ostringstream os;
    os << "analytic_blp_dephasing: tau_c=" << tau_c << " outside [" << lo << ", " << hi
       << "]; use the numeric measure";
    throw OutsideValidityWindow(os.str());
  }
  return std::max(0.0, kappa_abs(spec, tau_c) - blp_offset(spec));
}

TransitionPoints transition_thetas(double delta_omega, double sigma, double tau_c) {
  if (!(delta_omega > 0.0) || !(sigma > 0.0) || !std::isfinite(delta_omega) || !std::isfinite(sigma)) {
    throw InvalidInput("transition_thetas: delta_omega and sigma must be positive");
  }
  const double lo = pi / delta_omega;
  const double hi = 2.0 * pi / delta_omega;
  if (!std::isfinite(tau_c) || !(tau_c > lo) || !in_window(tau_c, lo, hi)) {
    std::ostringstream os;
    os << "transition_thetas: tau_c=" << tau_c << " outside (" << lo << ", " << hi << "]";
    throw NoTransition(os.str());
  }
  const double u = std::exp(sigma * sigma * tau_c * tau_c);
  const double v = std::exp((pi * sigma / delta_omega) * (pi * sigma / delta_omega));
  if (!(u > v)) throw NoTransition("transition_thetas: u <= v, no sign change of the measure");
  const double x = delta_omega * tau_c;
  const double cx = std::cos(x);
  const double sx = std::sin(x);
  const double radicand = 2.0 * u * v * (1.0 + cx) - v * v * sx * sx;
  if (radicand < 0.0) throw NoTransition("transition_thetas: negative discriminant");
  const double p = (u + v * cx) / (u - v);
  const double q = std::sqrt(radicand) / (u - v);
  if (p - q < 0.0) throw NoTransition("transition_thetas: p - q < 0");
  return {std::atan(std::sqrt(p - q)), std::atan(std::sqrt(p + q))};
}

}  // namespace nmrsp
