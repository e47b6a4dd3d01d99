#pragma once

// Decoherence functions of the two environment families.
//
// Dephasing quantities are expressed in reduced time tau = (n_V - n_H) t; the
// refraction indices never appear as parameters.

#include <complex>

#include "nmrsp/errors.hpp"

namespace nmrsp {

/// Two-peak Gaussian frequency distribution
///   |f(w)|^2 = cos^2(theta) N(w; omega1, sigma) + sin^2(theta) N(w; omega2, sigma).
struct DephasingSpec {
  double theta = 0.0;   ///< peak weight angle, [0, pi/2]
  double omega1 = 0.0;
  double omega2 = 10.0;
  double sigma = 1.0;   ///< common peak width, > 0

  double delta_omega() const noexcept { return omega2 - omega1; }
  /// Throws InvalidInput when an invariant is violated.
  void validate() const;
};

/// Resonant Lorentzian reservoir with coupling gamma0 and spectral width Gamma.
struct LorentzSpec {
  double gamma0 = 1.0;
  double Gamma = 0.1;

  /// sqrt(|Gamma^2 - 2 gamma0 Gamma|)
  double epsilon() const noexcept;
  void validate() const;
};

/// kappa(tau) = exp(-sigma^2 tau^2 / 2) (cos^2 theta e^{i omega1 tau} + sin^2 theta e^{i omega2 tau})
std::complex<double> kappa_complex(const DephasingSpec& spec, double tau);

/// |kappa(tau)| in closed form.
double kappa_abs(const DephasingSpec& spec, double tau);

/// Independent route to kappa: adaptive Simpson integration of |f(w)|^2 e^{i w tau}
/// over [omega1 - 10 sigma, omega2 + 10 sigma]. Throws QuadratureError when the
/// absolute tolerance cannot be met.
std::complex<double> kappa_quadrature(const DephasingSpec& spec, double tau, double abs_tol = 1e-10,
                                      int max_depth = 40);

/// Amplitude decoherence function chi(t) of the Lorentzian reservoir.
/// Gamma < 2 gamma0 uses the oscillatory form, Gamma > 2 gamma0 its hyperbolic
/// continuation, and |Gamma^2 - 2 gamma0 Gamma| < 1e-12 gamma0^2 the critical limit
/// exp(-Gamma t / 2)(1 + Gamma t / 2).
double chi(const LorentzSpec& spec, double t);

/// Time 2 pi / epsilon at which chi reaches its first revival extremum.
double lorentz_revival_time(const LorentzSpec& spec);

/// delta = |cos 2 theta| exp(-(pi sigma / dw)^2 / 2)
double blp_offset(const DephasingSpec& spec);

/// Closed-form information-flow measure max(0, |kappa(tau_c)| - delta), valid
/// for tau_c in [pi/dw, 2 pi/dw]. Outside that window the caller must integrate
/// numerically; OutsideValidityWindow is thrown (edges carry a 1e-5 relative slack).
double analytic_blp_dephasing(const DephasingSpec& spec, double tau_c);

/// Angles bounding the non-Markovian regime at fixed control time.
struct TransitionPoints {
  double theta1;
  double theta2;
};

/// theta_{1,2} = arctan sqrt(p -/+ q) for tau_c in (pi/dw, 2 pi/dw]. The peak
/// weight is irrelevant here, so only the peak separation and width are taken.
/// Throws NoTransition when no real root exists.
TransitionPoints transition_thetas(double delta_omega, double sigma, double tau_c);

}  // namespace nmrsp
