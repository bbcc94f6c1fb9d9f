#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace warmstart {

/// Parameters of the Bernstein-ellipse analyticity model behind all bound
/// evaluations: the ellipse E_rho has foci +-1 and semi-axis sum rho; kappa is
/// the maximum solution norm on its boundary; the extrapolation target t_next
/// maps to the geometric ratio r = (t + sqrt(t^2-1)) / rho.
struct BernsteinParams {
  double rho = 0.0;
  double kappa_rho = 0.0;
  double t_next = 0.0;
  double ratio = 0.0;            // r
  std::size_t history_size = 0;  // M
  std::size_t degree = 0;        // R
};

inline double extrapolation_ratio(double t, double rho) {
  if (t < 1.0) throw std::invalid_argument("extrapolation_ratio: target must satisfy t >= 1");
  return (t + std::sqrt(t * t - 1.0)) / rho;
}

inline BernsteinParams make_bernstein_params(double rho, double kappa_rho, double t_next,
                                             std::size_t history_size, std::size_t degree) {
  if (rho <= 1.0) throw std::invalid_argument("BernsteinParams: rho must exceed 1");
  if (kappa_rho < 0.0) throw std::invalid_argument("BernsteinParams: kappa must be nonnegative");
  if (history_size < 2) throw std::invalid_argument("BernsteinParams: history size must be >= 2");
  BernsteinParams p;
  p.rho = rho;
  p.kappa_rho = kappa_rho;
  p.t_next = t_next;
  p.ratio = extrapolation_ratio(t_next, rho);
  p.history_size = history_size;
  p.degree = degree;
  return p;
}

/// Decay envelope of the kth largest singular value of an analytic history:
/// 2 rho kappa sqrt(M) rho^{-k} / (1 - 1/rho).
inline double bound_sigma_decay(const BernsteinParams& p, std::size_t k) {
  if (p.rho <= 1.0) throw std::domain_error("bound_sigma_decay: rho must exceed 1");
  return 2.0 * p.rho * p.kappa_rho * std::sqrt(static_cast<double>(p.history_size)) /
         (1.0 - 1.0 / p.rho) * std::pow(p.rho, -static_cast<double>(k));
}

/// C(M, R) = 5 sqrt(5) sqrt(2R+1) sqrt(M) / sqrt(2(M-1)).
inline double c_of_m_r(std::size_t history_size, std::size_t degree) {
  if (history_size < 2) throw std::invalid_argument("c_of_m_r: M must be >= 2");
  const double m = static_cast<double>(history_size);
  const double r = static_cast<double>(degree);
  return 5.0 * std::sqrt(5.0) * std::sqrt(2.0 * r + 1.0) * std::sqrt(m) /
         std::sqrt(2.0 * (m - 1.0));
}

namespace detail {

inline void check_bound_domain(const BernsteinParams& p) {
  if (p.ratio >= 1.0)
    throw std::domain_error("bound: extrapolation target lies outside the ellipse (r >= 1)");
  if (p.rho * p.ratio <= 1.0)
    throw std::domain_error("bound: not applicable when rho * r <= 1");
  const double degree_cap = 0.5 * std::sqrt(static_cast<double>(p.history_size) - 1.0);
  if (static_cast<double>(p.degree) > degree_cap)
    throw std::invalid_argument("bound: requires R <= sqrt(M-1)/2");
}

}  // namespace detail

/// Residual bound for the subspace-projected initial guess when the basis is
/// an eps-accurate compression of the history; eps = 0 recovers the
/// uncompressed bound exactly.
inline double bound_compressed(const BernsteinParams& p, double norm_a, double eps) {
  detail::check_bound_domain(p);
  if (eps < 0.0) throw std::invalid_argument("bound_compressed: eps must be nonnegative");
  const double r = p.ratio;
  const double rho = p.rho;
  const double m = static_cast<double>(p.history_size);
  const double c = c_of_m_r(p.history_size, p.degree);
  const double inner = 1.0 / (rho - 1.0) +
                       eps * std::pow(rho, static_cast<double>(p.degree)) /
                           (2.0 * std::sqrt(m) * p.kappa_rho);
  const double bracket =
      1.0 / (1.0 - r) + c * rho / std::sqrt(rho * rho * r * r - 1.0) * inner;
  return 2.0 * norm_a * p.kappa_rho * bracket * std::pow(r, static_cast<double>(p.degree) + 1.0);
}

/// Residual bound for the guess built from the full, uncompressed history.
inline double bound_guess_residual(const BernsteinParams& p, double norm_a) {
  return bound_compressed(p, norm_a, 0.0);
}

/// Lower bound on the smallest singular value of the equispaced
/// Chebyshev-Vandermonde matrix: sqrt(2)/(5 sqrt(5)) * sqrt(M-1)/sqrt(2R+1),
/// valid for R <= sqrt(M-1)/2.
inline double sigma_min_lower_bound(std::size_t history_size, std::size_t degree) {
  const double m = static_cast<double>(history_size);
  const double r = static_cast<double>(degree);
  if (r > 0.5 * std::sqrt(m - 1.0))
    throw std::invalid_argument("sigma_min_lower_bound: requires R <= sqrt(M-1)/2");
  return std::sqrt(2.0) / (5.0 * std::sqrt(5.0)) * std::sqrt(m - 1.0) / std::sqrt(2.0 * r + 1.0);
}

/// Point on the boundary of E_rho at angle theta.
inline std::complex<double> bernstein_point(double rho, double theta) {
  const std::complex<double> z = std::polar(rho, theta);
  return 0.5 * (z + 1.0 / z);
}

/// Estimates kappa_rho = max ||x(t)||_2 over the ellipse boundary by dense
/// sampling. The returned maximum is raw; callers absorb the discretization of
/// the maximum with their own safety factor.
inline double estimate_kappa_rho(
    double rho,
    const std::function<std::vector<std::complex<double>>(std::complex<double>)>& x,
    std::size_t samples = 512) {
  if (rho <= 1.0) throw std::invalid_argument("estimate_kappa_rho: rho must exceed 1");
  if (samples == 0) throw std::invalid_argument("estimate_kappa_rho: need samples");
  double best = 0.0;
  const double two_pi = 6.283185307179586476925286766559;
  for (std::size_t j = 0; j < samples; ++j) {
    const auto value = x(bernstein_point(rho, two_pi * static_cast<double>(j) /
                                                  static_cast<double>(samples)));
    double norm_sq = 0.0;
    for (const auto& e : value) norm_sq += std::norm(e);
    best = std::max(best, std::sqrt(norm_sq));
  }
  return best;
}

}  // namespace warmstart
