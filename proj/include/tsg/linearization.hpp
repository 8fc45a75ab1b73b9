#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/float128.hpp>

#include "tsg/eigensolver.hpp"
#include "tsg/error.hpp"
#include "tsg/guidance.hpp"
#include "tsg/matrix.hpp"
#include "tsg/relative_dynamics.hpp"
#include "tsg/spectrum.hpp"

namespace tsg {

// Precision used for the linearization. The repeated eigenvalue families
// form Jordan chains along the platoon, so rounding of size eps splits them
// by roughly eps^(1/n); IEEE quad keeps the split well below 1e-3 for the
// platoon sizes of interest.
using Extended = boost::multiprecision::float128;

/// Central-difference Jacobian of f at x0 with per-coordinate step
/// h_j = 1e-6 * max(1, |x0_j|). Throws NumericalError naming the coordinate
/// if a probe produces a non-finite value.
template <class T, class F>
Matrix<T> jacobian_fd(F&& f, std::span<const T> x0) {
  using std::abs;
  using std::max;
  const std::size_t m = x0.size();
  std::vector<T> probe(x0.begin(), x0.end());
  const std::vector<T> f0 = f(std::span<const T>(probe));
  Matrix<T> jac(f0.size(), m);
  for (std::size_t j = 0; j < m; ++j) {
    const T h = T(1e-6) * max(T(1), T(abs(x0[j])));
    probe[j] = x0[j] + h;
    const std::vector<T> fp = f(std::span<const T>(probe));
    probe[j] = x0[j] - h;
    const std::vector<T> fm = f(std::span<const T>(probe));
    probe[j] = x0[j];
    for (std::size_t i = 0; i < f0.size(); ++i) {
      const T v = (fp[i] - fm[i]) / (T(2) * h);
      if (!is_finite(v)) {
        throw NumericalError("jacobian_fd: non-finite derivative probing coordinate " +
                             std::to_string(j));
      }
      jac(i, j) = v;
    }
  }
  return jac;
}

/// sqrt(1 - (d*/2R)^2).
inline double chord_cosine(double d_star, double radius) {
  const double s = d_star / (2.0 * radius);
  return std::sqrt(1.0 - s * s);
}

/// Staircase Jacobian of the sine-law platoon at the on-circle equilibrium,
/// assembled block by block from the closed-form entries (A_tt for the lead,
/// A_vv for followers, A_tv above and A_vt below the diagonal).
inline Matrix<double> assemble_A_symbolic(std::size_t n, const GuidanceParams& p, double radius) {
  validate(p);
  if (n == 0) throw DomainError("assemble_A_symbolic: n must be >= 1");
  if (!(radius > 0.0) || std::isinf(radius)) {
    throw DomainError("assemble_A_symbolic: requires a circle of finite positive radius");
  }
  require_chord(p.d_star, radius);
  const double V = p.V_c, d = p.d_star, R = radius, k = p.k_v;
  const double a = chord_cosine(d, R);
  const double va = V * a / d;
  const double vdr = V * d / (2.0 * R);
  using Block = double[4][4];
  const Block tt = {{-va, -vdr, -vdr, 0.0},
                    {V / (2.0 * R * d), -va, va, 0.0},
                    {V / (2.0 * R * d), -3.0 * va, -3.0 * va, 0.0},
                    {0.0, 0.0, 0.0, -k}};
  const Block vv = {{0.0, -vdr, -vdr, -a},
                    {V / (R * d), -va, va, -1.0 / (2.0 * R)},
                    {0.0, -3.0 * va, -3.0 * va, 1.0 / (2.0 * R)},
                    {0.0, 0.0, 0.0, -k}};
  const Block tv = {{0.0, 0.0, 0.0, 0.0},
                    {0.0, 0.0, 0.0, 0.0},
                    {0.0, 0.0, 0.0, 0.0},
                    {-V * k / d, 0.0, 0.0, k}};
  const Block vt = {{0.0, 0.0, 0.0, a},
                    {-V / (R * d), -2.0 * va, -4.0 * va, 1.0 / (2.0 * R)},
                    {0.0, 0.0, 0.0, -1.0 / (2.0 * R)},
                    {0.0, 0.0, 0.0, 0.0}};
  Matrix<double> A(4 * n, 4 * n);
  auto put = [&](std::size_t bi, std::size_t bj, const Block& b) {
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) A(4 * bi + r, 4 * bj + c) = b[r][c];
  };
  for (std::size_t i = 0; i < n; ++i) {
    put(i, i, i == 0 ? tt : vv);
    if (i + 1 < n) {
      put(i, i + 1, tv);
      put(i + 1, i, vt);
    }
  }
  return A;
}

/// Closed-form spectrum: -k_v, -V_c alpha/d*, n copies of the complex pair
/// -2 V_c alpha/d* +- j V_c sqrt(2 (alpha^2/d*^2 + 1/(4R^2))), then n-1
/// copies each of -(1-beta) k_v and -beta k_v. beta may be complex; it is
/// only needed for n >= 2.
inline Spectrum closed_form_spectrum(std::size_t n, const GuidanceParams& p, double radius,
                                     std::optional<std::complex<double>> beta) {
  validate(p);
  require_chord(p.d_star, radius);
  if (n >= 2 && !beta) throw DomainError("closed_form_spectrum: beta required for n >= 2");
  const double V = p.V_c, d = p.d_star, k = p.k_v;
  const double a = chord_cosine(d, radius);
  const double inv_r2 = std::isinf(radius) ? 0.0 : 1.0 / (4.0 * radius * radius);
  const double osc = V * std::sqrt(2.0 * (a * a / (d * d) + inv_r2));
  Spectrum out;
  out.reserve(4 * n);
  out.emplace_back(-k, 0.0);
  out.emplace_back(-V * a / d, 0.0);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(-2.0 * V * a / d, osc);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(-2.0 * V * a / d, -osc);
  for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(-(1.0 - *beta) * k);
  for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(-*beta * k);
  canonicalize(out);
  return out;
}

/// Extracts beta from a numeric spectrum of size 4n.
///
/// The 2n+2 beta-independent closed-form values are paired off with their
/// nearest numeric eigenvalues (globally closest pairs first). The 2(n-1)
/// that remain form the -beta k_v and -(1-beta) k_v families; beta is the
/// mean of -lambda/k_v over the family with real part above 1/2 (real case)
/// or with positive imaginary part (complex case).
/// Returns nullopt for n = 1. Throws NumericalError if the leftovers do not
/// split into two families of equal size.
inline std::optional<std::complex<double>> extract_beta(const Spectrum& numeric, std::size_t n,
                                                        const GuidanceParams& p, double radius) {
  if (numeric.size() != 4 * n) throw NumericalError("extract_beta: spectrum size must be 4n");
  if (n < 2) return std::nullopt;
  Spectrum known = closed_form_spectrum(1, p, radius, std::nullopt);
  {
    // n copies of the complex pair, not one.
    const auto pair_hi = *std::find_if(known.begin(), known.end(),
                                       [](const auto& v) { return v.imag() > 0.0; });
    for (std::size_t i = 1; i < n; ++i) {
      known.push_back(pair_hi);
      known.push_back(std::conj(pair_hi));
    }
  }
  struct Pair {
    double dist;
    std::size_t k, m;
  };
  std::vector<Pair> pairs;
  for (std::size_t k = 0; k < known.size(); ++k)
    for (std::size_t m = 0; m < numeric.size(); ++m)
      pairs.push_back({std::abs(known[k] - numeric[m]), k, m});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.k != b.k) return a.k < b.k;
    return a.m < b.m;
  });
  std::vector<char> used_k(known.size(), 0), used_m(numeric.size(), 0);
  for (const auto& pr : pairs) {
    if (used_k[pr.k] || used_m[pr.m]) continue;
    used_k[pr.k] = used_m[pr.m] = 1;
  }
  // Leftovers are -lambda/k_v = 1/2 +- delta, with delta real (two real
  // families) or imaginary (a conjugate family). Defective multiplicity
  // scatters each family around its center, but the scatter cancels in the
  // sum of squares, whose sign tells the two cases apart.
  std::vector<std::complex<double>> w;
  for (std::size_t m = 0; m < numeric.size(); ++m)
    if (!used_m[m]) w.push_back(-numeric[m] / p.k_v - 0.5);
  std::complex<double> sum_sq(0.0);
  for (const auto& v : w) sum_sq += v * v;
  const bool complex_family = sum_sq.real() < 0.0;
  std::vector<std::complex<double>> upper;
  for (const auto& v : w)
    if ((complex_family ? v.imag() : v.real()) > 0.0) upper.push_back(0.5 + v);
  if (upper.size() != n - 1) {
    std::ostringstream msg;
    msg << "extract_beta: leftover eigenvalues do not form two families of " << n - 1
        << " (found " << upper.size() << " in the upper family)";
    throw NumericalError(msg.str());
  }
  std::complex<double> beta(0.0);
  for (const auto& v : upper) beta += v;
  beta /= static_cast<double>(upper.size());
  if (!complex_family) beta.imag(0.0);
  return beta;
}

struct BlockDiscrepancy {
  std::size_t row = 0;
  std::size_t col = 0;
  double finite_difference = 0.0;
  double symbolic = 0.0;
};

struct LinearizationReport {
  std::size_t n = 0;
  GuidanceParams params;
  double radius = 0.0;
  RelativeState<double> equilibrium;
  Matrix<double> A_symbolic;
  Matrix<double> A_fd;
  Spectrum spectrum;     // eigenvalues of A_fd, canonical order
  Spectrum closed_form;  // canonical order
  double alpha = 0.0;
  std::optional<std::complex<double>> beta;
  double max_block_discrepancy = 0.0;
  std::vector<BlockDiscrepancy> block_discrepancies;  // entries beyond tolerance
  double spectrum_distance = 0.0;  // bottleneck distance spectrum <-> closed_form
  Spectrum unmatched;              // numeric eigenvalues without a closed-form partner

  bool stable() const {
    return std::all_of(spectrum.begin(), spectrum.end(), [](const auto& v) { return v.real() < 0.0; });
  }
};

// Elementwise tolerance used when comparing A_fd to A_symbolic.
inline constexpr double kBlockTolerance = 1e-5;
// Multiset tolerance used when comparing the numeric and closed-form spectra.
inline constexpr double kSpectrumTolerance = 1e-3;

/// Linearizes the sine-law platoon at the on-circle equilibrium.
///
/// The finite-difference Jacobian of rhs_relative is authoritative; the
/// closed-form blocks are assembled alongside and every entry differing by
/// more than kBlockTolerance (absolute + relative) is listed. The rhs, the
/// Jacobian and the QR iteration run in Extended precision.
inline LinearizationReport linearize(std::size_t n, const GuidanceParams& params, double radius) {
  LinearizationReport rep;
  rep.n = n;
  rep.params = params;
  rep.radius = radius;
  rep.A_symbolic = assemble_A_symbolic(n, params, radius);
  rep.alpha = chord_cosine(params.d_star, radius);

  const auto x_eq = equilibrium_state<Extended>(n, params, radius);
  const auto u = control_input<Extended>(params, radius);
  const Matrix<Extended> jac = jacobian_fd<Extended>(
      [&](std::span<const Extended> x) {
        return rhs_relative<Extended>(x, u, GuidanceLaw::Sine, params);
      },
      std::span<const Extended>(x_eq));
  rep.A_fd = jac.cast<double>();
  rep.equilibrium.reserve(x_eq.size());
  for (const auto& v : x_eq) rep.equilibrium.push_back(static_cast<double>(v));

  for (std::size_t r = 0; r < rep.A_fd.rows(); ++r) {
    for (std::size_t c = 0; c < rep.A_fd.cols(); ++c) {
      const double fd = rep.A_fd(r, c), sym = rep.A_symbolic(r, c);
      const double diff = std::abs(fd - sym);
      rep.max_block_discrepancy = std::max(rep.max_block_discrepancy, diff);
      if (diff > kBlockTolerance * (1.0 + std::abs(sym))) rep.block_discrepancies.push_back({r, c, fd, sym});
    }
  }

  rep.spectrum = eigenvalues(jac);
  rep.beta = extract_beta(rep.spectrum, n, params, radius);
  rep.closed_form = closed_form_spectrum(n, params, radius, rep.beta);
  rep.spectrum_distance = bottleneck_distance(rep.spectrum, rep.closed_form);
  rep.unmatched = match_spectra(rep.spectrum, rep.closed_form, kSpectrumTolerance).unmatched;
  return rep;
}

}  // namespace tsg
