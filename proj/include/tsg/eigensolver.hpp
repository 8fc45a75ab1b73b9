#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "tsg/error.hpp"
#include "tsg/matrix.hpp"
#include "tsg/scalar.hpp"

namespace tsg {

namespace detail {

// Similarity scaling by powers of the radix (exact) so that row and column
// norms are comparable.
template <class T>
void balance(Matrix<T>& a) {
  using std::abs;
  const std::size_t n = a.rows();
  const T radix(std::numeric_limits<double>::radix);
  const T sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      T r(0), c(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs(a(j, i));
        r += abs(a(i, j));
      }
      if (c == T(0) || r == T(0)) continue;
      T g = r / radix;
      T f(1);
      const T s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < T(0.95) * s) {
        done = false;
        const T inv = T(1) / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form, in place.
template <class T>
void hessenberg(Matrix<T>& a) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = a.rows();
  if (n < 3) return;
  std::vector<T> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    T scale(0);
    for (std::size_t i = k + 1; i < n; ++i) scale += abs(a(i, k));
    if (scale == T(0)) continue;
    T sigma(0);
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k) / scale;
      sigma += v[i] * v[i];
    }
    T alpha = sqrt(sigma);
    if (v[k + 1] > T(0)) alpha = -alpha;
    v[k + 1] -= alpha;
    T vnorm2(0);
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == T(0)) continue;
    const T beta = T(2) / vnorm2;
    // A <- H A
    for (std::size_t j = k; j < n; ++j) {
      T dot(0);
      for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * a(i, j);
      dot *= beta;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= dot * v[i];
    }
    // A <- A H
    for (std::size_t i = 0; i < n; ++i) {
      T dot(0);
      for (std::size_t j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
      dot *= beta;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= dot * v[j];
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = T(0);
  }
}

template <class T>
T copy_sign(const T& mag, const T& sgn) {
  using std::abs;
  return sgn >= T(0) ? T(abs(mag)) : T(-abs(mag));
}

// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
template <class T>
void hessenberg_qr(Matrix<T>& a, std::vector<T>& wr, std::vector<T>& wi, int max_iterations) {
  using std::abs;
  using std::sqrt;
  const int n = static_cast<int>(a.rows());
  const T eps = std::numeric_limits<T>::epsilon();
  wr.assign(n, T(0));
  wi.assign(n, T(0));
  T anorm(0);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += abs(a(i, j));

  int nn = n - 1;
  int its = 0;
  T shift(0);
  while (nn >= 0) {
    int l = nn;
    for (; l > 0; --l) {
      T s = abs(a(l - 1, l - 1)) + abs(a(l, l));
      if (s == T(0)) s = anorm;
      if (abs(a(l, l - 1)) <= eps * s) {
        a(l, l - 1) = T(0);
        break;
      }
    }
    T x = a(nn, nn);
    if (l == nn) {
      wr[nn] = x + shift;
      wi[nn] = T(0);
      --nn;
      its = 0;
      continue;
    }
    T y = a(nn - 1, nn - 1);
    T w = a(nn, nn - 1) * a(nn - 1, nn);
    if (l == nn - 1) {
      const T p = T(0.5) * (y - x);
      const T q = p * p + w;
      T z = sqrt(abs(q));
      x += shift;
      if (q >= T(0)) {
        z = p + copy_sign(z, p);
        wr[nn - 1] = wr[nn] = x + z;
        if (z != T(0)) wr[nn] = x - w / z;
        wi[nn - 1] = wi[nn] = T(0);
      } else {
        wr[nn - 1] = wr[nn] = x + p;
        wi[nn - 1] = z;
        wi[nn] = -z;
      }
      nn -= 2;
      its = 0;
      continue;
    }
    if (its == max_iterations) {
      std::ostringstream msg;
      msg << "eigenvalues: QR iteration did not converge (dimension " << n
          << ", unreduced block " << l << ".." << nn << ", ||A||_1(hess) = "
          << static_cast<double>(anorm) << ")";
      throw NumericalError(msg.str());
    }
    if (its > 0 && its % 10 == 0) {
      // Exceptional shift.
      shift += x;
      for (int i = 0; i <= nn; ++i) a(i, i) -= x;
      const T s = abs(a(nn, nn - 1)) + abs(a(nn - 1, nn - 2));
      y = x = T(0.75) * s;
      w = T(-0.4375) * s * s;
    }
    ++its;
    int m = nn - 2;
    T p(0), q(0), r(0), z(0);
    for (; m >= l; --m) {
      z = a(m, m);
      r = x - z;
      T s = y - z;
      p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
      q = a(m + 1, m + 1) - z - r - s;
      r = a(m + 2, m + 1);
      s = abs(p) + abs(q) + abs(r);
      p /= s;
      q /= s;
      r /= s;
      if (m == l) break;
      const T u = abs(a(m, m - 1)) * (abs(q) + abs(r));
      const T v = abs(p) * (abs(a(m - 1, m - 1)) + abs(z) + abs(a(m + 1, m + 1)));
      if (u <= eps * v) break;
    }
    for (int i = m; i < nn - 1; ++i) {
      a(i + 2, i) = T(0);
      if (i != m) a(i + 2, i - 1) = T(0);
    }
    for (int k = m; k < nn; ++k) {
      if (k != m) {
        p = a(k, k - 1);
        q = a(k + 1, k - 1);
        r = T(0);
        if (k + 1 != nn) r = a(k + 2, k - 1);
        x = abs(p) + abs(q) + abs(r);
        if (x != T(0)) {
          p /= x;
          q /= x;
          r /= x;
        }
      }
      const T s = copy_sign(T(sqrt(p * p + q * q + r * r)), p);
      if (s == T(0)) continue;
      if (k == m) {
        if (l != m) a(k, k - 1) = -a(k, k - 1);
      } else {
        a(k, k - 1) = -s * x;
      }
      p += s;
      x = p / s;
      y = q / s;
      z = r / s;
      q /= p;
      r /= p;
      for (int j = k; j <= nn; ++j) {
        p = a(k, j) + q * a(k + 1, j);
        if (k + 1 != nn) {
          p += r * a(k + 2, j);
          a(k + 2, j) -= p * z;
        }
        a(k + 1, j) -= p * y;
        a(k, j) -= p * x;
      }
      const int mmin = nn < k + 3 ? nn : k + 3;
      for (int i = l; i <= mmin; ++i) {
        p = x * a(i, k) + y * a(i, k + 1);
        if (k + 1 != nn) {
          p += z * a(i, k + 2);
          a(i, k + 2) -= p * r;
        }
        a(i, k + 1) -= p * q;
        a(i, k) -= p;
      }
    }
  }
}

}  // namespace detail

/// Orders eigenvalues by real part, then imaginary part.
inline void canonicalize(std::vector<std::complex<double>>& values) {
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

/// All eigenvalues of a real square matrix.
///
/// Balancing, Householder reduction to Hessenberg form, then Francis
/// double-shift QR with deflation, carried out in the scalar type T. Results
/// are rounded to double and returned in canonical order. Throws
/// NumericalError on non-finite input or when an unreduced block fails to
/// deflate within 30 * dim QR sweeps.
template <class T>
std::vector<std::complex<double>> eigenvalues(Matrix<T> a) {
  if (a.rows() != a.cols()) throw DomainError("eigenvalues: matrix must be square");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!is_finite(a(i, j))) throw NumericalError("eigenvalues: non-finite matrix entry");
  std::vector<std::complex<double>> out;
  if (a.rows() == 0) return out;
  detail::balance(a);
  detail::hessenberg(a);
  std::vector<T> wr, wi;
  detail::hessenberg_qr(a, wr, wi, 30 * static_cast<int>(std::max<std::size_t>(a.rows(), 2)));
  out.reserve(wr.size());
  for (std::size_t i = 0; i < wr.size(); ++i) {
    out.emplace_back(static_cast<double>(wr[i]), static_cast<double>(wi[i]));
  }
  canonicalize(out);
  return out;
}

/// Eigenpair probe: runs inverse iteration for a computed eigenvalue and
/// returns ||A v - lambda v||_2 with ||v||_2 = 1.
inline double eigenpair_residual(const Matrix<double>& a, std::complex<double> lambda) {
  using C = std::complex<double>;
  const std::size_t n = a.rows();
  const double scale = std::max(norm_inf(a), 1.0);
  // Nudge the shift off the eigenvalue so the factorization stays regular.
  const C mu = lambda + C(scale * 1e-10, scale * 1e-10);
  std::vector<C> lu(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lu[i * n + j] = C(a(i, j)) - (i == j ? mu : C(0));
  std::vector<std::size_t> piv(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu[i * n + k]) > std::abs(lu[p * n + k])) p = i;
    piv[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[p * n + j]);
    if (lu[k * n + k] == C(0)) lu[k * n + k] = C(scale * 1e-300);
    for (std::size_t i = k + 1; i < n; ++i) {
      const C f = lu[i * n + k] / lu[k * n + k];
      lu[i * n + k] = f;
      for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= f * lu[k * n + j];
    }
  }
  auto solve = [&](std::vector<C>& b) {
    for (std::size_t k = 0; k < n; ++k) std::swap(b[k], b[piv[k]]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) b[i] -= lu[i * n + j] * b[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) b[i] -= lu[i * n + j] * b[j];
      b[i] /= lu[i * n + i];
    }
  };
  auto normalize = [](std::vector<C>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    s = std::sqrt(s);
    for (auto& x : v) x /= s;
  };
  std::vector<C> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = C(1.0, 0.5 / static_cast<double>(i + 1));
  normalize(v);
  for (int it = 0; it < 4; ++it) {
    solve(v);
    normalize(v);
  }
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    C s = -lambda * v[i];
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
    res += std::norm(s);
  }
  return std::sqrt(res);
}

}  // namespace tsg
