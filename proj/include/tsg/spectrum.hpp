#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace tsg {

using Spectrum = std::vector<std::complex<double>>;

namespace detail {

// Kuhn's augmenting-path bipartite matching on edges |a_i - b_j| <= tol.
inline bool augment(std::size_t i, const Spectrum& a, const Spectrum& b, double tol,
                    std::vector<int>& match_b, std::vector<char>& seen) {
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (seen[j] || std::abs(a[i] - b[j]) > tol) continue;
    seen[j] = 1;
    if (match_b[j] < 0 || augment(static_cast<std::size_t>(match_b[j]), a, b, tol, match_b, seen)) {
      match_b[j] = static_cast<int>(i);
      return true;
    }
  }
  return false;
}

}  // namespace detail

struct SpectrumMatch {
  bool matched = false;
  // Entries of the first multiset left without a partner within tolerance.
  Spectrum unmatched;
};

/// Multiset equality within tol: a perfect matching pairing every value of a
/// with a distinct value of b at distance <= tol.
inline SpectrumMatch match_spectra(const Spectrum& a, const Spectrum& b, double tol) {
  SpectrumMatch out;
  if (a.size() != b.size()) {
    out.unmatched = a;
    return out;
  }
  std::vector<int> match_b(b.size(), -1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<char> seen(b.size(), 0);
    if (!detail::augment(i, a, b, tol, match_b, seen)) out.unmatched.push_back(a[i]);
  }
  out.matched = out.unmatched.empty();
  return out;
}

/// Smallest tol for which match_spectra succeeds (infinity if sizes differ).
inline double bottleneck_distance(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if (a.empty()) return 0.0;
  std::vector<double> cand;
  cand.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) cand.push_back(std::abs(x - y));
  std::sort(cand.begin(), cand.end());
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (match_spectra(a, b, cand[mid]).matched) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return cand[lo];
}

struct Cluster {
  std::complex<double> centroid;
  std::size_t multiplicity = 0;
};

/// Groups values whose single-linkage distance is below radius and returns
/// the centroid of each group, in canonical order. Repeated eigenvalues of a
/// defective matrix split by O(eps^(1/k)) in floating point, while the mean
/// of the split group stays accurate; the centroid is the stable notion of
/// "the distinct value".
inline std::vector<Cluster> cluster_spectrum(const Spectrum& values, double radius) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) < radius) parent[find(i)] = find(j);
  std::vector<Cluster> out;
  std::vector<std::size_t> root_of;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(root_of.begin(), root_of.end(), r);
    if (it == root_of.end()) {
      root_of.push_back(r);
      out.push_back({values[i], 1});
    } else {
      auto& c = out[static_cast<std::size_t>(it - root_of.begin())];
      c.centroid += values[i];
      ++c.multiplicity;
    }
  }
  for (auto& c : out) c.centroid /= static_cast<double>(c.multiplicity);
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    if (a.centroid.real() != b.centroid.real()) return a.centroid.real() < b.centroid.real();
    return a.centroid.imag() < b.centroid.imag();
  });
  return out;
}

}  // namespace tsg
