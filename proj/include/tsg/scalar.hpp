#pragma once

#include <cmath>
#include <numbers>
#include <type_traits>

#include <boost/math/constants/constants.hpp>

namespace tsg {

// Helpers that let the dynamics be instantiated for double as well as for
// extended-precision types (boost::multiprecision).

template <class T>
inline T pi() {
  if constexpr (std::is_floating_point_v<T>) {
    return std::numbers::pi_v<T>;
  } else {
    return boost::math::constants::pi<T>();
  }
}

template <class T>
inline T two_pi() {
  return T(2) * pi<T>();
}

template <class T>
inline bool is_finite(const T& v) {
  using std::isfinite;
  using boost::math::isfinite;
  return isfinite(v);
}

template <class T>
inline T square(const T& v) {
  return v * v;
}

}  // namespace tsg
