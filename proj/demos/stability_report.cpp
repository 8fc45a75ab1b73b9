// Linearizes a sine-law platoon at its on-circle equilibrium and compares
// the numeric spectrum with the closed form.

#include <cstdio>
#include <cstdlib>

#include "tsg/tsg.hpp"

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 3;
  const tsg::GuidanceParams p{75.0, 0.5, 25.0};
  const auto rep = tsg::linearize(n, p, 50.0);
  std::printf("n=%zu alpha=%.6f\n", n, rep.alpha);
  if (rep.beta) std::printf("beta=%.6f%+.6fj\n", rep.beta->real(), rep.beta->imag());
  for (const auto& z : rep.spectrum) std::printf("  % .9f % .9fj\n", z.real(), z.imag());
  std::printf("distance to closed form %.2e, %s\n", rep.spectrum_distance, rep.stable() ? "stable" : "unstable");
}
