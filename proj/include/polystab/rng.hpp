// Seeded random generators for the multistart searches and property sweeps.
// All randomness in the library flows through an explicit engine so that
// identical (input, seed, budget) triples reproduce identical results.
#pragma once

#include <random>

#include "polystab/common.hpp"

namespace polystab {

using RngEngine = std::mt19937_64;

inline cplx random_complex(RngEngine& rng, double box = 1.0) {
  std::uniform_real_distribution<double> u(-box, box);
  double re = u(rng), im = u(rng);
  return {re, im};
}

/// Uniform point in the disc |z - center| < radius.
inline cplx random_in_disc(RngEngine& rng, cplx center, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = radius * std::sqrt(u(rng));
  double th = 2 * pi * u(rng);
  return center + std::polar(r, th);
}

/// Unit vector drawn from the rotation-invariant distribution on the sphere.
inline Vec random_unit_vector(RngEngine& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec x(n);
  for (int i = 0; i < n; ++i) x(i) = cplx(g(rng), g(rng));
  double nrm = x.norm();
  if (nrm == 0.0) {
    x.setZero();
    x(0) = 1.0;
    return x;
  }
  return x / nrm;
}

inline Mat random_matrix(RngEngine& rng, int n, double box = 1.0) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = random_complex(rng, box);
  return a;
}

/// Random Hermitian positive semidefinite matrix G*G (rank deficient with
/// probability ~0 unless wide=false is forced by the caller).
inline Mat random_psd(RngEngine& rng, int n) {
  Mat g = random_matrix(rng, n);
  return g.adjoint() * g;
}

inline Mat random_hermitian(RngEngine& rng, int n) {
  Mat g = random_matrix(rng, n);
  return (g + g.adjoint()) / 2.0;
}

inline Mat random_skew_hermitian(RngEngine& rng, int n) {
  Mat g = random_matrix(rng, n);
  return (g - g.adjoint()) / 2.0;
}

}  // namespace polystab
