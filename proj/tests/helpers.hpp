#pragma once

#include <vector>

#include "levy/exponents.hpp"
#include "levy/rng.hpp"

// Shared model builders for the test suites.

namespace levy::testing {

inline LevyModel zero_model(std::size_t dim = 1) {
  return LevyModel(std::vector<double>(dim, 0.0), Matrix(dim), {});
}

inline LevyModel brownian(double drift, double var) {
  Matrix cov(1);
  cov(0, 0) = var;
  return LevyModel({drift}, std::move(cov), {});
}

/// Compound Poisson with Exp(mu) jumps plus drift, K = 1.
inline LevyModel cp_exp(double rate, double mu, double drift = 0.0, double var = 0.0) {
  Matrix cov(1);
  cov(0, 0) = var;
  std::vector<JumpComponent> jumps;
  jumps.push_back({rate, JumpLaw::exponential(1, 0, mu)});
  return LevyModel({drift}, std::move(cov), std::move(jumps));
}

/// Poisson process with unit point-mass jumps, K = 1.
inline LevyModel unit_poisson(double rate, double drift = 0.0) {
  std::vector<JumpComponent> jumps;
  jumps.push_back({rate, JumpLaw::point_mass({1.0})});
  return LevyModel({drift}, Matrix(1), std::move(jumps));
}

/// Random spectrally positive model for property tests.
inline LevyModel random_sp_model(Stream& rng, std::size_t dim) {
  std::vector<double> drift(dim);
  for (auto& d : drift) d = 2.0 * rng.uniform01() - 1.0;
  // PSD covariance B B^T from a random square factor
  Matrix b(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) b(i, j) = rng.uniform01() - 0.5;
  Matrix cov(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += b(i, k) * b(j, k);
      cov(i, j) = s;
    }
  std::vector<JumpComponent> jumps;
  const std::size_t ncomp = 1 + (rng.next_u64() % 3);
  for (std::size_t c = 0; c < ncomp; ++c) {
    const double rate = 0.2 + 2.0 * rng.uniform01();
    const std::size_t coord = rng.next_u64() % dim;
    switch (rng.next_u64() % 4) {
      case 0:
        jumps.push_back({rate, JumpLaw::exponential(dim, coord, 0.5 + 2.0 * rng.uniform01())});
        break;
      case 1: {
        const double a = rng.uniform01();
        jumps.push_back({rate, JumpLaw::uniform(dim, coord, a, a + 1.0)});
        break;
      }
      case 2: {
        std::vector<double> atom(dim);
        for (auto& x : atom) x = rng.uniform01();
        jumps.push_back({rate, JumpLaw::point_mass(std::move(atom))});
        break;
      }
      default: {
        std::vector<std::vector<double>> atoms;
        std::vector<double> weights;
        for (int m = 0; m < 3; ++m) {
          std::vector<double> atom(dim);
          for (auto& x : atom) x = 2.0 * rng.uniform01();
          atoms.push_back(std::move(atom));
          weights.push_back(0.1 + rng.uniform01());
        }
        jumps.push_back({rate, JumpLaw::mixture(std::move(weights), std::move(atoms))});
      }
    }
  }
  return LevyModel(std::move(drift), std::move(cov), std::move(jumps));
}

inline std::vector<double> random_nonneg_vector(Stream& rng, std::size_t dim,
                                                double scale = 2.0) {
  std::vector<double> v(dim);
  for (auto& x : v) x = scale * rng.uniform01();
  return v;
}

}  // namespace levy::testing
