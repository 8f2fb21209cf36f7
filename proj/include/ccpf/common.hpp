#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace ccpf {

// Invalid distribution/model parameters (theta outside dom(Psi), kappa <= 0, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Observation outside the support of the chosen family.
class SupportError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input files / datasets / checkpoints.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerically degenerate state (all-zero likelihood, undefined metric, ...).
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

inline double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v)
    if (x > m) m = x;
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Normalizes log-weights in place to probabilities; returns the log normalizer.
inline double normalize_log_weights(std::span<double> v) {
  const double lz = log_sum_exp(v);
  if (!std::isfinite(lz))
    throw NumericError("degenerate weight vector: total mass is zero");
  for (double& x : v) x = std::exp(x - lz);
  return lz;
}

// Derives an independent per-stream rng from a master seed (splitmix64 mix).
inline Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return Rng(z);
}

}  // namespace ccpf
