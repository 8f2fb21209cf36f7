#pragma once

#include <string>

#include "ccpf/common.hpp"

namespace ccpf {

// The six additive exponential dispersion families.
// Density: p(x) = exp(x*theta - kappa*Psi(theta) + h(x, kappa)).
enum class EdmFamily {
  Gaussian,
  Gamma,
  InverseGaussian,
  Poisson,
  Binomial,
  NegativeBinomial,
};

const char* family_name(EdmFamily f);
EdmFamily family_from_name(const std::string& name);

// Natural parameter theta and dispersion kappa; validated on construction.
struct EdmParams {
  EdmFamily family;
  double theta;
  double kappa;

  EdmParams(EdmFamily f, double theta_, double kappa_);
};

bool theta_in_domain(EdmFamily f, double theta);
void check_theta(EdmFamily f, double theta);

// Base log-partition Psi(theta) and its first two derivatives.
double log_partition(EdmFamily f, double theta);
double log_partition_d1(EdmFamily f, double theta);
double log_partition_d2(EdmFamily f, double theta);

struct Moments {
  double mean;
  double variance;
};

// mean = kappa*Psi'(theta), variance = kappa*Psi''(theta).
Moments edm_moments(const EdmParams& p);

bool in_support(EdmFamily f, double x, double kappa);

// Base measure h(x, kappa). Binomial/negative-binomial coefficients are
// evaluated through log-gamma so non-integer kappa is admissible.
double log_base_measure(EdmFamily f, double x, double kappa);

// x*theta - kappa*Psi(theta) + h(x, kappa); throws SupportError when x is
// outside the family support.
double log_density(const EdmParams& p, double x);

// d/dkappa [ -kappa*Psi(theta) + h(x, kappa) ], used by the dispersion and
// coupling MAP gradients.
double log_density_dkappa(const EdmParams& p, double x);

// Standard-form constructors (Table-correspondence: theta, kappa per family).
EdmParams from_gaussian(double mean, double variance);
EdmParams from_gamma(double shape, double rate);
EdmParams from_inverse_gaussian(double mean, double shape_lambda);
EdmParams from_poisson(double rate);
EdmParams from_binomial(double trials, double prob);
EdmParams from_negative_binomial(double failures_r, double prob);

// Generic entry point: (p1, p2) in the order used above; p2 ignored for Poisson.
EdmParams from_standard(EdmFamily f, double p1, double p2 = 0.0);

// Inverse of from_standard; (p1, p2) with p2 = 1 for Poisson.
struct StandardParams {
  double p1;
  double p2;
};
StandardParams to_standard(const EdmParams& p);

// One draw from p(x; theta, kappa). Binomial requires integer kappa.
double edm_sample(const EdmParams& p, Rng& rng);

}  // namespace ccpf
