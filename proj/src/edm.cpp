#include "ccpf/edm.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <array>
#include <cmath>
#include <limits>

namespace ccpf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2*pi)/2

bool is_integral(double x) { return std::abs(x - std::llround(x)) < 1e-9; }

// log(1 + e^t) without overflow.
double log1p_exp(double t) {
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

[[noreturn]] void bad_theta(EdmFamily f, double theta) {
  throw ParameterError(std::string(family_name(f)) + ": theta = " +
                       std::to_string(theta) + " outside the natural domain");
}

}  // namespace

const char* family_name(EdmFamily f) {
  switch (f) {
    case EdmFamily::Gaussian: return "gaussian";
    case EdmFamily::Gamma: return "gamma";
    case EdmFamily::InverseGaussian: return "inverse_gaussian";
    case EdmFamily::Poisson: return "poisson";
    case EdmFamily::Binomial: return "binomial";
    case EdmFamily::NegativeBinomial: return "negative_binomial";
  }
  return "?";
}

EdmFamily family_from_name(const std::string& name) {
  static const std::array<EdmFamily, 6> all = {
      EdmFamily::Gaussian,         EdmFamily::Gamma,
      EdmFamily::InverseGaussian,  EdmFamily::Poisson,
      EdmFamily::Binomial,         EdmFamily::NegativeBinomial};
  for (EdmFamily f : all)
    if (name == family_name(f)) return f;
  throw ParameterError("unknown EDM family: " + name);
}

bool theta_in_domain(EdmFamily f, double theta) {
  if (!std::isfinite(theta)) return false;
  switch (f) {
    case EdmFamily::Gaussian:
    case EdmFamily::Poisson:
    case EdmFamily::Binomial:
      return true;
    case EdmFamily::Gamma:
    case EdmFamily::InverseGaussian:
    case EdmFamily::NegativeBinomial:
      return theta < 0;
  }
  return false;
}

void check_theta(EdmFamily f, double theta) {
  if (!theta_in_domain(f, theta)) bad_theta(f, theta);
}

EdmParams::EdmParams(EdmFamily f, double theta_, double kappa_)
    : family(f), theta(theta_), kappa(kappa_) {
  check_theta(f, theta_);
  if (!(kappa_ > 0) || !std::isfinite(kappa_))
    throw ParameterError(std::string(family_name(f)) +
                         ": dispersion kappa must be positive");
}

double log_partition(EdmFamily f, double theta) {
  check_theta(f, theta);
  switch (f) {
    case EdmFamily::Gaussian: return 0.5 * theta * theta;
    case EdmFamily::Gamma: return -std::log(-theta);
    case EdmFamily::InverseGaussian: return -std::sqrt(-2.0 * theta);
    case EdmFamily::Poisson: return std::exp(theta);
    case EdmFamily::Binomial: return log1p_exp(theta);
    case EdmFamily::NegativeBinomial: return -std::log1p(-std::exp(theta));
  }
  return 0;
}

double log_partition_d1(EdmFamily f, double theta) {
  check_theta(f, theta);
  switch (f) {
    case EdmFamily::Gaussian: return theta;
    case EdmFamily::Gamma: return -1.0 / theta;
    case EdmFamily::InverseGaussian: return 1.0 / std::sqrt(-2.0 * theta);
    case EdmFamily::Poisson: return std::exp(theta);
    case EdmFamily::Binomial: return 1.0 / (1.0 + std::exp(-theta));
    case EdmFamily::NegativeBinomial: return 1.0 / (std::exp(-theta) - 1.0);
  }
  return 0;
}

double log_partition_d2(EdmFamily f, double theta) {
  check_theta(f, theta);
  switch (f) {
    case EdmFamily::Gaussian: return 1.0;
    case EdmFamily::Gamma: return 1.0 / (theta * theta);
    case EdmFamily::InverseGaussian: return std::pow(-2.0 * theta, -1.5);
    case EdmFamily::Poisson: return std::exp(theta);
    case EdmFamily::Binomial: {
      const double p = 1.0 / (1.0 + std::exp(-theta));
      return p * (1.0 - p);
    }
    case EdmFamily::NegativeBinomial: {
      const double e = std::exp(theta);
      return e / ((1.0 - e) * (1.0 - e));
    }
  }
  return 0;
}

Moments edm_moments(const EdmParams& p) {
  return {p.kappa * log_partition_d1(p.family, p.theta),
          p.kappa * log_partition_d2(p.family, p.theta)};
}

bool in_support(EdmFamily f, double x, double kappa) {
  if (!std::isfinite(x)) return false;
  switch (f) {
    case EdmFamily::Gaussian:
      return true;
    case EdmFamily::Gamma:
    case EdmFamily::InverseGaussian:
      return x >= 0;
    case EdmFamily::Poisson:
    case EdmFamily::NegativeBinomial:
      return x >= 0 && is_integral(x);
    case EdmFamily::Binomial:
      return x >= 0 && x <= kappa + 1e-9 && is_integral(x);
  }
  return false;
}

double log_base_measure(EdmFamily f, double x, double kappa) {
  switch (f) {
    case EdmFamily::Gaussian:
      return -x * x / (2.0 * kappa) - 0.5 * std::log(2.0 * M_PI * kappa);
    case EdmFamily::Gamma:
      if (x == 0.0)  // limit of (kappa-1)*log x
        return kappa > 1 ? -kInf : (kappa == 1.0 ? -std::lgamma(kappa) : kInf);
      return (kappa - 1.0) * std::log(x) - std::lgamma(kappa);
    case EdmFamily::InverseGaussian:
      if (x == 0.0) return -kInf;
      return -kappa * kappa / (2.0 * x) + std::log(kappa) -
             0.5 * std::log(2.0 * M_PI * x * x * x);
    case EdmFamily::Poisson:
      return x * std::log(kappa) - std::lgamma(x + 1.0);
    case EdmFamily::Binomial:
      return std::lgamma(kappa + 1.0) - std::lgamma(x + 1.0) -
             std::lgamma(kappa - x + 1.0);
    case EdmFamily::NegativeBinomial:
      return std::lgamma(x + kappa) - std::lgamma(x + 1.0) -
             std::lgamma(kappa);
  }
  return 0;
}

double log_density(const EdmParams& p, double x) {
  if (!in_support(p.family, x, p.kappa))
    throw SupportError(std::string(family_name(p.family)) + ": x = " +
                       std::to_string(x) + " outside the support");
  return x * p.theta - p.kappa * log_partition(p.family, p.theta) +
         log_base_measure(p.family, x, p.kappa);
}

double log_density_dkappa(const EdmParams& p, double x) {
  const double k = p.kappa;
  double dh = 0;
  switch (p.family) {
    case EdmFamily::Gaussian:
      dh = x * x / (2.0 * k * k) - 0.5 / k;
      break;
    case EdmFamily::Gamma:
      dh = std::log(x) - boost::math::digamma(k);
      break;
    case EdmFamily::InverseGaussian:
      dh = -k / x + 1.0 / k;
      break;
    case EdmFamily::Poisson:
      dh = x / k;
      break;
    case EdmFamily::Binomial:
      dh = boost::math::digamma(k + 1.0) - boost::math::digamma(k - x + 1.0);
      break;
    case EdmFamily::NegativeBinomial:
      dh = boost::math::digamma(x + k) - boost::math::digamma(k);
      break;
  }
  return -log_partition(p.family, p.theta) + dh;
}

EdmParams from_gaussian(double mean, double variance) {
  if (!(variance > 0)) throw ParameterError("gaussian: variance must be positive");
  return {EdmFamily::Gaussian, mean / variance, variance};
}

EdmParams from_gamma(double shape, double rate) {
  if (!(shape > 0) || !(rate > 0))
    throw ParameterError("gamma: shape and rate must be positive");
  return {EdmFamily::Gamma, -rate, shape};
}

EdmParams from_inverse_gaussian(double mean, double shape_lambda) {
  if (!(mean > 0) || !(shape_lambda > 0))
    throw ParameterError("inverse_gaussian: mean and lambda must be positive");
  return {EdmFamily::InverseGaussian, -shape_lambda / (2.0 * mean * mean),
          std::sqrt(shape_lambda)};
}

EdmParams from_poisson(double rate) {
  if (!(rate > 0)) throw ParameterError("poisson: rate must be positive");
  return {EdmFamily::Poisson, std::log(rate), 1.0};
}

EdmParams from_binomial(double trials, double prob) {
  if (!(trials > 0)) throw ParameterError("binomial: trials must be positive");
  if (!(prob > 0) || !(prob < 1))
    throw ParameterError("binomial: prob must lie in (0,1)");
  return {EdmFamily::Binomial, std::log(prob / (1.0 - prob)), trials};
}

EdmParams from_negative_binomial(double failures_r, double prob) {
  if (!(failures_r > 0))
    throw ParameterError("negative_binomial: r must be positive");
  if (!(prob > 0) || !(prob < 1))
    throw ParameterError("negative_binomial: prob must lie in (0,1)");
  return {EdmFamily::NegativeBinomial, std::log(prob), failures_r};
}

EdmParams from_standard(EdmFamily f, double p1, double p2) {
  switch (f) {
    case EdmFamily::Gaussian: return from_gaussian(p1, p2);
    case EdmFamily::Gamma: return from_gamma(p1, p2);
    case EdmFamily::InverseGaussian: return from_inverse_gaussian(p1, p2);
    case EdmFamily::Poisson: return from_poisson(p1);
    case EdmFamily::Binomial: return from_binomial(p1, p2);
    case EdmFamily::NegativeBinomial: return from_negative_binomial(p1, p2);
  }
  throw ParameterError("unknown family tag");
}

StandardParams to_standard(const EdmParams& p) {
  switch (p.family) {
    case EdmFamily::Gaussian: return {p.theta * p.kappa, p.kappa};
    case EdmFamily::Gamma: return {p.kappa, -p.theta};
    case EdmFamily::InverseGaussian:
      return {p.kappa / std::sqrt(-2.0 * p.theta), p.kappa * p.kappa};
    case EdmFamily::Poisson: return {p.kappa * std::exp(p.theta), 1.0};
    case EdmFamily::Binomial:
      return {p.kappa, 1.0 / (1.0 + std::exp(-p.theta))};
    case EdmFamily::NegativeBinomial: return {p.kappa, std::exp(p.theta)};
  }
  throw ParameterError("unknown family tag");
}

double edm_sample(const EdmParams& p, Rng& rng) {
  switch (p.family) {
    case EdmFamily::Gaussian: {
      std::normal_distribution<double> d(p.theta * p.kappa, std::sqrt(p.kappa));
      return d(rng);
    }
    case EdmFamily::Gamma: {
      std::gamma_distribution<double> d(p.kappa, 1.0 / -p.theta);
      return d(rng);
    }
    case EdmFamily::InverseGaussian: {
      // Michael-Schucany-Haas transformation.
      const double mu = p.kappa / std::sqrt(-2.0 * p.theta);
      const double lambda = p.kappa * p.kappa;
      std::normal_distribution<double> nd;
      std::uniform_real_distribution<double> ud;
      const double nu = nd(rng);
      const double y = nu * nu;
      const double x = mu + mu * mu * y / (2.0 * lambda) -
                       mu / (2.0 * lambda) *
                           std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
      return ud(rng) <= mu / (mu + x) ? x : mu * mu / x;
    }
    case EdmFamily::Poisson: {
      std::poisson_distribution<long> d(p.kappa * std::exp(p.theta));
      return static_cast<double>(d(rng));
    }
    case EdmFamily::Binomial: {
      const long n = std::llround(p.kappa);
      if (std::abs(p.kappa - static_cast<double>(n)) > 1e-9)
        throw ParameterError("binomial sampling requires integer dispersion");
      std::binomial_distribution<long> d(n, 1.0 / (1.0 + std::exp(-p.theta)));
      return static_cast<double>(d(rng));
    }
    case EdmFamily::NegativeBinomial: {
      // Gamma-Poisson mixture, valid for non-integer r.
      const double prob = std::exp(p.theta);
      std::gamma_distribution<double> g(p.kappa, prob / (1.0 - prob));
      const double rate = g(rng);
      if (rate <= 0) return 0.0;
      std::poisson_distribution<long> d(rate);
      return static_cast<double>(d(rng));
    }
  }
  throw ParameterError("unknown family tag");
}

}  // namespace ccpf
