#include "ccpf/linkage.hpp"

#include <cmath>

namespace ccpf {

namespace {
constexpr long kEnumCap = 10000;
}

const char* linkage_name(LinkageKind k) {
  switch (k) {
    case LinkageKind::Ignorable: return "ignorable";
    case LinkageKind::Linear: return "linear";
    case LinkageKind::Exponential: return "exponential";
  }
  return "?";
}

LinkageKind linkage_from_name(const std::string& name) {
  if (name == "ignorable") return LinkageKind::Ignorable;
  if (name == "linear") return LinkageKind::Linear;
  if (name == "exponential") return LinkageKind::Exponential;
  throw ParameterError("unknown linkage kind: " + name);
}

double linkage_c_min(LinkageKind k) {
  switch (k) {
    case LinkageKind::Ignorable: return 0.0;
    case LinkageKind::Linear: return -0.5;     // exclusive
    case LinkageKind::Exponential: return -1.0;  // exclusive
  }
  return 0.0;
}

double linkage_c_max(LinkageKind k) {
  switch (k) {
    case LinkageKind::Ignorable: return 0.0;
    case LinkageKind::Linear: return 0.5;  // exclusive
    case LinkageKind::Exponential: return 1.0;  // inclusive
  }
  return 0.0;
}

Linkage::Linkage(LinkageKind k, double c_) : kind(k), c(c_) {
  switch (k) {
    case LinkageKind::Ignorable:
      c = 0.0;
      break;
    case LinkageKind::Linear:
      // phi(even n) = 1 - 2c must stay positive.
      if (!(std::abs(c_) < 0.5))
        throw ParameterError("linear linkage requires |c| < 0.5");
      break;
    case LinkageKind::Exponential:
      if (!(c_ > -1.0 && c_ <= 1.0))
        throw ParameterError("exponential linkage requires -1 < c <= 1");
      break;
  }
}

double phi(const Linkage& link, long n) {
  if (n < 1) throw ParameterError("phi: n must be >= 1");
  switch (link.kind) {
    case LinkageKind::Ignorable: return 1.0;
    case LinkageKind::Linear:
      return 1.0 - link.c + (n % 2 == 1 ? link.c : -link.c);
    case LinkageKind::Exponential:
      return 1.0 - link.c + link.c * static_cast<double>(n);
  }
  return 1.0;
}

double phi_dc(const Linkage& link, long n) {
  if (n < 1) throw ParameterError("phi_dc: n must be >= 1");
  switch (link.kind) {
    case LinkageKind::Ignorable: return 0.0;
    case LinkageKind::Linear: return n % 2 == 1 ? 0.0 : -2.0;
    case LinkageKind::Exponential: return static_cast<double>(n - 1);
  }
  return 0.0;
}

ZtpParam::ZtpParam(double lam) : lambda(lam) {
  if (!(lam > 0) || !std::isfinite(lam))
    throw ParameterError("ZTP rate lambda must be positive and finite");
}

double ztp_log_pmf(const ZtpParam& p, long n) {
  if (n < 1) throw ParameterError("ztp_log_pmf: n must be >= 1");
  return static_cast<double>(n) * std::log(p.lambda) -
         std::lgamma(static_cast<double>(n) + 1.0) -
         std::log(std::expm1(p.lambda));
}

double missing_prob(double lambda) {
  if (!(lambda > 0)) throw ParameterError("missing_prob: lambda must be positive");
  return std::exp(-lambda);
}

long sample_ztp(const ZtpParam& p, Rng& rng) {
  const double lam = p.lambda;
  if (lam > 30.0) {
    // Zero is vanishingly rare; rejection on the plain Poisson.
    std::poisson_distribution<long> d(lam);
    for (;;) {
      const long n = d(rng);
      if (n >= 1) return n;
    }
  }
  // CDF inversion with the pmf recurrence p_{n+1} = p_n * lam / (n+1).
  std::uniform_real_distribution<double> ud;
  const double u = ud(rng);
  double pmf = lam / std::expm1(lam);
  double cdf = pmf;
  long n = 1;
  while (u > cdf && n < kEnumCap) {
    ++n;
    pmf *= lam / static_cast<double>(n);
    cdf += pmf;
  }
  return n;
}

double expected_phi(const Linkage& link, const ZtpParam& p) {
  switch (link.kind) {
    case LinkageKind::Ignorable:
      return 1.0;
    case LinkageKind::Linear:
      // E[(-1)^(N+1)] = e^{-lambda} under ZTP.
      return 1.0 - link.c + link.c * std::exp(-p.lambda);
    case LinkageKind::Exponential:
      // E[N] = lambda / (1 - e^{-lambda}).
      return 1.0 - link.c + link.c * p.lambda / -std::expm1(-p.lambda);
  }
  return 1.0;
}

namespace {

// Enumerates f(n) under ZTP(lambda) until the captured mass reaches
// 1 - 1e-14 (or the cap); the remainder is provably below tolerance for the
// slowly growing integrands used here.
template <typename F>
double ztp_expect(double lambda, F&& f) {
  double pmf = lambda / std::expm1(lambda);
  double mass = pmf;
  double acc = pmf * f(1L);
  long n = 1;
  while (mass < 1.0 - 1e-14 && n < kEnumCap) {
    ++n;
    pmf *= lambda / static_cast<double>(n);
    mass += pmf;
    acc += pmf * f(n);
  }
  return acc;
}

}  // namespace

PhiRatioStats expected_phi_ratios(const Linkage& phi1, const Linkage& phi2,
                                  const ZtpParam& p) {
  if (phi1.kind == LinkageKind::Ignorable && phi2.kind == LinkageKind::Ignorable)
    return {};
  PhiRatioStats s;
  s.e_phi1_over_phi2 =
      ztp_expect(p.lambda, [&](long n) { return phi(phi1, n) / phi(phi2, n); });
  s.e_phi1sq_over_phi2 = ztp_expect(p.lambda, [&](long n) {
    const double f1 = phi(phi1, n);
    return f1 * f1 / phi(phi2, n);
  });
  s.e_inv_phi2 =
      ztp_expect(p.lambda, [&](long n) { return 1.0 / phi(phi2, n); });
  return s;
}

PhiRatioStats phi_ratio_stats(const Linkage& phi1, const Linkage& phi2,
                              std::span<const double> probs) {
  if (phi1.kind == LinkageKind::Ignorable && phi2.kind == LinkageKind::Ignorable)
    return {};
  PhiRatioStats s{0, 0, 0};
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const long n = static_cast<long>(i) + 1;
    const double f1 = phi(phi1, n);
    const double f2 = phi(phi2, n);
    s.e_phi1_over_phi2 += probs[i] * f1 / f2;
    s.e_phi1sq_over_phi2 += probs[i] * f1 * f1 / f2;
    s.e_inv_phi2 += probs[i] / f2;
  }
  return s;
}

double expected_phi_under(const Linkage& link, std::span<const double> probs) {
  if (link.kind == LinkageKind::Ignorable) return 1.0;
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    acc += probs[i] * phi(link, static_cast<long>(i) + 1);
  return acc;
}

CompoundDraw compound_sample(const Linkage& link, const EdmParams& base,
                             const ZtpParam& p, Rng& rng) {
  const long n = sample_ztp(p, rng);
  switch (link.kind) {
    case LinkageKind::Ignorable:
      return {n, edm_sample(base, rng)};
    case LinkageKind::Exponential: {
      if (!(link.c > 0))
        throw ParameterError(
            "compound_sample: exponential linkage requires 0 < c <= 1");
      double y = 0.0;
      if (link.c < 1.0) {
        EdmParams rest(base.family, base.theta, (1.0 - link.c) * base.kappa);
        y = edm_sample(rest, rng);
      }
      EdmParams inc(base.family, base.theta, link.c * base.kappa);
      for (long i = 0; i < n; ++i) y += edm_sample(inc, rng);
      return {n, y};
    }
    case LinkageKind::Linear: {
      // The alternating sum leaves the family for asymmetric distributions;
      // only the Gaussian case is supported.
      if (base.family != EdmFamily::Gaussian)
        throw ParameterError(
            "compound_sample: linear linkage is only supported for the "
            "Gaussian family");
      if (!(link.c > 0))
        throw ParameterError(
            "compound_sample: linear linkage requires 0 < c < 0.5");
      EdmParams rest(base.family, base.theta, (1.0 - link.c) * base.kappa);
      EdmParams inc(base.family, base.theta, link.c * base.kappa);
      double y = edm_sample(rest, rng);
      for (long i = 1; i <= n; ++i) {
        const double d = edm_sample(inc, rng);
        y += i % 2 == 1 ? d : -d;
      }
      return {n, y};
    }
  }
  throw ParameterError("unknown linkage kind");
}

}  // namespace ccpf
