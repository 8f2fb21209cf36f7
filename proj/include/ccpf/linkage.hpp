#pragma once

#include <span>
#include <string>
#include <vector>

#include "ccpf/common.hpp"
#include "ccpf/edm.hpp"

namespace ccpf {

enum class LinkageKind { Ignorable, Linear, Exponential };

const char* linkage_name(LinkageKind k);
LinkageKind linkage_from_name(const std::string& name);

// Coupling bounds keeping phi(n) > 0 for every n >= 1.
double linkage_c_min(LinkageKind k);
double linkage_c_max(LinkageKind k);

// Dispersion scaling phi(n): ignorable 1, linear 1-c+c*(-1)^(n+1),
// exponential 1-c+c*n.
struct Linkage {
  LinkageKind kind = LinkageKind::Ignorable;
  double c = 0.0;

  Linkage() = default;
  Linkage(LinkageKind k, double c_);
  static Linkage ignorable() { return {}; }
  static Linkage linear(double c) { return {LinkageKind::Linear, c}; }
  static Linkage exponential(double c) { return {LinkageKind::Exponential, c}; }
};

double phi(const Linkage& link, long n);
double phi_dc(const Linkage& link, long n);  // d phi / d c at fixed n

struct ZtpParam {
  double lambda;
  explicit ZtpParam(double lam);
};

// log Pr(N = n) for N ~ ZTP(lambda): n*log(lambda) - log(n!) - log(e^lambda - 1).
double ztp_log_pmf(const ZtpParam& p, long n);

// Pr(cell missing) = e^{-lambda}.
double missing_prob(double lambda);

long sample_ztp(const ZtpParam& p, Rng& rng);

// Closed-form E[phi(N)] under N ~ ZTP(lambda).
double expected_phi(const Linkage& link, const ZtpParam& p);

// Ratio expectations consumed by the Gaussian-channel updates.
struct PhiRatioStats {
  double e_phi1_over_phi2 = 1.0;
  double e_phi1sq_over_phi2 = 1.0;
  double e_inv_phi2 = 1.0;
};

// Enumerated under ZTP(lambda), truncated where the tail mass drops below
// 1e-14 (hard cap 10^4 terms).
PhiRatioStats expected_phi_ratios(const Linkage& phi1, const Linkage& phi2,
                                  const ZtpParam& p);

// Same ratios under an arbitrary categorical q(n) over n = 1..probs.size().
PhiRatioStats phi_ratio_stats(const Linkage& phi1, const Linkage& phi2,
                              std::span<const double> probs);
double expected_phi_under(const Linkage& link, std::span<const double> probs);

// Theorem-2 compound construction: N ~ ZTP(lambda), then
//   exponential: y = Y0 + sum_{i<=N} Yi, Y0 ~ p(theta,(1-c)k), Yi ~ p(theta,ck)
//   linear (Gaussian only): alternating signs on the Yi
//   ignorable: y ~ p(theta, kappa) directly.
struct CompoundDraw {
  long n;
  double y;
};
CompoundDraw compound_sample(const Linkage& link, const EdmParams& base,
                             const ZtpParam& p, Rng& rng);

}  // namespace ccpf
