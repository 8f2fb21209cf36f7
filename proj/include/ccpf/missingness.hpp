#pragma once

#include <span>
#include <vector>

#include "ccpf/common.hpp"
#include "ccpf/linkage.hpp"

namespace ccpf {

struct GammaVariational {
  double shape = 1.0;  // alpha
  double rate = 1.0;   // beta
  double mean() const { return shape / rate; }
};

// Hyperparameters of the missingness-encoding HPF.
struct HpfHyper {
  double rho = 0.01;    // activity prior shape
  double varrho = 0.1;  // activity prior rate
  double upsilon = 0.01;  // popularity prior shape
  double nu = 0.1;        // popularity prior rate
  double eta = 0.1;   // row factor shape
  double zeta = 0.1;  // column factor shape
  int K = 1;
};

// Recipe: nu = varrho = 0.1, upsilon = rho = 0.01,
// E[n] = -log(missing fraction), eta = rho*sqrt(E[n]/K)/varrho,
// zeta = upsilon*sqrt(E[n]/K)/nu.
HpfHyper hyper_init(double sparsity, int K);

// Variational state of the missingness encoder.
struct HpfState {
  HpfHyper hyper;
  int n_rows = 0;
  int n_cols = 0;
  std::vector<GammaVariational> activity;     // r_i, per row
  std::vector<GammaVariational> popularity;   // w_j, per column
  std::vector<GammaVariational> row_factors;  // u_ik, row-major [i*K + k]
  std::vector<GammaVariational> col_factors;  // v_jk, row-major [j*K + k]
  std::vector<long> row_steps;  // t_i
  std::vector<long> col_steps;  // t_j

  // Prior-centred initialization with multiplicative jitter up to 5%.
  static HpfState init(int n_rows, int n_cols, const HpfHyper& hyper, long t0,
                       Rng& rng);

  // Lambda_ij = sum_k E[u_ik] E[v_jk].
  double expected_rate(int i, int j) const;

  // Auxiliary multinomial weights, proportional to
  // exp{digamma(a_u) - log b_u + digamma(a_v) - log b_v}; writes K entries.
  void multinomial_weights(int i, int j, std::span<double> out) const;

  void check_indices(int i, int j) const;
};

// Local posterior over the interaction count of one cell. Missing cells are
// the delta_0 point mass (empty probs, expected_n = 0).
struct LocalQn {
  std::vector<double> probs;  // q(n), n = 1..n_tr
  double expected_n = 0.0;
  double expected_phi = 1.0;      // E[phi(n)] for the single-phi channel
  PhiRatioStats phi_stats;        // ratio bundle for the Gaussian channel

  static LocalQn missing() { return {}; }
  bool is_missing() const { return probs.empty(); }
};

// Single-phi families (Algorithm-1 form):
//   q(n) propto exp{-kappa*phi(n)*E[Psi(theta)] + h(y, phi(n)*kappa)} L^n/n!.
LocalQn local_q_n(EdmFamily family, double y, double lambda,
                  double expected_log_partition, double kappa,
                  const Linkage& link, int n_tr);

// Gaussian observation channel with separate mean/variance scalings:
//   y | n ~ N(phi1(n) * m, phi2(n) / prec), expectations over q(m), q(prec).
struct GaussianChannelStats {
  double e_mean = 0.0;
  double e_mean_sq = 0.0;
  double e_prec = 1.0;      // E[rho] (1/sigma^2 when the precision is fixed)
  double e_log_prec = 0.0;  // E[log rho]
};
LocalQn local_q_n_gaussian(double y, double lambda,
                           const GaussianChannelStats& stats,
                           const Linkage& link_mean, const Linkage& link_var,
                           int n_tr);

// Scale factors applied to the single-cell natural-gradient targets:
// row updates estimate a sum over columns and vice versa.
struct UpdateScale {
  double row;  // multiplies row-side data statistics (n_cols under uniform sampling)
  double col;  // multiplies column-side data statistics (n_rows)
};

// The eight Algorithm-1 blends for cell (i, j), followed by the t_i, t_j
// increments. `weights` must hold the K multinomial weights for (i, j).
void global_update(HpfState& state, int i, int j, const LocalQn& qn,
                   std::span<const double> weights, double xi,
                   const UpdateScale& scale);

}  // namespace ccpf
