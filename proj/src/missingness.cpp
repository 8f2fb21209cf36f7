#include "ccpf/missingness.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>

namespace ccpf {

HpfHyper hyper_init(double sparsity, int K) {
  if (!(sparsity > 0 && sparsity < 1))
    throw ParameterError("hyper_init: sparsity must lie in (0,1)");
  if (K < 1) throw ParameterError("hyper_init: K must be >= 1");
  HpfHyper h;
  h.K = K;
  h.varrho = 0.1;
  h.nu = 0.1;
  h.rho = 0.01;
  h.upsilon = 0.01;
  // Invert Pr(missing) = e^{-Lambda} at the matrix level.
  const double expected_n = -std::log(sparsity);
  const double s = std::sqrt(expected_n / static_cast<double>(K));
  h.eta = h.rho * s / h.varrho;
  h.zeta = h.upsilon * s / h.nu;
  return h;
}

HpfState HpfState::init(int n_rows, int n_cols, const HpfHyper& hyper, long t0,
                        Rng& rng) {
  if (n_rows < 1 || n_cols < 1)
    throw ParameterError("HpfState::init: empty grid");
  if (t0 < 1) throw ParameterError("HpfState::init: t0 must be >= 1");
  HpfState s;
  s.hyper = hyper;
  s.n_rows = n_rows;
  s.n_cols = n_cols;
  std::uniform_real_distribution<double> jitter(0.95, 1.05);
  auto jit = [&](double v) { return v * jitter(rng); };

  s.activity.resize(n_rows);
  for (auto& g : s.activity) g = {jit(hyper.rho), jit(hyper.varrho)};
  s.popularity.resize(n_cols);
  for (auto& g : s.popularity) g = {jit(hyper.upsilon), jit(hyper.nu)};

  const double act_mean = hyper.rho / hyper.varrho;
  const double pop_mean = hyper.upsilon / hyper.nu;
  s.row_factors.resize(static_cast<std::size_t>(n_rows) * hyper.K);
  for (auto& g : s.row_factors) g = {jit(hyper.eta), jit(act_mean)};
  s.col_factors.resize(static_cast<std::size_t>(n_cols) * hyper.K);
  for (auto& g : s.col_factors) g = {jit(hyper.zeta), jit(pop_mean)};

  s.row_steps.assign(n_rows, t0);
  s.col_steps.assign(n_cols, t0);
  return s;
}

void HpfState::check_indices(int i, int j) const {
  if (i < 0 || i >= n_rows || j < 0 || j >= n_cols)
    throw ParameterError("cell index out of range");
}

double HpfState::expected_rate(int i, int j) const {
  check_indices(i, j);
  const int K = hyper.K;
  const GammaVariational* u = &row_factors[static_cast<std::size_t>(i) * K];
  const GammaVariational* v = &col_factors[static_cast<std::size_t>(j) * K];
  double acc = 0;
  for (int k = 0; k < K; ++k) acc += u[k].mean() * v[k].mean();
  return acc;
}

void HpfState::multinomial_weights(int i, int j, std::span<double> out) const {
  check_indices(i, j);
  const int K = hyper.K;
  if (out.size() != static_cast<std::size_t>(K))
    throw ParameterError("multinomial_weights: output span must have K slots");
  const GammaVariational* u = &row_factors[static_cast<std::size_t>(i) * K];
  const GammaVariational* v = &col_factors[static_cast<std::size_t>(j) * K];
  for (int k = 0; k < K; ++k)
    out[k] = boost::math::digamma(u[k].shape) - std::log(u[k].rate) +
             boost::math::digamma(v[k].shape) - std::log(v[k].rate);
  normalize_log_weights(out);
}

namespace {

// Shared tail: normalize log-weights over n = 1..n_tr and collect the
// expectations the rest of the pipeline consumes.
LocalQn finalize_local_qn(std::vector<double>&& logw, const Linkage& link_mean,
                          const Linkage& link_var) {
  LocalQn q;
  q.probs = std::move(logw);
  normalize_log_weights(q.probs);
  q.expected_n = 0;
  for (std::size_t i = 0; i < q.probs.size(); ++i)
    q.expected_n += q.probs[i] * static_cast<double>(i + 1);
  q.expected_phi = expected_phi_under(link_var, q.probs);
  q.phi_stats = phi_ratio_stats(link_mean, link_var, q.probs);
  return q;
}

}  // namespace

LocalQn local_q_n(EdmFamily family, double y, double lambda,
                  double expected_log_partition, double kappa,
                  const Linkage& link, int n_tr) {
  if (n_tr < 1) throw ParameterError("local_q_n: n_tr must be >= 1");
  ZtpParam zp(lambda);
  const double log_lambda = std::log(lambda);
  std::vector<double> logw(n_tr);
  for (int n = 1; n <= n_tr; ++n) {
    const double f = phi(link, n);
    double h;
    if (in_support(family, y, f * kappa)) {
      h = log_base_measure(family, y, f * kappa);
    } else {
      h = -std::numeric_limits<double>::infinity();
    }
    logw[n - 1] = -kappa * f * expected_log_partition + h +
                  static_cast<double>(n) * log_lambda -
                  std::lgamma(static_cast<double>(n) + 1.0);
  }
  return finalize_local_qn(std::move(logw), Linkage::ignorable(), link);
}

LocalQn local_q_n_gaussian(double y, double lambda,
                           const GaussianChannelStats& stats,
                           const Linkage& link_mean, const Linkage& link_var,
                           int n_tr) {
  if (n_tr < 1) throw ParameterError("local_q_n: n_tr must be >= 1");
  ZtpParam zp(lambda);
  const double log_lambda = std::log(lambda);
  const double quad0 = y * y - 2.0 * y * stats.e_mean + stats.e_mean_sq;
  std::vector<double> logw(n_tr);
  for (int n = 1; n <= n_tr; ++n) {
    const double f1 = phi(link_mean, n);
    const double f2 = phi(link_var, n);
    const double quad =
        y * y - 2.0 * f1 * y * stats.e_mean + f1 * f1 * stats.e_mean_sq;
    logw[n - 1] = -0.5 * stats.e_prec * quad / f2 - 0.5 * std::log(f2) +
                  static_cast<double>(n) * log_lambda -
                  std::lgamma(static_cast<double>(n) + 1.0);
  }
  (void)quad0;
  return finalize_local_qn(std::move(logw), link_mean, link_var);
}

void global_update(HpfState& state, int i, int j, const LocalQn& qn,
                   std::span<const double> weights, double xi,
                   const UpdateScale& scale) {
  state.check_indices(i, j);
  const int K = state.hyper.K;
  const HpfHyper& h = state.hyper;
  if (!qn.is_missing() && weights.size() != static_cast<std::size_t>(K))
    throw ParameterError("global_update: weights must have K entries");

  const double tau_i = std::pow(static_cast<double>(state.row_steps[i]), -xi);
  const double tau_j = std::pow(static_cast<double>(state.col_steps[j]), -xi);
  auto blend = [](double old, double tau, double target) {
    return (1.0 - tau) * old + tau * target;
  };

  GammaVariational* u = &state.row_factors[static_cast<std::size_t>(i) * K];
  GammaVariational* v = &state.col_factors[static_cast<std::size_t>(j) * K];
  GammaVariational& r = state.activity[i];
  GammaVariational& w = state.popularity[j];

  const double en = qn.expected_n;

  r.shape = blend(r.shape, tau_i, h.rho + K * h.eta);
  w.shape = blend(w.shape, tau_j, h.upsilon + K * h.zeta);

  double sum_u = 0, sum_v = 0;
  for (int k = 0; k < K; ++k) {
    sum_u += u[k].mean();
    sum_v += v[k].mean();
  }
  r.rate = blend(r.rate, tau_i, h.varrho + sum_u);
  w.rate = blend(w.rate, tau_j, h.nu + sum_v);

  const double r_mean = r.mean();
  const double w_mean = w.mean();
  for (int k = 0; k < K; ++k) {
    const double wk = qn.is_missing() ? 0.0 : weights[k];
    const double u_mean = u[k].mean();
    const double v_mean = v[k].mean();
    u[k].shape = blend(u[k].shape, tau_i, h.eta + scale.row * en * wk);
    u[k].rate = blend(u[k].rate, tau_i, r_mean + scale.row * v_mean);
    v[k].shape = blend(v[k].shape, tau_j, h.zeta + scale.col * en * wk);
    v[k].rate = blend(v[k].rate, tau_j, w_mean + scale.col * u_mean);
  }

  ++state.row_steps[i];
  ++state.col_steps[j];
}

}  // namespace ccpf
