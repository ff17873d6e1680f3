#ifndef QMARKOV_TOLERANCES_HPP
#define QMARKOV_TOLERANCES_HPP

#include <cstdint>

namespace qmarkov {

// One bundle of numeric tolerances threaded through the toolkit.
// Every entry can be overridden per call; the defaults are chosen for
// dense double-precision arithmetic at dimensions up to a few hundred.
struct Tolerances {
  double hermiticity = 1e-12;    // max entry of |M - M^dag|
  double psd_slack = 1e-10;      // eigenvalues above -psd_slack count as >= 0
  double trace_one = 1e-10;      // |Tr M - 1|
  double eig_cutoff = 1e-12;     // eigenvalues below this count as zero
  double cmi_tol = 1e-8;         // Markov-chain test threshold, in nats
  double recon_tol = 1e-7;       // Frobenius residual for state reconstruction
  double group_tol = 1e-7;       // trace-distance band when grouping labels
  double pos_floor = 1e-9;       // strict-positivity floor (min eigenvalue)
  double gap_tol = 1e-7;         // eigenvalue gap for random spectral splitting
  double span_residual = 1e-9;   // Gram-Schmidt residual for new algebra basis ops
  double algebra_residual = 1e-8;// closure / tensor-form residual per element
  double weight_floor = 1e-12;   // block or cell weights below this are empty
  double match_tol = 1e-7;       // residual for block-to-block matching
  double cmi_slack = 1e-9;       // additive slack in chained CMI inequalities
  int retry_budget = 8;          // seeded retries for random splitting
  int gen_budget = 64;           // resampling budget in instance generation
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace qmarkov

#endif
