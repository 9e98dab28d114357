#pragma once

#include <cstdint>
#include <vector>

#include "modcomm/lattice.hpp"
#include "modcomm/regions.hpp"

namespace modcomm {

struct GaussianOptions {
  double entropy_eps = 1e-12;
  double modular_eps = 1e-10;
  double degeneracy_threshold = 1e-8;
  double residue_factor = 1e-8;
  bool enforce_residue = true;
  // Negative control: store C where C^T is required. Calibration must fail.
  bool flip_transpose = false;
};

// Two-point function of a Gaussian state on a subset of model sites.
//
// matrix() is C with C_jk = <c^dag_j c_k>. Internally the transpose
// Gamma = C^T is kept; for a Slater determinant Gamma = U_occ U_occ^dag.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  CorrelationMatrix(CMatrix gamma, IndexList sites, int model_size, std::uint64_t model_id);

  CMatrix matrix() const { return gamma_.transpose(); }
  const CMatrix& gamma() const noexcept { return gamma_; }
  const IndexList& sites() const noexcept { return sites_; }
  int size() const noexcept { return static_cast<int>(sites_.size()); }
  int model_size() const noexcept { return model_size_; }
  std::uint64_t model_id() const noexcept { return model_id_; }
  // Positions of the region's sites inside this matrix; throws if absent.
  IndexList local_indices(const IndexList& global) const;

 private:
  CMatrix gamma_;
  IndexList sites_;
  int model_size_ = 0;
  std::uint64_t model_id_ = 0;
};

struct CorrelationDiagnostics {
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double projector_residual = 0.0;
  double trace = 0.0;
};

CorrelationMatrix ground_state_correlations(const LatticeModel& model, const GaussianOptions& opts = {});
// Slater determinant of the n lowest orbitals of h. fermi_gap, when given,
// receives the single-particle gap at the filling.
CorrelationMatrix ground_state_correlations(const CMatrix& h, int n_particles, const GaussianOptions& opts = {},
                                            std::uint64_t model_id = 0, double* fermi_gap = nullptr);
CorrelationMatrix ground_state_correlations(const LatticeModel& model, const GaussianOptions& opts,
                                            double* fermi_gap);
CorrelationDiagnostics diagnose(const CorrelationMatrix& c);

CorrelationMatrix restrict(const CorrelationMatrix& c, const Region& x);
CorrelationMatrix restrict(const CorrelationMatrix& c, const IndexList& global_sites);

double entanglement_entropy(const CorrelationMatrix& cx, double eps = 1e-12);
double entanglement_entropy(const CorrelationMatrix& c, const Region& x, double eps = 1e-12);

// k such that K = sum_ij k_ij c^dag_i c_j and rho ~ exp(-K); k = ln((1 - G)/G)
// for G = C^T clipped into [eps, 1 - eps] in its eigenbasis.
struct ModularMatrix {
  CMatrix k;
  IndexList sites;
  double eps = 0.0;
  RVector occupations;  // clipped eigenvalues n of the restricted correlation matrix
  RVector spectrum;     // ln((1 - n)/n), same order
  double norm() const;  // spectral norm
};

ModularMatrix modular_matrix(const CorrelationMatrix& cx, double eps = 1e-10);

struct CommutatorResult {
  double value = 0.0;         // J in nats
  double imag_residue = 0.0;  // |Im| of the raw trace
  double residue_bound = 0.0;
};

CommutatorResult modular_commutator(const CorrelationMatrix& c, const Region& a, const Region& b,
                                    const Region& cr, const GaussianOptions& opts = {});

double geometric_integer(double J, PartitionKind kind);

double cond_mutual_info(const CorrelationMatrix& c, const Region& a, const Region& b, const Region& cr,
                        double eps = 1e-12);
double delta_two(const CorrelationMatrix& c, const Region& b, const Region& cr, double eps = 1e-12);
double delta_three(const CorrelationMatrix& c, const Region& b, const Region& cr, const Region& d,
                   double eps = 1e-12);

struct AdditivityResult {
  double total = 0.0;
  std::vector<double> ball_terms;
  double residual = 0.0;
  double defect = 0.0;
};

AdditivityResult additivity_decomposition(const CorrelationMatrix& c, const LatticeModel& model, const Region& u,
                                          const Region& v, const Region& w, const std::vector<JunctionBall>& balls,
                                          const GaussianOptions& opts = {});

enum class CurrentSlicing { symmetric, row };

// f(i, j) is the contribution of site v_sites[i] (in AB) and u_sites[j] (in BC).
struct ModularCurrent {
  RMatrix f;
  IndexList v_sites;
  IndexList u_sites;
  double J = 0.0;
  double imag_residue = 0.0;  // of J
  double resummed = 0.0;
  double max_imag = 0.0;      // largest |Im f|; rounding level for symmetric slicing

  double flow(const Region& l, const Region& r) const;
  // Sum over u of f(s, u) minus sum over v of f(v, s), for every site of ABC.
  std::vector<std::pair<int, double>> net_outflow() const;
};

ModularCurrent modular_current(const CorrelationMatrix& c, const Region& a, const Region& b, const Region& cr,
                               const GaussianOptions& opts = {},
                               CurrentSlicing slicing = CurrentSlicing::symmetric);

}  // namespace modcomm
