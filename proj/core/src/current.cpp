#include <algorithm>
#include <map>

#include "modcomm/errors.hpp"
#include "modcomm/gaussian.hpp"
#include "modcomm/linalg.hpp"

namespace modcomm {

namespace {

IndexList merge(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

CMatrix padded(const ModularMatrix& m, const IndexList& local, Eigen::Index n) {
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t j = 0; j < local.size(); ++j)
    for (std::size_t i = 0; i < local.size(); ++i) out(local[i], local[j]) = m.k(Eigen::Index(i), Eigen::Index(j));
  return out;
}

}  // namespace

double ModularCurrent::flow(const Region& l, const Region& r) const {
  double total = 0.0;
  for (std::size_t i = 0; i < v_sites.size(); ++i) {
    if (!l.contains(v_sites[i])) continue;
    for (std::size_t j = 0; j < u_sites.size(); ++j)
      if (r.contains(u_sites[j])) total += f(Eigen::Index(i), Eigen::Index(j));
  }
  return total;
}

std::vector<std::pair<int, double>> ModularCurrent::net_outflow() const {
  std::map<int, double> out;
  for (std::size_t i = 0; i < v_sites.size(); ++i) out[v_sites[i]] += f.row(Eigen::Index(i)).sum();
  for (std::size_t j = 0; j < u_sites.size(); ++j) out[u_sites[j]] -= f.col(Eigen::Index(j)).sum();
  return {out.begin(), out.end()};
}

ModularCurrent modular_current(const CorrelationMatrix& c, const Region& a, const Region& b, const Region& cr,
                               const GaussianOptions& opts, CurrentSlicing slicing) {
  ModularCurrent cur;
  const auto j = modular_commutator(c, a, b, cr, opts);
  cur.J = j.value;
  cur.imag_residue = j.imag_residue;
  cur.v_sites = merge(a.sites(), b.sites());
  cur.u_sites = merge(b.sites(), cr.sites());
  cur.f = RMatrix::Zero(Eigen::Index(cur.v_sites.size()), Eigen::Index(cur.u_sites.size()));
  if (a.empty() || b.empty() || cr.empty()) return cur;

  const CorrelationMatrix c_abc = restrict(c, merge(cur.v_sites, cr.sites()));
  const IndexList x = c_abc.local_indices(cur.v_sites);
  const IndexList y = c_abc.local_indices(cur.u_sites);
  const Eigen::Index n = c_abc.size();
  const CMatrix& g = c_abc.gamma();
  const CMatrix k1 = padded(modular_matrix(restrict(c, cur.v_sites), opts.modular_eps), x, n);
  const CMatrix k2 = padded(modular_matrix(restrict(c, cur.u_sites), opts.modular_eps), y, n);

  const CMatrix k2g = k2 * g;
  const CMatrix k1g = k1 * g;
  CMatrix first(x.size(), y.size());
  CMatrix second(x.size(), y.size());
  if (slicing == CurrentSlicing::row) {
    // kappa_v = P_v k
    for (std::size_t j = 0; j < y.size(); ++j)
      for (std::size_t i = 0; i < x.size(); ++i) {
        const int v = x[i], u = y[j];
        first(i, j) = k1(v, u) * k2g(u, v);
        second(i, j) = k2(u, v) * k1g(v, u);
      }
  } else {
    // kappa_v = (P_v k + k P_v) / 2
    const CMatrix k1k2 = k1 * k2;
    const CMatrix k2k1 = k2 * k1;
    const CMatrix gk1 = g * k1;
    const CMatrix gk2 = g * k2;
    const CMatrix k2gk1 = k2g * k1;
    const CMatrix k1gk2 = k1g * k2;
    for (std::size_t j = 0; j < y.size(); ++j)
      for (std::size_t i = 0; i < x.size(); ++i) {
        const int v = x[i], u = y[j];
        cplx f1 = k1(v, u) * k2g(u, v) + k1k2(v, u) * g(u, v) + k2(v, u) * gk1(u, v);
        cplx f2 = k2(u, v) * k1g(v, u) + k2k1(u, v) * g(v, u) + k1(u, v) * gk2(v, u);
        if (u == v) {
          f1 += k2gk1(v, v);
          f2 += k1gk2(u, u);
        }
        first(i, j) = 0.25 * f1;
        second(i, j) = 0.25 * f2;
      }
  }
  const CMatrix fc = cplx(0.0, 1.0) * (first - second);
  cur.f = fc.real();
  cur.max_imag = fc.imag().cwiseAbs().maxCoeff();
  cur.resummed = cur.f.sum();
  return cur;
}

}  // namespace modcomm
