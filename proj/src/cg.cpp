#include "krglm/cg.hpp"

#include <cmath>

#include "krglm/error.hpp"
#include "krglm/simd.hpp"

namespace krglm {

CgResult cg_solve(const LinearOperator& apply_a, std::span<const double> b, const CgOptions& opts,
                  std::span<const double> x0, std::span<const double> inv_diag) {
  const std::size_t n = b.size();
  const auto& v = simd::ops();
  if (!x0.empty() && x0.size() != n) throw InputError("cg_solve: warm start length mismatch");
  if (!inv_diag.empty() && inv_diag.size() != n)
    throw InputError("cg_solve: preconditioner length mismatch");
  if (!(opts.tol > 0) || opts.max_iter < 1) throw InputError("cg_solve: invalid options");

  CgResult res;
  res.x.assign(n, 0.0);
  const double bnorm = std::sqrt(v.dot(b.data(), b.data(), n));
  if (bnorm == 0.0) return res;

  std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
  if (!x0.empty()) {
    res.x.assign(x0.begin(), x0.end());
    apply_a(res.x, q);
    v.axpy(-1.0, q.data(), r.data(), n);
  }
  auto precondition = [&] {
    if (inv_diag.empty()) {
      z = r;
    } else {
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    }
  };

  double rnorm = std::sqrt(v.dot(r.data(), r.data(), n));
  res.relative_residual = rnorm / bnorm;
  if (res.relative_residual <= opts.tol) return res;

  precondition();
  p = z;
  double rz = v.dot(r.data(), z.data(), n);
  double best = res.relative_residual;
  int since_best = 0;

  for (int it = 1; it <= opts.max_iter; ++it) {
    apply_a(p, q);
    const double pq = v.dot(p.data(), q.data(), n);
    if (!(pq > 0.0))
      throw SolverError("cg_solve: operator is not positive definite (p'Ap <= 0)", it,
                        res.relative_residual);
    const double step = rz / pq;
    v.axpy(step, p.data(), res.x.data(), n);
    v.axpy(-step, q.data(), r.data(), n);
    rnorm = std::sqrt(v.dot(r.data(), r.data(), n));
    res.iterations = it;
    res.relative_residual = rnorm / bnorm;
    if (res.relative_residual <= opts.tol) return res;

    if (res.relative_residual < best) {
      best = res.relative_residual;
      since_best = 0;
    } else if (++since_best >= opts.stagnation_window) {
      throw SolverError("cg_solve: residual stagnated", it, res.relative_residual);
    }

    precondition();
    const double rz_next = v.dot(r.data(), z.data(), n);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("cg_solve: no convergence within max_iter", res.iterations,
                    res.relative_residual);
}

}  // namespace krglm
