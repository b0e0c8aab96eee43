#include "embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distribution.hpp"
#include "orlicz_ops.hpp"

namespace orlz {

namespace {

void require_2concave(const OrliczFunction& M) {
  const double t1 = M.kink() ? *M.kink() : M.inverse(1.0);
  double scale = 0.0, worst = 0.0;
  for (double t : log_grid(t1 * 1e-6, t1 * (1.0 - 1e-9), 128)) {
    const double d3 = M.deriv(t, 3);
    scale = std::max(scale, std::abs(d3));
    worst = std::max(worst, d3);
  }
  if (worst > 1e-10 * std::max(1.0, scale))
    throw std::domain_error(
        "psi_l1_norm: M''' > 0 on the smooth region; M is not 2-concave");
}

}  // namespace

McEstimate psi_l1_norm(const Matrix& A, const OrliczFunction& M, double q,
                       const McConfig& cfg, std::uint64_t stream_base) {
  if (A.rows <= 0 || A.cols != A.rows)
    throw std::invalid_argument("psi_l1_norm: need a square matrix");
  require_2concave(M);
  const Distribution xi = Distribution::pareto(q);
  const Distribution x = Distribution::from_orlicz(M, 2.0);
  const bool heavy = std::min(q, x.tail_exponent()) <= 2.0;
  const int n = A.rows;
  return run_replicates(
      cfg, heavy, stream_base, [&A, &xi, &x, n](SubstreamRng& rng) {
        std::vector<double> xs(static_cast<size_t>(n)),
            xis(static_cast<size_t>(n));
        for (auto& v : xis) v = xi.sample_one(rng);
        for (auto& v : xs) v = x.sample_one(rng);
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            acc += A.at(i, j) * rng.rademacher() * xis[static_cast<size_t>(i)] *
                   xs[static_cast<size_t>(j)];
        return std::abs(acc);
      });
}

double nested_norm(const Matrix& A, const OrliczFunction& M, double q) {
  std::vector<double> row_norms(static_cast<size_t>(A.rows));
  for (int i = 0; i < A.rows; ++i) {
    std::span<const double> row(A.a.data() + static_cast<size_t>(i) * A.cols,
                                static_cast<size_t>(A.cols));
    row_norms[static_cast<size_t>(i)] = luxemburg_norm(M, row);
  }
  double vmax = 0.0;
  for (double v : row_norms) vmax = std::max(vmax, v);
  if (vmax == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : row_norms) acc += std::pow(v / vmax, q);
  return vmax * std::pow(acc, 1.0 / q);
}

DistortionReport distortion_sweep(const OrliczFunction& M, double q,
                                  const std::vector<int>& n_list,
                                  int matrices_per_n, const McConfig& cfg) {
  if (matrices_per_n < 1)
    throw std::invalid_argument("distortion_sweep: need matrices_per_n >= 1");
  DistortionReport rep;
  rep.cross_n_stability = 0.0;
  for (size_t gi = 0; gi < n_list.size(); ++gi) {
    const int n = n_list[gi];
    std::vector<Matrix> ensemble;
    // Structured extremes first, then seeded normals up to the budget.
    if (matrices_per_n >= 4) {
      Matrix id(n, n), ones(n, n), single(n, n);
      for (int i = 0; i < n; ++i) id.at(i, i) = 1.0;
      std::fill(ones.a.begin(), ones.a.end(), 1.0);
      single.at(0, 0) = 1.0;
      ensemble.push_back(std::move(id));
      ensemble.push_back(std::move(ones));
      ensemble.push_back(std::move(single));
    }
    while (static_cast<int>(ensemble.size()) < matrices_per_n) {
      const std::uint64_t mstream =
          (static_cast<std::uint64_t>(gi) << 44) +
          ((std::uint64_t)1 << 40) + ensemble.size();
      ensemble.push_back(random_normal_matrix(n, cfg.seed, mstream));
    }
    DistortionRow row;
    row.n = n;
    row.matrices = static_cast<int>(ensemble.size());
    row.min_ratio = kInf;
    row.max_ratio = -kInf;
    for (size_t mi = 0; mi < ensemble.size(); ++mi) {
      const std::uint64_t stream_base =
          (static_cast<std::uint64_t>(gi) << 44) +
          (static_cast<std::uint64_t>(mi) << 32);
      const McEstimate est =
          psi_l1_norm(ensemble[mi], M, q, cfg, stream_base);
      const double denom = nested_norm(ensemble[mi], M, q);
      if (!(denom > 0.0))
        throw std::domain_error("distortion_sweep: zero nested norm");
      const double ratio = est.estimate / denom;
      row.min_ratio = std::min(row.min_ratio, ratio);
      row.max_ratio = std::max(row.max_ratio, ratio);
    }
    rep.cross_n_stability =
        std::max(rep.cross_n_stability, row.max_ratio / row.min_ratio);
    rep.per_n.push_back(row);
  }
  return rep;
}

}  // namespace orlz
