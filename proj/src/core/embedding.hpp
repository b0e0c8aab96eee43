#pragma once

#include <vector>

#include "montecarlo.hpp"
#include "orlicz_function.hpp"

namespace orlz {

// E |sum_{ij} a_ij r_ij xi_i X_j| with independent Rademacher signs,
// xi ~ pareto(q) and X built from M with parameter 2. Requires M''' <= 0 on
// the smooth region (2-concavity), which the p = 2 construction needs.
McEstimate psi_l1_norm(const Matrix& A, const OrliczFunction& M, double q,
                       const McConfig& cfg, std::uint64_t stream_base = 0);

// Nested norm ||(||(a_ij)_j||_M)_i||_q; the predicted side of the embedding.
double nested_norm(const Matrix& A, const OrliczFunction& M, double q);

struct DistortionRow {
  int n = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int matrices = 0;
};

struct DistortionReport {
  std::vector<DistortionRow> per_n;
  double cross_n_stability = 0.0;  // max over n of max_ratio/min_ratio
};

// Ratio psi_l1_norm(A) / nested_norm(A) over an ensemble per n: seeded
// standard-normal matrices plus the structured extremes (identity, rank-one
// all-ones, single-entry).
DistortionReport distortion_sweep(const OrliczFunction& M, double q,
                                  const std::vector<int>& n_list,
                                  int matrices_per_n, const McConfig& cfg);

}  // namespace orlz
