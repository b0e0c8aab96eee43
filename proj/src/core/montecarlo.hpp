#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "orlicz_function.hpp"
#include "rng.hpp"

namespace orlz {

enum class Aggregation { Auto, Mean, MedianOfMeans };

struct McConfig {
  std::uint64_t seed = 0;
  std::int64_t replicates = 100000;
  Aggregation aggregation = Aggregation::Auto;
  int blocks = 10;  // ceil(2 ln(1/delta)) with delta = 0.01
  int workers = 1;  // partitioning only; never changes results
};

struct McEstimate {
  double estimate = 0.0;
  double dispersion = 0.0;  // stderr (mean) or inter-block MAD (MoM)
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::string aggregation;
};

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
};

Matrix random_normal_matrix(int n, std::uint64_t seed, std::uint64_t stream);

// Replicate r always draws from substream (seed, stream_base + r); blocks
// are contiguous replicate ranges, so the block structure (not the thread
// count) fixes every floating-point reduction order.
McEstimate run_replicates(
    const McConfig& cfg, bool heavy_tail, std::uint64_t stream_base,
    const std::function<double(SubstreamRng&)>& replicate);

// E max_i |a_i X_i| over independent copies of X.
McEstimate expect_max(const Distribution& d, std::span<const double> a,
                      const McConfig& cfg, std::uint64_t stream_base = 0);

// E ||(a_i X_i)||_p; p = kInf reduces to the max.
McEstimate expect_pnorm(const Distribution& d, std::span<const double> a,
                        double p, const McConfig& cfg,
                        std::uint64_t stream_base = 0);

// E ||(a_ij xi_i X_j)||_p with independent xi- and X-vectors per replicate.
McEstimate expect_tensor_pnorm(const Distribution& d_xi,
                               const Distribution& d_x, const Matrix& A,
                               double p, const McConfig& cfg,
                               std::uint64_t stream_base = 0);

struct RatioRow {
  int n = 0;
  double estimate = 0.0;
  double dispersion = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
};

struct RatioReport {
  std::string theorem;
  std::vector<RatioRow> rows;
  double spread = 0.0;  // max ratio / min ratio across n
};

// Inputs for the equivalence-ratio sweeps. Which fields matter depends on
// the theorem id:
//   "max"            E max|a_i X_i|        vs ||a||_{M_X}
//   "pnorm"          E ||(a_i X_i)||_p     vs ||a||_{M_{X,p}}
//   "lq-generation"  E ||(a_j xi_j)||_p    vs ||a||_q, xi ~ pareto(q)
//   "tensor"         E ||(a_ij xi_i X_j)||_p vs ||(||row_i||_M)_i||_q,
//                    xi ~ pareto(q), X built from M with parameter p
// Weight vectors are all-ones; tensor matrices are seeded standard normals.
struct RatioStabilityInputs {
  std::string theorem;
  std::vector<int> n_list;
  double p = 2.0;
  double q = 1.5;
  std::optional<Distribution> d;     // max / pnorm
  std::optional<OrliczFunction> M;   // tensor
};

RatioReport ratio_stability(const RatioStabilityInputs& in,
                            const McConfig& cfg);

}  // namespace orlz
