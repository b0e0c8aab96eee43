#include "montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "correspondence.hpp"
#include "orlicz_ops.hpp"

namespace orlz {

namespace {

double median_inplace(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ||v||_p with the largest entry factored out; p = kInf gives the max.
double pnorm(std::span<const double> v, double p) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  if (vmax == 0.0 || p == kInf) return vmax;
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x) / vmax, p);
  return vmax * std::pow(acc, 1.0 / p);
}

}  // namespace

Matrix random_normal_matrix(int n, std::uint64_t seed, std::uint64_t stream) {
  Matrix m(n, n);
  SubstreamRng rng(seed, stream);
  for (auto& v : m.a) v = rng.normal();
  return m;
}

McEstimate run_replicates(
    const McConfig& cfg, bool heavy_tail, std::uint64_t stream_base,
    const std::function<double(SubstreamRng&)>& replicate) {
  if (cfg.replicates < 1)
    throw std::invalid_argument("run_replicates: need replicates >= 1");
  const std::int64_t n = cfg.replicates;
  const int k = static_cast<int>(
      std::max<std::int64_t>(1, std::min<std::int64_t>(cfg.blocks, n)));
  Aggregation agg = cfg.aggregation;
  if (agg == Aggregation::Auto)
    agg = heavy_tail ? Aggregation::MedianOfMeans : Aggregation::Mean;

  std::vector<double> block_sum(k, 0.0), block_sumsq(k, 0.0);
  std::vector<std::int64_t> block_count(k, 0);
  const std::int64_t base = n / k, rem = n % k;

  auto run_block = [&](int b) {
    std::int64_t lo = b * base + std::min<std::int64_t>(b, rem);
    const std::int64_t size = base + (b < rem ? 1 : 0);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t r = lo; r < lo + size; ++r) {
      SubstreamRng rng(cfg.seed, stream_base + static_cast<std::uint64_t>(r));
      const double v = replicate(rng);
      sum += v;
      sumsq += v * v;
    }
    block_sum[b] = sum;
    block_sumsq[b] = sumsq;
    block_count[b] = size;
  };

  const int workers = std::max(1, cfg.workers);
  if (workers <= 1 || k == 1) {
    for (int b = 0; b < k; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    const int nw = std::min(workers, k);
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&, w] {
        for (int b = w; b < k; b += nw) run_block(b);
      });
    for (auto& t : pool) t.join();
  }

  McEstimate est;
  est.samples = n;
  est.seed = cfg.seed;
  if (agg == Aggregation::Mean) {
    double sum = 0.0, sumsq = 0.0;
    for (int b = 0; b < k; ++b) {
      sum += block_sum[b];
      sumsq += block_sumsq[b];
    }
    est.estimate = sum / static_cast<double>(n);
    const double var =
        n > 1 ? std::max(0.0, (sumsq - n * est.estimate * est.estimate) /
                                  static_cast<double>(n - 1))
              : 0.0;
    est.dispersion = std::sqrt(var / static_cast<double>(n));
    est.aggregation = "mean";
  } else {
    std::vector<double> means(k);
    for (int b = 0; b < k; ++b)
      means[b] = block_sum[b] / static_cast<double>(block_count[b]);
    std::vector<double> tmp = means;
    est.estimate = median_inplace(tmp);
    std::vector<double> dev(k);
    for (int b = 0; b < k; ++b) dev[b] = std::abs(means[b] - est.estimate);
    est.dispersion = median_inplace(dev);
    est.aggregation = "median_of_means";
  }
  return est;
}

McEstimate expect_max(const Distribution& d, std::span<const double> a,
                      const McConfig& cfg, std::uint64_t stream_base) {
  std::vector<double> w(a.begin(), a.end());
  const bool heavy = d.tail_exponent() <= 2.0;
  return run_replicates(cfg, heavy, stream_base, [&d, w](SubstreamRng& rng) {
    double m = 0.0;
    for (double ai : w) m = std::max(m, std::abs(ai * d.sample_one(rng)));
    return m;
  });
}

McEstimate expect_pnorm(const Distribution& d, std::span<const double> a,
                        double p, const McConfig& cfg,
                        std::uint64_t stream_base) {
  if (p == kInf) return expect_max(d, a, cfg, stream_base);
  if (!(p > 1.0)) throw std::invalid_argument("expect_pnorm: need p > 1");
  std::vector<double> w(a.begin(), a.end());
  const bool heavy = d.tail_exponent() <= 2.0;
  return run_replicates(cfg, heavy, stream_base,
                        [&d, w, p](SubstreamRng& rng) {
                          std::vector<double> v(w.size());
                          for (size_t i = 0; i < w.size(); ++i)
                            v[i] = w[i] * d.sample_one(rng);
                          return pnorm(v, p);
                        });
}

McEstimate expect_tensor_pnorm(const Distribution& d_xi,
                               const Distribution& d_x, const Matrix& A,
                               double p, const McConfig& cfg,
                               std::uint64_t stream_base) {
  if (A.rows <= 0 || A.cols <= 0)
    throw std::invalid_argument("expect_tensor_pnorm: empty matrix");
  const bool heavy =
      std::min(d_xi.tail_exponent(), d_x.tail_exponent()) <= 2.0;
  return run_replicates(
      cfg, heavy, stream_base, [&d_xi, &d_x, &A, p](SubstreamRng& rng) {
        std::vector<double> xi(A.rows), x(A.cols);
        for (auto& v : xi) v = d_xi.sample_one(rng);
        for (auto& v : x) v = d_x.sample_one(rng);
        std::vector<double> prod(static_cast<size_t>(A.rows) * A.cols);
        size_t idx = 0;
        for (int i = 0; i < A.rows; ++i)
          for (int j = 0; j < A.cols; ++j, ++idx)
            prod[idx] = A.at(i, j) * xi[i] * x[j];
        return pnorm(prod, p);
      });
}

RatioReport ratio_stability(const RatioStabilityInputs& in,
                            const McConfig& cfg) {
  RatioReport rep;
  rep.theorem = in.theorem;
  if (in.n_list.empty())
    throw std::invalid_argument("ratio_stability: empty n list");

  // Pre-build the predicted-side machinery once.
  std::optional<OrliczFunction> norm_fn;
  std::optional<Distribution> xi, x_dist;
  if (in.theorem == "max") {
    if (!in.d) throw std::invalid_argument("ratio_stability: missing d");
    norm_fn = orlicz_from_max(*in.d);
  } else if (in.theorem == "pnorm") {
    if (!in.d) throw std::invalid_argument("ratio_stability: missing d");
    norm_fn = orlicz_from_p_norm(*in.d, in.p);
  } else if (in.theorem == "lq-generation") {
    xi = Distribution::pareto(in.q);
  } else if (in.theorem == "tensor") {
    if (!in.M) throw std::invalid_argument("ratio_stability: missing M");
    xi = Distribution::pareto(in.q);
    x_dist = Distribution::from_orlicz(*in.M, in.p);
  } else {
    throw std::invalid_argument("ratio_stability: unknown theorem id '" +
                                in.theorem + "'");
  }

  double rmin = kInf, rmax = -kInf;
  for (size_t gi = 0; gi < in.n_list.size(); ++gi) {
    const int n = in.n_list[gi];
    if (n < 1) throw std::invalid_argument("ratio_stability: n < 1");
    const std::uint64_t stream_base = static_cast<std::uint64_t>(gi) << 44;
    RatioRow row;
    row.n = n;
    const std::vector<double> ones(static_cast<size_t>(n), 1.0);
    McEstimate est;
    if (in.theorem == "max") {
      est = expect_max(*in.d, ones, cfg, stream_base);
      row.predicted = luxemburg_norm(*norm_fn, ones);
    } else if (in.theorem == "pnorm") {
      est = expect_pnorm(*in.d, ones, in.p, cfg, stream_base);
      row.predicted = luxemburg_norm(*norm_fn, ones);
    } else if (in.theorem == "lq-generation") {
      est = expect_pnorm(*xi, ones, in.p, cfg, stream_base);
      row.predicted = std::pow(static_cast<double>(n), 1.0 / in.q);
    } else {
      const Matrix A = random_normal_matrix(
          n, cfg.seed, stream_base + ((std::uint64_t)1 << 40));
      est = expect_tensor_pnorm(*xi, *x_dist, A, in.p, cfg, stream_base);
      std::vector<double> row_norms(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        std::span<const double> r(A.a.data() + static_cast<size_t>(i) * n,
                                  static_cast<size_t>(n));
        row_norms[static_cast<size_t>(i)] = luxemburg_norm(*in.M, r);
      }
      row.predicted = pnorm(row_norms, in.q);
    }
    row.estimate = est.estimate;
    row.dispersion = est.dispersion;
    if (!(row.predicted > 0.0))
      throw std::domain_error("ratio_stability: predicted norm is zero");
    row.ratio = row.estimate / row.predicted;
    rmin = std::min(rmin, row.ratio);
    rmax = std::max(rmax, row.ratio);
    rep.rows.push_back(row);
  }
  rep.spread = rmax / rmin;
  return rep;
}

}  // namespace orlz
