#include "orlz.h"

#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "correspondence.hpp"
#include "distribution.hpp"
#include "embedding.hpp"
#include "json_io.hpp"
#include "montecarlo.hpp"
#include "orlicz_ops.hpp"

struct orlz_orlicz {
  orlz::OrliczFunction f;
};

struct orlz_dist {
  orlz::Distribution d;
};

namespace {

thread_local std::string g_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
orlz_status guarded(Fn&& fn) {
  try {
    fn();
    g_error.clear();
    return ORLZ_OK;
  } catch (const std::invalid_argument& e) {
    g_error = e.what();
    return ORLZ_EINVAL;
  } catch (const nlohmann::json::exception& e) {
    g_error = e.what();
    return ORLZ_EINVAL;
  } catch (const std::domain_error& e) {
    g_error = e.what();
    return ORLZ_EDOMAIN;
  } catch (const std::exception& e) {
    g_error = e.what();
    return ORLZ_EFAIL;
  } catch (...) {
    g_error = "unknown failure";
    return ORLZ_EFAIL;
  }
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

orlz::McConfig mc_config_from_json(const nlohmann::json& j) {
  orlz::McConfig cfg;
  if (!j.contains("seed"))
    throw std::invalid_argument("config: seed is required");
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.replicates = j.value("replicates", std::int64_t{100000});
  cfg.blocks = j.value("blocks", 10);
  cfg.workers = j.value("workers", 1);
  const std::string agg = j.value("aggregation", std::string("auto"));
  if (agg == "auto")
    cfg.aggregation = orlz::Aggregation::Auto;
  else if (agg == "mean")
    cfg.aggregation = orlz::Aggregation::Mean;
  else if (agg == "median_of_means")
    cfg.aggregation = orlz::Aggregation::MedianOfMeans;
  else
    throw std::invalid_argument("config: unknown aggregation '" + agg + "'");
  return cfg;
}

double json_p(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return orlz::kInf;
    throw std::invalid_argument(std::string("config: bad ") + key);
  }
  return v.get<double>();
}

}  // namespace

extern "C" {

const char* orlz_last_error(void) { return g_error.c_str(); }

void orlz_string_free(char* s) { delete[] s; }

orlz_status orlz_orlicz_from_json(const char* json, orlz_orlicz** out) {
  return guarded([&] {
    require(json && out, "null argument");
    auto j = nlohmann::json::parse(json);
    *out = new orlz_orlicz{orlz::orlicz_from_json(j)};
  });
}

orlz_status orlz_orlicz_to_json(const orlz_orlicz* f, char** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = dup_string(orlz::orlicz_to_json(f->f).dump());
  });
}

orlz_status orlz_orlicz_power(double exponent, orlz_orlicz** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new orlz_orlicz{orlz::OrliczFunction::power(exponent)};
  });
}

void orlz_orlicz_free(orlz_orlicz* f) { delete f; }

orlz_status orlz_orlicz_eval(const orlz_orlicz* f, double s, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = f->f(s);
  });
}

orlz_status orlz_orlicz_deriv(const orlz_orlicz* f, int order, double s,
                              double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = f->f.deriv(s, order);
  });
}

orlz_status orlz_orlicz_inverse(const orlz_orlicz* f, double y, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = f->f.inverse(y);
  });
}

orlz_status orlz_orlicz_kink(const orlz_orlicz* f, int* has_kink,
                             double* kink) {
  return guarded([&] {
    require(f && has_kink && kink, "null argument");
    if (f->f.kink()) {
      *has_kink = 1;
      *kink = *f->f.kink();
    } else {
      *has_kink = 0;
      *kink = 0.0;
    }
  });
}

orlz_status orlz_normalize_linearize(const orlz_orlicz* f, int strict,
                                     orlz_orlicz** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = new orlz_orlicz{orlz::normalize_by_linearization(f->f, strict != 0)};
  });
}

orlz_status orlz_luxemburg_norm(const orlz_orlicz* f, const double* x,
                                size_t n, double* out) {
  return guarded([&] {
    require(f && out && (x || n == 0), "null argument");
    *out = orlz::luxemburg_norm(f->f, std::span<const double>(x, n));
  });
}

orlz_status orlz_conjugate_eval(const orlz_orlicz* f, double s, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = orlz::conjugate_value(f->f, s);
  });
}

orlz_status orlz_check_integral(const orlz_orlicz* f, double q,
                                int grid_points, char** report_json) {
  return guarded([&] {
    require(f && report_json, "null argument");
    orlz::GridSpec grid;
    if (grid_points > 0) grid.points = grid_points;
    *report_json =
        dup_string(orlz::to_json(orlz::check_integral_condition(f->f, q, grid))
                       .dump());
  });
}

orlz_status orlz_check_pointwise(const orlz_orlicz* f, double q,
                                 int grid_points, char** report_json) {
  return guarded([&] {
    require(f && report_json, "null argument");
    orlz::GridSpec grid;
    if (grid_points > 0) grid.points = grid_points;
    *report_json = dup_string(
        orlz::to_json(orlz::check_pointwise_condition(f->f, q, grid)).dump());
  });
}

orlz_status orlz_check_limits(const orlz_orlicz* f, double q,
                              char** report_json) {
  return guarded([&] {
    require(f && report_json, "null argument");
    *report_json =
        dup_string(orlz::to_json(orlz::check_limits(f->f, q)).dump());
  });
}

orlz_status orlz_equivalence(const orlz_orlicz* m, const orlz_orlicz* n,
                             double grid_lo, double grid_hi, int grid_points,
                             char** report_json) {
  return guarded([&] {
    require(m && n && report_json, "null argument");
    if (grid_points <= 1) grid_points = 257;
    const auto grid = orlz::log_grid(grid_lo, grid_hi, grid_points);
    *report_json = dup_string(
        orlz::to_json(orlz::equivalence_constants(m->f, n->f, grid)).dump());
  });
}

orlz_status orlz_dist_from_json(const char* json, orlz_dist** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new orlz_dist{orlz::dist_from_json(nlohmann::json::parse(json))};
  });
}

orlz_status orlz_dist_to_json(const orlz_dist* d, char** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = dup_string(orlz::dist_to_json(d->d).dump());
  });
}

void orlz_dist_free(orlz_dist* d) { delete d; }

orlz_status orlz_dist_survival(const orlz_dist* d, double x, double* out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = d->d.survival(x);
  });
}

orlz_status orlz_dist_quantile(const orlz_dist* d, double u, double* out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = d->d.quantile(u);
  });
}

orlz_status orlz_dist_sample(const orlz_dist* d, uint64_t seed, size_t count,
                             double* out) {
  return guarded([&] {
    require(d && (out || count == 0), "null argument");
    d->d.sample(seed, std::span<double>(out, count));
  });
}

orlz_status orlz_dist_moment(const orlz_dist* d, double r, double a, double b,
                             double* out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = d->d.moment(r, a, b);
  });
}

orlz_status orlz_dist_from_orlicz(const orlz_orlicz* f, double p,
                                  orlz_dist** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = new orlz_dist{orlz::Distribution::from_orlicz(f->f, p)};
  });
}

orlz_status orlz_dist_from_orlicz_max(const orlz_orlicz* f, orlz_dist** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = new orlz_dist{orlz::Distribution::from_orlicz_max(f->f)};
  });
}

orlz_status orlz_orlicz_from_max(const orlz_dist* d, int grid_points,
                                 orlz_orlicz** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new orlz_orlicz{
        orlz::orlicz_from_max(d->d, grid_points > 0 ? grid_points : 512)};
  });
}

orlz_status orlz_orlicz_from_p_norm(const orlz_dist* d, double p,
                                    int grid_points, orlz_orlicz** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new orlz_orlicz{orlz::orlicz_from_p_norm(
        d->d, p, grid_points > 0 ? grid_points : 512)};
  });
}

orlz_status orlz_orlicz_from_q_power(const orlz_dist* d, double p, double q,
                                     int grid_points, orlz_orlicz** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new orlz_orlicz{orlz::orlicz_from_q_power(
        d->d, p, q, grid_points > 0 ? grid_points : 512)};
  });
}

orlz_status orlz_orlicz_from_general(const orlz_dist* d, const orlz_orlicz* n,
                                     int grid_points, orlz_orlicz** out) {
  return guarded([&] {
    require(d && n && out, "null argument");
    *out = new orlz_orlicz{orlz::orlicz_from_general_N(
        d->d, n->f, grid_points > 0 ? grid_points : 512)};
  });
}

orlz_status orlz_roundtrip_report(const orlz_orlicz* f, double p, int points,
                                  char** report_json) {
  return guarded([&] {
    require(f && report_json, "null argument");
    *report_json = dup_string(
        orlz::to_json(orlz::roundtrip_max_deviation(f->f, p,
                                                    points > 0 ? points : 256))
            .dump());
  });
}

orlz_status orlz_density_reconstruction_report(const orlz_dist* d, double p,
                                               int points,
                                               char** report_json) {
  return guarded([&] {
    require(d && report_json, "null argument");
    *report_json = dup_string(
        orlz::to_json(orlz::density_from_MXp(d->d, p, points > 0 ? points : 128))
            .dump());
  });
}

orlz_status orlz_verify_run(const char* config_json, char** report_json) {
  return guarded([&] {
    require(config_json && report_json, "null argument");
    const auto j = nlohmann::json::parse(config_json);
    const orlz::McConfig cfg = mc_config_from_json(j);
    orlz::RatioStabilityInputs in;
    in.theorem = j.at("theorem").get<std::string>();
    in.n_list = j.at("n_list").get<std::vector<int>>();
    in.p = json_p(j, "p", 2.0);
    in.q = j.value("q", 1.5);
    if (j.contains("dist")) in.d = orlz::dist_from_json(j.at("dist"));
    if (j.contains("orlicz")) in.M = orlz::orlicz_from_json(j.at("orlicz"));
    if (in.p != orlz::kInf && j.contains("q") && !(in.q < in.p))
      throw std::invalid_argument("config: need q < p");
    auto rep = orlz::ratio_stability(in, cfg);
    nlohmann::json out = orlz::to_json(rep);
    out["seed"] = cfg.seed;
    out["replicates"] = cfg.replicates;
    *report_json = dup_string(out.dump());
  });
}

orlz_status orlz_embed_run(const char* config_json, char** report_json) {
  return guarded([&] {
    require(config_json && report_json, "null argument");
    const auto j = nlohmann::json::parse(config_json);
    const orlz::McConfig cfg = mc_config_from_json(j);
    const auto M = orlz::orlicz_from_json(j.at("orlicz"));
    const double q = j.at("q").get<double>();
    const auto n_list = j.at("n_list").get<std::vector<int>>();
    const int per_n = j.value("matrices_per_n", 20);
    auto rep = orlz::distortion_sweep(M, q, n_list, per_n, cfg);
    nlohmann::json out = orlz::to_json(rep);
    out["seed"] = cfg.seed;
    out["replicates"] = cfg.replicates;
    *report_json = dup_string(out.dump());
  });
}

}  // extern "C"
