// orlz command-line front end. Talks to the core exclusively through the C
// API in orlz.h; config handling, CSV assembly and exit-code policy live
// here.
//
// Exit codes: 0 = success / checks passed, 1 = a check failed, 2 = input or
// precondition error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orlz.h"

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_input(const std::string& msg) {
  throw CliError(msg);
}

void check_status(orlz_status st, const char* what) {
  if (st != ORLZ_OK)
    fail_input(std::string(what) + ": " + orlz_last_error());
}

std::string take_string(char* s) {
  std::string out(s ? s : "");
  orlz_string_free(s);
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_input("cannot write " + path);
  out << content;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string doc;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) doc += ',';
    doc += header[i];
  }
  doc += '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) doc += ',';
      doc += format_double(row[i]);
    }
    doc += '\n';
  }
  write_file(path, doc);
}

// Config document plus flag overrides; flags win.
struct Config {
  json doc = json::object();

  bool has(const char* key) const { return doc.contains(key); }

  template <typename T>
  T get(const char* key, T fallback) const {
    return doc.value(key, fallback);
  }

  template <typename T>
  T require(const char* key) const {
    if (!doc.contains(key)) fail_input(std::string("missing config key: ") + key);
    try {
      return doc.at(key).get<T>();
    } catch (const json::exception&) {
      fail_input(std::string("bad config value for: ") + key);
    }
  }

  double get_p() const {
    if (!doc.contains("p")) return kInf;
    const auto& v = doc.at("p");
    if (v.is_string()) {
      if (v.get<std::string>() == "inf") return kInf;
      fail_input("bad p value");
    }
    return v.get<double>();
  }
};

// RAII handles.
struct OrliczHandle {
  orlz_orlicz* h = nullptr;
  ~OrliczHandle() { orlz_orlicz_free(h); }
};

struct DistHandle {
  orlz_dist* h = nullptr;
  ~DistHandle() { orlz_dist_free(h); }
};

json load_embedded_or_path(const Config& cfg, const char* key,
                           const char* path_key) {
  if (cfg.has(key)) return cfg.doc.at(key);
  if (cfg.has(path_key))
    return json::parse(read_file(cfg.doc.at(path_key).get<std::string>()));
  fail_input(std::string("missing ") + key + " (or " + path_key + ")");
}

void load_orlicz(const Config& cfg, OrliczHandle& out) {
  const json j = load_embedded_or_path(cfg, "orlicz", "orlicz_path");
  check_status(orlz_orlicz_from_json(j.dump().c_str(), &out.h), "orlicz");
  if (cfg.get("normalize", false)) {
    OrliczHandle norm;
    check_status(
        orlz_normalize_linearize(out.h, cfg.get("strict", false) ? 1 : 0,
                                 &norm.h),
        "normalize");
    std::swap(out.h, norm.h);
  }
}

void load_dist(const Config& cfg, DistHandle& out) {
  const json j = load_embedded_or_path(cfg, "dist", "dist_path");
  check_status(orlz_dist_from_json(j.dump().c_str(), &out.h), "dist");
}

void require_seed(const Config& cfg) {
  if (!cfg.has("seed")) fail_input("seed is required for Monte Carlo runs");
}

void validate_pq(const Config& cfg) {
  if (cfg.has("q")) {
    const double q = cfg.doc.at("q").get<double>();
    if (!(q > 1.0)) fail_input("need q > 1");
    const double p = cfg.get_p();
    if (cfg.has("p") && !(q < p)) fail_input("need 1 < q < p <= inf");
  }
}

json mc_section(const Config& cfg) {
  json j;
  j["seed"] = cfg.require<std::uint64_t>("seed");
  j["replicates"] = cfg.get<std::int64_t>("replicates", 100000);
  j["aggregation"] = cfg.get<std::string>("aggregation", "auto");
  j["blocks"] = cfg.get<int>("blocks", 10);
  j["workers"] = cfg.get<int>("workers", 1);
  return j;
}

void emit_json(const Config& cfg, const json& payload) {
  const std::string text = payload.dump(2) + "\n";
  if (cfg.has("out_json"))
    write_file(cfg.doc.at("out_json").get<std::string>(), text);
  else
    std::cout << text;
}

int run_norm(const Config& cfg) {
  OrliczHandle f;
  load_orlicz(cfg, f);
  const auto x = cfg.require<std::vector<double>>("x");
  double value = 0.0;
  check_status(orlz_luxemburg_norm(f.h, x.data(), x.size(), &value), "norm");
  std::cout << format_double(value) << "\n";
  return 0;
}

int run_make_dist(const Config& cfg) {
  OrliczHandle f;
  load_orlicz(cfg, f);
  DistHandle d;
  const std::string map = cfg.get<std::string>("map", "density");
  if (map == "max") {
    check_status(orlz_dist_from_orlicz_max(f.h, &d.h), "make-dist");
  } else if (map == "density") {
    check_status(orlz_dist_from_orlicz(f.h, cfg.get_p(), &d.h), "make-dist");
  } else {
    fail_input("make-dist map must be 'density' or 'max'");
  }

  char* spec_c = nullptr;
  check_status(orlz_dist_to_json(d.h, &spec_c), "make-dist spec");
  const json spec = json::parse(take_string(spec_c));
  emit_json(cfg, spec);

  if (cfg.has("out_csv")) {
    double lo = 0.0, mid = 0.0, hi = 0.0;
    check_status(orlz_dist_quantile(d.h, 0.0, &lo), "quantile");
    check_status(orlz_dist_quantile(d.h, 0.5, &mid), "quantile");
    check_status(orlz_dist_quantile(d.h, 0.9995, &hi), "quantile");
    const double glo = lo > 0.0 ? lo : std::max(mid * 1e-4, 1e-12);
    const int pts = cfg.get<int>("grid_points", 257);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < pts; ++i) {
      const double x =
          glo * std::pow(hi / glo, static_cast<double>(i) / (pts - 1));
      double s = 0.0;
      check_status(orlz_dist_survival(d.h, x, &s), "survival");
      rows.push_back({x, s});
    }
    write_csv(cfg.doc.at("out_csv").get<std::string>(), {"x", "S"}, rows);
  }

  if (cfg.get<std::int64_t>("samples", 0) > 0) {
    require_seed(cfg);
    const auto n = cfg.require<std::int64_t>("samples");
    std::vector<double> buf(static_cast<size_t>(n));
    check_status(orlz_dist_sample(d.h, cfg.require<std::uint64_t>("seed"),
                                  buf.size(), buf.data()),
                 "sample");
    std::vector<std::vector<double>> rows;
    rows.reserve(buf.size());
    for (double v : buf) rows.push_back({v});
    write_csv(cfg.require<std::string>("samples_csv"), {"x"}, rows);
  }
  return 0;
}

int run_make_orlicz(const Config& cfg) {
  DistHandle d;
  load_dist(cfg, d);
  validate_pq(cfg);
  OrliczHandle f;
  const std::string map = cfg.get<std::string>("map", "max");
  const int grid_points = cfg.get<int>("grid_points", 512);
  if (map == "max") {
    check_status(orlz_orlicz_from_max(d.h, grid_points, &f.h), "make-orlicz");
  } else if (map == "pnorm") {
    check_status(orlz_orlicz_from_p_norm(d.h, cfg.get_p(), grid_points, &f.h),
                 "make-orlicz");
  } else if (map == "qpower") {
    check_status(orlz_orlicz_from_q_power(d.h, cfg.get_p(),
                                          cfg.require<double>("q"),
                                          grid_points, &f.h),
                 "make-orlicz");
  } else if (map == "general") {
    OrliczHandle n;
    load_orlicz(cfg, n);
    check_status(orlz_orlicz_from_general(d.h, n.h, grid_points, &f.h),
                 "make-orlicz");
  } else {
    fail_input("make-orlicz map must be max|pnorm|qpower|general");
  }

  char* doc_c = nullptr;
  check_status(orlz_orlicz_to_json(f.h, &doc_c), "orlicz json");
  emit_json(cfg, json::parse(take_string(doc_c)));

  if (cfg.has("out_csv")) {
    double m_inv1 = 0.0;
    check_status(orlz_orlicz_inverse(f.h, 1.0, &m_inv1), "inverse");
    const int pts = cfg.get<int>("csv_points", 257);
    const double glo = m_inv1 * 1e-3, ghi = m_inv1 * 4.0;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < pts; ++i) {
      const double s =
          glo * std::pow(ghi / glo, static_cast<double>(i) / (pts - 1));
      double m = 0.0;
      check_status(orlz_orlicz_eval(f.h, s, &m), "eval");
      rows.push_back({s, m});
    }
    write_csv(cfg.doc.at("out_csv").get<std::string>(), {"s", "M"}, rows);
  }
  return 0;
}

int run_conditions(const Config& cfg) {
  OrliczHandle f;
  load_orlicz(cfg, f);
  const double q = cfg.require<double>("q");
  const int grid_points = cfg.get<int>("grid_points", 512);
  char* s1 = nullptr;
  char* s2 = nullptr;
  char* s3 = nullptr;
  check_status(orlz_check_integral(f.h, q, grid_points, &s1), "conditions");
  check_status(orlz_check_pointwise(f.h, q, grid_points, &s2), "conditions");
  check_status(orlz_check_limits(f.h, q, &s3), "conditions");
  json out;
  out["integral"] = json::parse(take_string(s1));
  out["pointwise"] = json::parse(take_string(s2));
  out["limits"] = json::parse(take_string(s3));
  const bool pass = out["integral"]["pass"].get<bool>() &&
                    out["pointwise"]["pass"].get<bool>();
  out["pass"] = pass;
  emit_json(cfg, out);
  return pass ? 0 : 1;
}

int run_verify(const Config& cfg) {
  require_seed(cfg);
  validate_pq(cfg);
  json req = mc_section(cfg);
  req["theorem"] = cfg.require<std::string>("theorem");
  req["n_list"] = cfg.require<std::vector<int>>("n");
  if (cfg.has("p")) req["p"] = cfg.doc.at("p");
  if (cfg.has("q")) req["q"] = cfg.doc.at("q");
  if (cfg.has("dist") || cfg.has("dist_path"))
    req["dist"] = load_embedded_or_path(cfg, "dist", "dist_path");
  if (cfg.has("orlicz") || cfg.has("orlicz_path")) {
    json j = load_embedded_or_path(cfg, "orlicz", "orlicz_path");
    if (cfg.get("normalize", false)) {
      OrliczHandle raw, norm;
      check_status(orlz_orlicz_from_json(j.dump().c_str(), &raw.h), "orlicz");
      check_status(orlz_normalize_linearize(
                       raw.h, cfg.get("strict", false) ? 1 : 0, &norm.h),
                   "normalize");
      char* doc = nullptr;
      check_status(orlz_orlicz_to_json(norm.h, &doc), "orlicz json");
      j = json::parse(take_string(doc));
    }
    req["orlicz"] = j;
  }

  char* rep_c = nullptr;
  check_status(orlz_verify_run(req.dump().c_str(), &rep_c), "verify");
  json rep = json::parse(take_string(rep_c));
  const double bound = cfg.get<double>("spread_bound", 0.0);
  const double spread = rep.at("spread").get<double>();
  const bool pass = bound <= 0.0 || spread <= bound;
  rep["spread_bound"] = bound;
  rep["pass"] = pass;
  emit_json(cfg, rep);

  if (cfg.has("out_csv")) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : rep.at("rows"))
      rows.push_back({static_cast<double>(r.at("n").get<int>()),
                      r.at("estimate").get<double>(),
                      r.at("dispersion").get<double>(),
                      r.at("predicted").get<double>(),
                      r.at("ratio").get<double>()});
    write_csv(cfg.doc.at("out_csv").get<std::string>(),
              {"n", "estimate", "dispersion", "predicted", "ratio"}, rows);
  }
  return pass ? 0 : 1;
}

int run_roundtrip(const Config& cfg) {
  const std::string lemma = cfg.get<std::string>("lemma", "mtom");
  char* rep_c = nullptr;
  double tol;
  if (lemma == "mtom") {
    OrliczHandle f;
    load_orlicz(cfg, f);
    tol = cfg.get<double>("tolerance", 1e-4);
    check_status(orlz_roundtrip_report(f.h, cfg.get_p(),
                                       cfg.get<int>("grid_points", 256),
                                       &rep_c),
                 "roundtrip");
  } else if (lemma == "density") {
    DistHandle d;
    load_dist(cfg, d);
    tol = cfg.get<double>("tolerance", 1e-6);
    check_status(orlz_density_reconstruction_report(
                     d.h, cfg.get_p(), cfg.get<int>("grid_points", 128),
                     &rep_c),
                 "roundtrip");
  } else {
    fail_input("roundtrip lemma must be 'mtom' or 'density'");
  }
  json rep = json::parse(take_string(rep_c));
  const double dev = rep.contains("max_rel_dev")
                         ? rep.at("max_rel_dev").get<double>()
                         : rep.at("max_rel_err").get<double>();
  const bool pass = dev <= tol;
  rep["tolerance"] = tol;
  rep["pass"] = pass;
  emit_json(cfg, rep);
  return pass ? 0 : 1;
}

int run_embed(const Config& cfg) {
  require_seed(cfg);
  json req = mc_section(cfg);
  req["orlicz"] = load_embedded_or_path(cfg, "orlicz", "orlicz_path");
  if (cfg.get("normalize", false)) {
    OrliczHandle raw, norm;
    check_status(
        orlz_orlicz_from_json(req["orlicz"].dump().c_str(), &raw.h), "orlicz");
    check_status(orlz_normalize_linearize(
                     raw.h, cfg.get("strict", false) ? 1 : 0, &norm.h),
                 "normalize");
    char* doc = nullptr;
    check_status(orlz_orlicz_to_json(norm.h, &doc), "orlicz json");
    req["orlicz"] = json::parse(take_string(doc));
  }
  req["q"] = cfg.require<double>("q");
  req["n_list"] = cfg.require<std::vector<int>>("n");
  req["matrices_per_n"] = cfg.get<int>("matrices_per_n", 20);

  char* rep_c = nullptr;
  check_status(orlz_embed_run(req.dump().c_str(), &rep_c), "embed");
  json rep = json::parse(take_string(rep_c));
  const double bound = cfg.get<double>("stability_bound", 0.0);
  const double stability = rep.at("cross_n_stability").get<double>();
  const bool pass = bound <= 0.0 || stability <= bound;
  rep["stability_bound"] = bound;
  rep["pass"] = pass;
  emit_json(cfg, rep);

  if (cfg.has("out_csv")) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : rep.at("per_n"))
      rows.push_back({static_cast<double>(r.at("n").get<int>()),
                      r.at("min_ratio").get<double>(),
                      r.at("max_ratio").get<double>(),
                      r.at("proxy").get<double>()});
    write_csv(cfg.doc.at("out_csv").get<std::string>(),
              {"n", "min_ratio", "max_ratio", "proxy"}, rows);
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Orlicz norms, generating distributions, and Monte Carlo checks of "
      "their norm equivalences"};
  app.require_subcommand(1);

  std::string config_path;
  std::string emit_config_path;

  // Flag values mirrored into the config document; flags override the file.
  std::vector<std::pair<std::string, json>> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config document");
    sub->add_option("--emit-config", emit_config_path,
                    "write the fully resolved config to this path");
    auto opt_str = [&, sub](const char* flag, const char* key) {
      sub->add_option_function<std::string>(
          flag, [&overrides, key](const std::string& v) {
            overrides.emplace_back(key, v);
          });
    };
    auto opt_num = [&, sub](const char* flag, const char* key) {
      sub->add_option_function<double>(
          flag, [&overrides, key](double v) { overrides.emplace_back(key, v); });
    };
    auto opt_int = [&, sub](const char* flag, const char* key) {
      sub->add_option_function<std::int64_t>(
          flag,
          [&overrides, key](std::int64_t v) { overrides.emplace_back(key, v); });
    };
    opt_str("--orlicz-path", "orlicz_path");
    opt_str("--dist-path", "dist_path");
    opt_str("--orlicz-json", "orlicz_inline");
    opt_str("--dist-json", "dist_inline");
    opt_str("--map", "map");
    opt_str("--theorem", "theorem");
    opt_str("--lemma", "lemma");
    opt_str("--aggregation", "aggregation");
    opt_str("--out-json", "out_json");
    opt_str("--out-csv", "out_csv");
    opt_str("--samples-csv", "samples_csv");
    opt_str("--p", "p_raw");
    opt_num("--q", "q");
    opt_num("--power", "power");
    opt_num("--spread-bound", "spread_bound");
    opt_num("--stability-bound", "stability_bound");
    opt_num("--tolerance", "tolerance");
    opt_int("--seed", "seed");
    opt_int("--replicates", "replicates");
    opt_int("--blocks", "blocks");
    opt_int("--workers", "workers");
    opt_int("--grid-points", "grid_points");
    opt_int("--matrices-per-n", "matrices_per_n");
    opt_int("--samples", "samples");
    sub->add_option_function<std::string>(
        "--x", [&overrides](const std::string& v) {
          json arr = json::array();
          std::stringstream ss(v);
          std::string tok;
          while (std::getline(ss, tok, ','))
            arr.push_back(std::strtod(tok.c_str(), nullptr));
          overrides.emplace_back("x", arr);
        },
        "comma-separated vector entries");
    sub->add_option_function<std::string>(
        "--n", [&overrides](const std::string& v) {
          json arr = json::array();
          std::stringstream ss(v);
          std::string tok;
          while (std::getline(ss, tok, ','))
            arr.push_back(static_cast<int>(std::strtol(tok.c_str(), nullptr, 10)));
          overrides.emplace_back("n", arr);
        },
        "comma-separated dimension sweep");
    sub->add_flag_function("--normalize", [&overrides](std::int64_t) {
      overrides.emplace_back("normalize", true);
    });
    sub->add_flag_function("--strict", [&overrides](std::int64_t) {
      overrides.emplace_back("strict", true);
    });
  };

  auto* c_norm = app.add_subcommand("norm", "Luxemburg norm of a vector");
  auto* c_mkdist =
      app.add_subcommand("make-dist", "distribution generated by an Orlicz "
                                      "function (spec + survival table)");
  auto* c_mkorl = app.add_subcommand(
      "make-orlicz", "Orlicz function generated by a distribution (grid CSV)");
  auto* c_cond =
      app.add_subcommand("conditions", "integral/pointwise/limit reports");
  auto* c_verify =
      app.add_subcommand("verify", "ratio-stability Monte Carlo run");
  auto* c_round =
      app.add_subcommand("roundtrip", "rebuild-and-compare deviation reports");
  auto* c_embed = app.add_subcommand("embed", "L1-embedding distortion sweep");
  for (auto* sub :
       {c_norm, c_mkdist, c_mkorl, c_cond, c_verify, c_round, c_embed})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg;
    if (!config_path.empty()) cfg.doc = json::parse(read_file(config_path));
    for (auto& [key, value] : overrides) {
      if (key == "p_raw") {
        const std::string s = value.get<std::string>();
        if (s == "inf")
          cfg.doc["p"] = "inf";
        else
          cfg.doc["p"] = std::strtod(s.c_str(), nullptr);
      } else if (key == "orlicz_inline") {
        cfg.doc["orlicz"] = json::parse(value.get<std::string>());
      } else if (key == "dist_inline") {
        cfg.doc["dist"] = json::parse(value.get<std::string>());
      } else {
        cfg.doc[key] = value;
      }
    }
    if (cfg.has("power")) {
      // Shorthand for a pure power function.
      json f;
      f["branches"] = json::array({json{{"kind", "power"},
                                        {"domain", {0.0, nullptr}},
                                        {"terms",
                                         {{{"coef", 1.0},
                                           {"exp", cfg.doc.at("power")}}}}}});
      f["kink"] = nullptr;
      f["flags"] = {{"normalized", false},
                    {"linear_tail", false},
                    {"smoothness", "smooth"}};
      cfg.doc["orlicz"] = f;
    }
    if (!emit_config_path.empty())
      write_file(emit_config_path, cfg.doc.dump(2) + "\n");

    if (app.got_subcommand(c_norm)) return run_norm(cfg);
    if (app.got_subcommand(c_mkdist)) return run_make_dist(cfg);
    if (app.got_subcommand(c_mkorl)) return run_make_orlicz(cfg);
    if (app.got_subcommand(c_cond)) return run_conditions(cfg);
    if (app.got_subcommand(c_verify)) return run_verify(cfg);
    if (app.got_subcommand(c_round)) return run_roundtrip(cfg);
    if (app.got_subcommand(c_embed)) return run_embed(cfg);
    fail_input("no subcommand");
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
