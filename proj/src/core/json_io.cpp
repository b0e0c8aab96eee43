#include "json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace orlz {

using nlohmann::json;

namespace {

json domain_to_json(double lo, double hi) {
  json d = json::array();
  d.push_back(lo);
  if (hi == kInf)
    d.push_back(nullptr);
  else
    d.push_back(hi);
  return d;
}

double parse_hi(const json& j) {
  if (j.is_null()) return kInf;
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument("bad domain bound: " + j.get<std::string>());
  }
  return j.get<double>();
}

double parse_p(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument("bad p value: " + j.get<std::string>());
  }
  return j.get<double>();
}

json p_to_json(double p) {
  if (p == kInf) return "inf";
  return p;
}

}  // namespace

json orlicz_to_json(const OrliczFunction& f) {
  json branches = json::array();
  for (const auto& b : f.branches()) {
    json jb;
    jb["domain"] = domain_to_json(b.lo, b.hi);
    switch (b.kind) {
      case Branch::Kind::Power: {
        jb["kind"] = "power";
        json terms = json::array();
        for (const auto& t : b.terms)
          terms.push_back({{"coef", t.coef}, {"exp", t.exp}});
        jb["terms"] = terms;
        break;
      }
      case Branch::Kind::Affine:
        jb["kind"] = "affine";
        jb["a"] = b.a;
        jb["b"] = b.b;
        break;
      case Branch::Kind::Table:
        jb["kind"] = "table";
        jb["s"] = b.s;
        jb["m"] = b.m;
        break;
    }
    branches.push_back(jb);
  }
  json j;
  j["branches"] = branches;
  if (f.kink())
    j["kink"] = *f.kink();
  else
    j["kink"] = nullptr;
  j["flags"] = {{"normalized", f.flags().normalized},
                {"linear_tail", f.flags().linear_tail},
                {"smoothness", f.flags().smoothness}};
  return j;
}

OrliczFunction orlicz_from_json(const json& j) {
  if (!j.contains("branches") || !j["branches"].is_array() ||
      j["branches"].empty())
    throw std::invalid_argument("orlicz json: missing branches");
  std::vector<Branch> branches;
  for (const auto& jb : j["branches"]) {
    Branch b;
    const auto& dom = jb.at("domain");
    b.lo = dom.at(0).get<double>();
    b.hi = parse_hi(dom.at(1));
    const std::string kind = jb.at("kind").get<std::string>();
    if (kind == "power") {
      b.kind = Branch::Kind::Power;
      for (const auto& jt : jb.at("terms"))
        b.terms.push_back(
            {jt.at("coef").get<double>(), jt.at("exp").get<double>()});
    } else if (kind == "affine") {
      b.kind = Branch::Kind::Affine;
      b.a = jb.at("a").get<double>();
      b.b = jb.at("b").get<double>();
    } else if (kind == "table") {
      b.kind = Branch::Kind::Table;
      b.s = jb.at("s").get<std::vector<double>>();
      b.m = jb.at("m").get<std::vector<double>>();
    } else {
      throw std::invalid_argument("orlicz json: unknown branch kind " + kind);
    }
    branches.push_back(std::move(b));
  }
  std::optional<double> kink;
  if (j.contains("kink") && !j["kink"].is_null())
    kink = j["kink"].get<double>();
  OrliczFlags flags;
  if (j.contains("flags")) {
    const auto& jf = j["flags"];
    flags.normalized = jf.value("normalized", false);
    flags.linear_tail = jf.value("linear_tail", false);
    flags.smoothness = jf.value("smoothness", std::string{});
  }
  return OrliczFunction::from_branches(std::move(branches), kink, flags);
}

json dist_to_json(const Distribution& d) {
  json j;
  const std::string& kind = d.kind();
  j["kind"] = kind;
  if (kind == "pareto_q") {
    j["q"] = d.param_q();
  } else if (kind == "uniform") {
    j["lo"] = d.support_lo();
    j["hi"] = d.support_hi();
  } else if (kind == "constant") {
    j["value"] = d.param_value();
  } else if (kind == "custom_table") {
    j["x"] = d.table_x();
    j["s"] = d.table_s();
  } else if (kind == "from_orlicz" || kind == "from_orlicz_max") {
    if (kind == "from_orlicz") j["p"] = p_to_json(d.param_p());
    j["orlicz"] = orlicz_to_json(*d.source_orlicz());
  } else {
    throw std::invalid_argument("dist json: unknown kind " + kind);
  }
  return j;
}

Distribution dist_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "pareto_q") return Distribution::pareto(j.at("q").get<double>());
  if (kind == "uniform")
    return Distribution::uniform(j.value("lo", 0.0), j.value("hi", 1.0));
  if (kind == "constant")
    return Distribution::constant(j.at("value").get<double>());
  if (kind == "custom_table")
    return Distribution::custom_table(j.at("x").get<std::vector<double>>(),
                                      j.at("s").get<std::vector<double>>());
  if (kind == "from_orlicz")
    return Distribution::from_orlicz(orlicz_from_json(j.at("orlicz")),
                                     parse_p(j.at("p")));
  if (kind == "from_orlicz_max")
    return Distribution::from_orlicz_max(orlicz_from_json(j.at("orlicz")));
  throw std::invalid_argument("dist json: unknown kind " + kind);
}

json to_json(const ConditionReport& r) {
  json j;
  j["condition"] = r.condition;
  j["q"] = r.q;
  j["grid"] = {{"lo", r.grid_lo}, {"hi", r.grid_hi}, {"points", r.grid_points}};
  j["pass"] = r.pass;
  if (r.condition == "integral") {
    j["C"] = r.best_c_const == kInf ? json(nullptr) : json(r.best_c_const);
  } else {
    j["c"] = r.c;
    j["gamma"] = r.gamma == kInf ? json(nullptr) : json(r.gamma);
  }
  j["argmax"] = r.argmax;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

json to_json(const LimitsReport& r) {
  auto one = [](const LimitEstimate& e) {
    return json{{"value", e.value}, {"converged", e.converged}};
  };
  return json{{"m_over_tq", one(r.m_ratio)},
              {"d1_over_tq1", one(r.d1_ratio)},
              {"d2_over_tq2", one(r.d2_ratio)}};
}

json to_json(const DeviationReport& r) {
  return json{
      {"grid", {{"lo", r.grid_lo}, {"hi", r.grid_hi}, {"points", r.points}}},
      {"max_rel_dev", r.max_rel_dev},
      {"argmax", r.argmax}};
}

json to_json(const ReconstructionReport& r) {
  return json{
      {"grid", {{"lo", r.grid_lo}, {"hi", r.grid_hi}, {"points", r.points}}},
      {"max_rel_err", r.max_rel_err},
      {"argmax", r.argmax}};
}

json to_json(const EquivalenceResult& r) {
  json j;
  j["found"] = r.found;
  if (r.found) {
    j["a"] = r.a;
    j["b"] = r.b;
  }
  return j;
}

json to_json(const McEstimate& e) {
  return json{{"estimate", e.estimate},
              {"dispersion", e.dispersion},
              {"samples", e.samples},
              {"seed", e.seed},
              {"aggregation", e.aggregation}};
}

json to_json(const RatioReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"estimate", row.estimate},
                    {"dispersion", row.dispersion},
                    {"predicted", row.predicted},
                    {"ratio", row.ratio}});
  return json{{"theorem", r.theorem}, {"rows", rows}, {"spread", r.spread}};
}

json to_json(const DistortionReport& r) {
  json rows = json::array();
  for (const auto& row : r.per_n)
    rows.push_back({{"n", row.n},
                    {"min_ratio", row.min_ratio},
                    {"max_ratio", row.max_ratio},
                    {"proxy", row.max_ratio / row.min_ratio},
                    {"matrices", row.matrices}});
  return json{{"per_n", rows}, {"cross_n_stability", r.cross_n_stability}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  // Shortest representation that parses back exactly.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_document(const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace orlz
