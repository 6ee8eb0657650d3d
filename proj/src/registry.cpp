#include "netalign/registry.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "netalign/consistency.hpp"
#include "netalign/embedding.hpp"
#include "netalign/ot.hpp"

namespace netalign {
namespace {

const std::vector<std::string>& names() {
  static const std::vector<std::string> v = {"isorank", "final",       "regal",
                                             "rwr-align", "parrot-lite", "gw-align"};
  return v;
}

ParamMap consistency_defaults() {
  return {{"alpha", "0.5"}, {"tol", "1e-8"}, {"max_iter", "500"}};
}

ParamMap ot_defaults() {
  return {{"epsilon", "0.01"},       {"prox_gamma", "0.01"},
          {"outer_iters", "50"},     {"sinkhorn_iters", "500"},
          {"sinkhorn_tol", "1e-9"},  {"outer_tol", "1e-9"},
          {"anchor_bonus", "1"},     {"restart_prob", "0.15"},
          {"rwr_tol", "1e-9"},       {"rwr_max_iter", "500"}};
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("parameter '" + key + "': '" + value +
                                "' is not a number");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long x = std::stol(value, &pos);
    if (pos != value.size() || x < std::numeric_limits<int>::min() ||
        x > std::numeric_limits<int>::max())
      throw std::invalid_argument(value);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw std::invalid_argument("parameter '" + key + "': '" + value +
                                "' is not an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    // stoull would wrap "-1" around instead of rejecting it
    if (value.empty() || value[0] == '-') throw std::invalid_argument(value);
    std::size_t pos = 0;
    unsigned long long x = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw std::invalid_argument("parameter '" + key + "': '" + value +
                                "' is not a non-negative integer");
  }
}

ConsistencyConfig consistency_config_from(const ParamMap& p,
                                          Normalization norm) {
  ConsistencyConfig cfg;
  cfg.alpha = parse_double("alpha", p.at("alpha"));
  cfg.tol = parse_double("tol", p.at("tol"));
  cfg.max_iter = parse_int("max_iter", p.at("max_iter"));
  cfg.normalization = norm;
  return cfg;
}

RWRConfig rwr_config_from(const ParamMap& p) {
  RWRConfig cfg;
  cfg.restart_prob = parse_double("restart_prob", p.at("restart_prob"));
  cfg.tol = parse_double("tol", p.count("tol") ? p.at("tol") : p.at("rwr_tol"));
  cfg.max_iter =
      parse_int("max_iter", p.count("max_iter") ? p.at("max_iter") : p.at("rwr_max_iter"));
  return cfg;
}

OTConfig ot_config_from(const ParamMap& p) {
  OTConfig cfg;
  cfg.epsilon = parse_double("epsilon", p.at("epsilon"));
  cfg.prox_gamma = parse_double("prox_gamma", p.at("prox_gamma"));
  cfg.outer_iters = parse_int("outer_iters", p.at("outer_iters"));
  cfg.sinkhorn_iters = parse_int("sinkhorn_iters", p.at("sinkhorn_iters"));
  cfg.sinkhorn_tol = parse_double("sinkhorn_tol", p.at("sinkhorn_tol"));
  cfg.outer_tol = parse_double("outer_tol", p.at("outer_tol"));
  cfg.anchor_bonus = parse_double("anchor_bonus", p.at("anchor_bonus"));
  if (p.count("hops")) cfg.hops = parse_int("hops", p.at("hops"));
  // only the walk-based cost consumes these, so they are absent for gw-align
  if (p.count("restart_prob"))
    cfg.rwr.restart_prob = parse_double("restart_prob", p.at("restart_prob"));
  if (p.count("rwr_tol")) cfg.rwr.tol = parse_double("rwr_tol", p.at("rwr_tol"));
  if (p.count("rwr_max_iter"))
    cfg.rwr.max_iter = parse_int("rwr_max_iter", p.at("rwr_max_iter"));
  return cfg;
}

}  // namespace

std::vector<std::string> algorithm_names() { return names(); }

bool is_algorithm(const std::string& name) {
  for (const auto& n : names())
    if (n == name) return true;
  return false;
}

ParamMap default_params(const std::string& algo) {
  if (algo == "isorank" || algo == "final") return consistency_defaults();
  if (algo == "regal")
    return {{"num_layers", "2"},
            {"discount", "0.1"},
            {"num_landmarks", "0"},
            {"attr_weight", "1"},
            {"seed", "0"}};
  if (algo == "rwr-align")
    return {{"restart_prob", "0.15"}, {"tol", "1e-9"}, {"max_iter", "500"}};
  if (algo == "parrot-lite") return ot_defaults();
  if (algo == "gw-align") {
    ParamMap p = ot_defaults();
    p.erase("restart_prob");
    p.erase("rwr_tol");
    p.erase("rwr_max_iter");
    p["hops"] = "2";
    // the structure matrices are normalized to [0,1], and against that scale
    // the shared default smoothing is too strong for the plan to ever commit
    // to a vertex; structure-only alignment needs the tighter setting
    p["epsilon"] = "0.001";
    p["prox_gamma"] = "0.001";
    return p;
  }
  throw std::invalid_argument("unknown algorithm '" + algo + "'");
}

ParamMap resolved_params(const std::string& algo, const ParamMap& overrides) {
  ParamMap p = default_params(algo);
  for (const auto& [key, value] : overrides) {
    auto it = p.find(key);
    if (it == p.end())
      throw std::invalid_argument("algorithm '" + algo +
                                  "' has no parameter '" + key + "'");
    it->second = value;
  }
  return p;
}

AlignResult run_algo(const std::string& algo, const AlignmentTask& task,
                     const ParamMap& overrides) {
  ParamMap p = resolved_params(algo, overrides);
  if (algo == "isorank")
    return isorank_align(
        task, consistency_config_from(p, Normalization::row_stochastic));
  if (algo == "final")
    return final_align(task,
                       consistency_config_from(p, Normalization::symmetric));
  if (algo == "regal") {
    XNetMFConfig cfg;
    cfg.num_layers = parse_int("num_layers", p.at("num_layers"));
    cfg.discount = parse_double("discount", p.at("discount"));
    cfg.num_landmarks = parse_int("num_landmarks", p.at("num_landmarks"));
    cfg.attr_weight = parse_double("attr_weight", p.at("attr_weight"));
    cfg.seed = parse_u64("seed", p.at("seed"));
    return regal_align(task, cfg);
  }
  if (algo == "rwr-align") return rwr_align(task, rwr_config_from(p));
  if (algo == "parrot-lite") return parrot_lite_align(task, ot_config_from(p));
  if (algo == "gw-align") return gw_align(task, ot_config_from(p));
  throw std::invalid_argument("unknown algorithm '" + algo + "'");
}

}  // namespace netalign
