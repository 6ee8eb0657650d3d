#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netalign/evaluation.hpp"
#include "netalign/registry.hpp"
#include "netalign/splits_io.hpp"
#include "netalign/synthesis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netalign;

namespace {

// Bad flag values and shapes exit with 2; everything that goes wrong after
// the command line is understood (unreadable data, library validation) is a
// runtime failure and exits with 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

ParamMap collect_params(const std::string& config_path,
                        const std::vector<std::string>& kvs) {
  ParamMap out;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file " + config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw std::runtime_error(config_path + ": " + e.what());
    }
    if (!j.is_object())
      throw std::runtime_error(config_path + ": top level must be an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string())
        out[key] = value.get<std::string>();
      else if (value.is_number_integer())
        out[key] = std::to_string(value.get<long long>());
      else if (value.is_number_unsigned())
        out[key] = std::to_string(value.get<unsigned long long>());
      else if (value.is_number_float())
        out[key] = format_double(value.get<double>());
      else
        throw std::runtime_error(config_path + ": value of '" + key +
                                 "' must be a number or string");
    }
  }
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("--param expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

std::optional<Direction> direction_from(const std::string& s) {
  if (s == "avg") return std::nullopt;
  if (s == "l2r") return Direction::l2r;
  if (s == "r2l") return Direction::r2l;
  throw UsageError("direction must be avg, l2r, or r2l");
}

std::vector<int> parse_int_list(const std::string& csv, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    int k = 0;
    try {
      k = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != item.size() || k < 1)
      throw UsageError(flag + " expects positive integers, got '" + item + "'");
    out.push_back(k);
  }
  if (out.empty()) throw UsageError(flag + " must name at least one value");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long long s = 0;
    try {
      if (!item.empty() && item[0] == '-') throw std::invalid_argument(item);
      s = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != item.size())
      throw UsageError("--seeds expects non-negative integers, got '" + item +
                       "'");
    out.push_back(s);
  }
  if (out.empty()) throw UsageError("--seeds must name at least one value");
  return out;
}

std::string default_results_path() {
  const char* env = std::getenv("NA_RESULTS_DIR");
  if (env && *env) return (fs::path(env) / "results.jsonl").string();
  return "results.jsonl";
}

std::string dataset_label(const Dataset& ds, const std::string& dir) {
  if (ds.meta.contains("name") && ds.meta.at("name").is_string()) {
    std::string n = ds.meta.at("name").get<std::string>();
    if (!n.empty()) return n;
  }
  return fs::path(dir).filename().string();
}

bool has_corrupted_supervision(const json& meta) {
  return meta.contains("noise") && meta.at("noise").is_object() &&
         meta.at("noise").value("kind", "") == "supervision";
}

// MemAvailable in bytes, or 0 when unreadable.
std::uint64_t mem_available_bytes() {
  std::ifstream in("/proc/meminfo");
  std::string key;
  std::uint64_t kb = 0;
  while (in >> key >> kb) {
    if (key == "MemAvailable:") return kb * 1024;
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
  }
  return 0;
}

struct RunOutcome {
  RunRecord record;
  AlignResult result;
};

RunOutcome execute(const std::string& algo, const AlignmentTask& task,
                   const ParamMap& overrides, const std::vector<int>& ks,
                   const std::string& direction, const std::string& dataset) {
  if (task.test_pairs.empty())
    throw std::runtime_error("split has no test pairs to evaluate");
  RunOutcome out;
  Telemetry tel = run_with_telemetry(
      [&] { out.result = run_algo(algo, task, overrides); });
  std::optional<Direction> dir = direction_from(direction);
  out.record.algo = algo;
  out.record.dataset = dataset;
  out.record.seed = task.seed;
  out.record.train_ratio = task.train_ratio;
  out.record.params = resolved_params(algo, overrides);
  for (int k : ks)
    out.record.hits[k] = hits_at_k(out.result.scores, task.test_pairs, k, dir);
  out.record.mrr = mrr(out.result.scores, task.test_pairs, dir);
  out.record.direction = direction;
  out.record.time_s = tel.time_s;
  out.record.peak_mem_bytes = tel.peak_mem_bytes;
  out.record.converged = out.result.converged;
  out.record.iterations = out.result.iterations;
  return out;
}

void print_record(const RunRecord& r) {
  std::cout << run_record_to_json(r).dump(2) << "\n";
}

json mean_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {{"mean", mean}, {"std", std::sqrt(std::max(var, 0.0))}};
}

constexpr std::int64_t kDenseCellCap = std::int64_t{1} << 28;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairwise network alignment toolkit"};
  app.require_subcommand(1);
  const std::vector<std::string> algos = algorithm_names();

  // ---- synth ----
  CLI::App* synth = app.add_subcommand("synth", "generate graphs and pairs");
  synth->require_subcommand(1);

  int er_n = 0;
  double er_deg = 0.0;
  std::uint64_t er_seed = 0;
  std::string er_out, er_name;
  CLI::App* synth_er = synth->add_subcommand("er", "one random graph");
  synth_er->add_option("--nodes", er_n, "node count")->required();
  synth_er->add_option("--avg-degree", er_deg, "expected average degree")->required();
  synth_er->add_option("--seed", er_seed, "generator seed");
  synth_er->add_option("--out", er_out, "output directory")->required();
  synth_er->add_option("--name", er_name, "graph name");

  int pr_n = 0;
  double pr_deg = 0.0, pr_ins = 0.0, pr_del = 0.0;
  std::uint64_t pr_seed = 0;
  std::string pr_base, pr_out, pr_name;
  CLI::App* synth_pair =
      synth->add_subcommand("pair", "aligned pair from one base graph");
  CLI::Option* opt_base =
      synth_pair->add_option("--base", pr_base, "base graph edge-list file");
  CLI::Option* opt_nodes =
      synth_pair->add_option("--nodes", pr_n, "node count of a generated base");
  synth_pair->add_option("--avg-degree", pr_deg, "expected average degree");
  opt_base->excludes(opt_nodes);
  synth_pair->add_option("--insert", pr_ins, "edges added to g1, fraction of |E|");
  synth_pair->add_option("--delete", pr_del, "edges removed from g2, fraction of |E|");
  synth_pair->add_option("--seed", pr_seed, "generator seed");
  synth_pair->add_option("--out", pr_out, "output directory")->required();
  synth_pair->add_option("--name", pr_name, "dataset name");

  // ---- split ----
  std::string sp_data, sp_out;
  double sp_ratio = 0.2;
  std::uint64_t sp_seed = 0;
  CLI::App* split_cmd = app.add_subcommand("split", "sample a train/test split");
  split_cmd->add_option("--data", sp_data, "dataset directory")->required();
  split_cmd->add_option("--train-ratio", sp_ratio, "train fraction of the truth");
  split_cmd->add_option("--seed", sp_seed, "sampling seed");
  split_cmd->add_option("--out", sp_out, "output file (default <data>/split.json)");

  // ---- noise ----
  std::string no_data, no_out, no_kind, no_graph = "2", no_mode = "split", no_split;
  double no_p = 0.0;
  std::uint64_t no_seed = 0;
  CLI::App* noise_cmd = app.add_subcommand("noise", "perturb a dataset");
  noise_cmd->add_option("--data", no_data, "dataset directory")->required();
  noise_cmd->add_option("--kind", no_kind, "edge, attr, or supervision")
      ->required()
      ->check(CLI::IsMember({"edge", "attr", "supervision"}));
  noise_cmd->add_option("--p", no_p, "noise level")->required();
  noise_cmd->add_option("--seed", no_seed, "noise seed");
  noise_cmd->add_option("--graph", no_graph, "side to perturb (edge/attr)")
      ->check(CLI::IsMember({"1", "2", "both"}));
  noise_cmd->add_option("--mode", no_mode, "edge noise mode")
      ->check(CLI::IsMember({"split", "add", "delete"}));
  noise_cmd->add_option("--split", no_split, "split file (supervision; default <data>/split.json)");
  noise_cmd->add_option("--out", no_out, "output directory")->required();

  // ---- run ----
  std::string rn_algo, rn_data, rn_split, rn_config, rn_out, rn_scores;
  std::string rn_direction = "avg", rn_ks = "1,10,30,50", rn_seeds;
  double rn_ratio = 0.2;
  std::uint64_t rn_seed = 0;
  int rn_topk = 0;
  std::vector<std::string> rn_params;
  CLI::App* run_cmd = app.add_subcommand("run", "align a pair and record metrics");
  run_cmd->add_option("--algo", rn_algo, "aligner name")
      ->required()
      ->check(CLI::IsMember(algos));
  run_cmd->add_option("--data", rn_data, "dataset directory")->required();
  CLI::Option* opt_split = run_cmd->add_option("--split", rn_split, "split file");
  run_cmd->add_option("--train-ratio", rn_ratio, "train fraction when sampling splits");
  CLI::Option* opt_seed =
      run_cmd->add_option("--seed", rn_seed, "sample one split with this seed");
  CLI::Option* opt_seeds = run_cmd->add_option(
      "--seeds", rn_seeds,
      "comma-separated split seeds; one record per seed plus a summary");
  opt_seeds->excludes(opt_seed);
  opt_seeds->excludes(opt_split);
  opt_seed->excludes(opt_split);
  run_cmd->add_option("--config", rn_config, "JSON file of parameter overrides");
  run_cmd->add_option("--param", rn_params, "override as key=value (repeatable)");
  run_cmd->add_option("--direction", rn_direction, "avg, l2r, or r2l")
      ->check(CLI::IsMember({"avg", "l2r", "r2l"}));
  run_cmd->add_option("--k", rn_ks, "comma-separated Hits@K cutoffs");
  run_cmd->add_option("--out", rn_out, "results file (default $NA_RESULTS_DIR/results.jsonl)");
  CLI::Option* opt_scores =
      run_cmd->add_option("--save-scores", rn_scores, "score file to write");
  CLI::Option* opt_topk = run_cmd->add_option(
      "--topk", rn_topk, "retained entries per row in the score file");
  opt_seeds->excludes(opt_scores);
  opt_seeds->excludes(opt_topk);

  // ---- eval ----
  std::string ev_scores, ev_data, ev_split, ev_algo = "external", ev_out;
  std::string ev_direction = "avg", ev_ks = "1,10,30,50";
  CLI::App* eval_cmd = app.add_subcommand("eval", "score a stored score file");
  eval_cmd->add_option("--scores", ev_scores, "score file")->required();
  eval_cmd->add_option("--data", ev_data, "dataset directory")->required();
  eval_cmd->add_option("--split", ev_split, "split file");
  eval_cmd->add_option("--direction", ev_direction, "avg, l2r, or r2l")
      ->check(CLI::IsMember({"avg", "l2r", "r2l"}));
  eval_cmd->add_option("--k", ev_ks, "comma-separated Hits@K cutoffs");
  eval_cmd->add_option("--algo", ev_algo, "label for the result record");
  eval_cmd->add_option("--out", ev_out, "append a result record here");

  // ---- bench ----
  std::string bn_algo = "isorank", bn_sizes = "10000,20000,40000", bn_out;
  double bn_deg = 10.0, bn_ratio = 0.2;
  std::uint64_t bn_seed = 0;
  std::vector<std::string> bn_params;
  CLI::App* bench_cmd = app.add_subcommand("bench", "scaling ladder on synthetic pairs");
  bench_cmd->add_option("--algo", bn_algo, "aligner name")->check(CLI::IsMember(algos));
  bench_cmd->add_option("--sizes", bn_sizes, "comma-separated node counts");
  bench_cmd->add_option("--avg-degree", bn_deg, "expected average degree");
  bench_cmd->add_option("--train-ratio", bn_ratio, "train fraction");
  bench_cmd->add_option("--seed", bn_seed, "generator and split seed");
  bench_cmd->add_option("--param", bn_params, "override as key=value (repeatable)");
  bench_cmd->add_option("--out", bn_out, "CSV output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth_er) {
      Graph g = gen_er(er_n, er_deg, er_seed);
      if (er_name.empty())
        er_name = "er-n" + std::to_string(er_n) + "-s" + std::to_string(er_seed);
      write_single_graph(er_out, g, er_name);
      std::cout << "wrote " << er_out << ": n=" << g.n
                << " edges=" << g.edges.size() << "\n";
    } else if (*synth_pair) {
      Graph base;
      json extra = {{"insert_frac", pr_ins},
                    {"delete_frac", pr_del},
                    {"seed", pr_seed}};
      if (!pr_base.empty()) {
        base = read_edge_file(pr_base);
        extra["generator"] = "file-pair";
        extra["base"] = fs::path(pr_base).filename().string();
        if (pr_name.empty())
          pr_name = "pair-" + fs::path(pr_base).stem().string() + "-s" +
                    std::to_string(pr_seed);
      } else {
        if (pr_n <= 0 || pr_deg < 0.0)
          throw UsageError(
              "synth pair needs either --base or --nodes with --avg-degree");
        base = gen_er(pr_n, pr_deg, pr_seed);
        extra["generator"] = "er-pair";
        extra["avg_degree"] = pr_deg;
        if (pr_name.empty())
          pr_name = "pair-n" + std::to_string(pr_n) + "-s" + std::to_string(pr_seed);
      }
      extra["n"] = base.n;
      PairResult pr = make_permuted_pair(base, pr_ins, pr_del, pr_seed);
      write_dataset(pr_out, pr.g1, pr.g2, pr.truth, pr_name, extra);
      std::cout << "wrote " << pr_out << ": n1=" << pr.g1.n << " n2=" << pr.g2.n
                << " edges1=" << pr.g1.edges.size()
                << " edges2=" << pr.g2.edges.size()
                << " truth=" << pr.truth.pairs.size() << "\n";
    } else if (*split_cmd) {
      Dataset ds = read_dataset(sp_data);
      SplitRecord rec = split_anchors(ds.truth, sp_ratio, sp_seed);
      if (sp_out.empty()) sp_out = (fs::path(sp_data) / "split.json").string();
      write_split(sp_out, rec);
      std::cout << "wrote " << sp_out << ": train=" << rec.train.size()
                << " test=" << rec.test.size() << "\n";
    } else if (*noise_cmd) {
      Dataset ds = read_dataset(no_data);
      json noise_meta = {{"kind", no_kind}, {"p", no_p}, {"seed", no_seed}};
      json meta = ds.meta.is_object() ? ds.meta : json::object();
      meta.erase("name");
      meta.erase("n1");
      meta.erase("n2");
      meta.erase("g1_attr_dim");
      meta.erase("g2_attr_dim");
      meta.erase("g1_edge_labels");
      meta.erase("g2_edge_labels");
      meta.erase("truth_size");
      std::string name = dataset_label(ds, no_data) + "-" + no_kind +
                         std::to_string(no_p);
      if (no_kind == "supervision") {
        fs::path split_path = no_split.empty()
                                  ? fs::path(no_data) / "split.json"
                                  : fs::path(no_split);
        if (!fs::exists(split_path))
          throw std::runtime_error(
              "supervision noise needs a split file; run `netalign split` "
              "first or pass --split");
        SplitRecord rec = read_split(split_path.string());
        AlignmentTask task = make_task(ds.g1, ds.g2, ds.truth, rec);
        AlignmentTask noisy = inject_supervision_noise(task, no_p, no_seed);
        meta["noise"] = noise_meta;
        write_dataset(no_out, noisy.g1, noisy.g2, noisy.truth, name, meta);
        SplitRecord out_rec;
        out_rec.seed = rec.seed;
        out_rec.train_ratio = rec.train_ratio;
        out_rec.train = noisy.train_anchors;
        out_rec.test = noisy.test_pairs;
        write_split((fs::path(no_out) / "split.json").string(), out_rec);
      } else {
        noise_meta["graph"] = no_graph;
        Graph g1 = ds.g1, g2 = ds.g2;
        auto apply = [&](const Graph& g) {
          if (no_kind == "edge") {
            EdgeNoiseMode mode = no_mode == "add"      ? EdgeNoiseMode::add_only
                                 : no_mode == "delete" ? EdgeNoiseMode::delete_only
                                                       : EdgeNoiseMode::split;
            return inject_edge_noise(g, no_p, no_seed, mode);
          }
          return inject_attr_noise(g, no_p, no_seed);
        };
        if (no_kind == "edge") noise_meta["mode"] = no_mode;
        if (no_graph == "1" || no_graph == "both") g1 = apply(ds.g1);
        if (no_graph == "2" || no_graph == "both") g2 = apply(ds.g2);
        meta["noise"] = noise_meta;
        write_dataset(no_out, g1, g2, ds.truth, name, meta);
        fs::path stored = fs::path(no_data) / "split.json";
        if (fs::exists(stored))
          fs::copy_file(stored, fs::path(no_out) / "split.json",
                        fs::copy_options::overwrite_existing);
      }
      std::cout << "wrote " << no_out << "\n";
    } else if (*run_cmd) {
      Dataset ds = read_dataset(rn_data);
      ParamMap overrides = collect_params(rn_config, rn_params);
      std::vector<int> ks = parse_int_list(rn_ks, "--k");
      std::string label = dataset_label(ds, rn_data);
      bool strict = !has_corrupted_supervision(ds.meta);
      std::string results = rn_out.empty() ? default_results_path() : rn_out;

      // Split source: an explicit file, an explicit sampling seed, a stored
      // split.json, and otherwise the 5-seed protocol.
      std::vector<std::uint64_t> seeds;
      bool multi = false;
      if (opt_seeds->count() > 0) {
        seeds = parse_seed_list(rn_seeds);
        multi = true;
      } else if (opt_seed->count() > 0) {
        seeds = {rn_seed};
      } else if (opt_split->count() == 0 &&
                 !fs::exists(fs::path(rn_data) / "split.json")) {
        seeds = {0, 1, 2, 3, 4};
        multi = true;
        std::cerr << "note: no stored split, averaging over seeds 0..4 at "
                     "train-ratio "
                  << rn_ratio << "\n";
      }

      if (seeds.empty()) {
        // single run against the stored or named split file
        SplitRecord rec = rn_split.empty()
                              ? read_split((fs::path(rn_data) / "split.json").string())
                              : read_split(rn_split);
        AlignmentTask task = make_task(ds.g1, ds.g2, ds.truth, rec, strict);
        RunOutcome out = execute(rn_algo, task, overrides, ks, rn_direction, label);
        if (!rn_scores.empty()) {
          std::int64_t cells = static_cast<std::int64_t>(task.g1.n) * task.g2.n;
          int k = rn_topk;
          if (k == 0 && cells > kDenseCellCap) {
            k = 100;
            std::cerr << "note: " << cells
                      << " cells exceed the dense cap, keeping top " << k
                      << " per row\n";
          }
          write_scores(rn_scores, out.result.scores, k);
          out.record.topk_truncated = k > 0;
        }
        append_result(results, out.record);
        print_record(out.record);
        std::cerr << "appended to " << results << "\n";
      } else {
        std::vector<RunRecord> recs;
        for (std::uint64_t seed : seeds) {
          SplitRecord rec = split_anchors(ds.truth, rn_ratio, seed);
          AlignmentTask task = make_task(ds.g1, ds.g2, ds.truth, rec, strict);
          RunOutcome out = execute(rn_algo, task, overrides, ks, rn_direction, label);
          if (!multi && !rn_scores.empty()) {
            std::int64_t cells = static_cast<std::int64_t>(task.g1.n) * task.g2.n;
            int k = rn_topk;
            if (k == 0 && cells > kDenseCellCap) {
              k = 100;
              std::cerr << "note: " << cells
                        << " cells exceed the dense cap, keeping top " << k
                        << " per row\n";
            }
            write_scores(rn_scores, out.result.scores, k);
            out.record.topk_truncated = k > 0;
          }
          append_result(results, out.record);
          print_record(out.record);
          recs.push_back(out.record);
        }
        std::cerr << "appended to " << results << "\n";
        if (multi) {
          std::vector<double> mrrs, times;
          for (const RunRecord& r : recs) {
            mrrs.push_back(r.mrr);
            times.push_back(r.time_s);
          }
          json hits = json::object();
          for (int k : ks) {
            std::vector<double> hs;
            for (const RunRecord& r : recs) hs.push_back(r.hits.at(k));
            hits[std::to_string(k)] = mean_std(hs);
          }
          json summary = {{"summary",
                           {{"algo", rn_algo},
                            {"dataset", label},
                            {"direction", rn_direction},
                            {"train_ratio", rn_ratio},
                            {"seeds", seeds},
                            {"runs", recs.size()},
                            {"mrr", mean_std(mrrs)},
                            {"hits", hits},
                            {"time_s", mean_std(times)}}}};
          std::cout << summary.dump(2) << "\n";
        }
      }
    } else if (*eval_cmd) {
      Dataset ds = read_dataset(ev_data);
      SplitRecord rec;
      if (!ev_split.empty()) {
        rec = read_split(ev_split);
      } else {
        fs::path stored = fs::path(ev_data) / "split.json";
        if (!fs::exists(stored))
          throw std::runtime_error("eval needs a split: none stored in " +
                                   ev_data + " and no --split given");
        rec = read_split(stored.string());
      }
      AlignmentTask task = make_task(ds.g1, ds.g2, ds.truth, rec,
                                     !has_corrupted_supervision(ds.meta));
      if (task.test_pairs.empty())
        throw std::runtime_error("split has no test pairs to evaluate");
      TopKScores scores = read_scores(ev_scores);
      if (scores.n1 != task.g1.n || scores.n2 != task.g2.n)
        throw std::runtime_error("score file shape does not match the dataset");
      std::optional<Direction> dir = direction_from(ev_direction);
      RunRecord r;
      r.algo = ev_algo;
      r.dataset = dataset_label(ds, ev_data);
      r.seed = rec.seed;
      r.train_ratio = rec.train_ratio;
      bool truncated = false;
      for (int k : parse_int_list(ev_ks, "--k")) {
        bool t = false;
        r.hits[k] = hits_at_k(scores, task.test_pairs, k, dir, &t);
        truncated = truncated || t;
      }
      bool t = false;
      r.mrr = mrr(scores, task.test_pairs, dir, &t);
      r.topk_truncated = truncated || t;
      r.direction = ev_direction;
      print_record(r);
      if (!ev_out.empty()) {
        append_result(ev_out, r);
        std::cerr << "appended to " << ev_out << "\n";
      }
    } else if (*bench_cmd) {
      ParamMap overrides = collect_params("", bn_params);
      std::vector<int> sizes = parse_int_list(bn_sizes, "--sizes");
      std::ofstream csv(bn_out);
      if (!csv) throw std::runtime_error("cannot open " + bn_out);
      csv << "n,edges,iterations,time_s,peak_mem_bytes,hits1,mrr,status\n";
      const double mem_factor = bn_algo == "gw-align" ? 6.0 : 2.2;
      for (int n : sizes) {
        std::string row;
        std::uint64_t need = static_cast<std::uint64_t>(
            mem_factor * 8.0 * n * n + (512ull << 20));
        std::uint64_t avail = mem_available_bytes();
        if (avail > 0 && need > avail) {
          row = std::to_string(n) + ",0,0,0,0,0,0,insufficient-memory";
          std::cerr << "n=" << n << ": needs ~" << (need >> 20)
                    << " MiB, available " << (avail >> 20) << " MiB; skipped\n";
        } else {
          try {
            Graph base = gen_er(n, bn_deg, bn_seed);
            PairResult pr = make_permuted_pair(base, 0.0, 0.0, bn_seed);
            SplitRecord rec = split_anchors(pr.truth, bn_ratio, bn_seed);
            AlignmentTask task = make_task(pr.g1, pr.g2, pr.truth, rec);
            std::size_t edges = pr.g1.edges.size();
            RunOutcome out = execute(bn_algo, task, overrides, {1}, "avg",
                                     "bench-n" + std::to_string(n));
            std::ostringstream os;
            os << n << "," << edges << "," << out.record.iterations << ","
               << format_double(out.record.time_s) << ","
               << out.record.peak_mem_bytes << ","
               << format_double(out.record.hits.at(1)) << ","
               << format_double(out.record.mrr) << ",ok";
            row = os.str();
          } catch (const std::bad_alloc&) {
            row = std::to_string(n) + ",0,0,0,0,0,0,oom";
            std::cerr << "n=" << n << ": allocation failed\n";
          }
        }
        csv << row << "\n";
        csv.flush();
        std::cout << row << "\n";
      }
      std::cerr << "wrote " << bn_out << "\n";
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
