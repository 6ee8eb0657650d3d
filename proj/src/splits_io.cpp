#include "netalign/splits_io.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "netalign/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace netalign {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void parse_fail(const std::string& file, int line,
                             const std::string& what) {
  throw ParseError(file + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

long parse_int(const std::string& tok, const std::string& file, int line) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (errno != 0 || end == tok.c_str() || *end != '\0')
    parse_fail(file, line, "expected integer, got '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, const std::string& file,
                    int line) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (errno != 0 || end == tok.c_str() || *end != '\0')
    parse_fail(file, line, "expected number, got '" + tok + "'");
  return v;
}

void write_edges_file(const std::string& path,
                      const std::vector<Edge>& edges) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  bool weighted = false;
  for (const auto& e : edges) weighted |= e.w != 1.0;
  for (const auto& e : edges) {
    out << e.u << '\t' << e.v;
    if (weighted) out << '\t' << fmt_double(e.w);
    out << '\n';
  }
}

std::vector<Edge> read_edges_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  bool saw_weight = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_fields(line, '\t');
    if (f.size() != 2 && f.size() != 3)
      parse_fail(path, lineno, "expected 2 or 3 tab-separated fields");
    Edge e;
    e.u = static_cast<int>(parse_int(f[0], path, lineno));
    e.v = static_cast<int>(parse_int(f[1], path, lineno));
    if (f.size() == 3) {
      e.w = parse_double(f[2], path, lineno);
      saw_weight = true;
    } else if (saw_weight) {
      parse_fail(path, lineno, "inconsistent weight column");
    }
    edges.push_back(e);
  }
  return edges;
}

void write_attrs_file(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (int i = 0; i < m.rows(); ++i) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << fmt_double(m(i, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_attrs_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_fields(line, ',');
    std::vector<double> row;
    row.reserve(f.size());
    for (const auto& tok : f) row.push_back(parse_double(tok, path, lineno));
    if (!rows.empty() && rows.front().size() != row.size())
      parse_fail(path, lineno, "ragged attribute row");
    rows.push_back(std::move(row));
  }
  if (static_cast<int>(rows.size()) != n)
    throw ParseError(path + ": attribute rows (" +
                     std::to_string(rows.size()) + ") != node count (" +
                     std::to_string(n) + ")");
  Eigen::MatrixXd m(n, rows.empty() ? 0 : rows.front().size());
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < m.cols(); ++c) m(i, c) = rows[i][c];
  return m;
}

void write_eattrs_file(const std::string& path, const std::vector<int>& l) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (int x : l) out << x << '\n';
}

std::vector<int> read_eattrs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<int> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    out.push_back(static_cast<int>(parse_int(line, path, lineno)));
  }
  return out;
}

json pairs_to_json(const std::vector<std::pair<int, int>>& pairs) {
  json a = json::array();
  for (auto [i, j] : pairs) a.push_back(json::array({i, j}));
  return a;
}

std::vector<std::pair<int, int>> pairs_from_json(const json& a) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : a) out.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return out;
}

}  // namespace

SplitRecord split_anchors(const GroundTruth& truth, double ratio,
                          std::uint64_t seed) {
  if (ratio < 0.0 || ratio > 1.0)
    throw std::invalid_argument("split_anchors: ratio must be in [0,1]");
  const int n = static_cast<int>(truth.pairs.size());
  // +1e-9 so exact products like 0.3*10 never floor down a lane.
  const int k = static_cast<int>(std::floor(ratio * n + 1e-9));
  Rng rng(seed, "split_anchors");
  std::vector<int> sel = sample_without_replacement(n, k, rng);
  std::sort(sel.begin(), sel.end());
  std::vector<char> picked(n, 0);
  for (int i : sel) picked[i] = 1;
  SplitRecord rec;
  rec.seed = seed;
  rec.train_ratio = ratio;
  for (int i = 0; i < n; ++i)
    (picked[i] ? rec.train : rec.test).push_back(truth.pairs[i]);
  return rec;
}

AlignmentTask make_task(Graph g1, Graph g2, GroundTruth truth,
                        const SplitRecord& split, bool require_partition) {
  validate_truth(truth, g1.n, g2.n);
  std::set<std::pair<int, int>> all(truth.pairs.begin(), truth.pairs.end());
  std::set<std::pair<int, int>> got;
  for (const auto& p : split.train) {
    bool fresh = got.insert(p).second;
    if (require_partition && (!all.count(p) || !fresh))
      throw std::invalid_argument("make_task: train pair not a unique truth pair");
    if (!require_partition &&
        (p.first < 0 || p.first >= g1.n || p.second < 0 || p.second >= g2.n || !fresh))
      throw std::invalid_argument("make_task: train pair out of range or repeated");
  }
  for (const auto& p : split.test)
    if (!all.count(p) || !got.insert(p).second)
      throw std::invalid_argument("make_task: test pair not a unique truth pair");
  if (require_partition && got.size() != all.size())
    throw std::invalid_argument("make_task: split does not cover the truth");
  AlignmentTask t;
  t.g1 = std::move(g1);
  t.g2 = std::move(g2);
  t.truth = std::move(truth);
  t.train_anchors = split.train;
  t.test_pairs = split.test;
  t.train_ratio = split.train_ratio;
  t.seed = split.seed;
  return t;
}

json split_to_json(const SplitRecord& s) {
  return json{{"seed", s.seed},
              {"train_ratio", s.train_ratio},
              {"train", pairs_to_json(s.train)},
              {"test", pairs_to_json(s.test)}};
}

SplitRecord split_from_json(const json& j) {
  SplitRecord s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.train_ratio = j.at("train_ratio").get<double>();
  s.train = pairs_from_json(j.at("train"));
  s.test = pairs_from_json(j.at("test"));
  return s;
}

void write_split(const std::string& path, const SplitRecord& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << split_to_json(s).dump(2) << '\n';
}

SplitRecord read_split(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return split_from_json(j);
}

void write_dataset(const std::string& dir, const Graph& g1, const Graph& g2,
                   const GroundTruth& truth, const std::string& name,
                   const json& extra_meta) {
  validate_truth(truth, g1.n, g2.n);
  fs::create_directories(dir);
  json meta{{"name", name.empty() ? fs::path(dir).filename().string() : name},
            {"n1", g1.n},
            {"n2", g2.n},
            {"g1_attr_dim", g1.node_attrs.cols()},
            {"g2_attr_dim", g2.node_attrs.cols()},
            {"g1_edge_labels", g1.has_edge_labels()},
            {"g2_edge_labels", g2.has_edge_labels()},
            {"truth_size", truth.pairs.size()}};
  if (extra_meta.is_object())
    for (auto it = extra_meta.begin(); it != extra_meta.end(); ++it)
      meta[it.key()] = it.value();
  std::ofstream mout(dir + "/meta.json");
  if (!mout) throw std::runtime_error("cannot write " + dir + "/meta.json");
  mout << meta.dump(2) << '\n';

  write_edges_file(dir + "/g1.edges", g1.edges);
  write_edges_file(dir + "/g2.edges", g2.edges);
  if (g1.has_node_attrs()) write_attrs_file(dir + "/g1.attrs.csv", g1.node_attrs);
  if (g2.has_node_attrs()) write_attrs_file(dir + "/g2.attrs.csv", g2.node_attrs);
  if (g1.has_edge_labels()) write_eattrs_file(dir + "/g1.eattrs.tsv", g1.edge_labels);
  if (g2.has_edge_labels()) write_eattrs_file(dir + "/g2.eattrs.tsv", g2.edge_labels);
  std::ofstream aout(dir + "/anchors.tsv");
  if (!aout) throw std::runtime_error("cannot write " + dir + "/anchors.tsv");
  for (auto [i, j] : truth.pairs) aout << i << '\t' << j << '\n';
}

void write_single_graph(const std::string& dir, const Graph& g,
                        const std::string& name) {
  fs::create_directories(dir);
  json meta{{"name", name.empty() ? fs::path(dir).filename().string() : name},
            {"n1", g.n},
            {"g1_attr_dim", g.node_attrs.cols()},
            {"g1_edge_labels", g.has_edge_labels()}};
  std::ofstream mout(dir + "/meta.json");
  if (!mout) throw std::runtime_error("cannot write " + dir + "/meta.json");
  mout << meta.dump(2) << '\n';
  write_edges_file(dir + "/g1.edges", g.edges);
  if (g.has_node_attrs()) write_attrs_file(dir + "/g1.attrs.csv", g.node_attrs);
  if (g.has_edge_labels()) write_eattrs_file(dir + "/g1.eattrs.tsv", g.edge_labels);
}

namespace {

Graph load_graph_part(const std::string& dir, const std::string& stem, int n,
                      const std::string& name) {
  auto edges = read_edges_file(dir + "/" + stem + ".edges");
  Eigen::MatrixXd attrs;
  if (fs::exists(dir + "/" + stem + ".attrs.csv"))
    attrs = read_attrs_file(dir + "/" + stem + ".attrs.csv", n);
  std::vector<int> labels;
  if (fs::exists(dir + "/" + stem + ".eattrs.tsv")) {
    labels = read_eattrs_file(dir + "/" + stem + ".eattrs.tsv");
    if (labels.size() != edges.size())
      throw ParseError(dir + "/" + stem + ".eattrs.tsv: label count (" +
                       std::to_string(labels.size()) + ") != edge count (" +
                       std::to_string(edges.size()) + ")");
  }
  return build_graph(n, std::move(edges), std::move(attrs), std::move(labels),
                     name);
}

}  // namespace

Dataset read_dataset(const std::string& dir) {
  std::ifstream min(dir + "/meta.json");
  if (!min) throw std::runtime_error("cannot open " + dir + "/meta.json");
  json meta;
  try {
    min >> meta;
  } catch (const json::exception& e) {
    throw ParseError(dir + "/meta.json: " + e.what());
  }
  const int n1 = meta.at("n1").get<int>();
  const int n2 = meta.at("n2").get<int>();
  const std::string name = meta.value("name", std::string{});

  Dataset d;
  d.meta = meta;
  d.g1 = load_graph_part(dir, "g1", n1, name);
  d.g2 = load_graph_part(dir, "g2", n2, name);

  const std::string apath = dir + "/anchors.tsv";
  std::ifstream ain(apath);
  if (!ain) throw std::runtime_error("cannot open " + apath);
  std::string line;
  int lineno = 0;
  while (std::getline(ain, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_fields(line, '\t');
    if (f.size() != 2)
      parse_fail(apath, lineno, "expected 2 tab-separated fields");
    d.truth.pairs.emplace_back(
        static_cast<int>(parse_int(f[0], apath, lineno)),
        static_cast<int>(parse_int(f[1], apath, lineno)));
  }
  validate_truth(d.truth, n1, n2);
  return d;
}

Graph read_edge_file(const std::string& path) {
  auto edges = read_edges_file(path);
  int n = 0;
  const fs::path p(path);
  const fs::path meta_path = p.parent_path() / "meta.json";
  if (fs::exists(meta_path)) {
    std::ifstream min(meta_path);
    json meta;
    try {
      min >> meta;
    } catch (const json::exception& e) {
      throw ParseError(meta_path.string() + ": " + e.what());
    }
    const std::string stem = p.filename().string();
    const char* key = stem.rfind("g2", 0) == 0 ? "n2" : "n1";
    if (meta.contains(key)) n = meta.at(key).get<int>();
  }
  if (n == 0)
    for (const auto& e : edges) n = std::max({n, e.u + 1, e.v + 1});
  return build_graph(n, std::move(edges));
}

json run_record_to_json(const RunRecord& r) {
  json hits = json::object();
  for (auto [k, v] : r.hits) hits[std::to_string(k)] = v;
  return json{{"algo", r.algo},
              {"dataset", r.dataset},
              {"seed", r.seed},
              {"train_ratio", r.train_ratio},
              {"params", r.params},
              {"hits", hits},
              {"mrr", r.mrr},
              {"direction", r.direction},
              {"time_s", r.time_s},
              {"peak_mem_bytes", r.peak_mem_bytes},
              {"converged", r.converged},
              {"iterations", r.iterations},
              {"topk_truncated", r.topk_truncated}};
}

RunRecord run_record_from_json(const json& j) {
  RunRecord r;
  r.algo = j.at("algo").get<std::string>();
  r.dataset = j.at("dataset").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.train_ratio = j.at("train_ratio").get<double>();
  r.params = j.at("params").get<std::map<std::string, std::string>>();
  for (auto it = j.at("hits").begin(); it != j.at("hits").end(); ++it)
    r.hits[std::stoi(it.key())] = it.value().get<double>();
  r.mrr = j.at("mrr").get<double>();
  r.direction = j.at("direction").get<std::string>();
  r.time_s = j.at("time_s").get<double>();
  r.peak_mem_bytes = j.at("peak_mem_bytes").get<std::uint64_t>();
  r.converged = j.value("converged", true);
  r.iterations = j.value("iterations", 0);
  r.topk_truncated = j.value("topk_truncated", false);
  return r;
}

namespace {

void validate_record(const RunRecord& r) {
  if (r.algo.empty()) throw std::invalid_argument("RunRecord: empty algo");
  if (r.train_ratio < 0.0 || r.train_ratio > 1.0)
    throw std::invalid_argument("RunRecord: train_ratio out of [0,1]");
  if (r.direction != "l2r" && r.direction != "r2l" && r.direction != "avg")
    throw std::invalid_argument("RunRecord: bad direction");
  if (!(r.mrr >= 0.0 && r.mrr <= 1.0))
    throw std::invalid_argument("RunRecord: mrr out of [0,1]");
  if (r.time_s < 0.0) throw std::invalid_argument("RunRecord: negative time");
  double prev = 0.0;
  for (auto [k, v] : r.hits) {  // std::map iterates K ascending
    if (k < 1) throw std::invalid_argument("RunRecord: hits key < 1");
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("RunRecord: hits value out of [0,1]");
    if (v + 1e-12 < prev)
      throw std::invalid_argument("RunRecord: Hits@K decreases in K");
    prev = v;
  }
}

}  // namespace

void append_result(const std::string& path, const RunRecord& r) {
  validate_record(r);
  const std::string line = run_record_to_json(r).dump() + "\n";
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0)
    throw std::runtime_error("cannot open " + path + ": " +
                             std::strerror(errno));
  if (::flock(fd, LOCK_EX) != 0) {
    int e = errno;
    ::close(fd);
    throw std::runtime_error("cannot lock " + path + ": " + std::strerror(e));
  }
  std::size_t off = 0;
  while (off < line.size()) {
    ssize_t w = ::write(fd, line.data() + off, line.size() - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      int e = errno;
      ::flock(fd, LOCK_UN);
      ::close(fd);
      throw std::runtime_error("write failed on " + path + ": " +
                               std::strerror(e));
    }
    off += static_cast<std::size_t>(w);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

std::vector<RunRecord> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<RunRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(run_record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      parse_fail(path, lineno, e.what());
    }
  }
  return out;
}

void write_scores(const std::string& path, const AlignmentMatrix& s,
                  int topk) {
  if (topk < 0) throw std::invalid_argument("write_scores: negative topk");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "#na-scores 1 " << s.rows() << ' ' << s.cols() << ' ' << topk
      << '\n';
  if (topk == 0) {
    for (int i = 0; i < s.rows(); ++i)
      for (int j = 0; j < s.cols(); ++j)
        out << i << '\t' << j << '\t' << fmt_double(s(i, j)) << '\n';
  } else {
    TopKScores t = topk_from_dense(s, topk);
    for (int i = 0; i < t.n1; ++i)
      for (const auto& [j, v] : t.rows[i])
        out << i << '\t' << j << '\t' << fmt_double(v) << '\n';
  }
}

TopKScores read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  TopKScores t;
  {
    std::istringstream hs(line);
    std::string magic;
    int version = 0;
    if (!(hs >> magic >> version >> t.n1 >> t.n2 >> t.k) ||
        magic != "#na-scores" || version != 1)
      throw ParseError(path + ":1: bad scores header");
  }
  t.rows.resize(t.n1);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_fields(line, '\t');
    if (f.size() != 3)
      parse_fail(path, lineno, "expected 3 tab-separated fields");
    int i = static_cast<int>(parse_int(f[0], path, lineno));
    int j = static_cast<int>(parse_int(f[1], path, lineno));
    double v = parse_double(f[2], path, lineno);
    if (i < 0 || i >= t.n1 || j < 0 || j >= t.n2)
      parse_fail(path, lineno, "score index out of range");
    t.rows[i].emplace_back(j, v);
  }
  for (auto& row : t.rows)
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
  return t;
}

}  // namespace netalign
