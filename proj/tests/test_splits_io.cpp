#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "netalign/splits_io.hpp"
#include "netalign/synthesis.hpp"
#include "support/util.hpp"

using namespace netalign;
using namespace netalign::testsupport;

#ifndef NETALIGN_TEST_DATA_DIR
#define NETALIGN_TEST_DATA_DIR "tests/data"
#endif

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GroundTruth identity_truth(int n) {
  GroundTruth t;
  for (int i = 0; i < n; ++i) t.pairs.push_back({i, i});
  return t;
}

}  // namespace

TEST_SUITE("splits_io") {

TEST_CASE("anchor split counts, order, and determinism") {
  GroundTruth truth = identity_truth(100);
  SplitRecord rec = split_anchors(truth, 0.2, 42);
  CHECK(rec.train.size() == 20);
  CHECK(rec.test.size() == 80);

  // both halves preserve truth order and together cover it exactly
  std::vector<std::pair<int, int>> merged;
  std::size_t ti = 0, si = 0;
  for (const auto& p : truth.pairs) {
    if (ti < rec.train.size() && rec.train[ti] == p) {
      ++ti;
    } else {
      REQUIRE(si < rec.test.size());
      CHECK(rec.test[si] == p);
      ++si;
    }
  }
  CHECK(ti == rec.train.size());
  CHECK(si == rec.test.size());

  SplitRecord again = split_anchors(truth, 0.2, 42);
  CHECK(again.train == rec.train);
  CHECK(again.test == rec.test);
  CHECK(split_anchors(truth, 0.2, 43).train != rec.train);

  CHECK(split_anchors(truth, 0.0, 0).train.empty());
  CHECK(split_anchors(truth, 1.0, 0).test.empty());
  CHECK_THROWS_AS(split_anchors(truth, 1.5, 0), std::invalid_argument);
}

TEST_CASE("committed split file matches its generating recipe") {
  Graph base = gen_er(100, 10.0, 42);
  PairResult pr = make_permuted_pair(base, 0.1, 0.15, 42);
  SplitRecord rec = split_anchors(pr.truth, 0.2, 42);
  REQUIRE(pr.truth.pairs.size() == 100);
  CHECK(rec.train.size() == 20);

  const std::string golden = std::string(NETALIGN_TEST_DATA_DIR) + "/golden_split.json";
  SplitRecord stored = read_split(golden);
  CHECK(stored.seed == rec.seed);
  CHECK(stored.train_ratio == rec.train_ratio);
  CHECK(stored.train == rec.train);
  CHECK(stored.test == rec.test);

  // the serialization itself is stable byte-for-byte
  TempDir tmp;
  write_split(tmp.str("regen.json"), rec);
  CHECK(slurp(tmp.str("regen.json")) == slurp(golden));
}

TEST_CASE("dataset round trip is lossless") {
  Graph g1 = ring_graph(6);
  g1.edges[2].w = 1.0 / 3.0;
  g1.edges[4].w = std::sqrt(2.0);
  g1 = build_graph(6, g1.edges);
  g1.node_attrs.resize(6, 2);
  for (int i = 0; i < 6; ++i) {
    g1.node_attrs(i, 0) = 3.141592653589793 * (i + 1);
    g1.node_attrs(i, 1) = 1.0 / (i + 7);
  }
  g1.edge_labels = {0, 1, 0, 2, 1, 0};
  Graph g2 = ring_graph(5);
  GroundTruth truth;
  truth.pairs = {{0, 0}, {2, 1}, {4, 3}};

  TempDir tmp;
  write_dataset(tmp.str(), g1, g2, truth, "roundtrip", {{"note", "x"}});
  Dataset ds = read_dataset(tmp.str());

  CHECK(ds.g1.n == 6);
  REQUIRE(ds.g1.edges.size() == g1.edges.size());
  for (std::size_t i = 0; i < g1.edges.size(); ++i) {
    CHECK(ds.g1.edges[i].u == g1.edges[i].u);
    CHECK(ds.g1.edges[i].v == g1.edges[i].v);
    CHECK(ds.g1.edges[i].w == g1.edges[i].w);  // exact after 17-digit text
  }
  CHECK(ds.g1.node_attrs == g1.node_attrs);
  CHECK(ds.g1.edge_labels == g1.edge_labels);
  CHECK(same_edges(ds.g2, g2));
  CHECK(ds.truth.pairs == truth.pairs);
  CHECK(ds.meta.at("name") == "roundtrip");
  CHECK(ds.meta.at("note") == "x");

  // unit weights leave the weight column out
  std::string first_line = slurp(tmp.str("g2.edges"));
  first_line = first_line.substr(0, first_line.find('\n'));
  CHECK(std::count(first_line.begin(), first_line.end(), '\t') == 1);
}

TEST_CASE("single graph directory round trips through the edge reader") {
  Graph g = gen_er(40, 4.0, 2);
  TempDir tmp;
  write_single_graph(tmp.str(), g, "solo");
  Graph back = read_edge_file(tmp.str("g1.edges"));
  CHECK(back.n == 40);  // node count from meta, not max endpoint
  CHECK(same_edges(back, g));
}

TEST_CASE("malformed files fail with file and line") {
  TempDir tmp;
  {
    std::ofstream out(tmp.str("bad.edges"));
    out << "0\t1\n0\n";
  }
  try {
    read_edge_file(tmp.str("bad.edges"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("bad.edges:2") != std::string::npos);
  }
}

TEST_CASE("dataset reader rejects inconsistent metadata") {
  TempDir tmp;
  write_dataset(tmp.str(), ring_graph(4), ring_graph(4), identity_truth(4));
  {
    std::ofstream out(tmp.str("meta.json"));
    out << R"({"name":"bad","n1":3,"n2":4})" << "\n";
  }
  CHECK_THROWS(read_dataset(tmp.str()));
}

TEST_CASE("split file round trip") {
  SplitRecord rec = split_anchors(identity_truth(30), 0.3, 9);
  TempDir tmp;
  write_split(tmp.str("s.json"), rec);
  SplitRecord back = read_split(tmp.str("s.json"));
  CHECK(back.seed == rec.seed);
  CHECK(back.train_ratio == rec.train_ratio);
  CHECK(back.train == rec.train);
  CHECK(back.test == rec.test);
}

TEST_CASE("run records round trip and are validated on append") {
  RunRecord r;
  r.algo = "isorank";
  r.dataset = "d";
  r.seed = 5;
  r.train_ratio = 0.2;
  r.params = {{"alpha", "0.5"}};
  r.hits = {{1, 0.25}, {10, 0.5}, {30, 0.5}};
  r.mrr = 0.375;
  r.time_s = 1.25;
  r.peak_mem_bytes = 1 << 20;
  r.iterations = 17;

  RunRecord back = run_record_from_json(run_record_to_json(r));
  CHECK(back.algo == r.algo);
  CHECK(back.hits == r.hits);
  CHECK(back.mrr == r.mrr);
  CHECK(back.params == r.params);
  CHECK(back.iterations == r.iterations);

  TempDir tmp;
  append_result(tmp.str("res.jsonl"), r);
  auto rows = read_results(tmp.str("res.jsonl"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].algo == "isorank");

  RunRecord bad = r;
  bad.mrr = 1.5;
  CHECK_THROWS_AS(append_result(tmp.str("res.jsonl"), bad), std::invalid_argument);
  bad = r;
  bad.hits = {{1, 0.5}, {10, 0.4}};
  CHECK_THROWS_AS(append_result(tmp.str("res.jsonl"), bad), std::invalid_argument);
  bad = r;
  bad.algo.clear();
  CHECK_THROWS_AS(append_result(tmp.str("res.jsonl"), bad), std::invalid_argument);
  bad = r;
  bad.direction = "sideways";
  CHECK_THROWS_AS(append_result(tmp.str("res.jsonl"), bad), std::invalid_argument);
  bad = r;
  bad.time_s = -1.0;
  CHECK_THROWS_AS(append_result(tmp.str("res.jsonl"), bad), std::invalid_argument);
}

TEST_CASE("concurrent appends never tear lines") {
  TempDir tmp;
  const std::string path = tmp.str("res.jsonl");
  const int threads = 8, per_thread = 25;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = 0; i < per_thread; ++i) {
        RunRecord r;
        r.algo = "isorank";
        r.dataset = "thread-" + std::to_string(t);
        r.seed = static_cast<std::uint64_t>(i);
        r.train_ratio = 0.2;
        // vary the line length so torn writes would corrupt the framing
        r.params["pad"] = std::string(1 + (t * per_thread + i) % 97, 'x');
        r.hits = {{1, 0.5}};
        r.mrr = 0.5;
        append_result(path, r);
      }
    });
  }
  for (auto& th : pool) th.join();
  auto rows = read_results(path);  // throws on any malformed line
  CHECK(rows.size() == threads * per_thread);
}

TEST_CASE("score files round trip dense and top-k") {
  AlignmentMatrix s(3, 4);
  s << 0.5, -1.25, 3.0, 0.125, 2.0, 2.0, -0.5, 0.75, 1.0 / 3.0, 0.0, 1.0, 7.0;
  TempDir tmp;

  write_scores(tmp.str("dense.scores"), s, 0);
  TopKScores dense = read_scores(tmp.str("dense.scores"));
  CHECK(dense.n1 == 3);
  CHECK(dense.n2 == 4);
  CHECK(dense.k == 0);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(dense.rows[i].size() == 4);
    for (const auto& [j, v] : dense.rows[i]) CHECK(v == s(i, j));
  }

  write_scores(tmp.str("top2.scores"), s, 2);
  TopKScores top = read_scores(tmp.str("top2.scores"));
  CHECK(top.k == 2);
  TopKScores want = topk_from_dense(s, 2);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(top.rows[i].size() == want.rows[i].size());
    for (std::size_t a = 0; a < top.rows[i].size(); ++a) {
      CHECK(top.rows[i][a].first == want.rows[i][a].first);
      CHECK(top.rows[i][a].second == want.rows[i][a].second);
    }
  }
}

}  // TEST_SUITE
