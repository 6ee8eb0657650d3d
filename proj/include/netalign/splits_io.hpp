#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "netalign/evaluation.hpp"
#include "netalign/graph.hpp"

namespace netalign {

// Malformed on-disk content; message carries file and line.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Train/test division of a ground truth, reproducible from (seed, ratio).
struct SplitRecord {
  std::uint64_t seed = 0;
  double train_ratio = 0.0;
  std::vector<std::pair<int, int>> train, test;
};

// Samples floor(ratio * |truth|) train pairs without replacement; train and
// test keep the truth's ordering. Integer-only draws, so the result is
// identical on every platform.
SplitRecord split_anchors(const GroundTruth& truth, double ratio,
                          std::uint64_t seed);

// Assembles a validated task. By default the split pairs must partition the
// truth; with require_partition off (for deliberately corrupted supervision)
// train pairs only need to be in-range and distinct, and test pairs must
// still be distinct truth pairs.
AlignmentTask make_task(Graph g1, Graph g2, GroundTruth truth,
                        const SplitRecord& split,
                        bool require_partition = true);

nlohmann::json split_to_json(const SplitRecord& s);
SplitRecord split_from_json(const nlohmann::json& j);
void write_split(const std::string& path, const SplitRecord& s);
SplitRecord read_split(const std::string& path);

// On-disk dataset directory:
//   meta.json, g1.edges, g2.edges, g1.attrs.csv / g2.attrs.csv (optional),
//   g1.eattrs.tsv / g2.eattrs.tsv (optional), anchors.tsv.
// Edges are "u<TAB>v[<TAB>w]" with 0-based ids; anchors are "i<TAB>j".
// Floats round-trip exactly (17 significant digits).
struct Dataset {
  Graph g1, g2;
  GroundTruth truth;
  nlohmann::json meta;
};

void write_dataset(const std::string& dir, const Graph& g1, const Graph& g2,
                   const GroundTruth& truth, const std::string& name = {},
                   const nlohmann::json& extra_meta = nullptr);

// Single-graph directory (meta.json + g1.*), as produced by `synth er`.
void write_single_graph(const std::string& dir, const Graph& g,
                        const std::string& name = {});

Dataset read_dataset(const std::string& dir);

// Reads one edge-list file; node count from the sibling meta.json when
// present, else max endpoint + 1.
Graph read_edge_file(const std::string& path);

// One evaluated run; everything needed to re-execute it is in params.
struct RunRecord {
  std::string algo, dataset;
  std::uint64_t seed = 0;
  double train_ratio = 0.0;
  std::map<std::string, std::string> params;
  std::map<int, double> hits;  // K -> Hits@K
  double mrr = 0.0;
  std::string direction = "avg";  // "l2r", "r2l", or "avg"
  double time_s = 0.0;
  std::uint64_t peak_mem_bytes = 0;
  bool converged = true;
  int iterations = 0;
  bool topk_truncated = false;
};

nlohmann::json run_record_to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

// Validates the record, then appends one JSON line under an advisory lock
// with a single write, so concurrent appends never interleave.
void append_result(const std::string& path, const RunRecord& r);
std::vector<RunRecord> read_results(const std::string& path);

// Score emission: dense (k = 0) or top-k per row.
void write_scores(const std::string& path, const AlignmentMatrix& s,
                  int topk = 0);
TopKScores read_scores(const std::string& path);

}  // namespace netalign
