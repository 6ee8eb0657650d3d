#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "netalign/graph.hpp"

namespace netalign::testsupport {

// Self-deleting scratch directory for I/O tests.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    path = base / ("netalign-test-" + std::to_string(rd()) + "-" +
                   std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str(const std::string& leaf = {}) const {
    return leaf.empty() ? path.string() : (path / leaf).string();
  }
};

inline Graph ring_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  return build_graph(n, std::move(edges));
}

inline Graph triangle_graph() { return ring_graph(3); }

inline bool same_edges(const Graph& a, const Graph& b) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i)
    if (a.edges[i].u != b.edges[i].u || a.edges[i].v != b.edges[i].v ||
        a.edges[i].w != b.edges[i].w)
      return false;
  return true;
}

}  // namespace netalign::testsupport
