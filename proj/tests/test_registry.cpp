#include <algorithm>
#include <vector>

#include "doctest.h"
#include "netalign/registry.hpp"
#include "netalign/synthesis.hpp"

using namespace netalign;

namespace {

AlignmentTask tiny_task() {
  PairResult pr = make_permuted_pair(gen_er(10, 2.5, 0), 0.0, 0.0, 0);
  AlignmentTask task;
  task.g1 = pr.g1;
  task.g2 = pr.g2;
  task.truth = pr.truth;
  task.train_anchors.assign(pr.truth.pairs.begin(), pr.truth.pairs.begin() + 2);
  task.test_pairs.assign(pr.truth.pairs.begin() + 2, pr.truth.pairs.end());
  return task;
}

}  // namespace

TEST_SUITE("registry") {

TEST_CASE("the catalog lists every aligner exactly once") {
  std::vector<std::string> names = algorithm_names();
  std::vector<std::string> expect = {"isorank",     "final",  "regal",
                                     "rwr-align",   "parrot-lite",
                                     "gw-align"};
  CHECK(names == expect);
  for (const std::string& n : names) CHECK(is_algorithm(n));
  CHECK_FALSE(is_algorithm("IsoRank"));
  CHECK_FALSE(is_algorithm(""));
}

TEST_CASE("defaults carry the documented values") {
  ParamMap iso = default_params("isorank");
  CHECK(iso.at("alpha") == "0.5");
  CHECK(iso.at("tol") == "1e-8");
  CHECK(iso.at("max_iter") == "500");

  ParamMap regal = default_params("regal");
  CHECK(regal.at("num_layers") == "2");
  CHECK(regal.at("discount") == "0.1");
  CHECK(regal.at("num_landmarks") == "0");
  CHECK(regal.at("attr_weight") == "1");
  CHECK(regal.at("seed") == "0");

  ParamMap gw = default_params("gw-align");
  CHECK(gw.at("epsilon") == "0.001");  // structure scale, not the shared one
  CHECK(gw.at("hops") == "2");
  CHECK(gw.at("anchor_bonus") == "1");
  CHECK(gw.count("restart_prob") == 0);  // no walk stage in this aligner

  ParamMap parrot = default_params("parrot-lite");
  CHECK(parrot.at("prox_gamma") == "0.01");
  CHECK(parrot.at("restart_prob") == "0.15");
  CHECK(parrot.count("hops") == 0);

  CHECK_THROWS_AS(default_params("nope"), std::invalid_argument);
}

TEST_CASE("overrides replace defaults; stray keys and bad values are rejected") {
  ParamMap r = resolved_params("isorank", {{"alpha", "0.7"}});
  CHECK(r.at("alpha") == "0.7");
  CHECK(r.at("tol") == "1e-8");

  CHECK_THROWS_WITH_AS(resolved_params("isorank", {{"bogus", "1"}}),
                       "algorithm 'isorank' has no parameter 'bogus'",
                       std::invalid_argument);

  AlignmentTask task = tiny_task();
  CHECK_THROWS_WITH_AS(run_algo("isorank", task, {{"alpha", "fast"}}),
                       "parameter 'alpha': 'fast' is not a number",
                       std::invalid_argument);
  CHECK_THROWS_AS(run_algo("isorank", task, {{"max_iter", "2.5"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_algo("regal", task, {{"seed", "-1"}}),
                  std::invalid_argument);
}

TEST_CASE("every registered aligner runs on a small task") {
  AlignmentTask task = tiny_task();
  for (const std::string& name : algorithm_names()) {
    INFO("algo = ", name);
    AlignResult res = run_algo(name, task);
    CHECK(res.scores.rows() == 10);
    CHECK(res.scores.cols() == 10);
    CHECK(res.scores.allFinite());
  }
  CHECK_THROWS_AS(run_algo("nope", task), std::invalid_argument);
}

TEST_CASE("overrides reach the underlying aligner") {
  AlignmentTask task = tiny_task();
  AlignResult one = run_algo("isorank", task, {{"max_iter", "1"}});
  CHECK_FALSE(one.converged);
  CHECK(one.iterations == 1);
  AlignResult full = run_algo("isorank", task);
  CHECK(full.converged);
  CHECK((one.scores - full.scores).cwiseAbs().maxCoeff() > 1e-6);
}

}  // TEST_SUITE
