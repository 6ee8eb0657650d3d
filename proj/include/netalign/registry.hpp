#pragma once

#include <map>
#include <string>
#include <vector>

#include "netalign/align_result.hpp"
#include "netalign/graph.hpp"

namespace netalign {

using ParamMap = std::map<std::string, std::string>;

// Registered aligner names, stable order for help text and result files.
std::vector<std::string> algorithm_names();
bool is_algorithm(const std::string& name);

// Tunables the named aligner accepts, with default values as strings.
ParamMap default_params(const std::string& algo);

// Defaults overlaid with overrides; keys outside the algorithm's table and
// values that do not parse are rejected.
ParamMap resolved_params(const std::string& algo, const ParamMap& overrides);

AlignResult run_algo(const std::string& algo, const AlignmentTask& task,
                     const ParamMap& overrides = {});

}  // namespace netalign
