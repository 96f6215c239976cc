// xvalign/suite.h

// Copyright 2026  The xvalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef XVALIGN_SUITE_H_
#define XVALIGN_SUITE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xvalign/metrics.h"
#include "xvalign/scenario.h"

namespace xvalign {

/**
   A list of scenarios read from a suite file:

     # comment
     output = results.tsv          (only before the first section)
     normalize = true              (keys before any section, or in a
                                    [defaults] section, apply to every
                                    later scenario)
     [scenario]
     name = P
     algorithm = procrustes        none | procrustes | wp
     oracle = false
     gender_dependent = true
     pca = 70                      or "none"
     scoring = speaker             speaker | utterance
     enroll = data/enroll.emb      relative paths resolve against the
     enroll_anon = ...             suite file's directory
     trials = ...
     trials_anon = ...
     seed = 7                      Wasserstein-Procrustes seed
     wp.batch_size_initial = 64    any WpConfig field under "wp."

   Unknown keys, malformed values and scenarios missing required inputs are
   configuration errors (FormatError).
*/
struct Suite {
  std::vector<ScenarioSpec> scenarios;
  std::optional<std::filesystem::path> output;
};

Suite parse_suite(std::string_view text, const std::filesystem::path &base_dir,
                  const std::string &source_name = "<suite>");
Suite load_suite(const std::filesystem::path &path);

/// Runs every scenario in declaration order.  A failing scenario becomes a
/// report row with its error set; the rest still run.
std::vector<AttackReport> run_suite(const Suite &suite);

/// Loads the suite file, runs it and writes the TSV to the suite's output
/// (when set).
std::vector<AttackReport> run_suite(const std::filesystem::path &path);

/// CLI exit status: 0 when every scenario succeeded, 2 otherwise.
int suite_exit_code(const std::vector<AttackReport> &reports);

}  // namespace xvalign

#endif  // XVALIGN_SUITE_H_
