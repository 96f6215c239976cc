// xvalign/scenario.h

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

#ifndef XVALIGN_SCENARIO_H_
#define XVALIGN_SCENARIO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xvalign/embedding_set.h"
#include "xvalign/metrics.h"
#include "xvalign/procrustes.h"
#include "xvalign/wasserstein_procrustes.h"

namespace xvalign {

enum class Algorithm {
  kNone,  // no rotation: scores the anonymized trials as they are
  kProcrustes,
  kWassersteinProcrustes,
};

std::string_view to_string(Algorithm a);
/// Accepts none, procrustes, wp, wasserstein_procrustes.
Algorithm parse_algorithm(std::string_view text);

struct ScenarioInputs {
  std::filesystem::path enroll, enroll_anon, trials, trials_anon;
};

/**
   One attack configuration.

   The rotation is fitted on (enroll, enroll_anon) or, for an oracle, on
   (trials, trials_anon).  Anonymized trials are mapped back with W^T,
   scored against the clear enroll set (EER) and matched against the clear
   trials (Top-1).
*/
struct ScenarioSpec {
  std::string name;
  Algorithm algorithm = Algorithm::kProcrustes;
  bool oracle = false;
  bool gender_dependent = false;
  std::optional<int> pca_k;
  bool length_normalize = false;
  ScoringMode scoring = ScoringMode::kSpeakerModel;
  ScenarioInputs inputs;
  WpConfig wp_config;
  std::optional<std::filesystem::path> output;

  /// Input availability and option ranges that do not need the data.
  void validate() const;
};

/// The four evaluation sets in memory. enroll_anon may be absent for
/// oracle scenarios.
struct ScenarioData {
  EmbeddingSet enroll;
  std::optional<EmbeddingSet> enroll_anon;
  EmbeddingSet trials;
  EmbeddingSet trials_anon;
};

struct AttackOutcome {
  AttackReport report;
  /// One rotation per fitted group (one, or F then M when gender
  /// dependent).
  std::vector<Rotation> rotations;
  /// Inverted trials, in the space they were evaluated in.
  EmbeddingSet reconstructed;
};

/// Runs the pipeline on in-memory sets: optional length normalisation ->
/// optional gender split -> optional per-set PCA -> rotation fit -> W^T
/// inversion of trials_anon -> per-gender EER and Top-1.  Module errors are
/// rethrown with the scenario name prefixed.
AttackOutcome run_attack(const ScenarioSpec &spec, const ScenarioData &data);

ScenarioData load_scenario_data(const ScenarioSpec &spec);

/// Loads the inputs named in spec and runs the attack.
AttackReport run_scenario(const ScenarioSpec &spec);

}  // namespace xvalign

#endif  // XVALIGN_SCENARIO_H_
