// src/scenario.cc

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

#include "xvalign/scenario.h"

#include "xvalign/error.h"
#include "xvalign/pca.h"

namespace xvalign {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kNone:
      return "none";
    case Algorithm::kProcrustes:
      return "procrustes";
    case Algorithm::kWassersteinProcrustes:
      return "wasserstein_procrustes";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "none") return Algorithm::kNone;
  if (text == "procrustes" || text == "p") return Algorithm::kProcrustes;
  if (text == "wp" || text == "wasserstein_procrustes")
    return Algorithm::kWassersteinProcrustes;
  throw Error("unknown algorithm '" + std::string(text) +
              "' (expected none, procrustes or wp)");
}

void ScenarioSpec::validate() const {
  const std::string who = "scenario '" + name + "': ";
  if (name.empty()) throw Error("scenario without a name");
  if (inputs.enroll.empty()) throw Error(who + "enroll set is required");
  if (inputs.trials.empty() || inputs.trials_anon.empty())
    throw Error(who + "trials and trials_anon are required");
  if (!oracle && algorithm != Algorithm::kNone && inputs.enroll_anon.empty())
    throw Error(who + "a non-oracle attack needs enroll_anon for fitting");
  if (pca_k && *pca_k < 1) throw Error(who + "pca must be >= 1");
  wp_config.validate();
}

namespace {

struct GroupSets {
  EmbeddingSet reconstructed;
  EmbeddingSet enroll;
  EmbeddingSet trials;
};

GroupSets run_group(const ScenarioSpec &spec, const EmbeddingSet &enroll,
                    const std::optional<EmbeddingSet> &enroll_anon,
                    const EmbeddingSet &trials, const EmbeddingSet &trials_anon,
                    const std::string &label, std::vector<Rotation> &rotations) {
  const EmbeddingSet *src_fit = &trials;
  const EmbeddingSet *tgt_fit = &trials_anon;
  if (!spec.oracle) {
    src_fit = &enroll;
    if (spec.algorithm != Algorithm::kNone) {
      if (!enroll_anon) throw Error("enroll_anon is required");
      tgt_fit = &*enroll_anon;
    }
  }
  if (spec.algorithm != Algorithm::kNone &&
      (src_fit->is_empty() || tgt_fit->is_empty()))
    throw Error("no " + label + " rows to fit the rotation on");

  EmbeddingSet enroll_eval = enroll, trials_ref = trials,
               anon_eval = trials_anon;
  EmbeddingSet source = *src_fit, target = *tgt_fit;
  if (spec.pca_k) {
    const int k = *spec.pca_k;
    if (k > source.dim())
      throw Error("pca = " + std::to_string(k) +
                  " exceeds the embedding dimension " +
                  std::to_string(source.dim()));
    // Each side gets its own model; the clear-side model also maps the
    // clear evaluation sets, the anonymized-side model the anonymized ones.
    const PcaModel clear_model = fit_pca(source, k);
    const PcaModel anon_model = fit_pca(target, k);
    enroll_eval = transform_pca(enroll, clear_model);
    trials_ref = transform_pca(trials, clear_model);
    anon_eval = transform_pca(trials_anon, anon_model);
    source = transform_pca(source, clear_model);
    target = transform_pca(target, anon_model);
  }

  const std::string prov = spec.name + "/" + label;
  Rotation w = Rotation::identity(anon_eval.dim(), prov + ":none");
  switch (spec.algorithm) {
    case Algorithm::kNone:
      break;
    case Algorithm::kProcrustes: {
      const PairedSets paired = pair_by_utterance(source, target);
      const Rotation fit = solve_procrustes(paired);
      w = fit.with_provenance(prov + ":" + fit.provenance());
      break;
    }
    case Algorithm::kWassersteinProcrustes: {
      const WpResult fit =
          solve_wasserstein_procrustes(source, target, spec.wp_config);
      w = fit.rotation.with_provenance(prov + ":" + fit.rotation.provenance());
      break;
    }
  }
  rotations.push_back(w);
  return GroupSets{apply_inverse_rotation(anon_eval, w), std::move(enroll_eval),
                   std::move(trials_ref)};
}

void fill_metrics(const ScenarioSpec &spec, const GroupSets &sets, Gender g,
                  AttackReport &report) {
  const EmbeddingSet recon = filter_gender(sets.reconstructed, g);
  if (recon.is_empty()) return;
  const EmbeddingSet enroll = filter_gender(sets.enroll, g);
  const EmbeddingSet trials = filter_gender(sets.trials, g);
  auto &eer = g == Gender::F ? report.eer_f : report.eer_m;
  auto &top1 = g == Gender::F ? report.top1_f : report.top1_m;
  if (!enroll.is_empty())
    eer = compute_eer(cosine_score_sets(recon, enroll, spec.scoring));
  if (!trials.is_empty()) top1 = top1_speaker_accuracy(recon, trials);
}

}  // namespace

AttackOutcome run_attack(const ScenarioSpec &spec, const ScenarioData &data) {
  spec.validate();
  AttackOutcome outcome{AttackReport{}, {}, EmbeddingSet::empty(1)};
  AttackReport &report = outcome.report;
  report.scenario = spec.name;
  report.algorithm = std::string(to_string(spec.algorithm));
  report.oracle = spec.oracle;
  report.gender_dependent = spec.gender_dependent;
  report.pca = spec.pca_k;
  report.extractor = data.trials_anon.extractor();
  report.scoring = spec.scoring;

  try {
    auto prep = [&](const EmbeddingSet &s) {
      return spec.length_normalize ? length_normalize(s) : s;
    };
    const EmbeddingSet enroll = prep(data.enroll);
    const EmbeddingSet trials = prep(data.trials);
    const EmbeddingSet trials_anon = prep(data.trials_anon);
    std::optional<EmbeddingSet> enroll_anon;
    if (data.enroll_anon) enroll_anon = prep(*data.enroll_anon);

    if (!spec.gender_dependent) {
      const GroupSets sets = run_group(spec, enroll, enroll_anon, trials,
                                       trials_anon, "all", outcome.rotations);
      fill_metrics(spec, sets, Gender::F, report);
      fill_metrics(spec, sets, Gender::M, report);
      outcome.reconstructed = sets.reconstructed;
    } else {
      std::optional<EmbeddingSet> recon;
      for (Gender g : {Gender::F, Gender::M}) {
        const EmbeddingSet anon_g = filter_gender(trials_anon, g);
        if (anon_g.is_empty()) continue;
        std::optional<EmbeddingSet> enroll_anon_g;
        if (enroll_anon) enroll_anon_g = filter_gender(*enroll_anon, g);
        const GroupSets sets = run_group(
            spec, filter_gender(enroll, g), enroll_anon_g,
            filter_gender(trials, g), anon_g, std::string(to_string(g)),
            outcome.rotations);
        fill_metrics(spec, sets, g, report);
        recon = recon ? concatenate(*recon, sets.reconstructed)
                      : sets.reconstructed;
      }
      if (recon) outcome.reconstructed = *recon;
    }
  } catch (const std::exception &e) {
    throw Error("scenario '" + spec.name + "': " + e.what());
  }
  return outcome;
}

ScenarioData load_scenario_data(const ScenarioSpec &spec) {
  ScenarioData data{load_embedding_set(spec.inputs.enroll), std::nullopt,
                    load_embedding_set(spec.inputs.trials),
                    load_embedding_set(spec.inputs.trials_anon)};
  if (!spec.inputs.enroll_anon.empty())
    data.enroll_anon = load_embedding_set(spec.inputs.enroll_anon);
  return data;
}

AttackReport run_scenario(const ScenarioSpec &spec) {
  spec.validate();
  ScenarioData data = [&] {
    try {
      return load_scenario_data(spec);
    } catch (const std::exception &e) {
      throw Error("scenario '" + spec.name + "': " + e.what());
    }
  }();
  return run_attack(spec, data).report;
}

}  // namespace xvalign
