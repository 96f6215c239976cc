// tools/attack.cc

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

// Command-line front end.
//
//   attack run --suite <file> [--out <tsv>]
//   attack run --scenario <name> --enroll <f> --enroll-anon <f> --trials <f>
//              --trials-anon <f> [--algorithm procrustes|wp|none] [--oracle]
//              [--gender-dependent] [--pca K] [--normalize] [--seed S]
//              [--out <tsv>]
//   attack synth population|anonymize|rotate|dataset ...
//   attack eval --reconstructed <f> --enroll <f> --reference <f>
//
// Exit status: 0 success, 2 when some scenario failed, 1 for configuration
// errors (bad arguments, unreadable suite file).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xvalign/anonymizer.h"
#include "xvalign/error.h"
#include "xvalign/metrics.h"
#include "xvalign/scenario.h"
#include "xvalign/suite.h"
#include "xvalign/text_io.h"

using namespace xvalign;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kPartialFailure = 2;

struct RunArgs {
  std::string suite;
  std::string scenario;
  std::string enroll, enroll_anon, trials, trials_anon;
  std::string algorithm = "procrustes";
  bool oracle = false;
  bool gender_dependent = false;
  std::optional<int> pca;
  bool normalize = false;
  std::string scoring = "speaker";
  std::uint64_t seed = 0;
  std::string out;
  std::string rotation_out;
};

void emit(const std::string &text, const std::string &path) {
  if (path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text_file(path, text);
}

int print_reports(const std::vector<AttackReport> &reports,
                  const std::string &out) {
  emit(format_report_tsv(reports), out);
  for (const auto &r : reports)
    if (!r.ok()) std::cerr << "attack: " << r.error << "\n";
  return suite_exit_code(reports) == 0 ? kOk : kPartialFailure;
}

int run_suite_file(const RunArgs &a) {
  Suite suite;
  try {
    suite = load_suite(a.suite);
  } catch (const Error &e) {
    std::cerr << "attack: " << e.what() << "\n";
    return kConfigError;
  }
  const auto reports = run_suite(suite);
  std::string out = a.out;
  if (out.empty() && suite.output) out = suite.output->string();
  return print_reports(reports, out);
}

int run_single(const RunArgs &a) {
  ScenarioSpec spec;
  try {
    spec.name = a.scenario;
    spec.algorithm = parse_algorithm(a.algorithm);
    spec.oracle = a.oracle;
    spec.gender_dependent = a.gender_dependent;
    spec.pca_k = a.pca;
    spec.length_normalize = a.normalize;
    spec.scoring = parse_scoring_mode(a.scoring);
    spec.inputs = {a.enroll, a.enroll_anon, a.trials, a.trials_anon};
    spec.wp_config.seed = a.seed;
    spec.validate();
  } catch (const Error &e) {
    std::cerr << "attack: " << e.what() << "\n";
    return kConfigError;
  }

  AttackReport report;
  try {
    const AttackOutcome outcome = run_attack(spec, load_scenario_data(spec));
    report = outcome.report;
    if (!a.rotation_out.empty()) {
      if (outcome.rotations.size() == 1) {
        save_rotation(outcome.rotations[0], a.rotation_out);
      } else {
        // One file per gender group, in F, M order.
        for (const Rotation &w : outcome.rotations) {
          const bool female = w.provenance().find("/F:") != std::string::npos;
          save_rotation(w, a.rotation_out + (female ? ".F" : ".M"));
        }
      }
    }
  } catch (const std::exception &e) {
    report.scenario = spec.name;
    report.algorithm = std::string(to_string(spec.algorithm));
    report.oracle = spec.oracle;
    report.gender_dependent = spec.gender_dependent;
    report.pca = spec.pca_k;
    report.scoring = spec.scoring;
    report.error = e.what();
  }
  return print_reports({report}, a.out);
}

void add_run(CLI::App &app, RunArgs &a, int &status) {
  CLI::App *run = app.add_subcommand("run", "run attack scenarios");
  auto *suite = run->add_option("--suite", a.suite, "suite file");
  auto *name = run->add_option("--scenario", a.scenario, "scenario name");
  suite->excludes(name);
  run->add_option("--enroll", a.enroll, "clear enrollment set");
  run->add_option("--enroll-anon", a.enroll_anon, "anonymized enrollment set");
  run->add_option("--trials", a.trials, "clear trial set");
  run->add_option("--trials-anon", a.trials_anon, "anonymized trial set");
  run->add_option("--algorithm", a.algorithm, "procrustes, wp or none")
      ->check(CLI::IsMember({"procrustes", "p", "wp", "wasserstein_procrustes",
                             "none"}));
  run->add_flag("--oracle", a.oracle, "fit on trials / trials_anon");
  run->add_flag("--gender-dependent", a.gender_dependent,
                "one rotation per gender");
  run->add_option("--pca", a.pca, "per-set PCA dimension")
      ->check(CLI::PositiveNumber);
  run->add_flag("--normalize", a.normalize, "length-normalize all sets");
  run->add_option("--scoring", a.scoring, "speaker or utterance")
      ->check(CLI::IsMember({"speaker", "utterance"}));
  run->add_option("--seed", a.seed, "Wasserstein-Procrustes seed");
  run->add_option("--out", a.out, "TSV output (default stdout)");
  run->add_option("--rotation-out", a.rotation_out,
                  "save the fitted rotation(s); .F/.M suffixes per gender");
  run->callback([&] {
    if (a.suite.empty() && a.scenario.empty())
      throw CLI::RequiredError("--suite or --scenario");
    if (!a.suite.empty())
      status = run_suite_file(a);
    else
      status = run_single(a);
  });
}

void add_synth(CLI::App &app, int &status) {
  CLI::App *synth = app.add_subcommand("synth", "generate synthetic data");
  synth->require_subcommand(1);

  {
    auto *cmd = synth->add_subcommand("population", "random speaker population");
    static int speakers = 40, utts = 37, dim = 512;
    static double spread = 1.0, within = 0.3;
    static std::uint64_t seed = 1;
    static std::string out;
    cmd->add_option("--speakers", speakers)->check(CLI::PositiveNumber);
    cmd->add_option("--utts", utts, "utterances per speaker")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dim", dim)->check(CLI::PositiveNumber);
    cmd->add_option("--spread", spread, "centroid standard deviation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--within", within, "within-speaker standard deviation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed);
    cmd->add_option("--out", out)->required();
    cmd->callback([&status] {
      save_embedding_set(
          generate_population(speakers, utts, dim, spread, within, seed), out);
      status = kOk;
    });
  }
  {
    auto *cmd = synth->add_subcommand("anonymize", "pool-based identity replacement");
    static std::string in, pool, out, distance = "cosine";
    static AnonymizerParams params;
    static std::optional<double> noise;
    cmd->add_option("--in", in)->required();
    cmd->add_option("--pool", pool, "external x-vector pool")->required();
    cmd->add_option("--out", out)->required();
    cmd->add_option("--pool-select", params.pool_select)
        ->check(CLI::PositiveNumber);
    cmd->add_option("--random-pick", params.random_pick)
        ->check(CLI::PositiveNumber);
    cmd->add_option("--distance", distance)
        ->check(CLI::IsMember({"cosine", "euclidean"}));
    cmd->add_option("--noise", noise,
                    "noise sigma (default 0.05 x within-speaker std)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", params.seed);
    cmd->add_flag("--per-utterance", params.per_utterance,
                  "one target per utterance instead of per speaker");
    cmd->callback([&status] {
      params.distance = parse_pool_distance(distance);
      params.noise_sigma = noise;
      const EmbeddingSet set = load_embedding_set(in);
      const XvectorPool p = XvectorPool::from_set(load_embedding_set(pool));
      save_embedding_set(anonymize_set(set, p, params), out);
      status = kOk;
    });
  }
  {
    auto *cmd = synth->add_subcommand("rotate", "hidden random rotation plus noise");
    static std::string in, out, rotation_out;
    static std::uint64_t seed = 0;
    static double noise = 0.0;
    cmd->add_option("--in", in)->required();
    cmd->add_option("--out", out)->required();
    cmd->add_option("--seed", seed);
    cmd->add_option("--noise", noise)->check(CLI::NonNegativeNumber);
    cmd->add_option("--rotation-out", rotation_out, "save the hidden rotation");
    cmd->callback([&status] {
      const RotatedSet r = rotate_anonymize_set(load_embedding_set(in), seed, noise);
      save_embedding_set(r.set, out);
      if (!rotation_out.empty()) save_rotation(r.rotation, rotation_out);
      status = kOk;
    });
  }
  {
    auto *cmd = synth->add_subcommand(
        "dataset", "enroll/trials sets, anonymized copies and pool");
    static DatasetParams params;
    static std::string dir;
    cmd->add_option("--dir", dir, "output directory")->required();
    cmd->add_option("--dim", params.dim)->check(CLI::PositiveNumber);
    cmd->add_option("--spread", params.spread)->check(CLI::PositiveNumber);
    cmd->add_option("--within", params.within)->check(CLI::PositiveNumber);
    cmd->add_option("--pool-size", params.pool_size)->check(CLI::PositiveNumber);
    cmd->add_option("--seed", params.seed);
    cmd->callback([&status] {
      const VpcLikeDataset ds = make_vpc_like_dataset(params);
      const fs::path d(dir);
      fs::create_directories(d);
      save_embedding_set(ds.enroll, d / "enroll.emb");
      save_embedding_set(ds.enroll_anon, d / "enroll_anon.emb");
      save_embedding_set(ds.trials, d / "trials.emb");
      save_embedding_set(ds.trials_anon, d / "trials_anon.emb");
      save_embedding_set(ds.pool, d / "pool.emb");
      status = kOk;
    });
  }
}

void add_eval(CLI::App &app, int &status) {
  auto *cmd = app.add_subcommand("eval", "EER and Top-1 of a set of trials");
  static std::string trials, enroll, reference, scoring = "speaker";
  cmd->add_option("--reconstructed", trials, "trials to evaluate")->required();
  cmd->add_option("--enroll", enroll, "clear enrollment set (EER)");
  cmd->add_option("--reference", reference, "clear trials (Top-1)");
  cmd->add_option("--scoring", scoring)
      ->check(CLI::IsMember({"speaker", "utterance"}));
  cmd->callback([&status] {
    if (enroll.empty() && reference.empty())
      throw CLI::RequiredError("--enroll or --reference");
    const EmbeddingSet rec = load_embedding_set(trials);
    std::optional<EmbeddingSet> en, ref;
    if (!enroll.empty()) en = load_embedding_set(enroll);
    if (!reference.empty()) ref = load_embedding_set(reference);
    std::printf("gender\tn\teer\ttop1\n");
    for (Gender g : {Gender::F, Gender::M}) {
      const EmbeddingSet r = filter_gender(rec, g);
      if (r.is_empty()) continue;
      std::string eer = "-", top1 = "-";
      char buf[32];
      if (en && !filter_gender(*en, g).is_empty()) {
        std::snprintf(buf, sizeof buf, "%.4f",
                      compute_eer(cosine_score_sets(r, filter_gender(*en, g),
                                                    parse_scoring_mode(scoring))));
        eer = buf;
      }
      if (ref && !filter_gender(*ref, g).is_empty()) {
        std::snprintf(buf, sizeof buf, "%.4f",
                      top1_speaker_accuracy(r, filter_gender(*ref, g)));
        top1 = buf;
      }
      std::printf("%s\t%ld\t%s\t%s\n", std::string(to_string(g)).c_str(),
                  static_cast<long>(r.size()), eer.c_str(), top1.c_str());
    }
    status = kOk;
  });
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Speaker embedding alignment attacks"};
  app.require_subcommand(1);
  int status = kOk;
  RunArgs run_args;
  add_run(app, run_args, status);
  add_synth(app, status);
  add_eval(app, status);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  } catch (const std::exception &e) {
    std::cerr << "attack: " << e.what() << "\n";
    return kConfigError;
  }
  return status;
}
