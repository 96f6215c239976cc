// tools/pilot.cc

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

// Pilot run of the synthetic end-to-end attack.  Its output is committed in
// tests/data/pilot_run.txt and fixes the dataset and scenario settings the
// end-to-end acceptance check uses.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "xvalign/anonymizer.h"
#include "xvalign/scenario.h"

using namespace xvalign;

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Pilot run of the synthetic VPC-like attack"};
  int seeds = 10, dim = 512, pca = 70, pool = 1000;
  double within = 0.3;
  bool normalize = true, gender = true;
  app.add_option("--seeds", seeds, "number of dataset seeds (1..N)");
  app.add_option("--dim", dim, "embedding dimension");
  app.add_option("--pca", pca, "PCA components (0 disables)");
  app.add_option("--pool", pool, "external pool size");
  app.add_option("--within", within, "within-speaker standard deviation");
  app.add_flag("--normalize,!--no-normalize", normalize, "length-normalize");
  app.add_flag("--gender,!--no-gender", gender, "gender-dependent rotations");
  CLI11_PARSE(app, argc, argv);

  std::printf("# pilot: dim=%d within=%.3f pool=%d pca=%d normalize=%d "
              "gender_dependent=%d\n",
              dim, within, pool, pca, normalize, gender);
  std::printf("# seed\tscenario\teer_f\teer_m\ttop1_f\ttop1_m\tseconds\n");

  const char *names[] = {"clear", "ignorant", "P", "WP", "PO"};
  std::vector<std::vector<double>> eer(5), top1(5);
  for (int seed = 1; seed <= seeds; ++seed) {
    DatasetParams params;
    params.dim = dim;
    params.within = within;
    params.pool_size = pool;
    params.seed = static_cast<std::uint64_t>(seed);
    const VpcLikeDataset ds = make_vpc_like_dataset(params);

    for (int s = 0; s < 5; ++s) {
      ScenarioSpec spec;
      spec.name = names[s];
      spec.inputs = {"enroll", "enroll_anon", "trials", "trials_anon"};
      spec.length_normalize = normalize;
      spec.wp_config.seed = static_cast<std::uint64_t>(seed);
      ScenarioData data{ds.enroll, ds.enroll_anon, ds.trials, ds.trials_anon};
      if (s == 0) {
        spec.algorithm = Algorithm::kNone;
        data.trials_anon = ds.trials;
      } else if (s == 1) {
        spec.algorithm = Algorithm::kNone;
      } else {
        spec.algorithm = s == 3 ? Algorithm::kWassersteinProcrustes
                                : Algorithm::kProcrustes;
        spec.oracle = s == 4;
        spec.gender_dependent = gender;
        if (pca > 0) spec.pca_k = pca;
      }
      const auto t0 = std::chrono::steady_clock::now();
      const AttackReport r = run_attack(spec, data).report;
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
      std::printf("%d\t%s\t%.4f\t%.4f\t%.4f\t%.4f\t%.2f\n", seed, names[s],
                  *r.eer_f, *r.eer_m, *r.top1_f, *r.top1_m, secs);
      std::fflush(stdout);
      eer[s].push_back(0.5 * (*r.eer_f + *r.eer_m));
      top1[s].push_back(std::min(*r.top1_f, *r.top1_m));
    }
  }
  std::printf("# medians over seeds: mean(F,M) EER, min(F,M) Top-1\n");
  for (int s = 0; s < 5; ++s)
    std::printf("# %s\teer=%.4f\ttop1=%.4f\n", names[s], median_of(eer[s]),
                median_of(top1[s]));
  return 0;
}
