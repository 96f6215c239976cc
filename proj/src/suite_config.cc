// src/suite_config.cc

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

#include "xvalign/error.h"
#include "xvalign/suite.h"
#include "xvalign/text_io.h"

namespace xvalign {

namespace {

bool parse_bool(std::string_view v, const std::string &src, int line) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw FormatError(src, line, "expected a boolean, found '" + std::string(v) + "'");
}

int parse_count(std::string_view v, const std::string &src, int line) {
  const long n = parse_integer(v, src, line);
  if (n < 1 || n > 1'000'000'000)
    throw FormatError(src, line, "expected a positive integer");
  return static_cast<int>(n);
}

double parse_positive(std::string_view v, const std::string &src, int line) {
  const double x = parse_real(v, src, line);
  if (!(x > 0.0)) throw FormatError(src, line, "expected a positive number");
  return x;
}

void apply_key(ScenarioSpec &spec, std::string_view key, std::string_view value,
               const std::filesystem::path &base, const std::string &src,
               int line) {
  auto path = [&] {
    std::filesystem::path p{std::string(value)};
    return p.is_absolute() ? p : base / p;
  };
  auto wrap = [&](auto fn) {
    try {
      fn();
    } catch (const FormatError &) {
      throw;
    } catch (const Error &e) {
      throw FormatError(src, line, e.what());
    }
  };
  WpConfig &wp = spec.wp_config;
  if (key == "name") {
    spec.name = std::string(value);
  } else if (key == "algorithm") {
    wrap([&] { spec.algorithm = parse_algorithm(value); });
  } else if (key == "oracle") {
    spec.oracle = parse_bool(value, src, line);
  } else if (key == "gender_dependent") {
    spec.gender_dependent = parse_bool(value, src, line);
  } else if (key == "pca") {
    if (value == "none" || value == "-")
      spec.pca_k.reset();
    else
      spec.pca_k = parse_count(value, src, line);
  } else if (key == "normalize") {
    spec.length_normalize = parse_bool(value, src, line);
  } else if (key == "scoring") {
    wrap([&] { spec.scoring = parse_scoring_mode(value); });
  } else if (key == "enroll") {
    spec.inputs.enroll = path();
  } else if (key == "enroll_anon") {
    spec.inputs.enroll_anon = path();
  } else if (key == "trials") {
    spec.inputs.trials = path();
  } else if (key == "trials_anon") {
    spec.inputs.trials_anon = path();
  } else if (key == "seed" || key == "wp.seed") {
    const long s = parse_integer(value, src, line);
    if (s < 0) throw FormatError(src, line, "seed must be nonnegative");
    wp.seed = static_cast<std::uint64_t>(s);
  } else if (key == "wp.batch_size_initial") {
    wp.batch_size_initial = parse_count(value, src, line);
  } else if (key == "wp.batch_doublings") {
    wp.batch_doublings = parse_count(value, src, line);
  } else if (key == "wp.epochs_per_level") {
    wp.epochs_per_level = parse_count(value, src, line);
  } else if (key == "wp.learning_rate") {
    wp.learning_rate = parse_positive(value, src, line);
  } else if (key == "wp.sinkhorn_epsilon") {
    wp.sinkhorn_epsilon = parse_positive(value, src, line);
  } else if (key == "wp.sinkhorn_iterations") {
    wp.sinkhorn_iterations = parse_count(value, src, line);
  } else if (key == "wp.init_subset_size") {
    wp.init_subset_size = parse_count(value, src, line);
  } else if (key == "wp.init_restarts") {
    wp.init_restarts = parse_count(value, src, line);
  } else if (key == "wp.init_epsilon_scale") {
    wp.init_epsilon_scale = parse_positive(value, src, line);
  } else if (key == "wp.init_refinements") {
    wp.init_refinements = parse_count(value, src, line);
  } else {
    throw FormatError(src, line, "unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

Suite parse_suite(std::string_view text, const std::filesystem::path &base_dir,
                  const std::string &source_name) {
  Suite suite;
  ScenarioSpec defaults;
  enum class Section { kGlobal, kDefaults, kScenario } section = Section::kGlobal;
  std::optional<ScenarioSpec> current;
  int current_line = 0;

  auto finish = [&] {
    if (!current) return;
    try {
      current->validate();
    } catch (const Error &e) {
      throw FormatError(source_name, current_line, e.what());
    }
    suite.scenarios.push_back(std::move(*current));
    current.reset();
  };

  LineReader reader(text);
  std::string_view raw;
  while (reader.next_line(raw)) {
    const std::string_view line = trim(raw);
    const int no = reader.line();
    if (line.front() == '[') {
      if (line.back() != ']')
        throw FormatError(source_name, no, "unterminated section header");
      const std::string_view header = trim(line.substr(1, line.size() - 2));
      finish();
      if (header == "scenario") {
        section = Section::kScenario;
        current = defaults;
        current_line = no;
      } else if (header == "defaults") {
        section = Section::kDefaults;
      } else {
        throw FormatError(source_name, no,
                          "unknown section [" + std::string(header) + "]");
      }
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw FormatError(source_name, no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw FormatError(source_name, no, "expected 'key = value'");
    if (key == "output") {
      if (section != Section::kGlobal)
        throw FormatError(source_name, no,
                          "'output' is only allowed before the first section");
      std::filesystem::path p{std::string(value)};
      suite.output = p.is_absolute() ? p : base_dir / p;
      continue;
    }
    if (key == "name" && section != Section::kScenario)
      throw FormatError(source_name, no, "'name' belongs in a [scenario]");
    apply_key(section == Section::kScenario ? *current : defaults, key, value,
              base_dir, source_name, no);
  }
  finish();
  return suite;
}

Suite load_suite(const std::filesystem::path &path) {
  return parse_suite(read_text_file(path), path.parent_path(), path.string());
}

std::vector<AttackReport> run_suite(const Suite &suite) {
  std::vector<AttackReport> reports;
  reports.reserve(suite.scenarios.size());
  for (const ScenarioSpec &spec : suite.scenarios) {
    try {
      reports.push_back(run_scenario(spec));
    } catch (const std::exception &e) {
      AttackReport failed;
      failed.scenario = spec.name;
      failed.algorithm = std::string(to_string(spec.algorithm));
      failed.oracle = spec.oracle;
      failed.gender_dependent = spec.gender_dependent;
      failed.pca = spec.pca_k;
      failed.scoring = spec.scoring;
      failed.error = e.what();
      reports.push_back(std::move(failed));
    }
  }
  return reports;
}

std::vector<AttackReport> run_suite(const std::filesystem::path &path) {
  const Suite suite = load_suite(path);
  auto reports = run_suite(suite);
  if (suite.output) write_text_file(*suite.output, format_report_tsv(reports));
  return reports;
}

int suite_exit_code(const std::vector<AttackReport> &reports) {
  for (const auto &r : reports)
    if (!r.ok()) return 2;
  return 0;
}

}  // namespace xvalign
