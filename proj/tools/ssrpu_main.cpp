// Copyright 2026 The ssrpu Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ssrpu: generate / train / eval / sweep / check.
//
// Exit codes: 0 ok, 1 unexpected, 2 config, 3 data, 4 divergence, 5 check failed.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ssrpu/dataset_io.hpp"
#include "ssrpu/errors.hpp"
#include "ssrpu/experiment.hpp"
#include "ssrpu/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kOther = 1, kConfig = 2, kData = 3, kDiverged = 4, kCheckFailed = 5 };

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ssrpu::ConfigError(std::string(what) + ": cannot parse '" + item + "'");
    }
    pos = comma + 1;
  }
  return out;
}

std::string default_output_dir() {
  const char* env = std::getenv("SSRPU_OUTPUT_DIR");
  return env && *env ? env : ".";
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ssrpu::Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ssrpu::ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ssrpu::ConfigError(path.string() + ": " + e.what());
  }
}

// Flag values before they are folded into an ExperimentConfig. Only flags the
// user actually passed override a --config file.
struct Flags {
  std::string config_path, data, test_data, out = default_output_dir();
  std::string estimator, family, form, arch, priors, keep, pi, seeds;
  double margin = 0, multiplier = 0, epsilon = 0, lr = 0, wd = 0, warmup = 0, separation = 0;
  int epochs = 0, batch = 0, hidden = 0, n = 0, d = 0, k = 0, holdout = 0, cap = 0;
  std::uint64_t seed = 0;
  bool class_weighting = false, allow_zero_margin = false;
};

void add_synth_flags(CLI::App* app, Flags& f) {
  app->add_option("--n", f.n, "training instances");
  app->add_option("--d", f.d, "feature dimension");
  app->add_option("--k", f.k, "number of classes");
  app->add_option("--priors", f.priors, "comma-separated class priors");
  app->add_option("--keep", f.keep, "label keep probability (one value or one per class)");
  app->add_option("--separation", f.separation, "inverse noise scale of the planted score");
  app->add_option("--cap", f.cap, "keep at most this many labels per class");
  app->add_option("--holdout", f.holdout, "held-out test instances");
}

void add_experiment_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "start from a saved config.json");
  app->add_option("--data", f.data, "training dataset (JSONL); synthetic when absent");
  app->add_option("--test-data", f.test_data, "evaluation dataset with gold labels");
  add_synth_flags(app, f);
  app->add_option("--estimator", f.estimator, "pn, nnpu or nnspu");
  app->add_option("--loss", f.family, "squared or log-sigmoid");
  app->add_option("--form", f.form, "plain or ranking");
  app->add_option("--margin", f.margin, "ranking margin");
  app->add_flag("--allow-zero-margin", f.allow_zero_margin, "permit margin 0 with the squared ranking loss");
  app->add_flag("--class-weighting", f.class_weighting, "weight positive terms by ((1-pi)/pi)^0.5");
  app->add_option("--multiplier", f.multiplier, "pi = multiplier * pi_labeled");
  app->add_option("--epsilon", f.epsilon, "prior floor and ceiling margin");
  app->add_option("--pi", f.pi, "explicit comma-separated priors instead of the multiplier");
  app->add_option("--epochs", f.epochs);
  app->add_option("--lr", f.lr, "peak learning rate");
  app->add_option("--warmup", f.warmup, "warmup fraction of total steps");
  app->add_option("--batch-size", f.batch);
  app->add_option("--weight-decay", f.wd);
  app->add_option("--arch", f.arch, "linear or mlp1");
  app->add_option("--hidden", f.hidden, "hidden width for mlp1");
  app->add_option("-O,--out", f.out, "output directory (default $SSRPU_OUTPUT_DIR or .)");
}

bool given(const CLI::App* app, const char* name) {
  const CLI::Option* opt = app->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Bad flag values surface as DomainError from the library's validators.
template <typename F>
auto as_config(F&& f) {
  try {
    return f();
  } catch (const ssrpu::DomainError& e) {
    throw ssrpu::ConfigError(e.what());
  }
}

ssrpu::ExperimentConfig build_config(const CLI::App* app, const Flags& f) {
  ssrpu::ExperimentConfig c;
  if (!f.config_path.empty()) c = read_json(f.config_path).get<ssrpu::ExperimentConfig>();
  if (given(app, "--data")) c.dataset_path = f.data;
  if (given(app, "--test-data")) c.test_path = f.test_data;
  if (given(app, "--n")) c.synth.n = f.n;
  if (given(app, "--d")) c.synth.d = f.d;
  if (given(app, "--k")) c.synth.k = f.k;
  if (given(app, "--priors")) c.synth.class_priors = parse_doubles(f.priors, "--priors");
  if (given(app, "--keep")) c.synth.label_keep_prob = parse_doubles(f.keep, "--keep");
  if (given(app, "--separation")) c.synth.separation = f.separation;
  if (given(app, "--cap")) c.synth.cap_per_class = f.cap;
  if (given(app, "--holdout")) c.holdout = f.holdout;
  if (given(app, "--estimator")) c.risk.estimator = ssrpu::parse_estimator(f.estimator);
  if (given(app, "--loss")) c.risk.loss.family = ssrpu::parse_loss_family(f.family);
  if (given(app, "--form")) c.risk.loss.form = ssrpu::parse_loss_form(f.form);
  if (given(app, "--margin")) c.risk.loss.margin = f.margin;
  if (f.allow_zero_margin) c.risk.loss.allow_zero_margin = true;
  if (f.class_weighting) c.risk.class_weighting = true;
  if (given(app, "--multiplier")) c.multiplier = f.multiplier;
  if (given(app, "--epsilon")) c.epsilon = f.epsilon;
  if (given(app, "--pi")) c.pi_override = parse_doubles(f.pi, "--pi");
  if (given(app, "--epochs")) c.train.epochs = f.epochs;
  if (given(app, "--lr")) c.train.learning_rate = f.lr;
  if (given(app, "--warmup")) c.train.warmup_fraction = f.warmup;
  if (given(app, "--batch-size")) c.train.batch_size = f.batch;
  if (given(app, "--weight-decay")) c.train.weight_decay = f.wd;
  if (given(app, "--arch")) c.train.architecture = ssrpu::parse_architecture(f.arch);
  if (given(app, "--hidden")) c.train.hidden_dim = f.hidden;
  if (given(app, "--seed")) {
    c.train.seed = f.seed;
    c.seeds = {f.seed};
  }
  if (given(app, "--seeds")) {
    c.seeds.clear();
    for (const double s : parse_doubles(f.seeds, "--seeds")) c.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  c.output_dir = f.out;
  as_config([&] {
    c.validate();
    return 0;
  });
  return c;
}

fs::path prepare_output_dir(const std::string& dir) {
  fs::create_directories(dir);
  return fs::path(dir);
}

int cmd_generate(const CLI::App* app, const Flags& f, const std::string& out, const std::string& test_out) {
  ssrpu::SynthConfig c;
  if (given(app, "--n")) c.n = f.n;
  if (given(app, "--d")) c.d = f.d;
  if (given(app, "--k")) c.k = f.k;
  if (given(app, "--priors")) c.class_priors = parse_doubles(f.priors, "--priors");
  if (given(app, "--keep")) c.label_keep_prob = parse_doubles(f.keep, "--keep");
  if (given(app, "--separation")) c.separation = f.separation;
  if (given(app, "--cap")) c.cap_per_class = f.cap;
  if (given(app, "--seed")) c.seed = f.seed;
  as_config([&] {
    c.validate();
    return 0;
  });
  const int holdout = test_out.empty() ? 0 : (given(app, "--holdout") ? f.holdout : 5000);
  const ssrpu::SyntheticSplit split = ssrpu::generate_split(c, holdout);
  ssrpu::save_jsonl(split.train, out);
  if (!test_out.empty()) ssrpu::save_jsonl(split.test, test_out);

  const auto labeled = ssrpu::estimate_labeled_prior(split.train);
  json summary{{"output", out}, {"instances", split.train.size()}, {"pi_labeled", labeled}};
  std::vector<double> gold_prior(static_cast<std::size_t>(c.k), 0.0);
  for (Eigen::Index r = 0; r < split.train.gold->rows(); ++r)
    for (int i = 0; i < c.k; ++i)
      if ((*split.train.gold)(r, i) == ssrpu::kPositive) gold_prior[static_cast<std::size_t>(i)] += 1.0;
  for (auto& p : gold_prior) p /= static_cast<double>(split.train.size());
  summary["pi_gold"] = gold_prior;
  if (!test_out.empty()) summary["test_output"] = test_out;
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

int cmd_train(const ssrpu::ExperimentConfig& cfg) {
  const fs::path dir = prepare_output_dir(cfg.output_dir);
  write_json(dir / "config.json", cfg);

  ssrpu::ObservedDataset train, test;
  if (cfg.dataset_path) {
    train = ssrpu::load_jsonl(*cfg.dataset_path);
    if (cfg.test_path) test = ssrpu::load_jsonl(*cfg.test_path);
  } else {
    ssrpu::SynthConfig synth = cfg.synth;
    synth.seed = cfg.train.seed;
    auto split = ssrpu::generate_split(synth, cfg.holdout);
    train = std::move(split.train);
    test = std::move(split.test);
  }

  const ssrpu::PriorShiftConfig priors = ssrpu::priors_for(train, cfg);
  ssrpu::TrainResult result = ssrpu::train_with_report(train, priors, cfg.risk, cfg.train);
  json report{{"priors", priors}, {"training", result.report}};
  if (!result.report.diverged) {
    ssrpu::save_scorer(result.scorer, (dir / "model.txt").string());
    if (test.size() > 0 && test.has_gold()) report["eval"] = ssrpu::evaluate(result.scorer, test, cfg.risk.loss.form);
  }
  write_json(dir / "report.json", report);
  if (result.report.diverged) {
    std::cerr << "training diverged: " << result.report.error << '\n';
    return kDiverged;
  }
  json brief{{"model", (dir / "model.txt").string()}, {"epochs", result.report.epochs.size()},
             {"final_risk", result.report.epochs.back().mean_risk}};
  if (report.contains("eval")) brief["eval"] = report["eval"];
  std::cout << brief.dump(2) << '\n';
  return kOk;
}

int cmd_eval(const std::string& model_path, const std::string& data_path, const std::string& csv_path,
             const std::string& run_id, std::string config_path) {
  const ssrpu::Scorer scorer = ssrpu::load_scorer(model_path);
  const ssrpu::ObservedDataset data = ssrpu::load_jsonl(data_path);
  if (config_path.empty()) {
    const fs::path sibling = fs::path(model_path).parent_path() / "config.json";
    if (fs::exists(sibling)) config_path = sibling.string();
  }
  ssrpu::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = read_json(config_path).get<ssrpu::ExperimentConfig>();
  const ssrpu::EvalReport report = ssrpu::evaluate(scorer, data, cfg.risk.loss.form);

  ssrpu::RunRow row;
  row.run_id = run_id;
  row.estimator = cfg.risk.estimator;
  row.loss = cfg.risk.loss.name();
  row.margin = cfg.risk.loss.margin;
  row.multiplier = cfg.multiplier;
  row.seed = cfg.train.seed;
  row.precision = report.micro_p;
  row.recall = report.micro_r;
  row.f1 = report.micro_f1;
  row.l_na = report.mean_l_na;
  if (!csv_path.empty()) {
    const bool fresh = !fs::exists(csv_path) || fs::file_size(csv_path) == 0;
    std::ofstream out(csv_path, std::ios::app);
    if (!out) throw ssrpu::Error("cannot write " + csv_path);
    if (fresh) out << ssrpu::csv_header() << '\n';
    out << ssrpu::to_csv(row) << '\n';
  }
  std::cout << json(report).dump(2) << '\n' << ssrpu::to_csv(row) << '\n';
  return kOk;
}

int cmd_sweep(const ssrpu::ExperimentConfig& cfg, const std::string& axis_text, const std::string& values_text,
              int jobs) {
  const ssrpu::SweepAxis axis = ssrpu::parse_sweep_axis(axis_text);
  const std::vector<double> values = parse_doubles(values_text, "--values");
  const fs::path dir = prepare_output_dir(cfg.output_dir);
  json effective = cfg;
  effective["sweep"] = {{"axis", ssrpu::to_string(axis)}, {"values", values}};
  write_json(dir / "config.json", effective);

  const std::vector<ssrpu::RunRow> rows = ssrpu::sweep(cfg, axis, values, jobs);
  {
    std::ofstream out(dir / "sweep.csv");
    out << ssrpu::csv_header() << '\n';
    for (const auto& r : rows) out << ssrpu::to_csv(r) << '\n';
  }

  json summary = json::array();
  std::size_t failed = 0;
  for (std::size_t v = 0; v < values.size(); ++v) {
    const auto first = rows.begin() + static_cast<std::ptrdiff_t>(v * cfg.seeds.size());
    const std::vector<ssrpu::RunRow> cell(first, first + static_cast<std::ptrdiff_t>(cfg.seeds.size()));
    const ssrpu::RunSummary s = ssrpu::summarize(cell);
    failed += s.failed;
    auto ms = [](const ssrpu::MeanStd& m) { return json{{"mean", m.mean}, {"std", m.stddev}}; };
    summary.push_back({{ssrpu::to_string(axis), values[v]},
                       {"P", ms(s.precision)},
                       {"R", ms(s.recall)},
                       {"F1", ms(s.f1)},
                       {"L_NA", ms(s.l_na)},
                       {"failed", s.failed}});
    std::printf("%s=%-8g P %.4f ± %.4f  R %.4f ± %.4f  F1 %.4f ± %.4f  (%zu failed)\n",
                std::string(ssrpu::to_string(axis)).c_str(), values[v], s.precision.mean, s.precision.stddev,
                s.recall.mean, s.recall.stddev, s.f1.mean, s.f1.stddev, s.failed);
  }
  write_json(dir / "summary.json", summary);
  for (const auto& r : rows)
    if (r.failed) std::cerr << r.run_id << ": " << r.error << '\n';
  return failed == 0 ? kOk : kDiverged;
}

int cmd_check(const ssrpu::oracle::CheckOptions& options, const std::string& out_path) {
  const auto verdicts = ssrpu::oracle::run_checks(options);
  bool all = true;
  for (const auto& v : verdicts) all = all && v.passed;
  const json j{{"passed", all}, {"checks", verdicts}};
  if (!out_path.empty()) write_json(out_path, j);
  std::cout << j.dump(2) << '\n';
  return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-label PU learning with prior shift correction"};
  app.require_subcommand(1);

  Flags f;
  std::string out_path, test_out, model, csv, run_id = "run", eval_config, axis, values, check_out;
  int jobs = 1;
  ssrpu::oracle::CheckOptions check_options;

  auto* gen = app.add_subcommand("generate", "write a synthetic censored dataset");
  add_synth_flags(gen, f);
  gen->add_option("--seed", f.seed, "generator seed");
  gen->add_option("-o,--output", out_path, "dataset path")->required();
  gen->add_option("--test-out", test_out, "also write a held-out test split here");

  auto* tr = app.add_subcommand("train", "train one model");
  add_experiment_flags(tr, f);
  tr->add_option("--seed", f.seed, "training (and synthetic data) seed");

  auto* ev = app.add_subcommand("eval", "evaluate a model against gold labels");
  ev->add_option("--model", model)->required();
  ev->add_option("--data", f.data)->required();
  ev->add_option("--config", eval_config, "config.json of the run (default: next to the model)");
  ev->add_option("--csv", csv, "append the result row to this CSV");
  ev->add_option("--run-id", run_id);

  auto* sw = app.add_subcommand("sweep", "train and evaluate over one axis and several seeds");
  add_experiment_flags(sw, f);
  sw->add_option("--axis", axis, "margin, multiplier or keep_prob")->required();
  sw->add_option("--values", values, "comma-separated axis values")->required();
  sw->add_option("--seeds", f.seeds, "comma-separated seeds (default 62,63,64,65,66)");
  sw->add_option("--jobs", jobs, "parallel cells");

  auto* ck = app.add_subcommand("check", "run the oracle self-checks");
  ck->add_option("--seed", check_options.seed);
  ck->add_option("--corrupt-pi-u", check_options.corrupt_pi_u, "perturb pi_u in the shifted-PU oracle");
  ck->add_option("-o,--output", check_out, "also write the verdict JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen, f, out_path, test_out);
    if (tr->parsed()) return cmd_train(build_config(tr, f));
    if (ev->parsed()) return cmd_eval(model, f.data, csv, run_id, eval_config);
    if (sw->parsed()) return cmd_sweep(build_config(sw, f), axis, values, jobs);
    if (ck->parsed()) return cmd_check(check_options, check_out);
  } catch (const ssrpu::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ssrpu::TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kDiverged;
  } catch (const ssrpu::Error& e) {
    // ParseError, SchemaError, DomainError: the input data is unusable.
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
