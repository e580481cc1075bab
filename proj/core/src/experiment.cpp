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

#include "ssrpu/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "ssrpu/dataset_io.hpp"
#include "ssrpu/errors.hpp"

namespace ssrpu {

void ExperimentConfig::validate() const {
  risk.validate();
  train.validate();
  if (!dataset_path) synth.validate();
  if (holdout < 0) throw ConfigError("holdout must be non-negative");
  if (!(multiplier >= 1.0)) throw ConfigError("multiplier must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("epsilon must lie in (0, 0.5)");
  if (seeds.empty()) throw ConfigError("need at least one seed");
}

void to_json(nlohmann::json& j, const RiskSpec& s) {
  j = nlohmann::json{{"estimator", to_string(s.estimator)},
                     {"class_weighting", s.class_weighting},
                     {"loss_family", to_string(s.loss.family)},
                     {"loss_form", to_string(s.loss.form)},
                     {"margin", s.loss.margin},
                     {"allow_zero_margin", s.loss.allow_zero_margin}};
}

void from_json(const nlohmann::json& j, RiskSpec& s) {
  RiskSpec d;
  s.estimator = parse_estimator(j.value("estimator", std::string(to_string(d.estimator))));
  s.class_weighting = j.value("class_weighting", d.class_weighting);
  s.loss.family = parse_loss_family(j.value("loss_family", std::string(to_string(d.loss.family))));
  s.loss.form = parse_loss_form(j.value("loss_form", std::string(to_string(d.loss.form))));
  s.loss.margin = j.value("margin", d.loss.margin);
  s.loss.allow_zero_margin = j.value("allow_zero_margin", false);
}

void to_json(nlohmann::json& j, const PriorShiftConfig& p) {
  j = nlohmann::json{{"pi", p.pi}, {"pi_labeled", p.pi_labeled}, {"pi_u", p.pi_u}, {"multiplier", p.multiplier}};
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"risk", c.risk},         {"train", c.train},     {"multiplier", c.multiplier},
                     {"epsilon", c.epsilon},   {"seeds", c.seeds},     {"output_dir", c.output_dir},
                     {"holdout", c.holdout},   {"synth", c.synth}};
  j["dataset_path"] = c.dataset_path ? nlohmann::json(*c.dataset_path) : nlohmann::json(nullptr);
  j["test_path"] = c.test_path ? nlohmann::json(*c.test_path) : nlohmann::json(nullptr);
  j["pi_override"] = c.pi_override ? nlohmann::json(*c.pi_override) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  ExperimentConfig d;
  c = d;
  if (j.contains("risk")) c.risk = j.at("risk").get<RiskSpec>();
  if (j.contains("train")) c.train = j.at("train").get<TrainConfig>();
  if (j.contains("synth")) c.synth = j.at("synth").get<SynthConfig>();
  c.multiplier = j.value("multiplier", d.multiplier);
  c.epsilon = j.value("epsilon", d.epsilon);
  c.seeds = j.value("seeds", d.seeds);
  c.output_dir = j.value("output_dir", d.output_dir);
  c.holdout = j.value("holdout", d.holdout);
  auto optional_string = [&](const char* key) -> std::optional<std::string> {
    if (j.contains(key) && !j.at(key).is_null()) return j.at(key).get<std::string>();
    return std::nullopt;
  };
  c.dataset_path = optional_string("dataset_path");
  c.test_path = optional_string("test_path");
  if (j.contains("pi_override") && !j.at("pi_override").is_null())
    c.pi_override = j.at("pi_override").get<std::vector<double>>();
}

PriorShiftConfig priors_for(const ObservedDataset& train, const ExperimentConfig& cfg) {
  const auto labeled = estimate_labeled_prior(train);
  if (cfg.pi_override) {
    if (cfg.pi_override->size() != labeled.size())
      throw ConfigError("pi override needs one entry per class");
    PriorShiftConfig p = make_prior_config(*cfg.pi_override, labeled);
    p.multiplier = cfg.multiplier;
    return p;
  }
  return build_prior_config(labeled, cfg.multiplier, cfg.epsilon);
}

EvalReport evaluate(const Scorer& scorer, const ObservedDataset& dataset, LossForm form) {
  if (!dataset.gold) throw DomainError("evaluation requires gold labels");
  const Matrix scores = scorer.forward(dataset.features);
  EvalReport report = micro_prf(predict_from_scores(scores, form), *dataset.gold);
  report.mean_l_na = na_metric(scores, *dataset.gold);
  return report;
}

std::string_view csv_header() { return "run_id,estimator,loss,margin,multiplier,seed,P,R,F1,L_NA"; }

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const RunRow& row) {
  std::ostringstream os;
  const double nan = std::nan("");
  os << row.run_id << ',' << to_string(row.estimator) << ',' << row.loss << ',' << fmt(row.margin) << ','
     << fmt(row.multiplier) << ',' << row.seed << ',' << fmt(row.failed ? nan : row.precision) << ','
     << fmt(row.failed ? nan : row.recall) << ',' << fmt(row.failed ? nan : row.f1) << ','
     << fmt(row.failed ? nan : row.l_na);
  return os.str();
}

RunRow parse_csv_row(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  for (const char ch : line) {
    if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (ch != '\r' && ch != '\n') {
      current += ch;
    }
  }
  fields.push_back(std::move(current));
  if (fields.size() != 10) throw ParseError(1, "expected 10 CSV fields, got " + std::to_string(fields.size()));
  auto num = [&](std::size_t i) {
    try {
      return std::stod(fields[i]);
    } catch (const std::exception&) {
      throw ParseError(1, "field " + std::to_string(i + 1) + " is not a number: '" + fields[i] + "'");
    }
  };
  RunRow row;
  row.run_id = fields[0];
  row.estimator = parse_estimator(fields[1]);
  row.loss = fields[2];
  row.margin = num(3);
  row.multiplier = num(4);
  row.seed = std::stoull(fields[5]);
  row.precision = num(6);
  row.recall = num(7);
  row.f1 = num(8);
  row.l_na = num(9);
  row.failed = std::isnan(row.f1);
  return row;
}

RunOutcome run_single(const ObservedDataset& train, const ObservedDataset& test, const ExperimentConfig& cfg,
                      std::uint64_t seed, std::string run_id) {
  RunOutcome out;
  out.row.run_id = std::move(run_id);
  out.row.estimator = cfg.risk.estimator;
  out.row.loss = cfg.risk.loss.name();
  out.row.margin = cfg.risk.loss.margin;
  out.row.multiplier = cfg.multiplier;
  out.row.seed = seed;

  TrainConfig tc = cfg.train;
  tc.seed = seed;
  out.priors = priors_for(train, cfg);
  out.training = train_with_report(train, out.priors, cfg.risk, tc);
  if (out.training.report.diverged) {
    out.row.failed = true;
    out.row.error = out.training.report.error;
    return out;
  }
  out.eval = evaluate(out.training.scorer, test, cfg.risk.loss.form);
  out.row.precision = out.eval.micro_p;
  out.row.recall = out.eval.micro_r;
  out.row.f1 = out.eval.micro_f1;
  out.row.l_na = out.eval.mean_l_na;
  return out;
}

RunOutcome run_synthetic(const ExperimentConfig& cfg, std::uint64_t seed, std::string run_id) {
  SynthConfig synth = cfg.synth;
  synth.seed = seed;
  const SyntheticSplit split = generate_split(synth, cfg.holdout);
  return run_single(split.train, split.test, cfg, seed, std::move(run_id));
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "margin") return SweepAxis::margin;
  if (text == "multiplier") return SweepAxis::multiplier;
  if (text == "keep_prob" || text == "keep-prob" || text == "keep") return SweepAxis::keep_prob;
  throw ConfigError("unknown sweep axis '" + std::string(text) + "' (expected margin, multiplier or keep_prob)");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::margin: return "margin";
    case SweepAxis::multiplier: return "multiplier";
    case SweepAxis::keep_prob: return "keep_prob";
  }
  return "unknown";
}

ExperimentConfig with_axis_value(ExperimentConfig cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::margin: cfg.risk.loss.margin = value; break;
    case SweepAxis::multiplier: cfg.multiplier = value; break;
    case SweepAxis::keep_prob:
      if (cfg.dataset_path) throw ConfigError("keep_prob sweeps need synthetic data");
      cfg.synth.label_keep_prob = {value};
      break;
  }
  return cfg;
}

std::vector<RunRow> sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values, int jobs) {
  if (values.size() < 2) throw ConfigError("a sweep needs at least two values");
  base.validate();

  std::optional<ObservedDataset> file_train, file_test;
  if (base.dataset_path) {
    file_train = load_jsonl(*base.dataset_path);
    file_test = base.test_path ? load_jsonl(*base.test_path) : *file_train;
  }

  struct Cell {
    double value;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const double v : values)
    for (const auto s : base.seeds) cells.push_back({v, s});
  std::vector<RunRow> rows(cells.size());

  auto run_cell = [&](std::size_t i) {
    const Cell& cell = cells[i];
    std::ostringstream id;
    id << to_string(axis) << '=' << fmt(cell.value) << "/seed=" << cell.seed;
    RunRow& row = rows[i];
    try {
      const ExperimentConfig cfg = with_axis_value(base, axis, cell.value);
      cfg.validate();
      row = file_train ? run_single(*file_train, *file_test, cfg, cell.seed, id.str()).row
                       : run_synthetic(cfg, cell.seed, id.str()).row;
    } catch (const std::exception& e) {
      row.run_id = id.str();
      row.estimator = base.risk.estimator;
      row.loss = base.risk.loss.name();
      row.margin = axis == SweepAxis::margin ? cell.value : base.risk.loss.margin;
      row.multiplier = axis == SweepAxis::multiplier ? cell.value : base.multiplier;
      row.seed = cell.seed;
      row.failed = true;
      row.error = e.what();
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, cells.size()); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
    });
  for (auto& t : pool) t.join();
  return rows;
}

RunSummary summarize(const std::vector<RunRow>& rows) {
  RunSummary s;
  std::vector<const RunRow*> ok;
  for (const auto& r : rows) {
    ++s.runs;
    if (r.failed)
      ++s.failed;
    else
      ok.push_back(&r);
  }
  auto stat = [&](double RunRow::*field) {
    MeanStd m;
    if (ok.empty()) return m;
    for (const auto* r : ok) m.mean += r->*field;
    m.mean /= static_cast<double>(ok.size());
    if (ok.size() > 1) {
      double ss = 0.0;
      for (const auto* r : ok) ss += (r->*field - m.mean) * (r->*field - m.mean);
      m.stddev = std::sqrt(ss / static_cast<double>(ok.size() - 1));
    }
    return m;
  };
  s.precision = stat(&RunRow::precision);
  s.recall = stat(&RunRow::recall);
  s.f1 = stat(&RunRow::f1);
  s.l_na = stat(&RunRow::l_na);
  return s;
}

}  // namespace ssrpu
