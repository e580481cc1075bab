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

#include "ssrpu/dataset_io.hpp"

#include <fstream>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssrpu/errors.hpp"

namespace ssrpu {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<int> positive_columns(const SignMatrix& m, Eigen::Index row) {
  std::vector<int> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (m(row, c) == kPositive) out.push_back(static_cast<int>(c));
  return out;
}

std::string line_tag(std::size_t line) { return "line " + std::to_string(line) + ": "; }

void read_indices(const nlohmann::json& value, std::size_t line, int k, std::string_view field,
                  Eigen::Index row, SignMatrix& target) {
  if (!value.is_array()) throw SchemaError(line_tag(line) + "'" + std::string(field) + "' must be an array");
  for (const auto& idx : value) {
    if (!idx.is_number_integer())
      throw SchemaError(line_tag(line) + "'" + std::string(field) + "' entries must be integers");
    const auto c = idx.get<long long>();
    if (c < 0 || c >= k)
      throw SchemaError(line_tag(line) + "class index " + std::to_string(c) + " in '" +
                        std::string(field) + "' is outside [0, " + std::to_string(k) + ")");
    target(row, static_cast<Eigen::Index>(c)) = kPositive;
  }
}

}  // namespace

void save_jsonl(const ObservedDataset& dataset, std::ostream& out) {
  dataset.validate();
  ordered_json header;
  header["schema"] = kDatasetSchema;
  header["d"] = dataset.dim();
  header["k"] = dataset.class_count;
  if (!dataset.provenance.empty()) header["provenance"] = ordered_json::parse(dataset.provenance.dump());
  out << header.dump() << '\n';
  for (Eigen::Index r = 0; r < dataset.size(); ++r) {
    ordered_json rec;
    std::vector<double> x(dataset.features.row(r).begin(), dataset.features.row(r).end());
    rec["x"] = x;
    rec["labeled"] = positive_columns(dataset.observed, r);
    if (dataset.gold) rec["gold"] = positive_columns(*dataset.gold, r);
    out << rec.dump() << '\n';
  }
  if (!out) throw Error("failed to write dataset");
}

void save_jsonl(const ObservedDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_jsonl(dataset, out);
}

ObservedDataset load_jsonl(std::istream& in) {
  std::string text;
  std::size_t line = 0;
  auto parse = [&](std::size_t at) {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(at, e.what());
    }
  };

  if (!std::getline(in, text)) throw ParseError(1, "empty dataset file, expected a header line");
  ++line;
  const auto header = parse(line);
  if (!header.is_object() || header.value("schema", std::string()) != kDatasetSchema)
    throw SchemaError(line_tag(line) + "header must declare schema \"" + std::string(kDatasetSchema) + "\"");
  if (!header.contains("d") || !header["d"].is_number_integer() || header["d"].get<long long>() <= 0 ||
      !header.contains("k") || !header["k"].is_number_integer() || header["k"].get<long long>() <= 0)
    throw SchemaError(line_tag(line) + "header needs positive integer fields 'd' and 'k'");
  const auto d = static_cast<Eigen::Index>(header["d"].get<long long>());
  const int k = static_cast<int>(header["k"].get<long long>());

  std::vector<std::vector<double>> xs;
  std::vector<nlohmann::json> labeled, gold;
  std::vector<std::size_t> lines;
  std::optional<bool> has_gold;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    auto rec = parse(line);
    if (!rec.is_object() || !rec.contains("x") || !rec.contains("labeled"))
      throw SchemaError(line_tag(line) + "record needs 'x' and 'labeled'");
    const bool g = rec.contains("gold");
    if (has_gold && *has_gold != g)
      throw SchemaError(line_tag(line) + "gold labels must be present on every record or on none");
    has_gold = g;
    const auto& x = rec["x"];
    if (!x.is_array() || static_cast<Eigen::Index>(x.size()) != d)
      throw SchemaError(line_tag(line) + "'x' must be an array of " + std::to_string(d) + " numbers");
    std::vector<double> row;
    row.reserve(x.size());
    for (const auto& v : x) {
      if (!v.is_number()) throw SchemaError(line_tag(line) + "'x' entries must be numbers");
      row.push_back(v.get<double>());
    }
    xs.push_back(std::move(row));
    lines.push_back(line);
    labeled.push_back(std::move(rec["labeled"]));
    if (g) gold.push_back(std::move(rec["gold"]));
  }

  ObservedDataset out;
  out.class_count = k;
  out.provenance = header.value("provenance", nlohmann::json::object());
  const auto n = static_cast<Eigen::Index>(xs.size());
  out.features.resize(n, d);
  out.observed = SignMatrix::Constant(n, k, kNegative);
  if (has_gold.value_or(false)) out.gold = SignMatrix::Constant(n, k, kNegative);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto rec_line = lines[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < d; ++c) out.features(r, c) = xs[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    read_indices(labeled[static_cast<std::size_t>(r)], rec_line, k, "labeled", r, out.observed);
    if (out.gold) read_indices(gold[static_cast<std::size_t>(r)], rec_line, k, "gold", r, *out.gold);
  }
  try {
    out.validate();
  } catch (const DomainError& e) {
    throw SchemaError(e.what());
  }
  return out;
}

ObservedDataset load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_jsonl(in);
}

}  // namespace ssrpu
