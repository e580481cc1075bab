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

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "ssrpu/dataset.hpp"

namespace ssrpu {

inline constexpr std::string_view kDatasetSchema = "ssr-pu-dataset/1";

/// JSON-lines dataset. The first line is the header
///   {"schema":"ssr-pu-dataset/1","d":<d>,"k":<K>,"provenance":{...}}
/// followed by one record per instance
///   {"x":[...],"labeled":[class indices],"gold":[class indices]}
/// where "gold" is omitted when the dataset has no gold labels. Features are
/// written with round-trip precision.
void save_jsonl(const ObservedDataset& dataset, std::ostream& out);
void save_jsonl(const ObservedDataset& dataset, const std::string& path);

/// Throws ParseError (with line number) on malformed JSON and SchemaError when
/// a record disagrees with the header or with other records.
ObservedDataset load_jsonl(std::istream& in);
ObservedDataset load_jsonl(const std::string& path);

}  // namespace ssrpu
