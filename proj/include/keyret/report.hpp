// Copyright 2026 The keyret Authors.
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

#ifndef KEYRET_REPORT_HPP_
#define KEYRET_REPORT_HPP_

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "keyret/metrics.hpp"

namespace keyret {

// Self-contained grouped-accuracy result of one records file against one
// prompt set; the unit the report emitters work on.
struct AnalysisDoc {
  std::string backend_id;
  std::string variant;
  std::size_t n_t = 0;
  std::uint32_t n_d = 0;
  std::string annotation;  // comment config label, "none" if unannotated
  std::string promptset_hash;
  Aggregation accuracy;
  FailureSummary failures;
};

nlohmann::json analysis_to_json(const AnalysisDoc& doc);
AnalysisDoc analysis_from_json(const nlohmann::json& j);
void save_analysis(const AnalysisDoc& doc, const std::filesystem::path& path);
AnalysisDoc load_analysis(const std::filesystem::path& path);

// Percent with one decimal, always '.' as separator: "97.5".
std::string format_percent(double fraction);

// CSV with one row per document and one column per group; cells are
// "mean±ci" on the percent scale. All documents must share dimension and k.
std::string emit_table(std::span<const AnalysisDoc> docs);

enum class PlotKind { Auto, Line, Heatmap, FacetedLine, Bar };

// Declarative chart description (Vega-Lite dialect) with the data embedded.
// Auto picks line for one-part numeric keys, heatmap for position pairs,
// faceted lines for spread-by-forward-refs and bars for labelled groups.
nlohmann::json emit_plotspec(const AnalysisDoc& doc,
                             PlotKind kind = PlotKind::Auto);

}  // namespace keyret

#endif  // KEYRET_REPORT_HPP_
