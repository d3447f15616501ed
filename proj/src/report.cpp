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

#include "keyret/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "keyret/errors.hpp"
#include "keyret/util.hpp"

namespace keyret {

using nlohmann::json;

json analysis_to_json(const AnalysisDoc& doc) {
  json j;
  j["type"] = "keyret.analysis";
  j["backend"] = doc.backend_id;
  j["variant"] = doc.variant;
  j["n_t"] = doc.n_t;
  j["n_d"] = doc.n_d;
  j["annotation"] = doc.annotation;
  j["promptset_hash"] = doc.promptset_hash;
  j["dimension"] = std::string(to_string(doc.accuracy.dimension));
  j["k"] = doc.accuracy.k;
  j["prompts_used"] = doc.accuracy.prompts_used;
  j["incomplete_excluded"] = doc.accuracy.incomplete_excluded;
  j["missing_skipped"] = doc.accuracy.missing_skipped;
  json groups = json::array();
  for (const GroupedAccuracy& g : doc.accuracy.groups) {
    json jg;
    jg["key"] = g.key;
    jg["label"] = g.label;
    jg["mean"] = g.mean;
    jg["ci95"] = g.ci;
    jg["prompts"] = g.prompts;
    groups.push_back(std::move(jg));
  }
  j["groups"] = std::move(groups);
  json failures;
  failures["samples"] = doc.failures.samples;
  for (FailureClass cls :
       {FailureClass::Correct, FailureClass::DistractorAnswer,
        FailureClass::PartialAnswer, FailureClass::Other}) {
    json entry;
    auto count = doc.failures.counts.find(cls);
    entry["count"] = count == doc.failures.counts.end() ? 0 : count->second;
    auto dist = doc.failures.mean_edit_distance.find(cls);
    if (dist != doc.failures.mean_edit_distance.end()) {
      entry["mean_edit_distance"] = dist->second;
    } else {
      entry["mean_edit_distance"] = nullptr;
    }
    failures[std::string(to_string(cls))] = std::move(entry);
  }
  failures["incorrect_mean_edit_distance"] =
      doc.failures.incorrect_mean_edit_distance;
  j["failures"] = std::move(failures);
  return j;
}

AnalysisDoc analysis_from_json(const json& j) {
  if (j.value("type", "") != "keyret.analysis") {
    throw ConfigError("not an analysis document");
  }
  AnalysisDoc doc;
  doc.backend_id = j.at("backend").get<std::string>();
  doc.variant = j.at("variant").get<std::string>();
  doc.n_t = j.at("n_t").get<std::size_t>();
  doc.n_d = j.at("n_d").get<std::uint32_t>();
  doc.annotation = j.at("annotation").get<std::string>();
  doc.promptset_hash = j.at("promptset_hash").get<std::string>();
  doc.accuracy.dimension =
      dimension_from_string(j.at("dimension").get<std::string>());
  doc.accuracy.k = j.at("k").get<std::uint32_t>();
  doc.accuracy.prompts_used = j.at("prompts_used").get<std::size_t>();
  doc.accuracy.incomplete_excluded =
      j.at("incomplete_excluded").get<std::size_t>();
  doc.accuracy.missing_skipped = j.at("missing_skipped").get<std::size_t>();
  for (const auto& jg : j.at("groups")) {
    GroupedAccuracy g;
    g.key = jg.at("key").get<std::vector<long long>>();
    g.label = jg.at("label").get<std::string>();
    g.mean = jg.at("mean").get<double>();
    g.ci = jg.at("ci95").get<double>();
    g.prompts = jg.at("prompts").get<std::size_t>();
    doc.accuracy.groups.push_back(std::move(g));
  }
  const json& failures = j.at("failures");
  doc.failures.samples = failures.at("samples").get<std::size_t>();
  for (FailureClass cls :
       {FailureClass::Correct, FailureClass::DistractorAnswer,
        FailureClass::PartialAnswer, FailureClass::Other}) {
    const json& entry = failures.at(std::string(to_string(cls)));
    const auto count = entry.at("count").get<std::size_t>();
    if (count > 0) {
      doc.failures.counts[cls] = count;
    }
    if (!entry.at("mean_edit_distance").is_null()) {
      doc.failures.mean_edit_distance[cls] =
          entry.at("mean_edit_distance").get<double>();
    }
  }
  doc.failures.incorrect_mean_edit_distance =
      failures.at("incorrect_mean_edit_distance").get<double>();
  return doc;
}

void save_analysis(const AnalysisDoc& doc, const std::filesystem::path& path) {
  write_file(path, analysis_to_json(doc).dump(2) + "\n");
}

AnalysisDoc load_analysis(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("bad analysis file " + path.string() + ": " + e.what());
  }
  return analysis_from_json(j);
}

std::string format_percent(double fraction) {
  // Manual tenths-of-a-percent formatting; immune to locale settings.
  const long long tenths = std::llround(fraction * 1000.0);
  std::string out = std::to_string(tenths / 10);
  out += '.';
  out += std::to_string(std::llabs(tenths % 10));
  return out;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string emit_table(std::span<const AnalysisDoc> docs) {
  if (docs.empty()) {
    throw ShapeMismatch("no analysis documents to tabulate");
  }
  const GroupDimension dim = docs[0].accuracy.dimension;
  const std::uint32_t k = docs[0].accuracy.k;
  for (const AnalysisDoc& doc : docs) {
    if (doc.accuracy.dimension != dim || doc.accuracy.k != k) {
      throw ShapeMismatch(
          "all documents in one table must share dimension and k");
    }
  }

  // Column order: group keys ascending, labels as tie-break.
  std::vector<std::pair<std::vector<long long>, std::string>> columns;
  for (const AnalysisDoc& doc : docs) {
    for (const GroupedAccuracy& g : doc.accuracy.groups) {
      std::pair<std::vector<long long>, std::string> col{g.key, g.label};
      if (std::find(columns.begin(), columns.end(), col) == columns.end()) {
        columns.push_back(std::move(col));
      }
    }
  }
  std::sort(columns.begin(), columns.end());

  std::string out = "backend,variant,n_t,n_d,annotation,k";
  for (const auto& [key, label] : columns) {
    out += ',';
    out += csv_escape(label);
  }
  out += '\n';
  for (const AnalysisDoc& doc : docs) {
    out += csv_escape(doc.backend_id);
    out += ',';
    out += doc.variant;
    out += ',';
    out += std::to_string(doc.n_t);
    out += ',';
    out += std::to_string(doc.n_d);
    out += ',';
    out += csv_escape(doc.annotation);
    out += ',';
    out += std::to_string(k);
    for (const auto& col : columns) {
      out += ',';
      const GroupedAccuracy* found = nullptr;
      for (const GroupedAccuracy& g : doc.accuracy.groups) {
        if (g.key == col.first && g.label == col.second) {
          found = &g;
          break;
        }
      }
      if (found) {
        out += format_percent(found->mean);
        out += "\xc2\xb1";  // ±
        out += format_percent(found->ci);
      }
    }
    out += '\n';
  }
  return out;
}

namespace {

json base_spec(const AnalysisDoc& doc) {
  json spec;
  spec["$schema"] = "https://vega.github.io/schema/vega-lite/v5.json";
  spec["description"] = doc.variant + " accuracy@" +
                        std::to_string(doc.accuracy.k) + " (" +
                        doc.backend_id + ", " + std::to_string(doc.n_t) +
                        " tokens, " + std::to_string(doc.n_d) +
                        " distractor chains)";
  return spec;
}

json line_spec(const AnalysisDoc& doc, const std::string& x_title) {
  json values = json::array();
  for (const GroupedAccuracy& g : doc.accuracy.groups) {
    json row;
    row["x"] = g.key.at(0);
    row["accuracy"] = g.mean;
    row["ci_low"] = std::max(0.0, g.mean - g.ci);
    row["ci_high"] = std::min(1.0, g.mean + g.ci);
    row["prompts"] = g.prompts;
    values.push_back(std::move(row));
  }
  json spec = base_spec(doc);
  spec["data"]["values"] = std::move(values);
  json band;
  band["mark"] = "errorband";
  band["encoding"]["x"] = {{"field", "x"},
                           {"type", "quantitative"},
                           {"title", x_title}};
  band["encoding"]["y"] = {{"field", "ci_low"},
                           {"type", "quantitative"},
                           {"title", "accuracy"}};
  band["encoding"]["y2"] = {{"field", "ci_high"}};
  json line;
  line["mark"] = {{"type", "line"}, {"point", true}};
  line["encoding"]["x"] = {{"field", "x"},
                           {"type", "quantitative"},
                           {"title", x_title}};
  line["encoding"]["y"] = {{"field", "accuracy"},
                           {"type", "quantitative"},
                           {"scale", {{"domain", json::array({0, 1})}}}};
  spec["layer"] = json::array({std::move(band), std::move(line)});
  return spec;
}

json heatmap_spec(const AnalysisDoc& doc) {
  json values = json::array();
  for (const GroupedAccuracy& g : doc.accuracy.groups) {
    json row;
    row["key_bin"] = g.key.at(0);
    row["value_bin"] = g.key.at(1);
    row["accuracy"] = g.mean;
    row["prompts"] = g.prompts;
    values.push_back(std::move(row));
  }
  json spec = base_spec(doc);
  spec["data"]["values"] = std::move(values);
  spec["mark"] = "rect";
  spec["encoding"]["x"] = {{"field", "key_bin"},
                           {"type", "ordinal"},
                           {"title", "key position bin"}};
  spec["encoding"]["y"] = {{"field", "value_bin"},
                           {"type", "ordinal"},
                           {"title", "value position bin"}};
  spec["encoding"]["color"] = {{"field", "accuracy"},
                               {"type", "quantitative"},
                               {"scale", {{"domain", json::array({0, 1})}}}};
  return spec;
}

json faceted_spec(const AnalysisDoc& doc) {
  json values = json::array();
  for (const GroupedAccuracy& g : doc.accuracy.groups) {
    json row;
    row["forward_refs"] = g.key.at(0);
    row["spread_bin"] = g.key.at(1);
    row["accuracy"] = g.mean;
    row["ci_low"] = std::max(0.0, g.mean - g.ci);
    row["ci_high"] = std::min(1.0, g.mean + g.ci);
    row["prompts"] = g.prompts;
    values.push_back(std::move(row));
  }
  json spec = base_spec(doc);
  spec["data"]["values"] = std::move(values);
  spec["facet"]["column"] = {{"field", "forward_refs"},
                             {"type", "ordinal"},
                             {"title", "forward references"}};
  json band;
  band["mark"] = "errorband";
  band["encoding"]["x"] = {{"field", "spread_bin"},
                           {"type", "quantitative"},
                           {"title", "spread bin"}};
  band["encoding"]["y"] = {{"field", "ci_low"}, {"type", "quantitative"}};
  band["encoding"]["y2"] = {{"field", "ci_high"}};
  json line;
  line["mark"] = {{"type", "line"}, {"point", true}};
  line["encoding"]["x"] = {{"field", "spread_bin"},
                           {"type", "quantitative"},
                           {"title", "spread bin"}};
  line["encoding"]["y"] = {{"field", "accuracy"},
                           {"type", "quantitative"},
                           {"scale", {{"domain", json::array({0, 1})}}}};
  spec["spec"]["layer"] = json::array({std::move(band), std::move(line)});
  return spec;
}

json bar_spec(const AnalysisDoc& doc) {
  json values = json::array();
  for (const GroupedAccuracy& g : doc.accuracy.groups) {
    json row;
    row["group"] = g.label;
    row["accuracy"] = g.mean;
    row["ci_low"] = std::max(0.0, g.mean - g.ci);
    row["ci_high"] = std::min(1.0, g.mean + g.ci);
    row["prompts"] = g.prompts;
    values.push_back(std::move(row));
  }
  json spec = base_spec(doc);
  spec["data"]["values"] = std::move(values);
  spec["mark"] = "bar";
  spec["encoding"]["x"] = {{"field", "group"}, {"type", "nominal"}};
  spec["encoding"]["y"] = {{"field", "accuracy"},
                           {"type", "quantitative"},
                           {"scale", {{"domain", json::array({0, 1})}}}};
  return spec;
}

}  // namespace

json emit_plotspec(const AnalysisDoc& doc, PlotKind kind) {
  const GroupDimension dim = doc.accuracy.dimension;
  if (kind == PlotKind::Auto) {
    switch (dim) {
      case GroupDimension::PositionBinPair:
        kind = PlotKind::Heatmap;
        break;
      case GroupDimension::SpreadForwardRefs:
        kind = PlotKind::FacetedLine;
        break;
      case GroupDimension::Overall:
      case GroupDimension::CommentConfig:
        kind = PlotKind::Bar;
        break;
      default:
        kind = PlotKind::Line;
        break;
    }
  }
  auto need_key_parts = [&](std::size_t n) {
    for (const GroupedAccuracy& g : doc.accuracy.groups) {
      if (g.key.size() != n) {
        throw ShapeMismatch("group keys do not fit the requested plot");
      }
    }
    if (doc.accuracy.groups.empty()) {
      throw ShapeMismatch("no groups to plot");
    }
  };
  switch (kind) {
    case PlotKind::Line: {
      need_key_parts(1);
      std::string title(to_string(dim));
      return line_spec(doc, title);
    }
    case PlotKind::Heatmap:
      need_key_parts(2);
      return heatmap_spec(doc);
    case PlotKind::FacetedLine:
      need_key_parts(2);
      return faceted_spec(doc);
    case PlotKind::Bar:
      if (doc.accuracy.groups.empty()) {
        throw ShapeMismatch("no groups to plot");
      }
      return bar_spec(doc);
    case PlotKind::Auto:
      break;
  }
  throw ShapeMismatch("unsupported plot kind");
}

}  // namespace keyret
