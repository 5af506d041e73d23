#pragma once

#include <string>
#include <string_view>

#include "dysnav/pipeline.hpp"
#include "json.hpp"

namespace dysnav {

using nlohmann::json;

// Node-link JSON for bundles and API payloads. Vertices are referenced by
// index into the bundle's "nodes" table.
void to_json(json& j, const CellRef& c);
void from_json(const json& j, CellRef& c);
void to_json(json& j, const Interval& v);
void from_json(const json& j, Interval& v);
void to_json(json& j, const Clustering& c);
void from_json(const json& j, Clustering& c);
void to_json(json& j, const SimilarityEdge& e);
void from_json(const json& j, SimilarityEdge& e);
void to_json(json& j, const ChangeReport& r);
void from_json(const json& j, ChangeReport& r);
void to_json(json& j, const ConsensusCommunity& c);
void from_json(const json& j, ConsensusCommunity& c);
void to_json(json& j, const HierarchyReport& h);
void from_json(const json& j, HierarchyReport& h);
void to_json(json& j, const GridSummary& g);
void from_json(const json& j, GridSummary& g);
void to_json(json& j, const CellData& c);
void from_json(const json& j, CellData& c);
void to_json(json& j, const AnalysisConfig& c);
void from_json(const json& j, AnalysisConfig& c);
void to_json(json& j, const AnalysisBundle& b);
void from_json(const json& j, AnalysisBundle& b);

std::string serialize_bundle(const AnalysisBundle& b);
AnalysisBundle deserialize_bundle(std::string_view text);

}  // namespace dysnav
