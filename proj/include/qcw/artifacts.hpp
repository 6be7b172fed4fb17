#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcw/degree.hpp"
#include "qcw/experiments.hpp"
#include "qcw/games.hpp"
#include "qcw/geometry.hpp"

namespace qcw {

const char* qcw_version();

// Reference data for the standard geometries and games (hardware results;
// shipped for comparison only).
const char* reference_values_json();

// Provenance block stamped into every structured artifact.
struct ArtifactMeta {
  std::string config_hash;  // fnv1a64 hex of the canonical config string
  std::string geometry_name;
  std::string geometry_hash;  // fnv1a64 hex of the geometry JSON dump
  std::uint64_t seed = 0;
};

std::string geometry_hash(const IncidenceGeometry& g);

// All formatters are deterministic: reals pass through round6, maps keep
// insertion order, no timestamps.
std::string format_chi_report(const ChiReport& report,
                              const std::vector<HistogramData>& extractions,
                              const ArtifactMeta& meta);
std::string format_context_csv(const IncidenceGeometry& g,
                               const std::vector<ContextEstimate>& est);
std::string format_histogram_csv(const HistogramData& h);
std::string format_histogram_svg(const HistogramData& h);
std::string format_game_result(const GameResult& result,
                               const OptimalClassicalResult* optimal,
                               const ArtifactMeta& meta);
std::string format_transcript_csv(const IncidenceGeometry& g, GameKind kind,
                                  const std::vector<Question>& questions,
                                  const std::vector<TranscriptRow>& rows);
std::string format_degree_result(const IncidenceGeometry& g,
                                 const DegreeResult& result,
                                 const HexagonReport* hexagon,
                                 const ArtifactMeta& meta);

struct ReportBundle {
  std::string json;
  std::string text;
  std::vector<std::string> warnings;
};

// Merge previously written artifact JSONs into one summary table, side by
// side with the shipped reference values. Unknown inputs produce warnings;
// artifacts disagreeing on a geometry's hash are refused.
ReportBundle build_report(const std::vector<std::string>& artifact_texts);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace qcw
