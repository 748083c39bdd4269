#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace fairmatch::io {

/// Instance JSON: {"reviewers", "papers", "affinities" (one row per
/// reviewer) or "affinities_tsv" (path relative to the JSON file),
/// "load_ub", "load_lb" (array or null), "coverage"}.
Instance read_instance(const std::filesystem::path& path);

/// With `tsv`, the affinities go to <stem>.affinities.tsv next to `path`.
void write_instance(const Instance& instance, const std::filesystem::path& path,
                    bool tsv = false);

/// `base` resolves a relative "affinities_tsv".
Instance instance_from_json(const nlohmann::json& doc,
                            const std::filesystem::path& base = {});
nlohmann::json instance_to_json(const Instance& instance);

/// Tab-separated matrix, one reviewer per line. An optional header line and
/// an optional leading label column are detected and skipped.
Matrix read_affinity_tsv(const std::filesystem::path& path, Index reviewers,
                         Index papers);
std::string affinity_tsv(const Matrix& affinity);

/// "paper,reviewer" header, one row per assignment sorted by paper then
/// reviewer.
std::string matching_csv(const Matching& matching);
void write_matching(const Matching& matching, const std::filesystem::path& path);
Matching read_matching(const std::filesystem::path& path, Index reviewers,
                       Index papers);
Matching matching_from_csv(const std::string& text, Index reviewers, Index papers);

nlohmann::json to_json(const MatchingStats& stats);
nlohmann::json to_json(const QuintileBox& box);
nlohmann::json to_json(const Profile& profile);

/// Column header and one row in the summary-table layout.
std::string bench_header();
std::string bench_row(const std::string& data, const std::string& bounds,
                      const std::string& alg, const MatchingStats& stats);

/// Writes to a temporary sibling, then renames over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace fairmatch::io
