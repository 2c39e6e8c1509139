#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "chorefair/allocators.hpp"
#include "chorefair/core.hpp"
#include "chorefair/instance.hpp"
#include "chorefair/matching.hpp"
#include "chorefair/oracle.hpp"
#include "chorefair/theory.hpp"

namespace chorefair::io {

// Instance files: {"n": int, "m": int, "costs": [[...], ...]}, row i = agent i.
nlohmann::json instance_to_json(const DisutilityMatrix& matrix);
DisutilityMatrix instance_from_json(const nlohmann::json& j);

// Allocation files: {"bundles": [[chore, ...], ...]} with 1-based chore indices.
nlohmann::json allocation_to_json(const Allocation& alloc);
Allocation allocation_from_json(const nlohmann::json& j, std::size_t m);

// Distribution files: {"breakpoints": [...], "densities": [...]}.
DistributionSpec distribution_from_json(const nlohmann::json& j);
// "uniform" or "piecewise:<path>".
DistributionSpec parse_distribution_arg(std::string_view arg);

nlohmann::json fairness_to_json(const FairnessReport& report);
nlohmann::json certificate_to_json(const NonExistenceCertificate& cert);
nlohmann::json existence_to_json(const ExistenceResult& result);
nlohmann::json graph_to_json(const BipartiteGraph& g);
nlohmann::json outcome_to_json(const AllocatorOutcome& outcome, const DisutilityMatrix& matrix);

// Throws std::runtime_error when the file cannot be read or parsed.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace chorefair::io
