#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chorefair/allocators.hpp"
#include "chorefair/instance.hpp"
#include "chorefair/theory.hpp"

namespace chorefair {

// How the chore count follows the agent count in a grid.
struct ChoreRule {
    enum class Kind { Fixed, Ratio, DivisibleRatio };
    Kind kind = Kind::Ratio;
    double value = 2.0;

    // Fixed: m = value; Ratio: m = ceil(value n); DivisibleRatio: m = value n.
    std::size_t chores_for(std::size_t n) const;
    std::string to_string() const;
    // Accepts "fixed:M", "ratio:R" and "div:R". Throws std::invalid_argument.
    static ChoreRule parse(std::string_view text);
};

// What a trial does with its instance: run an allocator, evaluate a
// non-existence certificate only, or ask the exact oracle.
struct TrialTask {
    enum class Kind { Allocate, Certify, Oracle };
    Kind kind = Kind::Allocate;
    AllocatorChoice allocator = AllocatorChoice::EnvyFree;
    bool envy_notion = true;

    std::string name() const;
    // Allocator names, "cert-ef", "cert-prop", "oracle-ef" or "oracle-prop".
    static TrialTask parse(std::string_view text);
};

struct ExperimentConfig {
    std::vector<std::size_t> n_values;
    ChoreRule m_rule;
    DistributionSpec dist = DistributionSpec::uniform();
    TrialTask task;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    AllocatorOptions options;  // beta is overridden by dist.beta()
};

struct TrialRecord {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    bool found = false;
    bool envy_free = false;
    bool proportional = false;
    CertificateKind certificate = CertificateKind::None;
    std::size_t repeated_favorites = 0;
    std::int64_t runtime_ns = 0;
    std::string error;  // non-empty when the trial threw

    bool operator==(const TrialRecord&) const = default;
};

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

// Wilson score interval at normal quantile z (1.96 for 95%).
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96);

struct CellSummary {
    std::size_t n = 0;
    std::size_t m = 0;
    std::string algorithm;
    std::size_t trials = 0;
    std::size_t found = 0;
    std::size_t envy_free = 0;
    std::size_t proportional = 0;
    std::size_t certified = 0;
    std::size_t errors = 0;
    double success_rate = 0.0;
    double ef_rate = 0.0;
    double prop_rate = 0.0;
    double cert_rate = 0.0;
    Interval success_ci;
    Interval ef_ci;
    Interval prop_ci;
    Interval cert_ci;
    double mean_T = 0.0;
    double expected_T = 0.0;
    double mean_runtime_ns = 0.0;
};

struct GridResult {
    std::vector<TrialRecord> records;  // ordered by (n, m, trial_index)
    std::vector<CellSummary> summary;
};

std::uint64_t derive_trial_seed(std::uint64_t master, std::size_t n, std::size_t m, std::size_t trial);

// One trial on the instance sampled from `seed`; exceptions become an error record.
TrialRecord run_trial(const ExperimentConfig& config, std::size_t n, std::size_t m, std::size_t trial_index);

// Throws std::invalid_argument for an invalid config.
GridResult run_grid(const ExperimentConfig& config);

// Per-(n, m, algorithm) aggregation. Throws std::invalid_argument on empty input.
std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);

std::string_view certificate_name(CertificateKind kind);

inline constexpr int kCsvSchemaVersion = 1;

// `canonical` writes runtime_ns as 0 so output is byte-stable across runs.
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool canonical = false);
void write_records_json(std::ostream& out, const std::vector<TrialRecord>& records, bool canonical = false);
void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& summary);
void write_summary_json(std::ostream& out, const std::vector<CellSummary>& summary);

}  // namespace chorefair
