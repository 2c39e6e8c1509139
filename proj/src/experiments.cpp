#include "chorefair/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "chorefair/oracle.hpp"
#include "chorefair/rng.hpp"

namespace chorefair {

namespace {

double parse_number(std::string_view text, std::string_view what) {
    try {
        std::size_t used = 0;
        const std::string s(text);
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
}

double rate(std::size_t k, std::size_t total) {
    return total == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(total);
}

}  // namespace

std::size_t ChoreRule::chores_for(std::size_t n) const {
    const double dn = static_cast<double>(n);
    switch (kind) {
        case Kind::Fixed: return static_cast<std::size_t>(std::llround(value));
        // Guard against 1.05 * 80 = 84.00000000000001 rounding up to 85.
        case Kind::Ratio: return static_cast<std::size_t>(std::ceil(value * dn - 1e-9));
        case Kind::DivisibleRatio: return static_cast<std::size_t>(std::llround(value)) * n;
    }
    return 0;
}

std::string ChoreRule::to_string() const {
    std::ostringstream os;
    os << (kind == Kind::Fixed ? "fixed:" : kind == Kind::Ratio ? "ratio:" : "div:") << value;
    return os.str();
}

ChoreRule ChoreRule::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("m-rule must look like fixed:M, ratio:R or div:R");
    }
    const auto head = text.substr(0, colon);
    ChoreRule rule;
    rule.value = parse_number(text.substr(colon + 1), "m-rule value");
    if (head == "fixed") {
        rule.kind = Kind::Fixed;
    } else if (head == "ratio") {
        rule.kind = Kind::Ratio;
    } else if (head == "div") {
        rule.kind = Kind::DivisibleRatio;
    } else {
        throw std::invalid_argument("unknown m-rule '" + std::string(head) + "'");
    }
    if (!(rule.value > 0.0)) {
        throw std::invalid_argument("m-rule value must be positive");
    }
    if (rule.kind != Kind::Ratio && rule.value != std::round(rule.value)) {
        throw std::invalid_argument("fixed and div m-rules need an integer value");
    }
    return rule;
}

std::string TrialTask::name() const {
    switch (kind) {
        case Kind::Allocate: return std::string(to_string(allocator));
        case Kind::Certify: return envy_notion ? "cert-ef" : "cert-prop";
        case Kind::Oracle: return envy_notion ? "oracle-ef" : "oracle-prop";
    }
    return "unknown";
}

TrialTask TrialTask::parse(std::string_view text) {
    TrialTask task;
    if (text == "cert-ef" || text == "cert-prop") {
        task.kind = Kind::Certify;
        task.envy_notion = text == "cert-ef";
    } else if (text == "oracle-ef" || text == "oracle-prop") {
        task.kind = Kind::Oracle;
        task.envy_notion = text == "oracle-ef";
    } else {
        task.kind = Kind::Allocate;
        task.allocator = parse_allocator_choice(text);
        task.envy_notion = targets_envy_freeness(task.allocator);
    }
    return task;
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double centre = (p + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::uint64_t derive_trial_seed(std::uint64_t master, std::size_t n, std::size_t m, std::size_t trial) {
    return hash_key(master, {n, m, trial});
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t n, std::size_t m, std::size_t trial_index) {
    TrialRecord rec;
    rec.n = n;
    rec.m = m;
    rec.trial_index = trial_index;
    rec.seed = derive_trial_seed(config.seed, n, m, trial_index);
    rec.algorithm = config.task.name();
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto matrix = sample_instance(n, m, config.dist, rec.seed);
        const auto cert = config.task.envy_notion ? ef_nonexistence_certificate(matrix)
                                                  : prop_nonexistence_certificate(matrix);
        rec.certificate = cert.kind;
        rec.repeated_favorites = count_repeated_favorites(matrix);

        std::optional<Allocation> allocation;
        if (config.task.kind == TrialTask::Kind::Allocate) {
            AllocatorOptions options = config.options;
            options.beta = config.dist.beta();
            allocation = run_allocator(config.task.allocator, matrix, options).allocation;
        } else if (config.task.kind == TrialTask::Kind::Oracle) {
            allocation = (config.task.envy_notion ? exists_envy_free(matrix) : exists_proportional(matrix)).witness;
        }
        if (allocation) {
            rec.found = true;
            rec.envy_free = is_envy_free(matrix, *allocation);
            rec.proportional = is_proportional(matrix, *allocation);
        }
    } catch (const std::exception& e) {
        rec.found = false;
        rec.envy_free = false;
        rec.proportional = false;
        rec.error = e.what();
    }
    rec.runtime_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

GridResult run_grid(const ExperimentConfig& config) {
    if (config.n_values.empty()) {
        throw std::invalid_argument("experiment needs at least one n value");
    }
    if (config.trials == 0) {
        throw std::invalid_argument("experiment needs trials >= 1");
    }
    struct Job {
        std::size_t n;
        std::size_t m;
        std::size_t trial;
    };
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t n : config.n_values) {
        const std::size_t m = config.m_rule.chores_for(n);
        if (n < 2 || m < 2) {
            throw std::invalid_argument("grid cell n = " + std::to_string(n) + ", m = " + std::to_string(m) +
                                        " needs n >= 2 and m >= 2");
        }
        cells.emplace_back(n, m);
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    std::vector<Job> jobs;
    for (const auto& [n, m] : cells) {
        for (std::size_t t = 0; t < config.trials; ++t) {
            jobs.push_back({n, m, t});
        }
    }

    GridResult result;
    result.records.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < jobs.size(); k = next.fetch_add(1)) {
            result.records[k] = run_trial(config, jobs[k].n, jobs[k].m, jobs[k].trial);
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(1, jobs.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    result.summary = summarize(result.records);
    return result;
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("summarize needs at least one record");
    }
    std::map<std::tuple<std::size_t, std::size_t, std::string>, CellSummary> cells;
    std::map<std::tuple<std::size_t, std::size_t, std::string>, double> sum_T;
    std::map<std::tuple<std::size_t, std::size_t, std::string>, double> sum_runtime;
    for (const auto& r : records) {
        const auto key = std::make_tuple(r.n, r.m, r.algorithm);
        auto& c = cells[key];
        c.n = r.n;
        c.m = r.m;
        c.algorithm = r.algorithm;
        ++c.trials;
        c.found += r.found ? 1 : 0;
        c.envy_free += r.envy_free ? 1 : 0;
        c.proportional += r.proportional ? 1 : 0;
        c.certified += r.certificate != CertificateKind::None ? 1 : 0;
        c.errors += r.error.empty() ? 0 : 1;
        sum_T[key] += static_cast<double>(r.repeated_favorites);
        sum_runtime[key] += static_cast<double>(r.runtime_ns);
    }
    std::vector<CellSummary> out;
    for (auto& [key, c] : cells) {
        c.success_rate = rate(c.found, c.trials);
        c.ef_rate = rate(c.envy_free, c.trials);
        c.prop_rate = rate(c.proportional, c.trials);
        c.cert_rate = rate(c.certified, c.trials);
        c.success_ci = wilson_interval(c.found, c.trials);
        c.ef_ci = wilson_interval(c.envy_free, c.trials);
        c.prop_ci = wilson_interval(c.proportional, c.trials);
        c.cert_ci = wilson_interval(c.certified, c.trials);
        c.mean_T = sum_T[key] / static_cast<double>(c.trials);
        c.expected_T = expected_repeated_favorites(c.n, c.m);
        c.mean_runtime_ns = sum_runtime[key] / static_cast<double>(c.trials);
        out.push_back(c);
    }
    return out;
}

std::string_view certificate_name(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::None: return "none";
        case CertificateKind::RepeatedFavorites: return "repeated_favorites";
        case CertificateKind::UnassignableChore: return "unassignable_chore";
    }
    return "unknown";
}

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool canonical) {
    out << "schema=" << kCsvSchemaVersion << '\n';
    out << "n,m,trial,seed,algo,found,ef,prop,cert,T,runtime_ns\n";
    for (const auto& r : records) {
        out << r.n << ',' << r.m << ',' << r.trial_index << ',' << r.seed << ',' << r.algorithm << ','
            << int{r.found} << ',' << int{r.envy_free} << ',' << int{r.proportional} << ','
            << (r.error.empty() ? certificate_name(r.certificate) : std::string_view("error")) << ','
            << r.repeated_favorites << ',' << (canonical ? 0 : r.runtime_ns) << '\n';
    }
}

void write_records_json(std::ostream& out, const std::vector<TrialRecord>& records, bool canonical) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j = {{"n", r.n},
                            {"m", r.m},
                            {"trial", r.trial_index},
                            {"seed", r.seed},
                            {"algo", r.algorithm},
                            {"found", r.found},
                            {"ef", r.envy_free},
                            {"prop", r.proportional},
                            {"cert", certificate_name(r.certificate)},
                            {"T", r.repeated_favorites},
                            {"runtime_ns", canonical ? 0 : r.runtime_ns}};
        if (!r.error.empty()) {
            j["error"] = r.error;
        }
        arr.push_back(std::move(j));
    }
    out << nlohmann::json{{"schema", kCsvSchemaVersion}, {"records", arr}}.dump(2) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& summary) {
    out << "n,m,algo,trials,success_rate,success_lo,success_hi,ef_rate,ef_lo,ef_hi,prop_rate,prop_lo,prop_hi,"
           "cert_rate,cert_lo,cert_hi,mean_T,expected_T,errors,mean_runtime_ns\n";
    out << std::setprecision(6) << std::fixed;
    for (const auto& c : summary) {
        out << c.n << ',' << c.m << ',' << c.algorithm << ',' << c.trials << ',' << c.success_rate << ','
            << c.success_ci.low << ',' << c.success_ci.high << ',' << c.ef_rate << ',' << c.ef_ci.low << ','
            << c.ef_ci.high << ',' << c.prop_rate << ',' << c.prop_ci.low << ',' << c.prop_ci.high << ','
            << c.cert_rate << ',' << c.cert_ci.low << ',' << c.cert_ci.high << ',' << c.mean_T << ','
            << c.expected_T << ',' << c.errors << ',' << c.mean_runtime_ns << '\n';
    }
    out << std::defaultfloat;
}

void write_summary_json(std::ostream& out, const std::vector<CellSummary>& summary) {
    auto ci = [](const Interval& i) { return nlohmann::json::array({i.low, i.high}); };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : summary) {
        arr.push_back({{"n", c.n},
                       {"m", c.m},
                       {"algo", c.algorithm},
                       {"trials", c.trials},
                       {"success_rate", c.success_rate},
                       {"success_ci", ci(c.success_ci)},
                       {"ef_rate", c.ef_rate},
                       {"ef_ci", ci(c.ef_ci)},
                       {"prop_rate", c.prop_rate},
                       {"prop_ci", ci(c.prop_ci)},
                       {"cert_rate", c.cert_rate},
                       {"cert_ci", ci(c.cert_ci)},
                       {"mean_T", c.mean_T},
                       {"expected_T", c.expected_T},
                       {"errors", c.errors},
                       {"mean_runtime_ns", c.mean_runtime_ns}});
    }
    out << arr.dump(2) << '\n';
}

}  // namespace chorefair
