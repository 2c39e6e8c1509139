// Acceptance run: one [PASS]/[FAIL] line per criterion. argv[1] is the CLI binary.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "chorefair/allocators.hpp"
#include "chorefair/core.hpp"
#include "chorefair/experiments.hpp"
#include "chorefair/matching.hpp"
#include "chorefair/oracle.hpp"
#include "chorefair/rng.hpp"
#include "chorefair/theory.hpp"
#include "../support/brute_force.hpp"

using namespace chorefair;

namespace {

const DistributionSpec kUniform = DistributionSpec::uniform();

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < worker_count(); ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                body(k);
            }
        });
    }
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int failures = 0;

void report(const std::string& id, bool pass, const std::string& what, const std::string& detail, double secs,
            double budget) {
    const bool in_time = secs < budget;
    const bool ok = pass && in_time;
    failures += ok ? 0 : 1;
    std::printf("[%s] %s %s: %s (%.1fs of %.0fs budget%s)\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str(),
                detail.c_str(), secs, budget, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double binomial_sd(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

// p[k+1] >= p[k] - 3 sd of the difference, for every adjacent pair.
bool nondecreasing_within_3sd(const std::vector<double>& p, std::size_t trials) {
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        const double sd = std::hypot(binomial_sd(p[k], trials), binomial_sd(p[k + 1], trials));
        if (p[k + 1] < p[k] - 3.0 * sd) {
            return false;
        }
    }
    return true;
}

std::vector<double> rates(const GridResult& g, const std::function<bool(const TrialRecord&)>& hit) {
    std::vector<double> out;
    for (const auto& cell : g.summary) {
        std::size_t c = 0;
        for (const auto& r : g.records) {
            c += (r.n == cell.n && r.m == cell.m && hit(r)) ? 1 : 0;
        }
        out.push_back(static_cast<double>(c) / static_cast<double>(cell.trials));
    }
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (double x : v) {
        s += (s.empty() ? "" : ", ") + fmt("%.3f", x);
    }
    return "[" + s + "]";
}

ExperimentConfig grid(std::vector<std::size_t> ns, const std::string& rule, const std::string& task,
                      std::size_t trials, std::uint64_t seed) {
    ExperimentConfig c;
    c.n_values = std::move(ns);
    c.m_rule = ChoreRule::parse(rule);
    c.task = TrialTask::parse(task);
    c.trials = trials;
    c.seed = seed;
    c.workers = worker_count();
    return c;
}

struct SmallInstance {
    std::size_t n;
    std::size_t m;
    std::uint64_t seed;
};

std::vector<SmallInstance> small_instances() {
    std::vector<SmallInstance> out;
    std::uint64_t seed = 1000;
    for (int rep = 0; rep < 25; ++rep) {
        for (std::size_t n = 2; n <= 6; ++n) {
            for (std::size_t m = 2; m <= 10; ++m) {
                out.push_back({n, m, seed++});
            }
        }
    }
    return out;
}

void soundness() {
    Stopwatch sw;
    const auto set = small_instances();
    std::atomic<std::size_t> violations{0};
    std::atomic<std::size_t> checked{0};
    parallel_for(set.size(), [&](std::size_t k) {
        const auto [n, m, seed] = set[k];
        const auto d = sample_instance(n, m, kUniform, seed);
        for (const auto& o : {prop_small(d), prop_medium(d), dispatch_proportional(d)}) {
            if (o.found()) {
                ++checked;
                violations += is_proportional(d, *o.allocation) ? 0 : 1;
            }
        }
        if (m >= 2 * n) {
            const auto o = two_stage(d);
            if (o.found() && o.diagnostics.at("stage1_envy_free") == 1.0) {
                ++checked;
                violations += is_envy_free(d, *o.allocation) ? 0 : 1;
            }
        }
        if (m % n == 0 && m >= 2 * n) {
            ++checked;
            violations += alg_div(d).allocation->balanced() ? 0 : 1;
        }
    });
    report("AC1", violations == 0, "soundness suite",
           fmt("%zu instances, %zu outputs checked, %zu violations", set.size(), checked.load(), violations.load()),
           sw.seconds(), 60);
}

void oracle_cross_checks() {
    Stopwatch sw;
    const auto set = small_instances();
    std::atomic<std::size_t> violations{0};
    std::atomic<std::size_t> ef_exists{0};
    std::atomic<std::size_t> prop_exists{0};
    parallel_for(set.size(), [&](std::size_t k) {
        const auto [n, m, seed] = set[k];
        const auto d = sample_instance(n, m, kUniform, seed);
        const bool ef = exists_envy_free(d).exists;
        const bool prop = exists_proportional(d).exists;
        ef_exists += ef;
        prop_exists += prop;
        std::size_t bad = 0;
        bad += ef_nonexistence_certificate(d).fires() && ef;
        bad += prop_nonexistence_certificate(d).fires() && prop;
        bad += ef && !prop;
        const auto ef_success = [&](const AllocatorOutcome& o) { return o.found() && is_envy_free(d, *o.allocation); };
        const auto prop_success = [&](const AllocatorOutcome& o) {
            return o.found() && is_proportional(d, *o.allocation);
        };
        bad += ef_success(dispatch_envy_free(d)) && !ef;
        AllocatorOutcome cm;
        cm.allocation = cost_minimizing(d);
        bad += ef_success(cm) && !ef;
        if (m >= 2 * n) {
            bad += ef_success(two_stage(d)) && !ef;
        }
        if (m % n == 0 && m >= 2 * n) {
            bad += ef_success(alg_div(d)) && !ef;
        }
        bad += prop_success(prop_small(d)) && !prop;
        bad += prop_success(prop_medium(d)) && !prop;
        bad += prop_success(dispatch_proportional(d)) && !prop;
        violations += bad;
    });
    report("AC2", violations == 0, "oracle cross-checks",
           fmt("%zu instances, EF exists in %zu, PROP exists in %zu, %zu violations", set.size(), ef_exists.load(),
               prop_exists.load(), violations.load()),
           sw.seconds(), 300);
}

void nu_root() {
    Stopwatch sw;
    const double nu = solve_nu();
    const double residual = std::abs(nu_equation_residual(nu));
    const bool ok = std::abs(nu - 1.1256) <= 5e-5 && residual <= 1e-12;
    report("AC3", ok, "nu root", fmt("nu = %.10f, |nu - 1.1256| = %.2e (tol 5e-5), residual = %.1e", nu,
                                     std::abs(nu - 1.1256), residual),
           sw.seconds(), 1);
}

void expected_t() {
    Stopwatch sw;
    bool ok = true;
    std::string detail;
    for (auto [n, m] : {std::pair<std::size_t, std::size_t>{10, 10}, {20, 20}, {20, 40}}) {
        auto c = grid({n}, "fixed:" + std::to_string(m), "cert-ef", 100000, 41);
        const auto g = run_grid(c);
        double sum = 0.0;
        double sq = 0.0;
        for (const auto& r : g.records) {
            const double t = static_cast<double>(r.repeated_favorites);
            sum += t;
            sq += t * t;
        }
        const double count = static_cast<double>(g.records.size());
        const double mean = sum / count;
        const double se = std::sqrt((sq - count * mean * mean) / (count - 1.0) / count);
        const double exact = expected_repeated_favorites(n, m);
        ok = ok && std::abs(mean - exact) <= 3.0 * se;
        detail += fmt("(%zu,%zu) mean %.4f vs %.4f, %.2f se; ", n, m, mean, exact, std::abs(mean - exact) / se);
    }
    // Two agents, two chores: the favorites collide in 2 of the 4 equally likely cases.
    double enumerated = 0.0;
    brute::for_each_assignment(2, 2, [&](const brute::Owners& fav) {
        enumerated += fav[0] == fav[1] ? 0.25 : 0.0;
        return false;
    });
    const double closed = expected_repeated_favorites(2, 2);
    ok = ok && std::abs(closed - enumerated) <= 1e-15 && std::abs(closed - 0.5) <= 1e-15;
    detail += fmt("E[T](2,2) = %.6f, enumerated %.6f", closed, enumerated);
    report("AC4", ok, "E[T] closed form", detail, sw.seconds(), 120);
}

void efron_stein() {
    Stopwatch sw;
    const auto v = efron_stein_variance_check(20, 20, 100000, 52);
    report("AC5", v.pass, "Efron-Stein bound",
           fmt("Var(T) = %.4f, bound %.1f + 3 * %.4f", v.variance, v.bound, v.standard_error), sw.seconds(), 60);
}

void two_stage_trend() {
    Stopwatch sw;
    const auto g = run_grid(grid({20, 40, 80}, "ratio:2", "twostage", 200, 63));
    const auto p = rates(g, [](const TrialRecord& r) { return r.found && r.envy_free; });
    const bool ok = nondecreasing_within_3sd(p, 200) && p.back() >= 0.9;
    report("AC6", ok, "two-stage EF trend", "n = 20, 40, 80 -> " + join(p) + ", need >= 0.9 at n = 80", sw.seconds(),
           600);
}

void certificate_trend() {
    Stopwatch sw;
    const auto g = run_grid(grid({20, 40, 80}, "ratio:1.05", "cert-ef", 500, 74));
    const auto p = rates(g, [](const TrialRecord& r) { return r.certificate == CertificateKind::RepeatedFavorites; });
    const auto tail = run_grid(grid({15}, "fixed:15", "cert-ef", 1000, 75));
    const double tail_rate = rates(tail, [](const TrialRecord& r) {
        return r.certificate == CertificateKind::RepeatedFavorites;
    })[0];
    // P[all 15 favorites distinct] = 15! / 15^15.
    double distinct = 1.0;
    for (int k = 1; k <= 15; ++k) {
        distinct *= k / 15.0;
    }
    const bool ok = nondecreasing_within_3sd(p, 500) && p.back() >= 0.9 && tail_rate >= 0.99;
    report("AC7", ok, "EF non-existence trend",
           "n = 20, 40, 80 -> " + join(p) + fmt("; n = m = 15 rate %.3f (P[distinct] = %.3e)", tail_rate, distinct),
           sw.seconds(), 300);
}

void prop_bound() {
    Stopwatch sw;
    const std::size_t trials = 10000;
    const double bound = prop_nonexistence_lower_bound(1.0, 2);
    const double slack = 3.0 * binomial_sd(bound, trials);
    const auto cert = run_grid(grid({10}, "fixed:2", "cert-prop", trials, 85));
    const auto orc = run_grid(grid({10}, "fixed:2", "oracle-prop", trials, 85));
    const double cert_rate = rates(cert, [](const TrialRecord& r) { return r.certificate != CertificateKind::None; })[0];
    const double none_rate = rates(orc, [](const TrialRecord& r) { return r.error.empty() && !r.found; })[0];
    const bool ok = cert_rate >= bound - slack && none_rate >= bound - slack;
    report("AC8", ok, "PROP non-existence bound",
           fmt("certificate %.4f, oracle non-existence %.4f, need >= %.4f - %.4f", cert_rate, none_rate, bound, slack),
           sw.seconds(), 120);
}

void prop_routes() {
    Stopwatch sw;
    const auto small = run_grid(grid({5000}, "fixed:30", "propsmall", 200, 96));
    const double small_rate = rates(small, [](const TrialRecord& r) { return r.found; })[0];

    const auto medium = run_grid(grid({1000}, "fixed:500", "propmedium", 100, 97));
    const double medium_rate = rates(medium, [](const TrialRecord& r) { return r.found; })[0];
    std::size_t unverified = 0;
    for (const auto& r : medium.records) {
        unverified += r.found && !r.proportional;
    }
    for (const auto& r : small.records) {
        unverified += r.found && !r.proportional;
    }
    const bool ok = small_rate >= 0.95 && medium_rate >= 0.8 && unverified == 0;
    report("AC9", ok, "PROP small and medium routes",
           fmt("prop_small n=5000 m=30: %.3f (need 0.95); prop_medium n=1000 m=500: %.3f (need 0.8); "
               "%zu successes not proportional",
               small_rate, medium_rate, unverified),
           sw.seconds(), 600);
}

void matching_engine() {
    Stopwatch sw;
    std::size_t disagreements = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const std::size_t l = 1 + hash_key(s, {1}) % 6;
        const std::size_t r = 1 + hash_key(s, {2}) % 8;
        const double p = 0.15 + 0.7 * to_unit(hash_key(s, {3}));
        const auto g = sample_random_bipartite(l, r, p, s);
        const auto m = right_saturated_2_matching(g);
        if (m) {
            validate_matching(g, *m);
        }
        disagreements += m.has_value() != brute::right_saturated_2_matching_exists(g);
    }

    const double n = 200.0;
    const double p = 2.0 * (std::log(n) + 6.0) / n;
    std::atomic<std::size_t> saturated{0};
    parallel_for(500, [&](std::size_t t) {
        saturated += right_saturated_2_matching(sample_random_bipartite(120, 180, p, 5000 + t)).has_value();
    });
    const double regime_rate = static_cast<double>(saturated) / 500.0;

    std::size_t mismatches = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        std::vector<std::vector<double>> c(6, std::vector<double>(6));
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) {
                c[i][j] = to_unit(hash_key(77 + s, {i, j}));
            }
        }
        mismatches += min_cost_perfect_matching(c).cost != brute::min_permutation_cost(c);
    }
    const bool ok = disagreements == 0 && regime_rate >= 0.95 && mismatches == 0;
    report("AC10", ok, "matching engine",
           fmt("2-matching disagreements %zu/1000; random regime %.3f (need 0.95); Hungarian mismatches %zu/1000",
               disagreements, regime_rate, mismatches),
           sw.seconds(), 180);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism(const std::string& cli) {
    Stopwatch sw;
    const auto dir = std::filesystem::temp_directory_path() / ("chorefair_ac11_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string common = " mc --n 20,40,80 --m-rule ratio:2 --algo ef --trials 100 --seed 2024 --canonical";
    const auto a = dir / "w1.csv";
    const auto b = dir / "w4.csv";
    const int ra = std::system((cli + common + " --workers 1 --out " + a.string() + " > /dev/null").c_str());
    const int rb = std::system((cli + common + " --workers 4 --out " + b.string() + " > /dev/null").c_str());
    const std::string x = slurp(a);
    const std::string y = slurp(b);
    const bool ok = ra == 0 && rb == 0 && !x.empty() && x == y;
    report("AC11", ok, "determinism",
           fmt("exit codes %d/%d, %zu vs %zu bytes, %s", ra, rb, x.size(), y.size(), x == y ? "identical" : "differ"),
           sw.seconds(), 120);
    std::filesystem::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path to chorefair>\n");
        return 2;
    }
    soundness();
    oracle_cross_checks();
    nu_root();
    expected_t();
    efron_stein();
    two_stage_trend();
    certificate_trend();
    prop_bound();
    prop_routes();
    matching_engine();
    determinism(argv[1]);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
