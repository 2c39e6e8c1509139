#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chorefair/allocators.hpp"
#include "chorefair/core.hpp"
#include "chorefair/experiments.hpp"
#include "chorefair/instance.hpp"
#include "chorefair/io.hpp"
#include "chorefair/oracle.hpp"
#include "chorefair/theory.hpp"

namespace {

using namespace chorefair;

constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

void print(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<std::size_t> parse_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("--n expects a comma-separated list of integers, got '" + text + "'");
        }
        out.push_back(std::stoull(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chorefair: fair allocation of random chores"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "Draw a random instance and print it as JSON");
    std::size_t sample_n = 0;
    std::size_t sample_m = 0;
    std::uint64_t sample_seed = 1;
    std::string sample_dist = "uniform";
    std::string sample_out;
    sample->add_option("--n", sample_n, "Number of agents")->required();
    sample->add_option("--m", sample_m, "Number of chores")->required();
    sample->add_option("--seed", sample_seed, "64-bit seed");
    sample->add_option("--dist", sample_dist, "uniform | piecewise:<path>");
    sample->add_option("--out", sample_out, "Write to file instead of stdout");

    // check
    auto* check = app.add_subcommand("check", "Evaluate the fairness of an allocation");
    std::string check_instance;
    std::string check_alloc;
    check->add_option("--instance", check_instance)->required();
    check->add_option("--allocation", check_alloc)->required();

    // allocate
    auto* allocate = app.add_subcommand("allocate", "Run an allocation algorithm on an instance");
    std::string alloc_instance;
    std::string alloc_algo = "ef";
    std::optional<double> alloc_tau;
    double alloc_c = 10.0;
    double alloc_beta = 1.0;
    std::string dump_graph;
    allocate->add_option("--instance", alloc_instance)->required();
    allocate->add_option("--algo", alloc_algo, "costmin|algdiv|twostage|propsmall|propmedium|ef|prop");
    allocate->add_option("--tau", alloc_tau, "Two-stage threshold (default 3 ln n / (beta n))");
    allocate->add_option("--big-m-c", alloc_c, "Dispatcher uses cost-minimizing once m >= C n ln n");
    allocate->add_option("--beta", alloc_beta, "Upper density bound of the source distribution");
    allocate->add_option("--dump-graph", dump_graph, "Write the matching graphs as JSON edge lists");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Decide existence exactly by enumeration");
    std::string oracle_instance;
    std::string oracle_notion = "ef";
    oracle->add_option("--instance", oracle_instance)->required();
    oracle->add_option("--notion", oracle_notion)->check(CLI::IsMember({"ef", "prop"}));

    // certify
    auto* certify = app.add_subcommand("certify", "Look for a non-existence certificate");
    std::string cert_instance;
    std::string cert_notion = "ef";
    certify->add_option("--instance", cert_instance)->required();
    certify->add_option("--notion", cert_notion)->check(CLI::IsMember({"ef", "prop"}));

    // theory
    auto* theory = app.add_subcommand("theory", "Analytic quantities");
    theory->require_subcommand(1);
    auto* theory_nu = theory->add_subcommand("nu", "Root of the envy-freeness threshold equation");
    auto* theory_et = theory->add_subcommand("et", "Expected number of repeated favorite chores");
    std::size_t et_n = 0;
    std::size_t et_m = 0;
    theory_et->add_option("--n", et_n)->required();
    theory_et->add_option("--m", et_m)->required();

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo grid over agent counts");
    std::string mc_n;
    std::string mc_rule = "ratio:2.0";
    std::string mc_dist = "uniform";
    std::string mc_algo = "ef";
    std::size_t mc_trials = 100;
    std::uint64_t mc_seed = 1;
    std::size_t mc_workers = 1;
    std::string mc_out;
    std::string mc_format = "csv";
    std::optional<double> mc_tau;
    double mc_c = 10.0;
    bool mc_canonical = false;
    mc->add_option("--n", mc_n, "Comma-separated agent counts")->required();
    mc->add_option("--m-rule", mc_rule, "fixed:M | ratio:R | div:R");
    mc->add_option("--dist", mc_dist, "uniform | piecewise:<path>");
    mc->add_option("--algo", mc_algo,
                   "costmin|algdiv|twostage|propsmall|propmedium|ef|prop|cert-ef|cert-prop|oracle-ef|oracle-prop");
    mc->add_option("--trials", mc_trials);
    mc->add_option("--seed", mc_seed);
    mc->add_option("--workers", mc_workers);
    mc->add_option("--out", mc_out, "Record file (stdout summary is always printed)");
    mc->add_option("--format", mc_format)->check(CLI::IsMember({"csv", "json"}));
    mc->add_option("--tau", mc_tau);
    mc->add_option("--big-m-c", mc_c);
    mc->add_flag("--canonical", mc_canonical, "Write runtime_ns as 0 for byte-stable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*sample) {
            const auto matrix = sample_instance(sample_n, sample_m, io::parse_distribution_arg(sample_dist), sample_seed);
            if (sample_out.empty()) {
                print(io::instance_to_json(matrix));
            } else {
                io::write_json_file(sample_out, io::instance_to_json(matrix));
            }
        } else if (*check) {
            const auto matrix = io::instance_from_json(io::read_json_file(check_instance));
            const auto alloc = io::allocation_from_json(io::read_json_file(check_alloc), matrix.m());
            print(io::fairness_to_json(evaluate_fairness(matrix, alloc)));
        } else if (*allocate) {
            const auto matrix = io::instance_from_json(io::read_json_file(alloc_instance));
            AllocatorOptions options;
            options.tau = alloc_tau;
            options.big_m_c = alloc_c;
            options.beta = alloc_beta;
            options.keep_graphs = !dump_graph.empty();
            const auto outcome = run_allocator(parse_allocator_choice(alloc_algo), matrix, options);
            if (!dump_graph.empty()) {
                nlohmann::json graphs = nlohmann::json::array();
                for (const auto& g : outcome.graphs) {
                    graphs.push_back(io::graph_to_json(g));
                }
                io::write_json_file(dump_graph, graphs);
            }
            print(io::outcome_to_json(outcome, matrix));
        } else if (*oracle) {
            const auto matrix = io::instance_from_json(io::read_json_file(oracle_instance));
            print(io::existence_to_json(oracle_notion == "ef" ? exists_envy_free(matrix)
                                                              : exists_proportional(matrix)));
        } else if (*certify) {
            const auto matrix = io::instance_from_json(io::read_json_file(cert_instance));
            print(io::certificate_to_json(cert_notion == "ef" ? ef_nonexistence_certificate(matrix)
                                                              : prop_nonexistence_certificate(matrix)));
        } else if (*theory_nu) {
            const double nu = solve_nu();
            print({{"nu", nu}, {"residual", nu_equation_residual(nu)}});
        } else if (*theory_et) {
            print({{"n", et_n},
                   {"m", et_m},
                   {"expected_T", expected_repeated_favorites(et_n, et_m)},
                   {"lower_bound", expected_repeated_favorites_lower_bound(et_n, et_m)},
                   {"threshold", 2.0 * (static_cast<double>(et_m) - static_cast<double>(et_n))}});
        } else if (*mc) {
            ExperimentConfig config;
            try {
                config.n_values = parse_list(mc_n);
                config.m_rule = ChoreRule::parse(mc_rule);
                config.dist = io::parse_distribution_arg(mc_dist);
                config.task = TrialTask::parse(mc_algo);
                config.trials = mc_trials;
                config.seed = mc_seed;
                config.workers = mc_workers;
                config.options.tau = mc_tau;
                config.options.big_m_c = mc_c;
                if (config.trials == 0) {
                    throw std::invalid_argument("--trials must be at least 1");
                }
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << '\n';
                return kConfigError;
            }
            GridResult result;
            try {
                result = run_grid(config);
            } catch (const std::invalid_argument& e) {
                std::cerr << "config error: " << e.what() << '\n';
                return kConfigError;
            }
            if (!mc_out.empty()) {
                std::ofstream out(mc_out);
                if (!out) {
                    throw std::runtime_error("cannot write " + mc_out);
                }
                if (mc_format == "csv") {
                    write_records_csv(out, result.records, mc_canonical);
                } else {
                    write_records_json(out, result.records, mc_canonical);
                }
            }
            if (mc_format == "csv") {
                write_summary_csv(std::cout, result.summary);
            } else {
                write_summary_json(std::cout, result.summary);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
