#include "chorefair/io.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace chorefair::io {

nlohmann::json instance_to_json(const DisutilityMatrix& matrix) {
    return {{"n", matrix.n()}, {"m", matrix.m()}, {"costs", matrix.to_rows()}};
}

DisutilityMatrix instance_from_json(const nlohmann::json& j) {
    const auto rows = j.at("costs").get<std::vector<std::vector<double>>>();
    DisutilityMatrix matrix(rows);
    if (j.contains("n") && j.at("n").get<std::size_t>() != matrix.n()) {
        throw std::invalid_argument("instance: \"n\" does not match the number of cost rows");
    }
    if (j.contains("m") && j.at("m").get<std::size_t>() != matrix.m()) {
        throw std::invalid_argument("instance: \"m\" does not match the cost row length");
    }
    return matrix;
}

nlohmann::json allocation_to_json(const Allocation& alloc) {
    nlohmann::json bundles = nlohmann::json::array();
    for (const auto& b : alloc.bundles()) {
        nlohmann::json one = nlohmann::json::array();
        for (std::size_t c : b) {
            one.push_back(c + 1);
        }
        bundles.push_back(std::move(one));
    }
    return {{"bundles", std::move(bundles)}};
}

Allocation allocation_from_json(const nlohmann::json& j, std::size_t m) {
    std::vector<std::vector<std::size_t>> bundles;
    for (const auto& b : j.at("bundles")) {
        std::vector<std::size_t> one;
        for (const auto& c : b) {
            const auto idx = c.get<long long>();
            if (idx < 1) {
                throw std::invalid_argument("allocation: chore indices are 1-based");
            }
            one.push_back(static_cast<std::size_t>(idx - 1));
        }
        bundles.push_back(std::move(one));
    }
    return Allocation(m, std::move(bundles));
}

DistributionSpec distribution_from_json(const nlohmann::json& j) {
    return DistributionSpec::piecewise(j.at("breakpoints").get<std::vector<double>>(),
                                       j.at("densities").get<std::vector<double>>());
}

DistributionSpec parse_distribution_arg(std::string_view arg) {
    if (arg == "uniform") {
        return DistributionSpec::uniform();
    }
    constexpr std::string_view prefix = "piecewise:";
    if (arg.starts_with(prefix)) {
        return distribution_from_json(read_json_file(std::string(arg.substr(prefix.size()))));
    }
    throw std::invalid_argument("--dist must be 'uniform' or 'piecewise:<path>'");
}

nlohmann::json fairness_to_json(const FairnessReport& report) {
    nlohmann::json j = {{"envy_free", report.envy_free},
                        {"proportional", report.proportional},
                        {"efx", report.efx},
                        {"max_envy", report.max_envy},
                        {"prop_violation", report.prop_violation}};
    j["mms_fair"] = report.mms_fair ? nlohmann::json(*report.mms_fair) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json certificate_to_json(const NonExistenceCertificate& cert) {
    nlohmann::json j = {{"fires", cert.fires()}, {"T", cert.repeated_favorites}};
    switch (cert.kind) {
        case CertificateKind::None: j["kind"] = "None"; break;
        case CertificateKind::RepeatedFavorites: j["kind"] = "RepeatedFavorites"; break;
        case CertificateKind::UnassignableChore:
            j["kind"] = "UnassignableChore";
            j["chore"] = *cert.chore + 1;
            j["meets_ratio_threshold"] = cert.meets_ratio_threshold;
            break;
    }
    return j;
}

nlohmann::json existence_to_json(const ExistenceResult& result) {
    nlohmann::json j = {{"exists", result.exists}};
    if (result.witness) {
        j["witness"] = allocation_to_json(*result.witness);
    }
    return j;
}

nlohmann::json graph_to_json(const BipartiteGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [l, r] : g.edges()) {
        edges.push_back({l, r});
    }
    return {{"n_left", g.n_left()}, {"n_right", g.n_right()}, {"edges", std::move(edges)}};
}

nlohmann::json outcome_to_json(const AllocatorOutcome& outcome, const DisutilityMatrix& matrix) {
    nlohmann::json j = {{"algorithm", to_string(outcome.algorithm)},
                        {"route", to_string(outcome.route)},
                        {"found", outcome.found()}};
    j["diagnostics"] = outcome.diagnostics;
    if (outcome.allocation) {
        j["allocation"] = allocation_to_json(*outcome.allocation);
        j["fairness"] = fairness_to_json(evaluate_fairness(matrix, *outcome.allocation));
    } else {
        j["allocation"] = nullptr;
    }
    if (outcome.two_stage) {
        const auto& p = *outcome.two_stage;
        nlohmann::json gap = nlohmann::json::array();
        for (std::size_t i : p.gap_set) {
            gap.push_back(i + 1);
        }
        nlohmann::json left = nlohmann::json::array();
        for (std::size_t c : p.leftover) {
            left.push_back(c + 1);
        }
        j["two_stage"] = {{"tau", p.tau}, {"r", p.r}, {"xi", p.xi}, {"gap_set", gap}, {"leftover", left}};
    }
    return j;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("cannot parse " + path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

}  // namespace chorefair::io
