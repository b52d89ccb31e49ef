#include "twospin/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "twospin/errors.hpp"

namespace twospin {

SpinSystem system_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid graph JSON: ") + e.what());
    }
    try {
        const double beta = j.at("beta").get<double>();
        const double gamma = j.at("gamma").get<double>();
        std::vector<std::pair<VertexId, double>> vertices;
        for (const auto& vj : j.at("vertices"))
            vertices.emplace_back(vj.at("id").get<VertexId>(), vj.at("lambda").get<double>());
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (const auto& ej : j.at("edges")) {
            if (!ej.is_array() || ej.size() != 2)
                throw parse_error("each edge must be a [u, v] pair");
            edges.emplace_back(ej[0].get<VertexId>(), ej[1].get<VertexId>());
        }
        std::vector<std::pair<VertexId, int>> pins;
        if (j.contains("pins"))
            for (const auto& pj : j.at("pins"))
                pins.emplace_back(pj.at("id").get<VertexId>(), pj.at("spin").get<int>());
        return SpinSystem(SpinParams(beta, gamma), std::move(vertices), std::move(edges),
                          std::move(pins));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("graph JSON does not match the schema: ") + e.what());
    }
}

SpinSystem system_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return system_from_json_text(ss.str());
}

std::string system_to_json_text(const SpinSystem& sys) {
    nlohmann::json j;
    j["beta"] = sys.params().beta;
    j["gamma"] = sys.params().gamma;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < sys.size(); ++v)
        j["vertices"].push_back({{"id", sys.id_of(v)}, {"lambda", sys.lambda(v)}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : sys.edges())
        j["edges"].push_back({sys.id_of(e[0]), sys.id_of(e[1])});
    nlohmann::json pins = nlohmann::json::array();
    for (int v = 0; v < sys.size(); ++v)
        if (sys.pin(v)) pins.push_back({{"id", sys.id_of(v)}, {"spin", *sys.pin(v)}});
    if (!pins.empty()) j["pins"] = std::move(pins);
    return j.dump(2);
}

}  // namespace twospin
