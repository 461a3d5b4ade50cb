#include "giclab/dists_json.hpp"

#include "giclab/error.hpp"

namespace giclab {

namespace {

double number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError(std::string("distribution: missing numeric field '") + key + "'");
    }
    return j[key].get<double>();
}

std::vector<double> numbers(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) {
        throw ConfigError(std::string("distribution: missing array field '") + key + "'");
    }
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError(std::string("distribution: non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

ScalarDistribution distribution_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (auto d = preset(name)) return *d;
        throw ConfigError("unknown distribution preset '" + name + "'");
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw ConfigError("distribution: expected an object with a string 'kind'");
    }
    const auto kind = j["kind"].get<std::string>();
    if (kind == "gaussian") {
        return ScalarDistribution::gaussian(number(j, "mean"), number(j, "variance"));
    }
    if (kind == "discrete") {
        return ScalarDistribution::discrete(numbers(j, "points"), numbers(j, "probs"));
    }
    if (kind == "mixture") {
        if (!j.contains("components") || !j["components"].is_array()) {
            throw ConfigError("distribution: mixture needs a 'components' array");
        }
        std::vector<MixtureComponent> comps;
        for (const auto& c : j["components"]) {
            if (!c.is_object() || !c.contains("dist")) {
                throw ConfigError("distribution: mixture component needs 'weight' and 'dist'");
            }
            comps.push_back({number(c, "weight"), distribution_from_json(c["dist"])});
        }
        return ScalarDistribution::mixture(std::move(comps));
    }
    throw ConfigError("distribution: unknown kind '" + kind + "'");
}

nlohmann::json to_json(const ScalarDistribution& d) {
    switch (d.kind()) {
        case ScalarDistribution::Kind::gaussian:
            return {{"kind", "gaussian"}, {"mean", d.gaussian_mean()}, {"variance", d.gaussian_variance()}};
        case ScalarDistribution::Kind::discrete: {
            nlohmann::json pts = nlohmann::json::array();
            nlohmann::json probs = nlohmann::json::array();
            for (double p : d.points()) pts.push_back(p);
            for (double p : d.probs()) probs.push_back(p);
            return {{"kind", "discrete"}, {"points", pts}, {"probs", probs}};
        }
        case ScalarDistribution::Kind::mixture: {
            nlohmann::json comps = nlohmann::json::array();
            for (const auto& c : d.components()) comps.push_back({{"weight", c.weight}, {"dist", to_json(c.dist)}});
            return {{"kind", "mixture"}, {"components", comps}};
        }
    }
    return nullptr;
}

ScalarDistribution parse_distribution(const std::string& text) {
    if (auto d = preset(text)) return *d;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("distribution '" + text + "' is neither a preset nor valid JSON: " + e.what());
    }
    return distribution_from_json(j);
}

}  // namespace giclab
