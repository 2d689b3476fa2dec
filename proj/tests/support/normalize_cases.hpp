#pragma once

#include "fixture_paths.hpp"

#include <json.hpp>

#include <random>
#include <regex>
#include <string>
#include <vector>

namespace astra::fixtures {

struct NormFixture {
    std::string name;
    std::string code;
    std::vector<std::string> locals;  // hand-enumerated, in declaration order
};

inline std::vector<NormFixture> load_norm_fixtures() {
    const auto expected = nlohmann::json::parse(read("normalize/expected_locals.json"));
    std::vector<NormFixture> out;
    for (auto it = expected.begin(); it != expected.end(); ++it) {
        out.push_back({it.key(), read("normalize/" + it.key() + ".cpp"), it.value()});
    }
    return out;
}

/// Whole-word rename of each local; the fixtures keep local names out of
/// member accesses, qualified names and literals so this stays consistent.
template <class Rng>
std::string rename_locals(std::string code, const std::vector<std::string>& locals, Rng& rng) {
    std::vector<std::pair<std::string, std::string>> plan;
    for (std::size_t i = 0; i < locals.size(); ++i) {
        std::string fresh = "zz";
        for (int c = 0; c < 6; ++c) fresh += static_cast<char>('a' + rng() % 26);
        plan.emplace_back(locals[i], fresh + "_" + std::to_string(i));
    }
    for (const auto& [from, to] : plan) code = std::regex_replace(code, std::regex("\\b" + from + "\\b"), to);
    return code;
}

}  // namespace astra::fixtures
