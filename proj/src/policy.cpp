#include "v2g/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace v2g {

PolicyParams::PolicyParams(int B, int P) : B_(B), P_(P) {
    if (B < 1 || P < 1) throw std::invalid_argument("PolicyParams: B and P must be >= 1");
    starts_.reserve(static_cast<std::size_t>(B) * P * 2);
    int offset = 0;
    for (int b = 1; b <= B; ++b) {
        const int na = static_cast<int>(valid_actions({b, 1, 0}, B).size());
        for (int p = 1; p <= P; ++p) {
            for (int i = 0; i <= 1; ++i) {
                starts_.push_back(offset);
                offset += na;
            }
        }
    }
    theta_.assign(offset, 0.0);
}

int PolicyParams::action_count(int b) const {
    return (b == 1 || b == B_) ? (B_ == 1 ? 2 : 4) : 6;
}

int PolicyParams::block_start(const PevState& s) const {
    const int slot = ((s.b - 1) * P_ + (s.p - 1)) * 2 + s.i;
    return starts_[slot];
}

int PolicyParams::index(const PevState& s, int ai) const {
    return block_start(s) + ai;
}

int PolicyParams::action_index(const PevState& s, ActionPair a) const {
    const auto acts = valid_actions(s, B_);
    for (int ai = 0; ai < static_cast<int>(acts.size()); ++ai)
        if (acts[ai] == a) return ai;
    throw std::invalid_argument("action invalid for state");
}

std::string PolicyParams::to_json() const {
    nlohmann::json j;
    j["B"] = B_;
    j["P"] = P_;
    nlohmann::json table = nlohmann::json::object();
    for (int b = 1; b <= B_; ++b) {
        for (int p = 1; p <= P_; ++p) {
            for (int i = 0; i <= 1; ++i) {
                const PevState s{b, p, i};
                const auto acts = valid_actions(s, B_);
                for (int ai = 0; ai < static_cast<int>(acts.size()); ++ai) {
                    const std::string key = std::to_string(b) + "," + std::to_string(p) +
                                            "," + std::to_string(i) + "/" +
                                            std::to_string(static_cast<int>(acts[ai].a1)) +
                                            "," + std::to_string(static_cast<int>(acts[ai].a2));
                    table[key] = at(s, ai);
                }
            }
        }
    }
    j["theta"] = std::move(table);
    return j.dump(2);
}

PolicyParams PolicyParams::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PolicyParams out(j.at("B").get<int>(), j.at("P").get<int>());
    for (const auto& [key, value] : j.at("theta").items()) {
        int b, p, i, a1, a2;
        if (std::sscanf(key.c_str(), "%d,%d,%d/%d,%d", &b, &p, &i, &a1, &a2) != 5)
            throw std::invalid_argument("theta key not in b,p,i/a1,a2 form: " + key);
        const PevState s{b, p, i};
        const int ai = out.action_index(s, {static_cast<A1>(a1), static_cast<A2>(a2)});
        out.at(s, ai) = value.get<double>();
    }
    return out;
}

std::vector<double> action_probabilities(const PolicyParams& theta, const PevState& s) {
    const int n = theta.action_count(s.b);
    std::vector<double> out(n);
    double mx = theta.at(s, 0);
    for (int ai = 1; ai < n; ++ai) mx = std::max(mx, theta.at(s, ai));
    double sum = 0.0;
    for (int ai = 0; ai < n; ++ai) {
        out[ai] = std::exp(theta.at(s, ai) - mx);
        sum += out[ai];
    }
    for (double& v : out) v /= sum;
    return out;
}

ActionPair sample_action(const PolicyParams& theta, const PevState& s, RngStream& rng) {
    const auto mu = action_probabilities(theta, s);
    const double u = rng.uniform();
    double acc = 0.0;
    int chosen = static_cast<int>(mu.size()) - 1;
    for (int ai = 0; ai < static_cast<int>(mu.size()); ++ai) {
        acc += mu[ai];
        if (u < acc) { chosen = ai; break; }
    }
    return valid_actions(s, theta.B())[chosen];
}

ScoreBlock score(const PolicyParams& theta, const PevState& s, ActionPair a) {
    const int chosen = theta.action_index(s, a);
    ScoreBlock out;
    out.s = s;
    out.g = action_probabilities(theta, s);
    for (double& v : out.g) v = -v;
    out.g[chosen] += 1.0;
    return out;
}

} // namespace v2g
