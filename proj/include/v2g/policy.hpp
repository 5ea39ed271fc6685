#pragma once

#include <string>
#include <vector>

#include "v2g/model.hpp"

namespace v2g {

// Table of softmax parameters theta_{s,a}, one entry per observable state
// (b, p, i) and valid composite action. Storage is a flat vector in canonical
// order (b, p, i ascending; actions in valid_actions order), which doubles as
// the layout for gradient- and trace-shaped tables.
class PolicyParams {
public:
    PolicyParams(int B, int P); // zero-initialized

    int B() const { return B_; }
    int P() const { return P_; }
    int size() const { return static_cast<int>(theta_.size()); }

    // number of valid actions at battery level b
    int action_count(int b) const;
    // flat index of the first entry of state (b, p, i)
    int block_start(const PevState& s) const;
    // flat index of (s, action #ai)
    int index(const PevState& s, int ai) const;
    // position of a within valid_actions(s); throws if invalid
    int action_index(const PevState& s, ActionPair a) const;

    double& at(const PevState& s, int ai) { return theta_[index(s, ai)]; }
    double at(const PevState& s, int ai) const { return theta_[index(s, ai)]; }
    std::vector<double>& raw() { return theta_; }
    const std::vector<double>& raw() const { return theta_; }

    // flat JSON object keyed "b,p,i/a1,a2"
    std::string to_json() const;
    static PolicyParams from_json(const std::string& text);

private:
    int B_, P_;
    std::vector<int> starts_; // per (b,p,i) block offset
    std::vector<double> theta_;
};

// mu_Theta(s, .) over valid_actions(s): softmax with per-state max subtraction.
std::vector<double> action_probabilities(const PolicyParams& theta, const PevState& s);

// One uniform draw from rng, mapped through the cumulative distribution.
ActionPair sample_action(const PolicyParams& theta, const PevState& s, RngStream& rng);

// Score function grad mu / mu at (s, a). Entries outside s's block are zero,
// so only the block is returned: g[ai] = [ai == chosen] - mu(s, ai).
struct ScoreBlock {
    PevState s;
    std::vector<double> g;
};
ScoreBlock score(const PolicyParams& theta, const PevState& s, ActionPair a);

} // namespace v2g
