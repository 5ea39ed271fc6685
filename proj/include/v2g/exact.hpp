#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "v2g/model.hpp"
#include "v2g/policy.hpp"

namespace v2g::exact {

// Desk-scale analysis chain over (b, p, coverage_remaining). Information
// availability and consumption are integrated out: they enter the expected
// costs and the transition kernel but not the state. The learner's view of a
// chain state is obs(k) = (b, p, [cov > 0]).
class AnalysisSpace {
public:
    explicit AnalysisSpace(const EnvConfig& cfg);

    const EnvConfig& config() const { return cfg_; }
    int size() const { return static_cast<int>(states_.size()); }
    int index(int b, int p, int cov) const;
    std::array<int, 3> state(int k) const { return states_[k]; }
    PevState obs(int k) const;
    const std::vector<ActionPair>& actions(int k) const;
    int action_count(int k) const { return static_cast<int>(actions(k).size()); }

    // expected immediate cost of action #ai at chain state k
    double cost(int k, int ai) const { return costs_[k][ai]; }
    // successor distribution of (k, ai): pairs (state index, probability)
    const std::vector<std::pair<int, double>>& successors(int k, int ai) const {
        return succ_[k][ai];
    }

private:
    EnvConfig cfg_;
    std::vector<std::array<int, 3>> states_;
    std::vector<std::vector<ActionPair>> actions_by_b_; // indexed b-1
    std::vector<std::vector<double>> costs_;
    std::vector<std::vector<std::vector<std::pair<int, double>>>> succ_;
};

// Per-state action distribution over the analysis chain, mu[k][ai].
using MuTable = std::vector<std::vector<double>>;

// mu induced by a softmax policy (each chain state uses its observation's row).
MuTable policy_mu(const AnalysisSpace& space, const PolicyParams& theta);

// Row-stochastic parameterized transition matrix: expectation of the kernel
// over mu. Throws if any row deviates from stochasticity by more than 1e-10.
Eigen::MatrixXd transition_matrix(const AnalysisSpace& space, const MuTable& mu);

// Policy-averaged expected cost per chain state.
Eigen::VectorXd cost_vector(const AnalysisSpace& space, const MuTable& mu);

// Unique stationary distribution of an irreducible row-stochastic matrix,
// solved as a dense linear system with a normalization row. Reducible input is
// rejected with a message naming the unreachable state indices (formatted as
// (b,p,cov) when the space is supplied).
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P,
                                        const AnalysisSpace* space = nullptr);

// C(Theta) = pi . f
double average_cost_exact(const Eigen::VectorXd& pi, const Eigen::VectorXd& costs);

// Differential cost d solving d = f - C + P d with the anchor d(s_star) = 0;
// verifies the Bellman residual to 1e-10.
Eigen::VectorXd differential_cost_solve(const Eigen::MatrixXd& P,
                                        const Eigen::VectorXd& costs, double C,
                                        int s_star_index);

// q(k, ai) = cost(k, ai) - C + sum_k' p(k'|k, ai) d(k')
std::vector<std::vector<double>> q_values(const AnalysisSpace& space, double C,
                                          const Eigen::VectorXd& d);

struct MdpAnalysis {
    Eigen::MatrixXd P;
    Eigen::VectorXd pi;
    Eigen::VectorXd costs; // policy-averaged f(k)
    double C = 0.0;
    Eigen::VectorXd d;
    std::vector<std::vector<double>> q;
};

// Full pipeline for a mu table; s_star anchors d.
MdpAnalysis analyze(const AnalysisSpace& space, const MuTable& mu, const PevState& s_star);

// Exact average-cost gradient for a softmax policy, score form:
//   dC/dtheta_{o,a} = sum_{k: obs(k)=o} pi(k) mu(o,a) (q(k,a) - d(k)).
// Returns the gradient in PolicyParams layout together with the analysis.
struct GradientResult {
    std::vector<double> grad;
    MdpAnalysis analysis;
};
GradientResult gradient_exact(const AnalysisSpace& space, const PolicyParams& theta,
                              const PevState& s_star);

// Independent form of the same gradient, assembled from the cost and
// transition derivatives directly: sum_k pi(k) (grad f(k) + sum_k' grad
// p(k'|k) d(k')). Used to cross-check the score form.
std::vector<double> gradient_direct(const AnalysisSpace& space, const PolicyParams& theta,
                                    const PevState& s_star);

} // namespace v2g::exact
