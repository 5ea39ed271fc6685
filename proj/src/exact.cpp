#include "v2g/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace v2g::exact {

AnalysisSpace::AnalysisSpace(const EnvConfig& cfg) : cfg_(cfg) {
    validate(cfg);
    const long n = static_cast<long>(cfg.B) * cfg.P * (cfg.cost.coverage_len + 1);
    if (n > 10000)
        throw std::invalid_argument("AnalysisSpace: state space exceeds desk scale (10^4)");

    actions_by_b_.resize(cfg.B);
    for (int b = 1; b <= cfg.B; ++b) actions_by_b_[b - 1] = valid_actions({b, 1, 0}, cfg.B);

    states_.reserve(n);
    for (int b = 1; b <= cfg.B; ++b)
        for (int p = 1; p <= cfg.P; ++p)
            for (int cov = 0; cov <= cfg.cost.coverage_len; ++cov)
                states_.push_back({b, p, cov});

    costs_.resize(states_.size());
    succ_.resize(states_.size());
    for (int k = 0; k < size(); ++k) {
        const auto [b, p, cov] = states_[k];
        const auto& acts = actions(k);
        costs_[k].resize(acts.size());
        succ_[k].resize(acts.size());
        for (int ai = 0; ai < static_cast<int>(acts.size()); ++ai) {
            const ActionPair a = acts[ai];
            costs_[k][ai] = expected_cost(cfg_, obs(k), cov, a);
            const int cov_next = (a.a2 == A2::Buy) ? cfg.cost.coverage_len
                                                   : std::max(cov - 1, 0);
            const int p_next = p % cfg.P + 1;
            const int delta = (a.a1 == A1::Charge ? 1 : 0) - (a.a1 == A1::Discharge ? 1 : 0);
            auto& row = succ_[k][ai];
            for (const auto [consumed, prob] :
                 {std::pair{0, 1.0 - cfg.cost.consumption_rate},
                  std::pair{1, cfg.cost.consumption_rate}}) {
                if (prob == 0.0) continue;
                const int b_next = std::clamp(b + delta - consumed, 1, cfg.B);
                const int k_next = index(b_next, p_next, cov_next);
                auto it = std::find_if(row.begin(), row.end(),
                                       [&](const auto& e) { return e.first == k_next; });
                if (it == row.end()) row.emplace_back(k_next, prob);
                else it->second += prob;
            }
        }
    }
}

int AnalysisSpace::index(int b, int p, int cov) const {
    return ((b - 1) * cfg_.P + (p - 1)) * (cfg_.cost.coverage_len + 1) + cov;
}

PevState AnalysisSpace::obs(int k) const {
    const auto [b, p, cov] = states_[k];
    return {b, p, cov > 0 ? 1 : 0};
}

const std::vector<ActionPair>& AnalysisSpace::actions(int k) const {
    return actions_by_b_[states_[k][0] - 1];
}

MuTable policy_mu(const AnalysisSpace& space, const PolicyParams& theta) {
    MuTable mu(space.size());
    for (int k = 0; k < space.size(); ++k)
        mu[k] = action_probabilities(theta, space.obs(k));
    return mu;
}

Eigen::MatrixXd transition_matrix(const AnalysisSpace& space, const MuTable& mu) {
    const int n = space.size();
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        for (int ai = 0; ai < space.action_count(k); ++ai) {
            const double pa = mu[k][ai];
            if (pa == 0.0) continue;
            for (const auto& [k2, prob] : space.successors(k, ai)) P(k, k2) += pa * prob;
        }
        if (std::abs(P.row(k).sum() - 1.0) > 1e-10)
            throw std::runtime_error("transition_matrix: row " + std::to_string(k) +
                                     " is not stochastic");
    }
    return P;
}

Eigen::VectorXd cost_vector(const AnalysisSpace& space, const MuTable& mu) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(space.size());
    for (int k = 0; k < space.size(); ++k)
        for (int ai = 0; ai < space.action_count(k); ++ai)
            f(k) += mu[k][ai] * space.cost(k, ai);
    return f;
}

namespace {

std::vector<int> unreached_from(const Eigen::MatrixXd& P, bool transpose) {
    const int n = static_cast<int>(P.rows());
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int k = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            const double w = transpose ? P(j, k) : P(k, j);
            if (w > 0.0 && !seen[j]) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    std::vector<int> missing;
    for (int j = 0; j < n; ++j)
        if (!seen[j]) missing.push_back(j);
    return missing;
}

std::string name_states(const std::vector<int>& idx, const AnalysisSpace* space) {
    std::string out;
    const std::size_t shown = std::min<std::size_t>(idx.size(), 8);
    for (std::size_t j = 0; j < shown; ++j) {
        if (j) out += ", ";
        if (space) {
            const auto [b, p, cov] = space->state(idx[j]);
            out += "(b=" + std::to_string(b) + ",p=" + std::to_string(p) +
                   ",cov=" + std::to_string(cov) + ")";
        } else {
            out += std::to_string(idx[j]);
        }
    }
    if (idx.size() > shown) out += ", ... (" + std::to_string(idx.size()) + " total)";
    return out;
}

} // namespace

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P,
                                        const AnalysisSpace* space) {
    const int n = static_cast<int>(P.rows());
    if (P.cols() != n || n == 0)
        throw std::invalid_argument("stationary_distribution: matrix must be square");

    // irreducibility = every state reachable from state 0 and vice versa
    const auto fwd = unreached_from(P, false);
    if (!fwd.empty())
        throw std::runtime_error("stationary_distribution: chain is reducible; "
                                 "unreachable states: " + name_states(fwd, space));
    const auto bwd = unreached_from(P, true);
    if (!bwd.empty())
        throw std::runtime_error("stationary_distribution: chain is reducible; "
                                 "states that cannot reach the rest: " +
                                 name_states(bwd, space));

    // solve pi (P - I) = 0 with one equation replaced by sum(pi) = 1
    Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(0).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(0) = 1.0;
    Eigen::VectorXd pi = A.partialPivLu().solve(rhs);
    const double resid = (A * pi - rhs).lpNorm<Eigen::Infinity>();
    if (!pi.allFinite() || resid > 1e-8)
        throw std::runtime_error("stationary_distribution: linear solve failed");
    for (int k = 0; k < n; ++k) pi(k) = std::max(pi(k), 0.0); // clip solver noise
    pi /= pi.sum();
    return pi;
}

double average_cost_exact(const Eigen::VectorXd& pi, const Eigen::VectorXd& costs) {
    if (pi.size() != costs.size())
        throw std::invalid_argument("average_cost_exact: size mismatch");
    return pi.dot(costs);
}

Eigen::VectorXd differential_cost_solve(const Eigen::MatrixXd& P,
                                        const Eigen::VectorXd& costs, double C,
                                        int s_star_index) {
    const int n = static_cast<int>(P.rows());
    if (s_star_index < 0 || s_star_index >= n)
        throw std::invalid_argument("differential_cost_solve: bad anchor index");

    // (I - P) d = f - C, with the s* row replaced by d(s*) = 0
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - P;
    Eigen::VectorXd rhs = costs.array() - C;
    M.row(s_star_index).setZero();
    M(s_star_index, s_star_index) = 1.0;
    rhs(s_star_index) = 0.0;
    Eigen::VectorXd d = M.partialPivLu().solve(rhs);
    if (!d.allFinite())
        throw std::runtime_error("differential_cost_solve: singular system");

    // Bellman residual on every original equation
    const Eigen::VectorXd resid = d - (costs.array() - C).matrix() - P * d;
    if (resid.lpNorm<Eigen::Infinity>() > 1e-10)
        throw std::runtime_error("differential_cost_solve: Bellman residual above 1e-10");
    return d;
}

std::vector<std::vector<double>> q_values(const AnalysisSpace& space, double C,
                                          const Eigen::VectorXd& d) {
    std::vector<std::vector<double>> q(space.size());
    for (int k = 0; k < space.size(); ++k) {
        q[k].resize(space.action_count(k));
        for (int ai = 0; ai < space.action_count(k); ++ai) {
            double v = space.cost(k, ai) - C;
            for (const auto& [k2, prob] : space.successors(k, ai)) v += prob * d(k2);
            q[k][ai] = v;
        }
    }
    return q;
}

MdpAnalysis analyze(const AnalysisSpace& space, const MuTable& mu, const PevState& s_star) {
    MdpAnalysis out;
    out.P = transition_matrix(space, mu);
    out.pi = stationary_distribution(out.P, &space);
    out.costs = cost_vector(space, mu);
    out.C = average_cost_exact(out.pi, out.costs);
    const int anchor = space.index(s_star.b, s_star.p, s_star.i == 1 ? 1 : 0);
    out.d = differential_cost_solve(out.P, out.costs, out.C, anchor);
    out.q = q_values(space, out.C, out.d);
    return out;
}

GradientResult gradient_exact(const AnalysisSpace& space, const PolicyParams& theta,
                              const PevState& s_star) {
    GradientResult out;
    const MuTable mu = policy_mu(space, theta);
    out.analysis = analyze(space, mu, s_star);
    out.grad.assign(theta.size(), 0.0);
    for (int k = 0; k < space.size(); ++k) {
        const double pk = out.analysis.pi(k);
        if (pk == 0.0) continue;
        const PevState o = space.obs(k);
        const int base = theta.block_start(o);
        for (int ai = 0; ai < space.action_count(k); ++ai)
            out.grad[base + ai] +=
                pk * mu[k][ai] * (out.analysis.q[k][ai] - out.analysis.d(k));
    }
    return out;
}

std::vector<double> gradient_direct(const AnalysisSpace& space, const PolicyParams& theta,
                                    const PevState& s_star) {
    const MuTable mu = policy_mu(space, theta);
    const MdpAnalysis an = analyze(space, mu, s_star);

    // For each parameter theta_{o,a~}: d mu(o,a)/d theta = mu(o,a)([a=a~] - mu(o,a~)).
    // Assemble sum_k pi(k) [ sum_a dmu * cost(k,a) + sum_a dmu * sum_k' p(k'|k,a) d(k') ].
    std::vector<double> grad(theta.size(), 0.0);
    for (int k = 0; k < space.size(); ++k) {
        const double pk = an.pi(k);
        if (pk == 0.0) continue;
        const PevState o = space.obs(k);
        const int base = theta.block_start(o);
        const int na = space.action_count(k);
        // value of each action = cost + expected next differential cost
        std::vector<double> v(na);
        double v_bar = 0.0;
        for (int ai = 0; ai < na; ++ai) {
            v[ai] = space.cost(k, ai);
            for (const auto& [k2, prob] : space.successors(k, ai)) v[ai] += prob * an.d(k2);
            v_bar += mu[k][ai] * v[ai];
        }
        for (int at = 0; at < na; ++at) {
            // sum_a mu(a)([a=at] - mu(at)) v(a) = mu(at)(v(at) - v_bar)
            grad[base + at] += pk * mu[k][at] * (v[at] - v_bar);
        }
    }
    return grad;
}

} // namespace v2g::exact
