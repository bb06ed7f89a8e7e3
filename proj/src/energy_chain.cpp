#include "irsa/energy_chain.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace irsa {
namespace {

// Binomial pmf via log-gamma; exact enough at any M we care about and
// immune to overflow.
double binomial_pmf(int k, int n, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

double residual_l1(const Matrix& P, const std::vector<double>& phi) {
    const std::size_t n = phi.size();
    double res = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += phi[i] * P[i][j];
        res += std::abs(col - phi[j]);
    }
    return res;
}

}  // namespace

SpendDistribution spend_distribution(const DegreeDistribution& dist, double sigma, int capacity) {
    if (!validate_avoid_mask(dist, capacity))
        throw ConfigError("spend distribution requires a battery-masked degree table");
    SpendDistribution out;
    const std::size_t cols = static_cast<std::size_t>(dist.max_degree()) + 1;
    out.xi.assign(static_cast<std::size_t>(capacity) + 1, std::vector<double>(cols, 0.0));
    for (int b = 0; b <= capacity; ++b) {
        const auto& lambda = dist.row(b);
        auto& row = out.xi[static_cast<std::size_t>(b)];
        row[0] = 1.0 - sigma + sigma * lambda[0];
        for (std::size_t l = 1; l < cols; ++l) row[l] = sigma * lambda[l];
    }
    return out;
}

Matrix transition_matrix(const SystemConfig& config, const SpendDistribution& spend) {
    const int E = config.battery_capacity;
    const int M = config.frame_length;
    const double eta = config.harvest_prob;
    const std::size_t n = static_cast<std::size_t>(E) + 1;
    Matrix P(n, std::vector<double>(n, 0.0));
    for (int b1 = 0; b1 <= E; ++b1) {
        const auto& xi = spend.xi[static_cast<std::size_t>(b1)];
        double partial = 0.0;
        for (int b2 = 0; b2 < E; ++b2) {
            double p = 0.0;
            for (int l = 0; l < static_cast<int>(xi.size()); ++l) {
                if (xi[static_cast<std::size_t>(l)] == 0.0) continue;
                p += xi[static_cast<std::size_t>(l)] * binomial_pmf(b2 - b1 + l, M, eta);
            }
            P[static_cast<std::size_t>(b1)][static_cast<std::size_t>(b2)] = p;
            partial += p;
        }
        // Full-capacity column absorbs the overflow so the row is stochastic.
        P[static_cast<std::size_t>(b1)][static_cast<std::size_t>(E)] = 1.0 - partial;
    }
    return P;
}

std::vector<double> steady_state(const Matrix& transitions, double residual_tol) {
    const std::size_t n = transitions.size();
    // Solve phi (P - I) = 0 with sum(phi) = 1 replacing the last column.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j + 1 < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                transitions[i][j] - (i == j ? 1.0 : 0.0);
    for (std::size_t i = 0; i < n; ++i) A(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(i)) = 1.0;
    rhs(static_cast<Eigen::Index>(n - 1)) = 1.0;

    // The stationary vector is unique iff this system is nonsingular; a
    // reducible chain (e.g. the identity matrix) admits many and must be
    // rejected rather than returning an arbitrary one.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
        throw ConfigError("no unique steady state (chain is not ergodic)");
    Eigen::VectorXd x = lu.solve(rhs);
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = x(static_cast<Eigen::Index>(i));
    // NaN compares false, so test for "in tolerance" rather than "out of".
    bool ok = true;
    for (double v : phi) ok = ok && std::isfinite(v) && v >= -1e-9;
    ok = ok && residual_l1(transitions, phi) <= residual_tol;
    if (!ok)
        throw ConfigError("steady state did not satisfy the balance equations (malformed matrix?)");
    for (double& v : phi)
        if (v < 0.0) v = 0.0;
    return phi;
}

std::vector<double> steady_state_power_iteration(const Matrix& transitions, double tol, int max_iter) {
    const std::size_t n = transitions.size();
    std::vector<double> phi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v += phi[i] * transitions[i][j];
            next[j] = v;
        }
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) delta += std::abs(next[j] - phi[j]);
        phi.swap(next);
        if (delta < tol) return phi;
    }
    throw ConfigError("power iteration did not converge (matrix not ergodic?)");
}

std::vector<double> average_degree_distribution(const std::vector<double>& phi,
                                                const DegreeDistribution& dist) {
    const std::size_t cols = static_cast<std::size_t>(dist.max_degree()) + 1;
    std::vector<double> avg(cols, 0.0);
    for (std::size_t b = 0; b < phi.size(); ++b) {
        const auto& row = dist.row(static_cast<int>(b));
        for (std::size_t l = 0; l < cols; ++l) avg[l] += phi[b] * row[l];
    }
    return avg;
}

BatteryChain battery_chain(const SystemConfig& config, const DegreeDistribution& dist) {
    if (config.unlimited())
        throw ConfigError("battery chain requires a finite battery capacity");
    BatteryChain chain;
    auto spend = spend_distribution(dist, activation_prob(config), config.battery_capacity);
    chain.transitions = transition_matrix(config, spend);
    chain.steady = steady_state(chain.transitions);
    return chain;
}

}  // namespace irsa
