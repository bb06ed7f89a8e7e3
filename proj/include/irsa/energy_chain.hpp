#pragma once

#include <vector>

#include "irsa/model.hpp"

namespace irsa {

using Matrix = std::vector<std::vector<double>>;

// Row b: distribution of the energy spent in a frame by a device whose
// frame-initial battery is b. Only defined when no replica is ever dropped
// (the spend-degree coupling breaks otherwise), i.e. for masked tables.
struct SpendDistribution {
    Matrix xi;  // (capacity+1) x (max_degree+1)
};

// Initial-battery Markov chain for the no-drop scheme.
struct BatteryChain {
    Matrix transitions;              // (E+1) x (E+1), row-stochastic
    std::vector<double> steady;      // stationary distribution
};

// Xi_{0,b} = 1 - sigma + sigma * Lambda_{0,b}; Xi_{l,b} = sigma * Lambda_{l,b}
// for l >= 1. Throws if the table violates the battery mask.
SpendDistribution spend_distribution(const DegreeDistribution& dist, double sigma, int capacity);

// Transition kernel of the frame-initial battery level: for b2 < E,
// P(b1 -> b2) = sum_l Xi_{l,b1} * Bino(b2 - b1 + l; M, eta); the b2 = E
// column takes the complementary mass so each row is stochastic.
Matrix transition_matrix(const SystemConfig& config, const SpendDistribution& spend);

// Stationary vector via a dense solve of the balance equations with the
// normalization constraint replacing one redundant equation. Throws if the
// result fails ||phi P - phi||_1 < residual_tol.
std::vector<double> steady_state(const Matrix& transitions, double residual_tol = 1e-10);

// Power-iteration alternative, kept as an independent oracle.
std::vector<double> steady_state_power_iteration(const Matrix& transitions, double tol = 1e-13,
                                                 int max_iter = 1000000);

// Average degree distribution: Lambda_l = sum_b phi_b * Lambda_{l,b}.
std::vector<double> average_degree_distribution(const std::vector<double>& phi,
                                                const DegreeDistribution& dist);

// Convenience: spend -> transitions -> steady state for a validated scenario.
BatteryChain battery_chain(const SystemConfig& config, const DegreeDistribution& dist);

}  // namespace irsa
