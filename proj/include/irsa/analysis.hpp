#pragma once

#include <vector>

#include "irsa/model.hpp"

namespace irsa {

// P[X <= x] where X is the largest of l slot indices drawn uniformly
// without replacement from [1..M]: C(x,l)/C(M,l), 0 below l, 1 at M.
double last_replica_cdf(int degree, int frame_length, int x);

// P[Y = y | at least one harvest in the frame] for the first harvest slot:
// (1-eta)^(y-1) * eta / (1 - (1-eta)^M). Rejects eta = 0.
double first_energy_pmf(double eta, int frame_length, int y);

// Probability that a device starting a frame with an empty battery loses its
// packet to energy shortage, scaled by phi0:
//   phi0 * ( sum_y eta (1-eta)^(y-1) sum_l Lambda_{l,0} P[X < y | l]
//            + (1-eta)^M ).
// `row0` is the degree distribution at battery level 0.
double plr_lower_bound(const SystemConfig& config, const std::vector<double>& row0, double phi0);

struct AoiInputs {
    double alpha = 0.0;   // per-slot update probability
    int frame_length = 0; // M
    double sigma = 0.0;   // activation probability
    double plr = 0.0;     // packet loss ratio P_e

    double xi() const { return sigma * (1.0 - plr); }
};

// Average age of information: 1/alpha + M(3/2 + 1/xi - 1/sigma).
// Returns +infinity when no update is ever delivered (xi = 0 or alpha = 0).
double average_aoi(const AoiInputs& in);

// Age-violation probability at threshold theta (slots):
// 1 for theta <= 2M, else (1-xi)^(floor(theta/M)-2) *
//   [1 - xi (1 - (1-alpha)^(1 + theta mod M)) / sigma].
double aoi_violation_prob(double theta, const AoiInputs& in);

// G(1 - P_e), packets per slot.
double throughput(double load, double plr);

}  // namespace irsa
