#include "irsa/analysis.hpp"

#include <cmath>
#include <limits>

namespace irsa {
namespace {

// log C(n, k) for 0 <= k <= n.
double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double last_replica_cdf(int degree, int frame_length, int x) {
    if (degree < 1 || degree > frame_length)
        throw ConfigError("last_replica_cdf requires 1 <= degree <= frame_length");
    if (x < degree) return 0.0;
    if (x >= frame_length) return 1.0;
    return std::exp(log_choose(x, degree) - log_choose(frame_length, degree));
}

double first_energy_pmf(double eta, int frame_length, int y) {
    if (eta <= 0.0 || eta > 1.0)
        throw ConfigError("first_energy_pmf requires eta in (0,1]");
    if (y < 1 || y > frame_length)
        throw ConfigError("first_energy_pmf requires y in [1..frame_length]");
    double none = std::pow(1.0 - eta, frame_length);
    return std::pow(1.0 - eta, y - 1) * eta / (1.0 - none);
}

double plr_lower_bound(const SystemConfig& config, const std::vector<double>& row0, double phi0) {
    const int M = config.frame_length;
    const double eta = config.harvest_prob;
    if (phi0 == 0.0) return 0.0;
    double sum = 0.0;
    for (int y = 1; y <= M; ++y) {
        double inner = row0.empty() ? 0.0 : row0[0];  // the l = 0 ratio is 1 at every y
        for (int l = 1; l < static_cast<int>(row0.size()); ++l) {
            if (row0[static_cast<std::size_t>(l)] == 0.0) continue;
            if (y <= l) continue;  // X >= l, so P[X < y] = 0
            // (y-1)! (M-l)! / ((y-l-1)! M!) = C(y-1,l)/C(M,l), in log space.
            double ratio = std::exp(log_choose(y - 1, l) - log_choose(M, l));
            inner += row0[static_cast<std::size_t>(l)] * ratio;
        }
        sum += eta * std::pow(1.0 - eta, y - 1) * inner;
    }
    return phi0 * (sum + std::pow(1.0 - eta, M));
}

double average_aoi(const AoiInputs& in) {
    if (in.alpha <= 0.0 || in.sigma <= 0.0 || in.xi() <= 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / in.alpha + in.frame_length * (1.5 + 1.0 / in.xi() - 1.0 / in.sigma);
}

double aoi_violation_prob(double theta, const AoiInputs& in) {
    const int M = in.frame_length;
    if (theta <= 2.0 * M) return 1.0;
    if (in.sigma <= 0.0 || in.xi() <= 0.0) return 1.0;
    const double q = std::floor(theta / M);
    const double r = theta - q * M;
    const double xi = in.xi();
    return std::pow(1.0 - xi, q - 2.0) *
           (1.0 - xi * (1.0 - std::pow(1.0 - in.alpha, 1.0 + r)) / in.sigma);
}

double throughput(double load, double plr) {
    return load * (1.0 - plr);
}

}  // namespace irsa
