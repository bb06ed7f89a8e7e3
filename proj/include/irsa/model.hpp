#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace irsa {

// Distinguished battery capacity: no battery accounting, devices always have energy.
inline constexpr int kUnlimitedCapacity = -1;

// Tolerance for probability-row normalization checks.
inline constexpr double kRowSumTol = 1e-12;

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Scenario parameters shared by every module.
struct SystemConfig {
    int num_devices = 0;          // U
    int frame_length = 0;         // M, slots per frame
    double update_prob = 0.0;     // alpha, per device per slot
    int battery_capacity = 0;     // E, or kUnlimitedCapacity
    double harvest_prob = 0.0;    // eta, per device per slot
    int max_degree = 0;           // largest replica count a device may intend

    bool unlimited() const { return battery_capacity == kUnlimitedCapacity; }
};

/// Probability that a device has at least one new update in a frame:
// sigma = 1 - (1 - alpha)^M.
double activation_prob(const SystemConfig& config);

// Average channel load G = U * sigma / M, in devices per slot.
double channel_load(const SystemConfig& config);

// Throws ConfigError if any field is out of range.
void validate_config(const SystemConfig& config);

// Conditional degree table: row b holds the distribution of the replica
// degree given frame-initial battery level b. Nonadaptive tables carry
// identical rows; unlimited-capacity configs carry a single row.
struct DegreeDistribution {
    std::vector<std::vector<double>> table;  // rows x (max_degree + 1)
    bool adaptive = false;

    int max_degree() const {
        return table.empty() ? -1 : static_cast<int>(table.front().size()) - 1;
    }
    int rows() const { return static_cast<int>(table.size()); }

    const std::vector<double>& row(int battery) const {
        if (!adaptive || table.size() == 1) return table.front();
        return table[static_cast<std::size_t>(battery)];
    }

    // Single shared row for every battery level.
    static DegreeDistribution nonadaptive(std::vector<double> row, int num_rows = 1);
    // Point mass at `degree`: Lambda(x) = x^degree.
    static DegreeDistribution monomial(int degree, int max_degree, int num_rows = 1);
    // Rows Lambda_b(x) = x^min(b, max_degree): spend the whole initial battery.
    static DegreeDistribution battery_monomial(int capacity, int max_degree);
};

// True iff every entry with degree > battery level is zero.
bool validate_avoid_mask(const DegreeDistribution& dist, int capacity);

// Throws ConfigError unless the table shape matches the config and every row
// is a probability vector within kRowSumTol.
void validate_distribution(const DegreeDistribution& dist, const SystemConfig& config);

}  // namespace irsa
