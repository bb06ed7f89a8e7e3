#include "irsa/model.hpp"

#include <algorithm>
#include <cmath>

namespace irsa {

double activation_prob(const SystemConfig& config) {
    return 1.0 - std::pow(1.0 - config.update_prob, config.frame_length);
}

double channel_load(const SystemConfig& config) {
    return config.num_devices * activation_prob(config) / config.frame_length;
}

void validate_config(const SystemConfig& config) {
    if (config.num_devices <= 0)
        throw ConfigError("num_devices must be positive");
    if (config.frame_length <= 0)
        throw ConfigError("frame_length must be positive");
    if (config.update_prob < 0.0 || config.update_prob > 1.0)
        throw ConfigError("update_prob must be in [0,1]");
    if (config.harvest_prob < 0.0 || config.harvest_prob > 1.0)
        throw ConfigError("harvest_prob must be in [0,1]");
    if (config.battery_capacity < 0 && !config.unlimited())
        throw ConfigError("battery_capacity must be nonnegative or unlimited");
    if (config.max_degree < 0)
        throw ConfigError("max_degree must be nonnegative");
    // Sampling degree slots without replacement and chain ergodicity both
    // require strictly fewer replicas than slots.
    if (config.max_degree >= config.frame_length)
        throw ConfigError("max_degree must be smaller than frame_length");
}

DegreeDistribution DegreeDistribution::nonadaptive(std::vector<double> row, int num_rows) {
    DegreeDistribution dist;
    dist.adaptive = false;
    dist.table.assign(static_cast<std::size_t>(num_rows > 0 ? num_rows : 1), row);
    return dist;
}

DegreeDistribution DegreeDistribution::monomial(int degree, int max_degree, int num_rows) {
    std::vector<double> row(static_cast<std::size_t>(max_degree) + 1, 0.0);
    row[static_cast<std::size_t>(degree)] = 1.0;
    return nonadaptive(std::move(row), num_rows);
}

DegreeDistribution DegreeDistribution::battery_monomial(int capacity, int max_degree) {
    DegreeDistribution dist;
    dist.adaptive = true;
    for (int b = 0; b <= capacity; ++b) {
        std::vector<double> row(static_cast<std::size_t>(max_degree) + 1, 0.0);
        row[static_cast<std::size_t>(std::min(b, max_degree))] = 1.0;
        dist.table.push_back(std::move(row));
    }
    return dist;
}

bool validate_avoid_mask(const DegreeDistribution& dist, int capacity) {
    if (capacity < 0) return true;
    for (int b = 0; b <= capacity; ++b) {
        // Shared-row tables apply the same row at every level, so the row
        // must satisfy the tightest (lowest-battery) constraint too.
        const std::size_t idx =
            dist.table.size() == 1 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(b), dist.table.size() - 1);
        const auto& row = dist.table[idx];
        for (std::size_t l = static_cast<std::size_t>(b) + 1; l < row.size(); ++l)
            if (row[l] != 0.0) return false;
    }
    return true;
}

void validate_distribution(const DegreeDistribution& dist, const SystemConfig& config) {
    if (dist.table.empty())
        throw ConfigError("degree table is empty");
    const int expected_rows = config.unlimited() ? 1 : config.battery_capacity + 1;
    if (dist.rows() != 1 && dist.rows() != expected_rows)
        throw ConfigError("degree table must have one row or one row per battery level");
    if (dist.adaptive && dist.rows() != expected_rows)
        throw ConfigError("adaptive degree table must have one row per battery level");
    for (const auto& row : dist.table) {
        if (static_cast<int>(row.size()) != config.max_degree + 1)
            throw ConfigError("degree table row length must be max_degree + 1");
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0 || p > 1.0)
                throw ConfigError("degree probabilities must be in [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTol)
            throw ConfigError("degree table row does not sum to 1");
    }
    if (!dist.adaptive) {
        for (const auto& row : dist.table)
            if (row != dist.table.front())
                throw ConfigError("nonadaptive degree table has differing rows");
    }
}

}  // namespace irsa
