#include "irsa/config_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace irsa {
namespace {

struct Entry {
    int line;
    std::string value;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

int parse_int(const std::string& source, int line, const std::string& key, const std::string& text) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        fail(source, line, key + ": expected an integer, got '" + text + "'");
    return value;
}

double parse_double(const std::string& source, int line, const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        double value = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        fail(source, line, key + ": expected a number, got '" + text + "'");
    }
}

bool parse_bool(const std::string& source, int line, const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    fail(source, line, key + ": expected true/false, got '" + text + "'");
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    auto end = s.find_last_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ParsedScenario parse_scenario_text(const std::string& text, const std::string& source_name) {
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        std::string key, value;
        if (auto eq = line.find('='); eq != std::string::npos) {
            key = trim(line.substr(0, eq));
            value = trim(line.substr(eq + 1));
        } else {
            auto ws = line.find_first_of(" \t");
            if (ws == std::string::npos)
                fail(source_name, line_no, "expected 'key = value'");
            key = trim(line.substr(0, ws));
            value = trim(line.substr(ws + 1));
        }
        if (key.empty() || value.empty())
            fail(source_name, line_no, "expected 'key = value'");
        if (entries.count(key))
            fail(source_name, line_no, "duplicate key '" + key + "'");
        entries[key] = Entry{line_no, value};
    }

    const char* required[] = {"num_devices",      "frame_length", "update_prob", "battery_capacity",
                              "harvest_prob",     "max_degree",   "degree_table"};
    for (const char* key : required)
        if (!entries.count(key))
            fail(source_name, line_no, std::string("missing key '") + key + "'");

    for (const auto& [key, entry] : entries) {
        static const std::map<std::string, int> known = {
            {"num_devices", 0},  {"frame_length", 0}, {"update_prob", 0}, {"battery_capacity", 0},
            {"harvest_prob", 0}, {"max_degree", 0},   {"degree_table", 0}, {"adaptive", 0}};
        if (!known.count(key)) fail(source_name, entry.line, "unknown key '" + key + "'");
    }

    ParsedScenario out;
    auto get = [&](const char* key) -> const Entry& { return entries.at(key); };

    out.config.num_devices = parse_int(source_name, get("num_devices").line, "num_devices", get("num_devices").value);
    out.config.frame_length =
        parse_int(source_name, get("frame_length").line, "frame_length", get("frame_length").value);
    out.config.update_prob =
        parse_double(source_name, get("update_prob").line, "update_prob", get("update_prob").value);
    if (get("battery_capacity").value == "unlimited")
        out.config.battery_capacity = kUnlimitedCapacity;
    else
        out.config.battery_capacity = parse_int(source_name, get("battery_capacity").line, "battery_capacity",
                                                get("battery_capacity").value);
    out.config.harvest_prob =
        parse_double(source_name, get("harvest_prob").line, "harvest_prob", get("harvest_prob").value);
    out.config.max_degree = parse_int(source_name, get("max_degree").line, "max_degree", get("max_degree").value);

    bool adaptive = false;
    if (entries.count("adaptive"))
        adaptive = parse_bool(source_name, get("adaptive").line, "adaptive", get("adaptive").value);

    const Entry& table = get("degree_table");
    std::vector<double> flat;
    {
        std::string cleaned = table.value;
        for (char& c : cleaned)
            if (c == ',' || c == ';') c = ' ';
        std::istringstream ts(cleaned);
        std::string tok;
        while (ts >> tok)
            flat.push_back(parse_double(source_name, table.line, "degree_table", tok));
    }

    try {
        validate_config(out.config);
    } catch (const ConfigError& e) {
        fail(source_name, 1, e.what());
    }

    const std::size_t cols = static_cast<std::size_t>(out.config.max_degree) + 1;
    const std::size_t rows_full =
        out.config.unlimited() ? 1 : static_cast<std::size_t>(out.config.battery_capacity) + 1;
    std::size_t rows;
    if (flat.size() == cols)
        rows = 1;
    else if (flat.size() == cols * rows_full)
        rows = rows_full;
    else
        fail(source_name, table.line,
             "degree_table needs " + std::to_string(cols) + " entries (one shared row) or " +
                 std::to_string(cols * rows_full) + " (one row per battery level), got " +
                 std::to_string(flat.size()));

    if (adaptive && rows == 1 && rows_full != 1)
        fail(source_name, table.line, "adaptive tables need one row per battery level");
    if (out.config.unlimited() && adaptive)
        fail(source_name, get("adaptive").line, "adaptive requires a finite battery_capacity");

    out.dist.adaptive = adaptive;
    out.dist.table.resize(rows);
    for (std::size_t r = 0; r < rows; ++r)
        out.dist.table[r].assign(flat.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                 flat.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));

    try {
        validate_distribution(out.dist, out.config);
    } catch (const ConfigError& e) {
        fail(source_name, table.line, e.what());
    }
    return out;
}

ParsedScenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

}  // namespace irsa
