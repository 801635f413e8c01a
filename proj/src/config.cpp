#include "nhse/config.hpp"

#include "nhse/errors.hpp"
#include "nhse/format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace nhse {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ConfigError("invalid value '" + std::string(text) + "' for key '" + std::string(key) + "'");
    return value;
}

} // namespace

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
    if (key == "n") c.n = parse_value<std::size_t>(key, value);
    else if (key == "ell") c.ell = parse_value<double>(key, value);
    else if (key == "s") c.s = parse_value<double>(key, value);
    else if (key == "gamma") c.gamma = parse_value<double>(key, value);
    else if (key == "kind") c.kind = parse_perturbation_kind(value);
    else if (key == "eps_s") c.eps_s = parse_value<double>(key, value);
    else if (key == "eps_gamma") c.eps_gamma = parse_value<double>(key, value);
    else if (key == "eps") c.eps = parse_value<double>(key, value);
    else if (key == "trials") c.trials = parse_value<std::size_t>(key, value);
    else if (key == "seed") c.master_seed = parse_value<std::uint64_t>(key, value);
    else if (key == "edge_sites") c.edge_sites = parse_value<std::size_t>(key, value);
    else if (key == "threads") c.threads = parse_value<std::size_t>(key, value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_config_text(std::string_view text, const ExperimentConfig& base) {
    ExperimentConfig c = base;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        try {
            set_config_value(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& ex) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return c;
}

ExperimentConfig load_config_file(const std::string& path, const ExperimentConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str(), base);
    } catch (const ConfigError& ex) {
        throw ConfigError(path + ": " + ex.what());
    }
}

std::string to_config_text(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "n = " << c.n << '\n'
        << "ell = " << format_double(c.ell) << '\n'
        << "s = " << format_double(c.s) << '\n'
        << "gamma = " << format_double(c.gamma) << '\n'
        << "kind = " << to_string(c.kind) << '\n'
        << "eps_s = " << format_double(c.eps_s) << '\n'
        << "eps_gamma = " << format_double(c.eps_gamma) << '\n'
        << "eps = " << format_double(c.eps) << '\n'
        << "trials = " << c.trials << '\n'
        << "seed = " << c.master_seed << '\n'
        << "edge_sites = " << c.edge_sites << '\n'
        << "threads = " << c.threads << '\n';
    return out.str();
}

} // namespace nhse
