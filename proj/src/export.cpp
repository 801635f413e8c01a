#include "nhse/export.hpp"

#include "nhse/format.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace nhse {

void write_trials_csv(std::ostream& out, const EnsembleSummary& summary) {
    out << "trial,protected_fraction,edge_fraction,both_fraction,lambda1_abs,failed\n";
    for (const auto& t : summary.trials)
        out << t.trial << ',' << format_double(t.protected_fraction) << ','
            << format_double(t.edge_fraction) << ',' << format_double(t.both_fraction) << ','
            << format_double(t.lambda1_abs) << ',' << (t.failed ? 1 : 0) << '\n';
}

void write_localisation_csv(std::ostream& out, const EnsembleSummary& summary) {
    out << "trial,k,ratio,decay_rate\n";
    for (const auto& t : summary.trials) {
        for (std::size_t k = 0; k < t.localisation_ratios.size(); ++k)
            out << t.trial << ',' << k + 1 << ',' << format_double(t.localisation_ratios[k]) << ','
                << format_double(t.decay_rates[k]) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "axis1,axis2,mean_protected,trials_ok\n";
    for (const auto& c : sweep.cells) {
        out << format_double(c.value1) << ',';
        if (sweep.axis2) out << format_double(c.value2);
        out << ',' << format_double(c.mean_protected) << ',' << c.trials_ok << '\n';
    }
}

void write_curve_csv(std::ostream& out, const SweepResult& sweep) {
    out << "value,mean_protected,mean_edge,mean_both,trials_ok\n";
    for (std::size_t i = 0; i < sweep.rows() && i * sweep.cols() < sweep.cells.size(); ++i) {
        const auto& c = sweep.cells[i * sweep.cols()];
        out << format_double(c.value1) << ',' << format_double(c.mean_protected) << ','
            << format_double(c.mean_edge) << ',' << format_double(c.mean_both) << ','
            << c.trials_ok << '\n';
    }
}

namespace {

nlohmann::ordered_json stats_json(const MetricStats& s) {
    nlohmann::ordered_json j;
    j["mean"] = format_double(s.mean);
    j["std"] = format_double(s.std);
    return j;
}

} // namespace

std::string summary_text(const EnsembleSummary& summary) {
    const auto& c = summary.config;
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["ell"] = c.ell;
    j["s"] = c.s;
    j["gamma"] = c.gamma;
    j["kind"] = std::string(to_string(c.kind));
    j["eps_s"] = c.eps_s;
    j["eps_gamma"] = c.eps_gamma;
    j["eps"] = c.eps;
    j["trials"] = c.trials;
    j["seed"] = c.master_seed;
    j["edge_sites"] = c.edge_sites;
    j["failed"] = summary.failed;
    j["protected_fraction"] = stats_json(summary.protected_fraction);
    j["edge_fraction"] = stats_json(summary.edge_fraction);
    j["both_fraction"] = stats_json(summary.both_fraction);
    j["lambda1_abs"] = stats_json(summary.lambda1_abs);
    auto& prof = j["localisation_profile"] = nlohmann::ordered_json::array();
    for (double x : summary.localisation_profile) prof.push_back(format_double(x));
    return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory '" + path.parent_path().string() +
                                     "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace nhse
