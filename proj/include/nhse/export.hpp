#pragma once

#include "nhse/ensemble.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace nhse {

/// `trial,protected_fraction,edge_fraction,both_fraction,lambda1_abs,failed`
void write_trials_csv(std::ostream& out, const EnsembleSummary& summary);
/// `trial,k,ratio,decay_rate`, k starting at 1.
void write_localisation_csv(std::ostream& out, const EnsembleSummary& summary);
/// `axis1,axis2,mean_protected,trials_ok`; axis2 is empty for 1D sweeps.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
/// `value,mean_protected,mean_edge,mean_both,trials_ok` along axis1.
void write_curve_csv(std::ostream& out, const SweepResult& sweep);

std::string summary_text(const EnsembleSummary& summary);

/// Opens `path` for writing, creating parent directories, and hands the
/// stream to `body`. I/O failures throw std::runtime_error naming the path.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

} // namespace nhse
