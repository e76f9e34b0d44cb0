#pragma once

// Result serialization (CSV + JSON sidecar) and the key=value config format.

#include <string>

#include "quasiboot/experiment.hpp"

namespace quasiboot {

// Header: kind,n,p,x_dist,scheme,level,frequency,mc_se,R,B,seed
// Fields are RFC-4180 quoted when needed (specs contain commas).
std::string coverage_csv(const CoverageTable& table);
CoverageTable parse_coverage_csv(const std::string& text);

// Paired sorted values, header value_sn,value_syn.
std::string cdf_csv(const CdfDataset& d);

// Metadata + KS summary for the same dataset.
std::string cdf_json(const CdfDataset& d);

// foo.csv -> foo.json; anything else gets .json appended.
std::string sidecar_path(const std::string& csv_path);

// Line-based config: key=value, blank lines and #-comment lines ignored,
// unknown keys rejected.  `kind` may be omitted (the CLI subcommand
// provides it); kind_set reports whether the file named one.
struct ParsedConfig {
    ExperimentConfig config;
    bool kind_set = false;
};
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig load_config_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace quasiboot
