#include "quasiboot/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quasiboot/errors.hpp"

namespace quasiboot {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// One RFC-4180 record starting at pos; advances pos past its line ending.
std::vector<std::string> parse_csv_record(const std::string& text,
                                          size_t& pos) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    cur += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
            ++pos;
            continue;
        }
        if (c == '"') {
            quoted = true;
            ++pos;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            ++pos;
        } else if (c == '\n' || c == '\r') {
            ++pos;
            if (c == '\r' && pos < text.size() && text[pos] == '\n') ++pos;
            fields.push_back(std::move(cur));
            return fields;
        } else {
            cur += c;
            ++pos;
        }
    }
    if (quoted) throw IoError("csv: unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long long parse_ll(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("bad integer for " + key + ": '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const long long v = parse_ll(key, value);
    if (v < INT32_MIN || v > INT32_MAX)
        throw ConfigError(key + " out of range: '" + value + "'");
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("bad unsigned integer for " + key + ": '" + value +
                          "'");
    return v;
}

double parse_dbl(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("bad boolean for " + key + ": '" + value + "'");
}

std::vector<double> parse_levels(const std::string& value) {
    std::vector<double> out;
    size_t start = 0;
    while (start <= value.size()) {
        size_t comma = value.find(',', start);
        if (comma == std::string::npos) comma = value.size();
        const std::string item = trim(value.substr(start, comma - start));
        if (item.empty()) throw ConfigError("levels: empty entry");
        out.push_back(parse_dbl("levels", item));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string coverage_csv(const CoverageTable& table) {
    std::string out = "kind,n,p,x_dist,scheme,level,frequency,mc_se,R,B,seed\n";
    for (const CoverageRow& r : table.rows) {
        out += csv_field(r.kind);
        out += ',' + std::to_string(r.n);
        out += ',' + std::to_string(r.p);
        out += ',' + csv_field(r.x_dist);
        out += ',' + csv_field(r.scheme);
        out += ',' + format_double(r.level);
        out += ',' + format_double(r.frequency);
        out += ',' + format_double(r.mc_se);
        out += ',' + std::to_string(r.reps);
        out += ',' + std::to_string(r.boot);
        out += ',' + std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

CoverageTable parse_coverage_csv(const std::string& text) {
    size_t pos = 0;
    const std::vector<std::string> header = parse_csv_record(text, pos);
    const std::vector<std::string> expect{"kind", "n",         "p",
                                          "x_dist", "scheme",  "level",
                                          "frequency", "mc_se", "R",
                                          "B",      "seed"};
    if (header != expect) throw IoError("coverage csv: unexpected header");
    CoverageTable table;
    while (pos < text.size()) {
        const std::vector<std::string> f = parse_csv_record(text, pos);
        if (f.size() == 1 && f[0].empty()) continue;  // trailing blank line
        if (f.size() != expect.size())
            throw IoError("coverage csv: wrong field count");
        CoverageRow r;
        r.kind = f[0];
        r.n = parse_int("n", f[1]);
        r.p = parse_int("p", f[2]);
        r.x_dist = f[3];
        r.scheme = f[4];
        r.level = parse_dbl("level", f[5]);
        r.frequency = parse_dbl("frequency", f[6]);
        r.mc_se = parse_dbl("mc_se", f[7]);
        r.reps = parse_int("R", f[8]);
        r.boot = parse_int("B", f[9]);
        r.seed = parse_u64("seed", f[10]);
        table.rows.push_back(std::move(r));
    }
    return table;
}

std::string cdf_csv(const CdfDataset& d) {
    std::string out = "value_sn,value_syn\n";
    for (size_t i = 0; i < d.values_sn.size(); ++i) {
        out += format_double(d.values_sn[i]);
        out += ',';
        out += format_double(d.values_syn[i]);
        out += '\n';
    }
    return out;
}

std::string cdf_json(const CdfDataset& d) {
    nlohmann::ordered_json j;
    j["n"] = d.n;
    j["p"] = d.p;
    j["reps"] = d.reps;
    j["seed"] = d.seed;
    j["x_dist"] = d.x_dist;
    j["y_dist"] = d.y_dist;
    j["statistic"] = d.statistic;
    j["reference"] = d.reference;
    j["ks_sn_syn"] = d.ks_sn_syn;
    j["ks_sn_ref"] = d.ks_sn_ref;
    j["ks_syn_ref"] = d.ks_syn_ref;
    return j.dump(2) + "\n";
}

std::string sidecar_path(const std::string& csv_path) {
    if (csv_path.size() >= 4 &&
        csv_path.compare(csv_path.size() - 4, 4, ".csv") == 0)
        return csv_path.substr(0, csv_path.size() - 4) + ".json";
    return csv_path + ".json";
}

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig out;
    ExperimentConfig& c = out.config;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) +
                              ": empty key");

        if (key == "kind") {
            c.kind = experiment_kind_from_string(value);
            out.kind_set = true;
        } else if (key == "n") {
            c.n = parse_int(key, value);
        } else if (key == "p") {
            c.p = parse_int(key, value);
        } else if (key == "reps") {
            c.reps = parse_int(key, value);
        } else if (key == "boot") {
            c.boot = parse_int(key, value);
        } else if (key == "levels") {
            c.levels = parse_levels(value);
        } else if (key == "x_dist") {
            c.x_dist = value;
        } else if (key == "scheme") {
            c.scheme = value;
        } else if (key == "y_dist") {
            c.y_dist = value;
        } else if (key == "design") {
            c.design = value;
        } else if (key == "error_dist") {
            c.error_dist = value;
        } else if (key == "theta_star") {
            c.theta_star = parse_dbl(key, value);
        } else if (key == "residual_mode") {
            c.residual_mode = parse_bool(key, value);
        } else if (key == "seed") {
            c.seed = parse_u64(key, value);
        } else if (key == "threads") {
            if (value == "auto") {
                c.threads = 0;
            } else {
                c.threads = parse_int(key, value);
                if (c.threads < 0)
                    throw ConfigError("threads must be >= 0 or auto");
            }
        } else if (key == "out") {
            c.out = value;
        } else if (key == "tol") {
            c.tol = parse_dbl(key, value);
        } else if (key == "order") {
            c.order = parse_int(key, value);
        } else if (key == "shape") {
            c.shape = parse_dbl(key, value);
        } else if (key == "budget") {
            c.budget = parse_u64(key, value);
        } else if (key == "force") {
            c.force = parse_bool(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return out;
}

ParsedConfig load_config_file(const std::string& path) {
    try {
        return parse_config_text(read_text_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream outf(path, std::ios::binary | std::ios::trunc);
    if (!outf) throw IoError("cannot open '" + path + "' for writing");
    outf << text;
    outf.flush();
    if (!outf.good()) throw IoError("error while writing '" + path + "'");
}

}  // namespace quasiboot
