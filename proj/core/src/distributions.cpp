#include "quasiboot/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "quasiboot/errors.hpp"
#include "spec_cursor.hpp"

namespace quasiboot {

namespace {

using detail::ArgReader;
using detail::Cursor;

template <class... Ts>
struct overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

void require(bool ok, const char* msg) {
    if (!ok) throw SpecError(msg);
}

bool finite(double v) { return std::isfinite(v); }

// ---------------------------------------------------------------- parsing

DistributionSpec parse_spec(Cursor& c) {
    const std::string name(c.ident());
    if (name == "chisq1c") return DistributionSpec::chisq1c();

    if (name == "gauss" && !c.peek('(')) return DistributionSpec::gaussian(0.0, 1.0);

    c.expect('(');
    ArgReader args{c, {}};
    std::string key;
    bool flag = false;

    if (name == "lognormal") {
        double sigma = 0.0;
        bool have_sigma = false, standardized = true;
        while (args.next(key, flag)) {
            if (flag && key == "std") standardized = true;
            else if (flag && key == "centered") standardized = false;
            else if (!flag && key == "sigma") sigma = c.number(), have_sigma = true;
            else c.fail("unknown lognormal argument '" + key + "'");
            args.separator();
        }
        if (!have_sigma) c.fail("lognormal requires sigma");
        return DistributionSpec::lognormal(sigma, standardized);
    }
    if (name == "pareto") {
        double xm = 0.0, a = 0.0, shift = 0.0, scale = 1.0;
        bool have_xm = false, have_a = false;
        while (args.next(key, flag)) {
            if (flag) c.fail("unknown pareto flag '" + key + "'");
            if (key == "xm") xm = c.number(), have_xm = true;
            else if (key == "a") a = c.number(), have_a = true;
            else if (key == "shift") shift = c.number();
            else if (key == "scale") scale = c.number();
            else c.fail("unknown pareto argument '" + key + "'");
            args.separator();
        }
        if (!have_xm || !have_a) c.fail("pareto requires xm and a");
        return DistributionSpec::pareto(xm, a, shift, scale);
    }
    if (name == "gauss") {
        double mean = 0.0, var = 1.0;
        while (args.next(key, flag)) {
            if (flag) c.fail("unknown gauss flag '" + key + "'");
            if (key == "mean") mean = c.number();
            else if (key == "var") var = c.number();
            else c.fail("unknown gauss argument '" + key + "'");
            args.separator();
        }
        return DistributionSpec::gaussian(mean, var);
    }
    if (name == "conv") {
        double var_z = 0.0;
        bool have_var = false;
        DistributionSpec atom = DistributionSpec::gaussian(0.0, 1.0);
        bool have_atom = false;
        while (args.next(key, flag)) {
            if (flag) c.fail("unknown conv flag '" + key + "'");
            if (key == "var_z") var_z = c.number(), have_var = true;
            else if (key == "atom") atom = parse_spec(c), have_atom = true;
            else c.fail("unknown conv argument '" + key + "'");
            args.separator();
        }
        if (!have_var || !have_atom) c.fail("conv requires var_z and atom");
        return DistributionSpec::convolution(var_z, std::move(atom));
    }
    if (name == "atomic") {
        std::vector<double> nodes, probs;
        bool have_nodes = false, have_probs = false;
        while (args.next(key, flag)) {
            if (flag) c.fail("unknown atomic flag '" + key + "'");
            if (key == "nodes") nodes = c.list(), have_nodes = true;
            else if (key == "probs") probs = c.list(), have_probs = true;
            else c.fail("unknown atomic argument '" + key + "'");
            args.separator();
        }
        if (!have_nodes || !have_probs) c.fail("atomic requires nodes and probs");
        return DistributionSpec::finite_atomic(std::move(nodes), std::move(probs));
    }
    c.fail("unknown distribution '" + name + "'");
}

}  // namespace

// ------------------------------------------------------------- factories

DistributionSpec DistributionSpec::lognormal(double sigma, bool standardized) {
    require(finite(sigma) && sigma > 0.0, "lognormal: sigma must be positive");
    return DistributionSpec(Lognormal{sigma, standardized});
}

DistributionSpec DistributionSpec::chisq1c() {
    return DistributionSpec(CenteredChiSq1{});
}

DistributionSpec DistributionSpec::pareto(double xm, double a, double shift,
                                          double scale) {
    require(finite(xm) && xm > 0.0, "pareto: xm must be positive");
    require(finite(a) && a > 4.0,
            "pareto: shape a must exceed 4 (four finite moments)");
    require(finite(shift), "pareto: shift must be finite");
    require(finite(scale) && scale > 0.0, "pareto: scale must be positive");
    return DistributionSpec(Pareto{xm, a, shift, scale});
}

DistributionSpec DistributionSpec::gaussian(double mean, double var) {
    require(finite(mean), "gauss: mean must be finite");
    require(finite(var) && var >= 0.0, "gauss: var must be nonnegative");
    return DistributionSpec(Gaussian{mean, var});
}

DistributionSpec DistributionSpec::convolution(double var_z,
                                               DistributionSpec atom) {
    require(finite(var_z) && var_z >= 0.0, "conv: var_z must be nonnegative");
    return DistributionSpec(Convolution{
        var_z, std::make_shared<const DistributionSpec>(std::move(atom))});
}

DistributionSpec DistributionSpec::finite_atomic(std::vector<double> nodes,
                                                 std::vector<double> probs) {
    require(!nodes.empty(), "atomic: at least one node");
    require(nodes.size() == probs.size(), "atomic: nodes/probs size mismatch");
    for (double x : nodes) require(finite(x), "atomic: nodes must be finite");
    double total = 0.0;
    for (double p : probs) {
        require(finite(p) && p > 0.0, "atomic: probabilities must be positive");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12,
            "atomic: probabilities must sum to 1 (tolerance 1e-12)");

    // canonical order: nodes strictly increasing
    std::vector<size_t> idx(nodes.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](size_t l, size_t r) { return nodes[l] < nodes[r]; });
    FiniteAtomic fa;
    fa.nodes.reserve(nodes.size());
    fa.probs.reserve(nodes.size());
    for (size_t j : idx) {
        fa.nodes.push_back(nodes[j]);
        fa.probs.push_back(probs[j]);
    }
    for (size_t j = 1; j < fa.nodes.size(); ++j)
        require(fa.nodes[j - 1] < fa.nodes[j], "atomic: nodes must be distinct");
    return DistributionSpec(std::move(fa));
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
    Cursor c{text, 0};
    DistributionSpec spec = parse_spec(c);
    if (!c.done()) c.fail("trailing characters");
    return spec;
}

DistributionSpec DistributionSpec::parse_prefix(std::string_view text,
                                                size_t& pos) {
    Cursor c{text, pos};
    DistributionSpec spec = parse_spec(c);
    pos = c.i;
    return spec;
}

// ---------------------------------------------------------- serialization

std::string format_double(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {
std::string format_list(const std::vector<double>& xs) {
    std::string out = "[";
    for (size_t j = 0; j < xs.size(); ++j) {
        if (j) out += ',';
        out += format_double(xs[j]);
    }
    out += ']';
    return out;
}
}  // namespace

std::string DistributionSpec::to_string() const {
    return std::visit(
        overload{
            [](const Lognormal& d) {
                return "lognormal(sigma=" + format_double(d.sigma) +
                       (d.standardized ? ",std)" : ",centered)");
            },
            [](const CenteredChiSq1&) { return std::string("chisq1c"); },
            [](const Pareto& d) {
                return "pareto(xm=" + format_double(d.xm) + ",a=" +
                       format_double(d.a) + ",shift=" + format_double(d.shift) +
                       ",scale=" + format_double(d.scale) + ")";
            },
            [](const Gaussian& d) {
                return "gauss(mean=" + format_double(d.mean) + ",var=" +
                       format_double(d.var) + ")";
            },
            [](const Convolution& d) {
                return "conv(var_z=" + format_double(d.var_z) + ",atom=" +
                       d.atom->to_string() + ")";
            },
            [](const FiniteAtomic& d) {
                return "atomic(nodes=" + format_list(d.nodes) + ",probs=" +
                       format_list(d.probs) + ")";
            },
        },
        v_);
}

bool DistributionSpec::operator==(const DistributionSpec& other) const {
    return to_string() == other.to_string();
}

// ---------------------------------------------------------------- moments

MomentVector raw_moments(const DistributionSpec& spec, int order) {
    require(order >= 0, "moment order must be nonnegative");
    using size_t = std::vector<double>::size_type;
    return std::visit(
        overload{
            [&](const DistributionSpec::Lognormal& d) {
                // E L^k = exp(k^2 sigma^2 / 2) for L ~ lognormal(0, sigma^2)
                std::vector<double> raw(static_cast<size_t>(order) + 1);
                for (int k = 0; k <= order; ++k)
                    raw[static_cast<size_t>(k)] =
                        std::exp(0.5 * d.sigma * d.sigma * k * k);
                const double s2 = std::exp(d.sigma * d.sigma);
                const double mean = std::exp(0.5 * d.sigma * d.sigma);
                const double scale =
                    d.standardized ? 1.0 / std::sqrt(s2 * (s2 - 1.0)) : 1.0;
                return shifted_scaled_moments(MomentVector(std::move(raw)), mean,
                                              scale);
            },
            [&](const DistributionSpec::CenteredChiSq1&) {
                // E (chi^2_1)^k = (2k-1)!!
                std::vector<double> raw(static_cast<size_t>(order) + 1);
                for (int k = 0; k <= order; ++k)
                    raw[static_cast<size_t>(k)] = double_factorial_odd(k);
                return shifted_scaled_moments(MomentVector(std::move(raw)), 1.0,
                                              1.0);
            },
            [&](const DistributionSpec::Pareto& d) {
                std::vector<double> raw(static_cast<size_t>(order) + 1);
                for (int k = 0; k <= order; ++k) {
                    if (static_cast<double>(k) >= d.a)
                        throw MomentNotFinite(
                            "pareto moment of order " + std::to_string(k) +
                            " does not exist for shape a = " + format_double(d.a));
                    raw[static_cast<size_t>(k)] =
                        d.a * std::pow(d.xm, k) / (d.a - k);
                }
                return shifted_scaled_moments(MomentVector(std::move(raw)),
                                              d.shift, d.scale);
            },
            [&](const DistributionSpec::Gaussian& d) {
                return gaussian_raw_moments(d.mean, d.var, order);
            },
            [&](const DistributionSpec::Convolution& d) {
                return convolve_moments(gaussian_raw_moments(0.0, d.var_z, order),
                                        raw_moments(*d.atom, order));
            },
            [&](const DistributionSpec::FiniteAtomic& d) {
                std::vector<double> raw(static_cast<size_t>(order) + 1, 0.0);
                for (size_t j = 0; j < d.nodes.size(); ++j) {
                    double pw = d.probs[j];
                    raw[0] += pw;  // sums to 1
                    for (int k = 1; k <= order; ++k) {
                        pw *= d.nodes[j];
                        raw[static_cast<size_t>(k)] += pw;
                    }
                }
                raw[0] = 1.0;
                return MomentVector(std::move(raw));
            },
        },
        spec.v());
}

double dist_mean(const DistributionSpec& spec) {
    return raw_moments(spec, 1).mean();
}

double dist_variance(const DistributionSpec& spec) {
    return raw_moments(spec, 2).variance();
}

AffineStd standardize(const DistributionSpec& spec) {
    const MomentVector m = raw_moments(spec, 2);
    const double var = m.variance();
    if (!(var > 0.0))
        throw SpecError("standardize: law has zero variance");
    return AffineStd{m.mean(), 1.0 / std::sqrt(var)};
}

// --------------------------------------------------------------- sampling
//
// Per-draw stream consumption (fixed; reproducibility tests rely on it):
//   lognormal  1 normal          pareto  1 uniform
//   chisq1c    1 normal          gauss   1 normal
//   atomic     1 uniform         conv    1 normal, then the atom's draws

namespace {

double atomic_draw(const DistributionSpec::FiniteAtomic& d, RngStream& rng) {
    const double u = rng.next_uniform();
    double acc = 0.0;
    for (size_t j = 0; j + 1 < d.nodes.size(); ++j) {
        acc += d.probs[j];
        if (u <= acc) return d.nodes[j];
    }
    return d.nodes.back();
}

}  // namespace

double sample_scalar(const DistributionSpec& spec, RngStream& rng) {
    double out;
    sample_vector(spec, std::span<double>(&out, 1), rng);
    return out;
}

void sample_vector(const DistributionSpec& spec, std::span<double> out,
                   RngStream& rng) {
    std::visit(
        overload{
            [&](const DistributionSpec::Lognormal& d) {
                const double s2 = std::exp(d.sigma * d.sigma);
                const double mean = std::exp(0.5 * d.sigma * d.sigma);
                const double scale =
                    d.standardized ? 1.0 / std::sqrt(s2 * (s2 - 1.0)) : 1.0;
                for (double& x : out)
                    x = (std::exp(d.sigma * rng.next_normal()) - mean) * scale;
            },
            [&](const DistributionSpec::CenteredChiSq1&) {
                for (double& x : out) {
                    const double z = rng.next_normal();
                    x = z * z - 1.0;
                }
            },
            [&](const DistributionSpec::Pareto& d) {
                const double inv_a = -1.0 / d.a;
                for (double& x : out)
                    x = (d.xm * std::pow(rng.next_uniform(), inv_a) - d.shift) *
                        d.scale;
            },
            [&](const DistributionSpec::Gaussian& d) {
                const double sd = std::sqrt(d.var);
                for (double& x : out) x = d.mean + sd * rng.next_normal();
            },
            [&](const DistributionSpec::Convolution& d) {
                const double sd = std::sqrt(d.var_z);
                for (double& x : out) {
                    const double z = sd * rng.next_normal();
                    x = z + sample_scalar(*d.atom, rng);
                }
            },
            [&](const DistributionSpec::FiniteAtomic& d) {
                for (double& x : out) x = atomic_draw(d, rng);
            },
        },
        spec.v());
}

}  // namespace quasiboot
