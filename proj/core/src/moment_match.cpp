#include "quasiboot/moment_match.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <variant>

#include "quasiboot/errors.hpp"

namespace quasiboot {

namespace {

// H_k = (u_{i+j}) for i,j = 0..k  (size k+1, needs moments to 2k)
Eigen::MatrixXd hankel(const MomentVector& u, int k) {
    Eigen::MatrixXd H(k + 1, k + 1);
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) H(i, j) = u[i + j];
    return H;
}

double min_eigenvalue(const Eigen::MatrixXd& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H,
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

// Smallest k such that H_k is numerically singular (min eig below the
// relative threshold); d+1 when H_0..H_d are all safely positive definite.
int hankel_rank_boundary(const MomentVector& u, int d) {
    for (int k = 0; k <= d; ++k) {
        const Eigen::MatrixXd H = hankel(u, k);
        const double thr = 1e-10 * (1.0 + std::abs(H.trace()));
        if (min_eigenvalue(H) < thr) return k;
    }
    return d + 1;
}

// Three-term recurrence of the orthonormal polynomials of the moment
// functional, built by Gram-Schmidt in the inner product
// <x^i, x^j> = u_{i+j}.  An N-point rule needs alpha_0..alpha_{N-1} and
// beta_1..beta_{N-1}, i.e. moments through order 2N-1; with `extend_last`
// the final alpha (the one needing u_{2N-1}) is copied from its
// predecessor instead, which is a valid free extension of the sequence.
struct Recurrence {
    std::vector<double> alpha;
    std::vector<double> beta;  // beta[0] unused
};

bool recurrence_from_moments(const MomentVector& u, int N, bool extend_last,
                             Recurrence& out) {
    double scale = 1.0;
    for (int k = 0; k <= u.order(); ++k) scale = std::max(scale, std::abs(u[k]));

    const auto inner = [&](const std::vector<double>& f,
                           const std::vector<double>& g) {
        double acc = 0.0;
        for (size_t i = 0; i < f.size(); ++i) {
            if (f[i] == 0.0) continue;
            for (size_t j = 0; j < g.size(); ++j) {
                if (g[j] == 0.0) continue;
                acc += f[i] * g[j] * u[static_cast<int>(i + j)];
            }
        }
        return acc;
    };

    out.alpha.assign(static_cast<size_t>(N), 0.0);
    out.beta.assign(static_cast<size_t>(N), 0.0);

    std::vector<double> prev;                 // p_{k-1}
    std::vector<double> curr{1.0};            // p_0 = 1 (u_0 = 1)
    for (int k = 0; k < N; ++k) {
        // t = x * p_k
        std::vector<double> t(curr.size() + 1, 0.0);
        for (size_t i = 0; i < curr.size(); ++i) t[i + 1] = curr[i];

        double a;
        if (extend_last && k == N - 1 && k > 0) {
            a = out.alpha[static_cast<size_t>(k - 1)];
        } else {
            a = inner(t, curr);
        }
        out.alpha[static_cast<size_t>(k)] = a;
        if (k + 1 == N) break;

        for (size_t i = 0; i < curr.size(); ++i) t[i] -= a * curr[i];
        if (k > 0) {
            const double b = out.beta[static_cast<size_t>(k)];
            for (size_t i = 0; i < prev.size(); ++i) t[i] -= b * prev[i];
        }
        const double norm2 = inner(t, t);
        if (!(norm2 > 1e-12 * scale)) return false;  // rank boundary hit
        const double b = std::sqrt(norm2);
        out.beta[static_cast<size_t>(k + 1)] = b;
        prev = curr;
        curr = std::move(t);
        for (double& c : curr) c /= b;
    }
    return true;
}

// Golub-Welsch: nodes are the Jacobi matrix eigenvalues, weights the
// squared first components of its eigenvectors.
AtomicMeasure measure_from_recurrence(const Recurrence& rec) {
    const int N = static_cast<int>(rec.alpha.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
    for (int k = 0; k < N; ++k) J(k, k) = rec.alpha[static_cast<size_t>(k)];
    for (int k = 1; k < N; ++k) {
        J(k, k - 1) = rec.beta[static_cast<size_t>(k)];
        J(k - 1, k) = rec.beta[static_cast<size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    AtomicMeasure mu;
    mu.nodes.resize(static_cast<size_t>(N));
    mu.weights.resize(static_cast<size_t>(N));
    for (int k = 0; k < N; ++k) {
        mu.nodes[static_cast<size_t>(k)] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        mu.weights[static_cast<size_t>(k)] = v0 * v0;
    }
    return mu;  // eigenvalues come out ascending
}

}  // namespace

MomentVector AtomicMeasure::moments(int order) const {
    std::vector<double> m(static_cast<size_t>(order) + 1, 0.0);
    for (size_t j = 0; j < nodes.size(); ++j) {
        double pw = weights[j];
        m[0] += pw;
        for (int k = 1; k <= order; ++k) {
            pw *= nodes[j];
            m[static_cast<size_t>(k)] += pw;
        }
    }
    m[0] = 1.0;
    return MomentVector(std::move(m));
}

DistributionSpec AtomicMeasure::to_spec() const {
    // drop numerically-zero weights, renormalize the remainder
    std::vector<double> ns, ws;
    double total = 0.0;
    for (size_t j = 0; j < nodes.size(); ++j)
        if (weights[j] > 1e-14) {
            ns.push_back(nodes[j]);
            ws.push_back(weights[j]);
            total += weights[j];
        }
    for (double& w : ws) w /= total;
    return DistributionSpec::finite_atomic(std::move(ns), std::move(ws));
}

MomentVector ConvolutionModel::moments() const {
    return convolve_moments(
        gaussian_raw_moments(0.0, var_z, residual_moments.order()),
        residual_moments);
}

MomentVector deconvolve_moments(const MomentVector& m, double var_z) {
    if (!(std::isfinite(var_z) && var_z >= 0.0))
        throw SpecError("deconvolve_moments: var_z must be nonnegative");
    const int K = m.order();
    std::vector<double> u(static_cast<size_t>(K) + 1, 0.0);
    u[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
        double acc = m[k];
        for (int l = 1; 2 * l <= k; ++l)
            acc -= binomial(k, 2 * l) * double_factorial_odd(l) *
                   std::pow(var_z, l) * u[static_cast<size_t>(k - 2 * l)];
        u[static_cast<size_t>(k)] = acc;
    }
    return MomentVector(std::move(u));
}

bool hankel_solvable(const MomentVector& u) {
    const int d = u.order() / 2;
    const Eigen::MatrixXd H = hankel(u, d);
    if (min_eigenvalue(H) < -1e-10 * (1.0 + std::abs(H.trace()))) return false;

    const int rb = hankel_rank_boundary(u, d);
    if (rb == d + 1) return true;  // positive definite: always extendable
    if (rb == 0) return false;     // cannot happen while u_0 = 1

    // Singular leading block: the sequence must be exactly the moments of
    // the rb-atom Gauss rule built from u_0..u_{2 rb - 1}.
    Recurrence rec;
    if (!recurrence_from_moments(u, rb, false, rec)) return false;
    const AtomicMeasure mu = measure_from_recurrence(rec);
    const MomentVector v = mu.moments(u.order());
    for (int k = 0; k <= u.order(); ++k)
        if (std::abs(v[k] - u[k]) > 1e-8 * (1.0 + std::abs(u[k]))) return false;
    return true;
}

double max_gaussian_variance(const MomentVector& m, double tol) {
    if (!(tol > 0.0)) throw SpecError("max_gaussian_variance: tol must be > 0");
    if (!hankel_solvable(m))
        throw TargetNotSolvable(
            "max_gaussian_variance: target is not a solvable moment sequence");
    double hi = m.variance();
    if (hi <= 0.0) return 0.0;
    if (hankel_solvable(deconvolve_moments(m, hi))) return hi;
    double lo = 0.0;  // var_z = 0 is solvable (the law itself)
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (hankel_solvable(deconvolve_moments(m, mid))) lo = mid;
        else hi = mid;
    }
    return lo;
}

AtomicMeasure atomic_from_moments(const MomentVector& u) {
    const int K = u.order();
    if (K < 2 || K % 2 != 0)
        throw SpecError("atomic_from_moments needs an even order >= 2");
    if (!hankel_solvable(u))
        throw TargetNotSolvable(
            "atomic_from_moments: sequence admits no representing measure");
    const int d = K / 2;
    const int rb = hankel_rank_boundary(u, d);

    int N = (rb == d + 1) ? d + 1 : rb;
    bool extend = (rb == d + 1);
    Recurrence rec;
    while (N >= 1) {
        if (recurrence_from_moments(u, N, extend, rec)) break;
        --N;  // numerical rank boundary mid-build: shrink the rule
        extend = false;
    }
    if (N < 1)
        throw TargetNotSolvable("atomic_from_moments: no quadrature rule found");
    return measure_from_recurrence(rec);
}

double pareto_skewness(double a) {
    if (!(a > 3.0)) throw SpecError("pareto skewness needs shape a > 3");
    return 2.0 * (1.0 + a) / (a - 3.0) * std::sqrt((a - 2.0) / a);
}

DistributionSpec fit_shifted_pareto(double u2, double u3, double a_min) {
    if (!(u2 > 0.0)) throw SpecError("fit_shifted_pareto: u2 must be positive");
    if (!(std::isfinite(a_min) && a_min >= 4.0))
        throw SpecError("fit_shifted_pareto: a_min must be >= 4");

    const double target = u3 / std::pow(u2, 1.5);
    if (!(target > 2.0))
        throw SkewnessInfeasible(
            "target skewness " + format_double(target) +
            " is at or below the Pareto family's lower limit 2");
    if (target >= pareto_skewness(a_min))
        throw SkewnessInfeasible("target skewness " + format_double(target) +
                                 " exceeds the maximum " +
                                 format_double(pareto_skewness(a_min)) +
                                 " at a_min = " + format_double(a_min));

    // skew(a) decreases from skew(a_min) to 2: bracket then bisect
    double lo = a_min, hi = std::max(2.0 * a_min, 16.0);
    while (pareto_skewness(hi) > target) {
        hi *= 2.0;
        if (hi > 1e15)
            throw SkewnessInfeasible("required shape exceeds numeric range");
    }
    while (hi - lo > 1e-13 * std::max(1.0, lo)) {
        const double mid = 0.5 * (lo + hi);
        if (pareto_skewness(mid) > target) lo = mid;
        else hi = mid;
    }
    const double a = 0.5 * (lo + hi);
    if (!(a > 4.0))
        throw SkewnessInfeasible("fitted shape does not exceed 4");

    const double xm = 0.5;
    const double mean = a * xm / (a - 1.0);
    const double var = xm * xm * a / ((a - 1.0) * (a - 1.0) * (a - 2.0));
    const double scale = std::sqrt(u2 / var);
    return DistributionSpec::pareto(xm, a, mean, scale);
}

double verify_match(const DistributionSpec& x, const ConvolutionModel& y,
                    int K) {
    if (K > y.residual_moments.order())
        throw SpecError("verify_match: residual moments shorter than K");
    const MomentVector mx = raw_moments(x, K);
    const MomentVector my = convolve_moments(
        gaussian_raw_moments(0.0, y.var_z, K), y.residual_moments);
    double gap = 0.0;
    for (int k = 0; k <= K; ++k) gap = std::max(gap, std::abs(mx[k] - my[k]));
    return gap;
}

GaussianParetoSplit fit_gaussian_pareto_split(const MomentVector& x_moments,
                                              double shape) {
    if (x_moments.order() < 3)
        throw SpecError("split needs x moments through order 3");
    if (!(shape > 4.0))
        throw SpecError("split: target Pareto shape must exceed 4");
    if (std::abs(x_moments.mean()) > 1e-9)
        throw SpecError("split: x law must be centered");

    const double mu2 = x_moments.variance();
    const double mu3 = x_moments.central(3);
    if (!(mu2 > 0.0) || !(mu3 > 0.0))
        throw TargetNotSolvable(
            "split: needs positive variance and positive third moment");

    const double gamma = pareto_skewness(shape);
    const double u2 = std::pow(mu3 / gamma, 2.0 / 3.0);
    const double var_z = mu2 - u2;
    if (var_z < 0.0)
        throw TargetNotSolvable(
            "split: residual variance exceeds the total at this shape");

    GaussianParetoSplit out{
        ConvolutionModel{var_z, deconvolve_moments(x_moments, var_z)},
        fit_shifted_pareto(u2, mu3, 4.0),
        DistributionSpec::gaussian(0.0, 1.0)};  // replaced below
    if (x_moments.order() >= 4 && !hankel_solvable(out.model.residual_moments))
        throw TargetNotSolvable("split: deconvolved residual is not solvable");
    out.convolution = DistributionSpec::convolution(var_z, out.pareto);
    return out;
}

double exact_poly_expectation(const std::vector<DistributionSpec>& laws, int p,
                              const Polynomial& f) {
    const int n = static_cast<int>(laws.size());
    if (n < 1 || p < 1)
        throw SpecError("exact_poly_expectation: need n >= 1 laws and p >= 1");
    for (const Monomial& mono : f)
        if (static_cast<int>(mono.powers.size()) != p)
            throw SpecError("exact_poly_expectation: monomial arity != p");

    std::vector<const DistributionSpec::FiniteAtomic*> fa;
    fa.reserve(static_cast<size_t>(n));
    double combos = 1.0;
    for (const DistributionSpec& law : laws) {
        const auto* atom = std::get_if<DistributionSpec::FiniteAtomic>(&law.v());
        if (!atom)
            throw SpecError("exact_poly_expectation: laws must be FiniteAtomic");
        fa.push_back(atom);
        combos *= std::pow(static_cast<double>(atom->nodes.size()), p);
        if (combos > 1e6)
            throw EnumerationTooLarge(
                "exact_poly_expectation: outcome count exceeds 10^6");
    }

    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> sums(static_cast<size_t>(p), 0.0);
    double expectation = 0.0, kahan = 0.0;

    // depth-first over the n*p independent scalar coordinates
    const auto leaf = [&](double prob) {
        double value = 0.0;
        for (const Monomial& mono : f) {
            double term = mono.coef;
            for (int j = 0; j < p; ++j) {
                const double s = sums[static_cast<size_t>(j)] * inv_sqrt_n;
                for (int e = 0; e < mono.powers[static_cast<size_t>(j)]; ++e)
                    term *= s;
            }
            value += term;
        }
        const double y = prob * value - kahan;
        const double t = expectation + y;
        kahan = (t - expectation) - y;
        expectation = t;
    };

    const auto recurse = [&](auto&& self, int slot, double prob) -> void {
        if (slot == n * p) {
            leaf(prob);
            return;
        }
        const int i = slot / p;   // observation
        const int j = slot % p;   // coordinate
        const auto& law = *fa[static_cast<size_t>(i)];
        for (size_t t = 0; t < law.nodes.size(); ++t) {
            sums[static_cast<size_t>(j)] += law.nodes[t];
            self(self, slot + 1, prob * law.probs[t]);
            sums[static_cast<size_t>(j)] -= law.nodes[t];
        }
    };
    recurse(recurse, 0, 1.0);
    return expectation;
}

}  // namespace quasiboot
