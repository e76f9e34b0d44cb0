#include "quasiboot/regression.hpp"

#include <cmath>

#include "quasiboot/errors.hpp"

namespace quasiboot {

DesignMatrix::DesignMatrix(Eigen::MatrixXd psi) : psi_(std::move(psi)) {
    if (psi_.rows() < 1 || psi_.cols() < psi_.rows())
        throw SpecError("design needs 1 <= p <= n");
    if (!psi_.allFinite()) throw SpecError("design entries must be finite");

    const Eigen::MatrixXd gram = psi_ * psi_.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const auto& lambda = es.eigenvalues();
    const double lmin = lambda(0), lmax = lambda(lambda.size() - 1);
    if (!(lmin > 0.0) || lmax / lmin > 1e8)
        throw IllConditioned("design Gram matrix condition exceeds 1e8");

    const Eigen::VectorXd inv_sqrt = lambda.array().rsqrt();
    phi_ = es.eigenvectors() * inv_sqrt.asDiagonal() *
           es.eigenvectors().transpose() * psi_;
}

DesignMatrix DesignMatrix::gaussian(int n, int p, RngStream& rng) {
    if (n < 1 || p < 1) throw SpecError("design needs n >= 1, p >= 1");
    Eigen::MatrixXd psi(p, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) psi(j, i) = rng.next_normal();
    return DesignMatrix(std::move(psi));
}

DesignMatrix DesignMatrix::fourier(int n, int p) {
    if (n < 1 || p < 1) throw SpecError("design needs n >= 1, p >= 1");
    if (2 * (p / 2) >= n)
        throw SpecError("fourier design needs 2*floor(p/2) < n");
    Eigen::MatrixXd psi(p, n);
    const double tau = 2.0 * M_PI / static_cast<double>(n);
    const double r2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        psi(0, i) = 1.0;
        for (int j = 1; j < p; ++j) {
            const int freq = (j + 1) / 2;
            const double arg = tau * freq * i;
            psi(j, i) = (j % 2 == 1) ? r2 * std::cos(arg) : r2 * std::sin(arg);
        }
    }
    return DesignMatrix(std::move(psi));
}

Response simulate_response(const DesignMatrix& design,
                           const RegressionModel& model, RngStream& rng) {
    const int n = design.n(), p = design.p();
    if (static_cast<int>(model.theta_star.size()) != p)
        throw SpecError("theta_star size must equal p");
    Response r;
    r.errors.resize(static_cast<size_t>(n));
    sample_vector(model.error_spec, r.errors, rng);
    r.y.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double mean = 0.0;
        for (int j = 0; j < p; ++j)
            mean += design.psi()(j, i) * model.theta_star[static_cast<size_t>(j)];
        r.y[static_cast<size_t>(i)] = mean + r.errors[static_cast<size_t>(i)];
    }
    return r;
}

double t_statistic(const DesignMatrix& design, const std::vector<double>& y,
                   const std::vector<double>& theta) {
    const int n = design.n(), p = design.p();
    if (static_cast<int>(y.size()) != n || static_cast<int>(theta.size()) != p)
        throw SpecError("t_statistic: size mismatch");
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
    const Eigen::Map<const Eigen::VectorXd> tv(theta.data(), p);
    return (design.phi() * (yv - design.psi().transpose() * tv)).norm();
}

double wild_bootstrap_t(const DesignMatrix& design,
                        const std::vector<double>& errors,
                        const std::vector<double>& eps) {
    const int n = design.n();
    if (static_cast<int>(errors.size()) != n ||
        static_cast<int>(eps.size()) != n)
        throw SpecError("wild_bootstrap_t: size mismatch");
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = errors[static_cast<size_t>(i)] *
                                       eps[static_cast<size_t>(i)];
    return (design.phi() * w).norm();
}

std::vector<double> ols_residuals(const DesignMatrix& design,
                                  const std::vector<double>& y) {
    const int n = design.n();
    if (static_cast<int>(y.size()) != n)
        throw SpecError("ols_residuals: size mismatch");
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
    // theta_hat = (Psi Psi')^{-1} Psi y; Phi'Phi y uses the cached root
    const Eigen::VectorXd fitted =
        design.phi().transpose() * (design.phi() * yv);
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = yv(i) - fitted(i);
    return out;
}

void fill_score_sample(const DesignMatrix& design,
                       const std::vector<double>& errors, Sample& s) {
    const int n = design.n(), p = design.p();
    if (s.n != n || s.p != p || static_cast<int>(errors.size()) != n)
        throw SpecError("fill_score_sample: size mismatch");
    const double root_n = std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        const double c = root_n * errors[static_cast<size_t>(i)];
        double* row = s.data.data() + static_cast<size_t>(i) * p;
        for (int j = 0; j < p; ++j) row[j] = c * design.phi()(j, i);
    }
}

}  // namespace quasiboot
