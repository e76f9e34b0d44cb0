#pragma once

// Linear regression y_i = psi_i' theta* + eps_i with a fixed p x n design.
//
// The test statistic for theta = theta* is
//     T = || (Psi Psi')^{-1/2} sum_i psi_i eps_i || = || Phi (y - Psi' theta*) ||
// with Phi = (Psi Psi')^{-1/2} Psi, whose columns phi_i satisfy
// sum_i phi_i phi_i' = I_p.  The wild bootstrap replicate reweights the
// per-observation scores:
//     T^b = || sum_i phi_i eps_i w_i ||,
// with w_i the bootstrap multiplier weights.  Writing rows
// x_i = sqrt(n) eps_i phi_i turns both into the generic engine's
// statistics: T = ||n^{-1/2} sum x_i|| and T^b its weighted replicate.

#include <Eigen/Dense>
#include <vector>

#include "quasiboot/bootstrap.hpp"
#include "quasiboot/distributions.hpp"
#include "quasiboot/rng.hpp"

namespace quasiboot {

class DesignMatrix {
public:
    // psi: p x n, all entries finite; throws IllConditioned when Psi Psi'
    // is singular or has eigenvalue ratio above 1e8.
    explicit DesignMatrix(Eigen::MatrixXd psi);

    // i.i.d. N(0,1) entries, drawn per observation (column) in order.
    static DesignMatrix gaussian(int n, int p, RngStream& rng);

    // Orthogonal trigonometric design: row 0 is the constant 1, odd row j
    // is sqrt(2) cos(2 pi ceil(j/2) i / n), even row j >= 2 is
    // sqrt(2) sin(2 pi (j/2) i / n), for i = 0..n-1.  Exact orthogonality
    // (Psi Psi' = n I) requires 2 floor(p/2) < n.
    static DesignMatrix fourier(int n, int p);

    int n() const { return static_cast<int>(psi_.cols()); }
    int p() const { return static_cast<int>(psi_.rows()); }
    const Eigen::MatrixXd& psi() const { return psi_; }
    const Eigen::MatrixXd& phi() const { return phi_; }

private:
    Eigen::MatrixXd psi_;  // p x n
    Eigen::MatrixXd phi_;  // (Psi Psi')^{-1/2} Psi
};

struct RegressionModel {
    std::vector<double> theta_star;  // size p
    DistributionSpec error_spec;
};

struct Response {
    std::vector<double> y;
    std::vector<double> errors;  // the eps_i actually drawn
};

// One error draw per observation, in observation order.
Response simulate_response(const DesignMatrix& design,
                           const RegressionModel& model, RngStream& rng);

// T = || Phi (y - Psi' theta) ||.
double t_statistic(const DesignMatrix& design, const std::vector<double>& y,
                   const std::vector<double>& theta);

// T^b = || sum_i phi_i errors_i eps_i || for one weight vector eps.
double wild_bootstrap_t(const DesignMatrix& design,
                        const std::vector<double>& errors,
                        const std::vector<double>& eps);

// y - Psi' theta_hat with theta_hat the least-squares fit.
std::vector<double> ols_residuals(const DesignMatrix& design,
                                  const std::vector<double>& y);

// Rows sqrt(n) * errors_i * phi_i, making the generic bootstrap engine
// compute T and T^b (see the header comment).  s must be n() x p().
void fill_score_sample(const DesignMatrix& design,
                       const std::vector<double>& errors, Sample& s);

}  // namespace quasiboot
