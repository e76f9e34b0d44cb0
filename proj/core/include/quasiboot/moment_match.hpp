#pragma once

// Gaussian-plus-residual moment splitting.
//
// Given a target law X with raw moments m_0..m_K, we look for a surrogate
//     Y = Z + U,   Z ~ N(0, var_z) independent of U,
// whose moments match X's up to order K-1 (order K is only required
// finite).  The residual moments follow the deconvolution recursion
//     u_k = m_k - sum_{l=1}^{floor(k/2)} C(k,2l) (2l-1)!! var_z^l u_{k-2l},
// and U exists iff the truncated Hamburger problem for (u_k) is solvable:
// the Hankel matrix H = (u_{i+j}) must be PSD, and a rank-deficient H must
// be explained by an atomic measure reproducing the whole sequence.
// Solvability is monotone in var_z (convolving with a narrower Gaussian
// keeps a representing measure representable), so the feasible var_z set is
// an interval [0, v*] and v* can be found by bisection.
//
// Atomic representing measures are recovered by Gauss quadrature: build the
// orthogonal-polynomial recurrence from the moments, then take nodes and
// weights from the Jacobi matrix eigendecomposition (Golub-Welsch).

#include <string>
#include <vector>

#include "quasiboot/distributions.hpp"
#include "quasiboot/moments.hpp"

namespace quasiboot {

struct AtomicMeasure {
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // positive, sum 1

    MomentVector moments(int order) const;
    DistributionSpec to_spec() const;  // as a FiniteAtomic distribution
};

// Moment-level description of Y = N(0, var_z) + U.
struct ConvolutionModel {
    double var_z = 0.0;
    MomentVector residual_moments;  // raw moments of U

    // Raw moments of Y up to residual order.
    MomentVector moments() const;
};

// The u_k recursion above; m.order() arbitrary, var_z >= 0.
MomentVector deconvolve_moments(const MomentVector& m, double var_z);

// Truncated Hamburger solvability of u_0..u_K, using the even block
// u_0..u_{2 floor(K/2)}.  PSD tolerance: smallest eigenvalue of H no less
// than -1e-10 * (1 + trace H).  A singular leading block additionally
// forces an atomic explanation of the full sequence (this rejects e.g.
// (1,0,0,0,1), whose PSD Hankel has no representing measure).
bool hankel_solvable(const MomentVector& u);

// Largest var_z keeping deconvolve_moments(m, var_z) solvable, bisected on
// [0, Var X] to absolute tolerance tol.  Throws TargetNotSolvable when m
// itself is not a valid moment sequence.
double max_gaussian_variance(const MomentVector& m, double tol = 1e-10);

// Atomic measure reproducing u_0..u_{2d-1} exactly and u_{2d} up to the
// quadrature defect, for an even-order sequence u_0..u_{2d} (pre:
// hankel_solvable).  Rank-deficient sequences yield the smaller measure
// that reproduces everything.  Full-rank sequences use d+1 nodes, fixing
// the one free recurrence coefficient by repeating the last one.
AtomicMeasure atomic_from_moments(const MomentVector& u);

// Shifted-scaled Pareto scale*(P - E P), P ~ Pareto(xm = 1/2, a), with
// variance u2 and third central moment u3.  The shape solves the skewness
// equation via bisection on the strictly decreasing map
//     skew(a) = 2 (1+a)/(a-3) sqrt((a-2)/a),  a in (a_min, inf),
// whose range is (2, skew(a_min)).  Throws SkewnessInfeasible outside it.
DistributionSpec fit_shifted_pareto(double u2, double u3, double a_min = 4.0);

// Pareto skewness map above (exposed for tests and diagnostics).
double pareto_skewness(double a);

// max_{k <= K} |E X^k - E Y^k| between a law and a convolution model.
double verify_match(const DistributionSpec& x, const ConvolutionModel& y,
                    int K);

// Split a centered law X into N(0, var_z) + shifted-scaled Pareto with the
// residual skewness pinned to a target Pareto shape (the figure-style
// construction): u2 = (mu3 / skew(shape))^{2/3}, var_z = Var X - u2.
struct GaussianParetoSplit {
    ConvolutionModel model;        // residual moments from the exact deconvolution
    DistributionSpec pareto;       // fitted sampleable residual
    DistributionSpec convolution;  // conv(var_z=..., atom=pareto)
};
GaussianParetoSplit fit_gaussian_pareto_split(const MomentVector& x_moments,
                                              double shape = 4.1);

// Exact E f(S_n), S_n = n^{-1/2} sum X_i, each X_i a p-vector of i.i.d.
// coordinates from the finite-support law laws[i]; f is a polynomial in the
// p coordinates of S_n.  Enumerates all (support sizes)^(n p) outcomes with
// plain floating accumulation; throws EnumerationTooLarge past 10^6.
struct Monomial {
    double coef = 1.0;
    std::vector<int> powers;  // size p
};
using Polynomial = std::vector<Monomial>;

double exact_poly_expectation(const std::vector<DistributionSpec>& laws, int p,
                              const Polynomial& f);

}  // namespace quasiboot
