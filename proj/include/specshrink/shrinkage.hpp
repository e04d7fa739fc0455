#pragma once

#include "specshrink/types.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace specshrink {

// Mixing-parameter search grid: start, start+step, ... strictly below stop.
struct BetaGrid {
    double start = 0.5;
    double stop = 1.0;
    double step = 0.001;

    void validate() const;  // requires 0 < start < stop <= 1 and step > 0
    std::vector<double> points() const;
};

// Distributions over the positive gram eigenvalues used by the derivative
// identities: p is the eigenvalue mass, q the uniform distribution, r the
// beta-tilted distribution lambda^{2 beta} / sum.
struct EigenDistributions {
    Eigen::VectorXd p;
    Eigen::VectorXd q;
    Eigen::VectorXd r;
};

struct EntropyDecomposition {
    EigenDistributions dist;
    double h_r = 0.0;    // H(r)
    double h_q = 0.0;    // H(q) = log d
    double h_qr = 0.0;   // cross entropy H(q, r)
    double h_rp = 0.0;   // cross entropy H(r, p)
    double kl_qr = 0.0;  // D_KL(q || r) = H(q, r) - H(q)
};

struct ShrinkageReport {
    BetaGrid grid;
    std::vector<double> betas;
    std::vector<double> l_values;
    std::vector<double> l_prime_values;
    std::vector<double> objective_values;  // L''(beta); the search target
    double beta_star = 0.0;
    Spectrum spectrum;                // singular values the search ran on
    bool degenerate_spectrum = false;  // uniform or single positive value

    // Columns beta,l,l_prime,l_double_prime after a "# beta_star = x" line.
    void write_csv(std::ostream& out) const;
};

// The bound objective and its derivatives in beta. `spec` holds singular
// values; the gram eigenvalues are their squares, filtered to positive
// entries. All four are invariant to isotropic scaling of the spectrum.
//
//   L(beta)   = (beta/d) sum log lambda_i - (1/2) log sum lambda_i^{2 beta}
//   L'(beta)  = (1/d) sum log lambda_i - sum r_i log lambda_i
//   L''(beta) = -2 sum r_i log^2 lambda_i + 2 (sum r_i log lambda_i)^2
//
// L' and L'' are <= 0 everywhere and exactly 0 for uniform spectra. beta may
// exceed 1 here (finite differencing needs it); grids stay within (0, 1].
double objective_l(double beta, const Spectrum& spec);
double first_derivative(double beta, const Spectrum& spec);
double second_derivative(double beta, const Spectrum& spec);

// Entropy form of the derivative: L' = (1/2 beta)(H(r) - H(q) - D_KL(q||r)).
// H(r, p) is exposed for inspection only; the selection rule is the L''
// grid argmin.
EntropyDecomposition entropy_decomposition(double beta, const Spectrum& spec);

// Grid argmin of L''; ties break toward the largest beta, so a flat curve
// returns the top grid point (the least destructive transform).
ShrinkageReport search_beta(const Spectrum& spec, const BetaGrid& grid = {});

// U diag(s^beta) V^T of the centered input. beta = 1 reproduces the centered
// matrix, beta = 0 whitens the positive part of the spectrum. Singular values
// below the zero threshold stay zero.
Eigen::MatrixXd transform(const Eigen::MatrixXd& m, double beta);
Embedding transform(const Embedding& emb, double beta);

// center -> thin SVD -> search_beta -> reconstruct with the selected power.
std::pair<Eigen::MatrixXd, ShrinkageReport> postprocess_beta(
    const Eigen::MatrixXd& m, const BetaGrid& grid = {});
std::pair<Embedding, ShrinkageReport> postprocess_beta(
    const Embedding& emb, const BetaGrid& grid = {});

}  // namespace specshrink
