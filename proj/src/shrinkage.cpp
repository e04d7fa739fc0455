#include "specshrink/shrinkage.hpp"

#include "specshrink/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace specshrink {

void BetaGrid::validate() const {
    if (!(start > 0.0) || !(start < stop) || !(stop <= 1.0))
        throw Error("beta grid requires 0 < start < stop <= 1");
    if (!(step > 0.0)) throw Error("beta grid requires step > 0");
}

std::vector<double> BetaGrid::points() const {
    validate();
    // Same semantics as an arange: points strictly below stop.
    auto count = static_cast<std::size_t>(std::ceil((stop - start) / step - 1e-9));
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i) pts[i] = start + static_cast<double>(i) * step;
    return pts;
}

namespace {

// Positive gram eigenvalues of a singular-value spectrum, log scale, scaled
// so the largest eigenvalue is 1. The objective family is invariant to
// isotropic scaling, so the normalization only improves conditioning.
struct PreparedSpectrum {
    Eigen::ArrayXd log_lambda;  // logs of lambda_i / lambda_max, all <= 0
    double d = 0.0;
    bool uniform = false;
};

PreparedSpectrum prepare(const Spectrum& spec) {
    Eigen::VectorXd s = spec.positive();
    if (s.size() == 0)
        throw Error("degenerate spectrum: no positive singular values");
    PreparedSpectrum p;
    p.uniform = s.maxCoeff() == s.minCoeff();
    p.d = static_cast<double>(s.size());
    p.log_lambda = (s.array() / s.maxCoeff()).square().log();
    return p;
}

void check_beta(double beta) {
    if (!(beta > 0.0)) throw Error("beta must be positive");
}

Eigen::ArrayXd tilted_weights(const PreparedSpectrum& p, double beta) {
    return (2.0 * beta * p.log_lambda).exp();
}

double objective_on(const PreparedSpectrum& p, double beta) {
    double z = tilted_weights(p, beta).sum();
    return beta / p.d * p.log_lambda.sum() - 0.5 * std::log(z);
}

double first_on(const PreparedSpectrum& p, double beta) {
    if (p.uniform) return 0.0;
    Eigen::ArrayXd w = tilted_weights(p, beta);
    Eigen::ArrayXd r = w / w.sum();
    return p.log_lambda.sum() / p.d - (r * p.log_lambda).sum();
}

double second_on(const PreparedSpectrum& p, double beta) {
    if (p.uniform) return 0.0;
    Eigen::ArrayXd w = tilted_weights(p, beta);
    Eigen::ArrayXd r = w / w.sum();
    double mean = (r * p.log_lambda).sum();
    double var = (r * (p.log_lambda - mean).square()).sum();
    return -2.0 * var;
}

}  // namespace

double objective_l(double beta, const Spectrum& spec) {
    check_beta(beta);
    return objective_on(prepare(spec), beta);
}

double first_derivative(double beta, const Spectrum& spec) {
    check_beta(beta);
    return first_on(prepare(spec), beta);
}

double second_derivative(double beta, const Spectrum& spec) {
    check_beta(beta);
    return second_on(prepare(spec), beta);
}

EntropyDecomposition entropy_decomposition(double beta, const Spectrum& spec) {
    check_beta(beta);
    PreparedSpectrum p = prepare(spec);
    const auto d = static_cast<Eigen::Index>(p.d);

    Eigen::ArrayXd lam = p.log_lambda.exp();
    Eigen::ArrayXd w = tilted_weights(p, beta);
    double z = w.sum();
    Eigen::ArrayXd r = w / z;
    Eigen::ArrayXd log_r = 2.0 * beta * p.log_lambda - std::log(z);
    Eigen::ArrayXd log_p = p.log_lambda - std::log(lam.sum());

    EntropyDecomposition e;
    e.dist.p = lam / lam.sum();
    e.dist.q = Eigen::VectorXd::Constant(d, 1.0 / p.d);
    e.dist.r = r;
    e.h_q = std::log(p.d);
    e.h_r = -(r * log_r).sum();
    e.h_qr = -log_r.sum() / p.d;
    e.h_rp = -(r * log_p).sum();
    e.kl_qr = e.h_qr - e.h_q;
    return e;
}

ShrinkageReport search_beta(const Spectrum& spec, const BetaGrid& grid) {
    PreparedSpectrum p = prepare(spec);
    ShrinkageReport report;
    report.grid = grid;
    report.betas = grid.points();
    report.spectrum = spec;
    report.degenerate_spectrum = p.uniform;

    const std::size_t count = report.betas.size();
    report.l_values.resize(count);
    report.l_prime_values.resize(count);
    report.objective_values.resize(count);
    std::size_t best = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double beta = report.betas[i];
        report.l_values[i] = objective_on(p, beta);
        report.l_prime_values[i] = first_on(p, beta);
        report.objective_values[i] = second_on(p, beta);
        // Ties go to the larger beta.
        if (report.objective_values[i] <= report.objective_values[best]) best = i;
    }
    report.beta_star = report.betas[best];
    return report;
}

namespace {

Eigen::VectorXd powered_singular_values(const Spectrum& s, double beta) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(s.size());
    const Eigen::Index keep = s.positive().size();
    for (Eigen::Index i = 0; i < keep; ++i) out[i] = std::pow(s.values[i], beta);
    return out;
}

}  // namespace

Eigen::MatrixXd transform(const Eigen::MatrixXd& m, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw Error("transform: beta must lie in [0, 1]");
    ThinSVD svd = thin_svd(center_rows(m));
    Eigen::VectorXd s = powered_singular_values(svd.S, beta);
    return svd.U * s.asDiagonal() * svd.V.transpose();
}

Embedding transform(const Embedding& emb, double beta) {
    return Embedding{emb.vocab, transform(emb.matrix, beta)};
}

std::pair<Eigen::MatrixXd, ShrinkageReport> postprocess_beta(const Eigen::MatrixXd& m,
                                                             const BetaGrid& grid) {
    ThinSVD svd = thin_svd(center_rows(m));
    ShrinkageReport report = search_beta(svd.S, grid);
    Eigen::VectorXd s = powered_singular_values(svd.S, report.beta_star);
    return {svd.U * s.asDiagonal() * svd.V.transpose(), std::move(report)};
}

std::pair<Embedding, ShrinkageReport> postprocess_beta(const Embedding& emb,
                                                       const BetaGrid& grid) {
    auto [matrix, report] = postprocess_beta(emb.matrix, grid);
    return {Embedding{emb.vocab, std::move(matrix)}, std::move(report)};
}

namespace {

std::string g9(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

}  // namespace

void ShrinkageReport::write_csv(std::ostream& out) const {
    out << "# beta_star = " << g9(beta_star) << "\n";
    out << "beta,l,l_prime,l_double_prime\n";
    for (std::size_t i = 0; i < betas.size(); ++i) {
        out << g9(betas[i]) << ',' << g9(l_values[i]) << ',' << g9(l_prime_values[i])
            << ',' << g9(objective_values[i]) << "\n";
    }
}

}  // namespace specshrink
