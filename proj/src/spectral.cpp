#include "specshrink/spectral.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace specshrink {

Eigen::MatrixXd center_rows(const Eigen::MatrixXd& m) {
    Eigen::RowVectorXd mean = m.colwise().mean();
    return m.rowwise() - mean;
}

Embedding center_rows(const Embedding& emb) {
    return Embedding{emb.vocab, center_rows(emb.matrix)};
}

ThinSVD thin_svd(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw Error("thin_svd: input has non-finite entries");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw Error("thin_svd: decomposition did not converge");
    Eigen::MatrixXd u = svd.matrixU();
    Eigen::MatrixXd v = svd.matrixV();
    // Deterministic sign convention: largest-magnitude entry of each V column
    // made non-negative.
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index imax = 0;
        v.col(j).cwiseAbs().maxCoeff(&imax);
        if (v(imax, j) < 0.0) {
            v.col(j) = -v.col(j);
            u.col(j) = -u.col(j);
        }
    }
    return ThinSVD{std::move(u), Spectrum(svd.singularValues()), std::move(v)};
}

ThinSVD thin_svd(const Embedding& emb) { return thin_svd(emb.matrix); }

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out = m;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).norm();
        if (norm > 0.0) out.row(i) /= norm;
    }
    return out;
}

GramMatrix gram(const Eigen::MatrixXd& m, Eigen::Index max_rows) {
    if (m.rows() > max_rows)
        throw Error("gram: refusing to materialize " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.rows()) + " matrix (limit " +
                    std::to_string(max_rows) + " rows)");
    Eigen::MatrixXd k = m * m.transpose();
    k = 0.5 * (k + k.transpose()).eval();  // exact symmetry
    return GramMatrix{std::move(k)};
}

GramMatrix gram(const Embedding& emb, Eigen::Index max_rows) {
    return gram(emb.matrix, max_rows);
}

namespace {

// K_c = H K H with H = I - (1/n) 1 1^T, expanded to row/column/grand means.
Eigen::MatrixXd double_center(const Eigen::MatrixXd& k) {
    Eigen::VectorXd row_mean = k.rowwise().mean();
    Eigen::RowVectorXd col_mean = k.colwise().mean();
    double grand = k.mean();
    Eigen::MatrixXd c = k;
    c.colwise() -= row_mean;
    c.rowwise() -= col_mean;
    c.array() += grand;
    return c;
}

}  // namespace

double cka(const GramMatrix& k1, const GramMatrix& k2) {
    const Eigen::MatrixXd& a = k1.entries;
    const Eigen::MatrixXd& b = k2.entries;
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw Error("cka: gram matrices must be square");
    if (a.rows() != b.rows())
        throw Error("cka: gram matrices must have the same size");
    Eigen::MatrixXd ac = double_center(a);
    Eigen::MatrixXd bc = double_center(b);
    double na = ac.norm();
    double nb = bc.norm();
    if (na == 0.0 || nb == 0.0)
        throw Error("cka: centered gram matrix has zero Frobenius norm, similarity undefined");
    double inner = (ac.array() * bc.array()).sum();
    double rho = inner / (na * nb);
    if (rho < 0.0) rho = 0.0;
    if (rho > 1.0) rho = 1.0;
    return rho;
}

double log_cka_lower_bound(const Spectrum& oracle, const Spectrum& estimate) {
    Eigen::VectorXd sig = oracle.positive();
    Eigen::VectorXd nu = estimate.positive();
    if (sig.size() == 0 || nu.size() == 0)
        throw Error("log_cka_lower_bound: degenerate spectrum after zero filtering");
    const double d = static_cast<double>(nu.size());
    double log_sig = sig.array().log().sum();
    double log_nu = nu.array().log().sum();
    double sq_sig = sig.array().square().sum();
    double sq_nu = nu.array().square().sum();
    return log_sig / d + log_nu / d - 0.5 * std::log(sq_sig) - 0.5 * std::log(sq_nu);
}

}  // namespace specshrink
