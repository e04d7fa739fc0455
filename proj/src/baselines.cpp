#include "specshrink/baselines.hpp"

#include "specshrink/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace specshrink {

Eigen::MatrixXd remove_top_pcs(const Eigen::MatrixXd& m, int k) {
    if (m.rows() < 1 || m.cols() < 1) {
        throw Error("remove_top_pcs: matrix must be non-empty");
    }
    if (k < 0 || k > m.cols()) {
        throw Error("remove_top_pcs: k must lie in [0, d]");
    }
    Eigen::MatrixXd centered = center_rows(m);
    if (k == 0) {
        return centered;
    }
    ThinSVD svd = thin_svd(centered);
    const int kk = std::min<int>(k, static_cast<int>(svd.V.cols()));
    const Eigen::MatrixXd vk = svd.V.leftCols(kk);
    return centered - (centered * vk) * vk.transpose();
}

Embedding remove_top_pcs(const Embedding& emb, int k) {
    validate(emb);
    Embedding out;
    out.vocab = emb.vocab;
    out.matrix = remove_top_pcs(emb.matrix, k);
    return out;
}

std::pair<Eigen::MatrixXd, LWResult> ledoit_wolf(const Eigen::MatrixXd& m) {
    if (m.cols() < 1) {
        throw Error("ledoit_wolf: matrix must be non-empty");
    }
    if (m.rows() < 2) {
        throw Error("ledoit_wolf: at least two rows are required");
    }
    const auto n = static_cast<double>(m.rows());
    const auto d = static_cast<Eigen::Index>(m.cols());

    Eigen::MatrixXd centered = center_rows(m);
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / n;

    LWResult result;
    result.alpha = cov.trace() / static_cast<double>(d);

    if (result.alpha <= 0.0) {
        // All vectors coincide; the sample covariance is identically zero and
        // there is nothing to shrink toward.
        result.zero_input = true;
        result.mixing = 0.0;
        result.shrunk_spectrum = Spectrum(Eigen::VectorXd::Zero(d));
        return {std::move(centered), std::move(result)};
    }

    Eigen::MatrixXd deviation = cov;
    deviation.diagonal().array() -= result.alpha;
    const double dispersion = deviation.squaredNorm() / static_cast<double>(d);

    if (dispersion <= 0.0) {
        // Sample covariance already equals the isotropic target.
        result.mixing = 1.0;
        result.shrunk_spectrum =
            Spectrum(Eigen::VectorXd::Constant(d, result.alpha));
        return {std::move(centered), std::move(result)};
    }

    // Average squared distance of the rank-one summands x_k x_k^T from their
    // mean S, expanded as |x|^4 - 2 x^T S x + |S|^2_F per row.
    const Eigen::VectorXd sq_norms = centered.rowwise().squaredNorm();
    const double quartic = sq_norms.array().square().sum();
    const double cross = (centered.cwiseProduct(centered * cov)).sum();
    const double cov_sq = cov.squaredNorm();
    double noise =
        (quartic - 2.0 * cross + n * cov_sq) / (n * n * static_cast<double>(d));
    noise = std::min(noise, dispersion);

    result.mixing = (dispersion - noise) / dispersion;

    ThinSVD svd = thin_svd(centered);
    const Eigen::Index rt = svd.S.size();
    Eigen::VectorXd shrunk = Eigen::VectorXd::Constant(
        d, (1.0 - result.mixing) * result.alpha);
    shrunk.head(rt) +=
        result.mixing * (svd.S.values.array().square() / n).matrix();
    result.shrunk_spectrum = Spectrum(shrunk);

    const Eigen::VectorXd scale = (n * shrunk.head(rt).array()).sqrt();
    Eigen::MatrixXd out = svd.U * scale.asDiagonal() * svd.V.transpose();
    return {std::move(out), std::move(result)};
}

std::pair<Embedding, LWResult> ledoit_wolf(const Embedding& emb) {
    validate(emb);
    auto [matrix, result] = ledoit_wolf(emb.matrix);
    Embedding out;
    out.vocab = emb.vocab;
    out.matrix = std::move(matrix);
    return {std::move(out), std::move(result)};
}

}  // namespace specshrink
