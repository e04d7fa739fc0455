#pragma once

#include "specshrink/types.hpp"

namespace specshrink {

// Subtracts the mean row so every column of the result has zero mean.
Eigen::MatrixXd center_rows(const Eigen::MatrixXd& m);
Embedding center_rows(const Embedding& emb);

// Thin SVD with r = min(n, d), singular values non-increasing. Signs are
// fixed so the largest-magnitude entry of each V column is non-negative,
// which makes the decomposition deterministic across runs.
ThinSVD thin_svd(const Eigen::MatrixXd& m);
ThinSVD thin_svd(const Embedding& emb);

// Scales every row to unit length; zero rows are left as-is.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& m);

// K = E E^T. Refuses to materialize the n x n matrix above max_rows.
GramMatrix gram(const Eigen::MatrixXd& m, Eigen::Index max_rows = 20000);
GramMatrix gram(const Embedding& emb, Eigen::Index max_rows = 20000);

// Centralised kernel alignment of two gram matrices, in [0, 1]. Both inputs
// are double-centered internally; the measure is invariant to rotation and
// isotropic scaling of the underlying vectors.
double cka(const GramMatrix& k1, const GramMatrix& k2);

// AM-GM lower bound on log cka between two gram spectra. Inputs are
// eigenvalues (not singular values); `estimate` supplies the 1/d weight.
// Near-zero eigenvalues are dropped before taking logarithms.
double log_cka_lower_bound(const Spectrum& oracle, const Spectrum& estimate);

}  // namespace specshrink
