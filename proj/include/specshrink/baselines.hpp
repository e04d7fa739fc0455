#pragma once

#include "specshrink/types.hpp"

#include <utility>

namespace specshrink {

// Outcome of the linear covariance shrinkage: Y = (1 - mixing) alpha I
// + mixing S, where S is the sample covariance of the centered vectors.
struct LWResult {
    double mixing = 0.0;       // in [0, 1]; 1.0 when the sample is already isotropic
    double alpha = 0.0;        // target scale tr(S) / d
    Spectrum shrunk_spectrum;  // all d eigenvalues of the shrunk covariance
    bool zero_input = false;
};

// Centers rows, then removes the projection onto the top k right singular
// vectors. k = 0 just centers; k = d zeroes the matrix.
Eigen::MatrixXd remove_top_pcs(const Eigen::MatrixXd& m, int k);
Embedding remove_top_pcs(const Embedding& emb, int k);

// Linear shrinkage of the sample covariance toward its scaled-identity
// target, with the data-driven mixing weight (dispersion minus estimation
// noise over dispersion). Word vectors are rebuilt in the sample eigenbasis
// with singular values sqrt(n * shrunk eigenvalue).
std::pair<Eigen::MatrixXd, LWResult> ledoit_wolf(const Eigen::MatrixXd& m);
std::pair<Embedding, LWResult> ledoit_wolf(const Embedding& emb);

}  // namespace specshrink
