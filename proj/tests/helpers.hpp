#pragma once

// Shared helpers for the unit test suite.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specshrink/types.hpp"

namespace testutil {

// Path of a bundled fixture file (SPECSHRINK_FIXTURE_DIR is set by CMake).
inline std::string fixture(const std::string& name) {
    return std::string(SPECSHRINK_FIXTURE_DIR) + "/" + name;
}

// Build a Spectrum from eigenvalues given in descending order.  The library
// convention is that Spectrum holds singular values, with eigenvalues of the
// gram matrix recovered internally as s^2, so oracle eigenvalues must be
// converted via sqrt before being handed to the spectrum operations.
inline specshrink::Spectrum spectrum_from_eigenvalues(const std::vector<double>& lambda) {
    Eigen::VectorXd s(static_cast<Eigen::Index>(lambda.size()));
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        s[static_cast<Eigen::Index>(i)] = std::sqrt(lambda[i]);
    }
    return specshrink::Spectrum{s};
}

// Deterministic uniform double in [0, 1) from a mersenne twister, independent
// of any standard-library distribution implementation.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; deterministic across platforms.
inline double std_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) {
        u1 = uniform01(rng);
    }
    const double u2 = uniform01(rng);
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                     double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = scale * std_normal(rng);
        }
    }
    return m;
}

// Log-normal eigenvalue sample sorted descending; used for derivative suites.
inline std::vector<double> lognormal_eigenvalues(std::mt19937_64& rng, int d, double sigma = 1.0) {
    std::vector<double> lambda(static_cast<std::size_t>(d));
    for (auto& v : lambda) {
        v = std::exp(sigma * std_normal(rng));
    }
    std::sort(lambda.begin(), lambda.end(), std::greater<double>());
    return lambda;
}

// Synthetic vocabulary w0, w1, ... used when constructing embeddings by hand.
inline std::vector<std::string> make_vocab(int n, const std::string& prefix = "w") {
    std::vector<std::string> vocab;
    vocab.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        vocab.push_back(prefix + std::to_string(i));
    }
    return vocab;
}

inline specshrink::Embedding make_embedding(const Eigen::MatrixXd& m, const std::string& prefix = "w") {
    specshrink::Embedding emb;
    emb.vocab = make_vocab(static_cast<int>(m.rows()), prefix);
    emb.matrix = m;
    specshrink::validate(emb);
    return emb;
}

// Largest absolute elementwise difference; 0.0 means bitwise-equal values.
inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testutil
