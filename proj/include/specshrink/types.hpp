#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace specshrink {

// All library failures are reported through this type; the CLI turns it into
// a single "error: ..." line and a nonzero exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vocabulary plus an n x d matrix of word vectors; row i belongs to vocab[i].
struct Embedding {
    std::vector<std::string> vocab;
    Eigen::MatrixXd matrix;

    Eigen::Index size() const { return matrix.rows(); }
    Eigen::Index dim() const { return matrix.cols(); }
};

// Checks n,d >= 1, vocab size == row count, no duplicate words, all entries
// finite. Throws Error with the first violation found.
void validate(const Embedding& emb);

// Word -> row index lookup table.
std::unordered_map<std::string, int> build_index(const Embedding& emb);

// Singular values below kSpectrumRelEps * s_max are treated as exact zeros;
// centering always produces at least one such value and logarithms must stay
// finite.
inline constexpr double kSpectrumRelEps = 1e-12;

// Non-increasing, non-negative sequence. Holds singular values of a matrix
// or eigenvalues of a gram matrix depending on context.
struct Spectrum {
    Eigen::VectorXd values;

    Spectrum() = default;
    explicit Spectrum(Eigen::VectorXd v);  // validates order, sign, finiteness

    Eigen::Index size() const { return values.size(); }

    // Entries >= rel_eps * max; everything below is dropped as exact zero.
    Eigen::VectorXd positive(double rel_eps = kSpectrumRelEps) const;
};

struct ThinSVD {
    Eigen::MatrixXd U;  // n x r, orthonormal columns
    Spectrum S;         // r singular values
    Eigen::MatrixXd V;  // d x r, orthonormal columns
};

struct GramMatrix {
    Eigen::MatrixXd entries;  // n x n, symmetric positive semi-definite
};

}  // namespace specshrink
