#include "specshrink/types.hpp"

#include <cmath>
#include <unordered_set>

namespace specshrink {

void validate(const Embedding& emb) {
    if (emb.matrix.rows() < 1 || emb.matrix.cols() < 1)
        throw Error("embedding must have at least one row and one column");
    if (static_cast<Eigen::Index>(emb.vocab.size()) != emb.matrix.rows())
        throw Error("vocabulary size does not match matrix row count");
    if (!emb.matrix.allFinite())
        throw Error("embedding contains non-finite values");
    std::unordered_set<std::string> seen;
    for (const auto& word : emb.vocab) {
        if (!seen.insert(word).second)
            throw Error("duplicate word in vocabulary: " + word);
    }
}

std::unordered_map<std::string, int> build_index(const Embedding& emb) {
    std::unordered_map<std::string, int> index;
    index.reserve(emb.vocab.size());
    for (int i = 0; i < static_cast<int>(emb.vocab.size()); ++i)
        index.emplace(emb.vocab[i], i);
    return index;
}

Spectrum::Spectrum(Eigen::VectorXd v) : values(std::move(v)) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw Error("spectrum contains non-finite value");
        if (values[i] < 0.0)
            throw Error("spectrum contains negative value");
        if (i > 0 && values[i] > values[i - 1])
            throw Error("spectrum is not sorted in non-increasing order");
    }
}

Eigen::VectorXd Spectrum::positive(double rel_eps) const {
    if (values.size() == 0) return Eigen::VectorXd();
    const double cutoff = rel_eps * values[0];
    Eigen::Index count = 0;
    while (count < values.size() && values[count] >= cutoff && values[count] > 0.0)
        ++count;
    return values.head(count);
}

}  // namespace specshrink
