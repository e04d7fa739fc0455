#include "specshrink/align.hpp"

#include "specshrink/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

namespace specshrink {

namespace {

// Mean of the k largest entries; summed in descending order so the result
// does not depend on the selection algorithm's internal ordering.
double topk_mean(const Eigen::VectorXd& values, int k) {
    const auto n = static_cast<int>(values.size());
    k = std::min(k, n);
    if (k <= 0) return 0.0;
    std::vector<double> buf(values.data(), values.data() + n);
    std::partial_sort(buf.begin(), buf.begin() + k, buf.end(),
                      std::greater<>());
    return std::accumulate(buf.begin(), buf.begin() + k, 0.0) / k;
}

Eigen::VectorXd normalized_query(const Eigen::VectorXd& query) {
    const double norm = query.norm();
    if (norm > 0.0) return query / norm;
    return query;
}

// Precomputes the normalized target matrix and the target-side hubness
// penalties once, so scoring many queries stays O(n d + n log n) each.
class Retriever {
public:
    Retriever(const Embedding& tgt_emb, const Eigen::MatrixXd& query_context,
              int k)
        : targets_(normalize_rows(tgt_emb.matrix)), k_(k) {
        if (k_ < 1) throw Error("retrieval neighborhood k must be positive");
        r_t_ = Eigen::VectorXd::Zero(targets_.rows());
        if (query_context.rows() == 0) return;
        if (query_context.cols() != targets_.cols()) {
            throw Error("retrieval query context dimension mismatch");
        }
        const Eigen::MatrixXd context = normalize_rows(query_context);
        for (Eigen::Index j = 0; j < targets_.rows(); ++j) {
            const Eigen::VectorXd sims = context * targets_.row(j).transpose();
            r_t_[j] = topk_mean(sims, k_);
        }
    }

    std::vector<int> rank(const Eigen::VectorXd& query, Retrieval mode) const {
        if (query.size() != targets_.cols()) {
            throw Error("retrieval query dimension mismatch");
        }
        const Eigen::VectorXd qn = normalized_query(query);
        Eigen::VectorXd scores = targets_ * qn;
        if (mode == Retrieval::CSLS) {
            if (k_ > targets_.rows()) {
                throw Error("csls neighborhood k exceeds the target vocabulary");
            }
            const double r_s = topk_mean(scores, k_);
            scores = 2.0 * scores - r_t_;
            scores.array() -= r_s;
        }
        std::vector<int> order(static_cast<std::size_t>(targets_.rows()));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return a < b;
        });
        return order;
    }

private:
    Eigen::MatrixXd targets_;
    Eigen::VectorXd r_t_;
    int k_;
};

}  // namespace

Retrieval parse_retrieval(const std::string& name) {
    if (name == "nn") return Retrieval::NN;
    if (name == "csls") return Retrieval::CSLS;
    throw Error("unknown retrieval mode '" + name + "' (expected nn or csls)");
}

std::string retrieval_name(Retrieval mode) {
    switch (mode) {
        case Retrieval::NN: return "nn";
        case Retrieval::CSLS: return "csls";
    }
    throw Error("retrieval_name: invalid mode");
}

OrthogonalMap procrustes(const Eigen::MatrixXd& src_vecs,
                         const Eigen::MatrixXd& tgt_vecs) {
    if (src_vecs.rows() < 1 || src_vecs.cols() < 1) {
        throw Error("procrustes: empty input");
    }
    if (src_vecs.rows() != tgt_vecs.rows() ||
        src_vecs.cols() != tgt_vecs.cols()) {
        throw Error("procrustes: source and target shapes differ");
    }
    const Eigen::MatrixXd m = src_vecs.transpose() * tgt_vecs;
    const ThinSVD svd = thin_svd(m);
    OrthogonalMap map;
    map.W = svd.U * svd.V.transpose();
    return map;
}

std::vector<std::string> retrieve(const Eigen::VectorXd& query,
                                  const Embedding& tgt_emb, Retrieval mode,
                                  int k, const Eigen::MatrixXd& query_context) {
    validate(tgt_emb);
    const Retriever retriever(tgt_emb, query_context, k);
    std::vector<std::string> ranked;
    for (int idx : retriever.rank(query, mode)) {
        ranked.push_back(tgt_emb.vocab[static_cast<std::size_t>(idx)]);
    }
    return ranked;
}

EvalResult eval_translation(const Embedding& src_emb, const Embedding& tgt_emb,
                            const BilingualDictionary& train_dict,
                            const BilingualDictionary& test_dict,
                            Retrieval mode, int csls_k) {
    validate(src_emb);
    validate(tgt_emb);
    if (src_emb.dim() != tgt_emb.dim()) {
        throw Error("eval_translation: embedding dimensions differ");
    }
    if (train_dict.entries.empty()) {
        throw Error("eval_translation: empty training dictionary");
    }
    if (test_dict.entries.empty()) {
        throw Error("eval_translation: empty test dictionary");
    }

    const auto src_index = build_index(src_emb);
    const auto tgt_index = build_index(tgt_emb);
    const Eigen::MatrixXd src_norm = normalize_rows(src_emb.matrix);
    const Eigen::MatrixXd tgt_norm = normalize_rows(tgt_emb.matrix);

    std::vector<int> train_src, train_tgt;
    for (const auto& entry : train_dict.entries) {
        auto si = src_index.find(entry.source);
        auto ti = tgt_index.find(entry.target);
        if (si == src_index.end() || ti == tgt_index.end()) continue;
        train_src.push_back(si->second);
        train_tgt.push_back(ti->second);
    }
    if (train_src.empty()) {
        throw Error("eval_translation: no in-vocabulary training pairs");
    }

    Eigen::MatrixXd x(static_cast<Eigen::Index>(train_src.size()),
                      src_emb.dim());
    Eigen::MatrixXd y(static_cast<Eigen::Index>(train_tgt.size()),
                      tgt_emb.dim());
    for (std::size_t i = 0; i < train_src.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = src_norm.row(train_src[i]);
        y.row(static_cast<Eigen::Index>(i)) = tgt_norm.row(train_tgt[i]);
    }
    const OrthogonalMap map = procrustes(x, y);
    const Eigen::MatrixXd mapped = src_norm * map.W;

    // Group the test entries by source word, keeping only in-vocabulary
    // translations; order of first appearance.
    std::vector<std::string> sources;
    std::unordered_map<std::string, std::vector<int>> translations;
    for (const auto& entry : test_dict.entries) {
        if (translations.find(entry.source) == translations.end()) {
            sources.push_back(entry.source);
            translations.emplace(entry.source, std::vector<int>{});
        }
        auto ti = tgt_index.find(entry.target);
        if (ti != tgt_index.end()) {
            translations[entry.source].push_back(ti->second);
        }
    }

    const Retriever retriever(
        tgt_emb, mode == Retrieval::CSLS ? mapped : Eigen::MatrixXd(), csls_k);
    int correct = 0, evaluated = 0, skipped = 0;
    for (const auto& source : sources) {
        auto si = src_index.find(source);
        const auto& golds = translations[source];
        if (si == src_index.end() || golds.empty()) {
            ++skipped;
            continue;
        }
        const std::vector<int> ranking =
            retriever.rank(mapped.row(si->second).transpose(), mode);
        ++evaluated;
        if (std::find(golds.begin(), golds.end(), ranking.front()) !=
            golds.end()) {
            ++correct;
        }
    }
    if (evaluated == 0) {
        throw Error("eval_translation: no evaluable test entries");
    }
    EvalResult result;
    result.task = "translation";
    result.metric = "precision@1";
    result.score = static_cast<double>(correct) / evaluated;
    result.evaluated = evaluated;
    result.skipped_oov = skipped;
    return result;
}

}  // namespace specshrink
