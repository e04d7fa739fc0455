#pragma once

#include "specshrink/evaluate.hpp"
#include "specshrink/types.hpp"

#include <string>
#include <vector>

namespace specshrink {

struct DictionaryEntry {
    std::string source;
    std::string target;
};

// Word translation pairs; the same source may map to several targets.
struct BilingualDictionary {
    std::vector<DictionaryEntry> entries;
};

struct OrthogonalMap {
    Eigen::MatrixXd W;  // d x d, W^T W = I within 1e-8
};

enum class Retrieval { NN, CSLS };

Retrieval parse_retrieval(const std::string& name);
std::string retrieval_name(Retrieval mode);

// Orthogonal W = U V^T from the SVD of src^T tgt, minimizing |src W - tgt|_F
// over orthogonal matrices. Inputs need equal shapes.
OrthogonalMap procrustes(const Eigen::MatrixXd& src_vecs,
                         const Eigen::MatrixXd& tgt_vecs);

// Every target word ranked best-first. Target rows, the query, and the
// context rows are length-normalized internally. NN ranks by cosine. CSLS
// ranks by 2 cos(x,y) - r_T(y) - r_S(x), where r_T(y) is the mean cosine of
// target y to its k nearest context rows (the mapped source queries) and
// r_S(x) the mean cosine of the query to its k nearest targets; an empty
// context drops the r_T penalty. CSLS requires k <= target vocabulary size.
std::vector<std::string> retrieve(
    const Eigen::VectorXd& query, const Embedding& tgt_emb, Retrieval mode,
    int k = 10, const Eigen::MatrixXd& query_context = Eigen::MatrixXd());

// Precision@1 word translation. Both embeddings are length-normalized, the
// map is fit on train-dictionary pairs (entries with an out-of-vocabulary
// side dropped), and every unique test source word is scored: correct when
// the top-ranked target is any of its listed translations. CSLS uses the
// whole mapped source vocabulary as context. Counts are per unique test
// source word; sources that are out of vocabulary (or whose translations all
// are) count as skipped.
EvalResult eval_translation(const Embedding& src_emb, const Embedding& tgt_emb,
                            const BilingualDictionary& train_dict,
                            const BilingualDictionary& test_dict,
                            Retrieval mode, int csls_k = 10);

}  // namespace specshrink
