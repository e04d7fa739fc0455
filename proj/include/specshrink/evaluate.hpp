#pragma once

#include "specshrink/postprocess.hpp"
#include "specshrink/score_table.hpp"
#include "specshrink/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace specshrink {

struct SimilarityPair {
    std::string word1;
    std::string word2;
    double human_score = 0.0;
};

struct SimilarityTask {
    std::string name;
    std::vector<SimilarityPair> pairs;  // >= 2, finite scores
};

// a : a_star :: b : b_star
struct AnalogyQuestion {
    std::string a;
    std::string a_star;
    std::string b;
    std::string b_star;
};

struct AnalogyTask {
    std::string name;
    std::vector<AnalogyQuestion> questions;  // >= 1, words non-empty
};

struct CategorizationItem {
    std::string word;
    std::string category;
};

struct CategorizationTask {
    std::string name;
    std::vector<CategorizationItem> items;

    // Number of distinct gold labels; this is the k handed to kmeans.
    int distinct_categories() const;
};

struct STSItem {
    std::vector<std::string> sentence1;
    std::vector<std::string> sentence2;
    double human_score = 0.0;
};

struct STSTask {
    std::string name;
    std::vector<STSItem> items;  // >= 2, finite scores
};

struct EvalResult {
    std::string task;
    std::string metric;  // spearman | accuracy | purity | pearson | precision@1
    double score = 0.0;
    int evaluated = 0;
    int skipped_oov = 0;
};

// Pearson correlation; throws Error on length mismatch, fewer than two
// points, or a constant side (undefined correlation).
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Pearson correlation of average-tie ranks; same error conditions.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// 1-based ranks, ties receiving the average of their positions.
std::vector<double> average_ranks(const std::vector<double>& xs);

// Cosine of raw word vectors against human scores, Spearman-correlated.
// Pairs with an out-of-vocabulary word are skipped and counted; fewer than
// two usable pairs is an error.
EvalResult eval_similarity(const Embedding& emb, const SimilarityTask& task);

// 3CosAdd accuracy: rows are length-normalized, the prediction is the
// cosine argmax of a_star - a + b over the vocabulary excluding
// {a, a_star, b}. Questions containing any out-of-vocabulary word are
// skipped and counted; zero usable questions is an error.
EvalResult eval_analogy(const Embedding& emb, const AnalogyTask& task);

struct KMeansResult {
    std::vector<int> assignment;  // one cluster id in [0, k) per point
    double sse = 0.0;             // within-cluster sum of squared distances
};

// Lloyd's algorithm with k-means++ seeding, deterministic for a fixed seed
// (restart i uses seed + i; the lowest-SSE restart wins, earliest on ties).
// Iterations cap at 300 or stop when assignments stabilize; a cluster left
// empty keeps its previous center.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int restarts = 10);

// Clusters in-vocabulary item vectors with k = number of gold categories and
// scores purity (each cluster votes its majority gold label). Needs at least
// k in-vocabulary items.
EvalResult eval_categorization(const Embedding& emb,
                               const CategorizationTask& task,
                               std::uint64_t seed, int restarts = 10);

struct SentenceEmbedding {
    Eigen::VectorXd vector;  // mean of in-vocabulary token vectors
    bool all_oov = false;    // true -> vector is zero and must be skipped
};

SentenceEmbedding sentence_embed(const Embedding& emb,
                                 const std::vector<std::string>& tokens);

enum class STSLevel {
    Word,      // post-process word vectors, then average
    Sentence,  // average raw vectors, then post-process the sentence matrix
};

STSLevel parse_sts_level(const std::string& name);
std::string sts_level_name(STSLevel level);

// Pearson correlation of sentence-pair cosines against human scores. Word
// level transforms the whole embedding before averaging; sentence level
// averages raw vectors, stacks the usable sentence vectors into one matrix
// (pair order, sentence1 before sentence2), and transforms that. Pairs with
// an all-out-of-vocabulary sentence are skipped; fewer than two usable pairs
// is an error.
EvalResult eval_sts(const Embedding& emb, const STSTask& task, STSLevel level,
                    const MethodConfig& method);

// Single-row table of unweighted per-category means plus "overall" (the mean
// over every result). Categories appear in the order similarity, analogy,
// concept, sts; unknown categories follow alphabetically. Every result's
// task must have a category.
ScoreTable macro_average(const std::vector<EvalResult>& results,
                         const std::map<std::string, std::string>& task_category);

}  // namespace specshrink
