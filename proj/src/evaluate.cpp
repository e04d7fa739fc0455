#include "specshrink/evaluate.hpp"

#include "specshrink/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <utility>

namespace specshrink {

namespace {

template <typename A, typename B>
double safe_cosine(const A& a, const B& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

void check_paired(const std::vector<double>& xs, const std::vector<double>& ys,
                  const char* op) {
    if (xs.size() != ys.size()) {
        throw Error(std::string(op) + ": input lengths differ");
    }
    if (xs.size() < 2) {
        throw Error(std::string(op) + ": need at least two points");
    }
}

bool is_constant(const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(),
                       [&](double v) { return v == xs.front(); });
}

void check_finite_score(double score, const std::string& task) {
    if (!std::isfinite(score)) {
        throw Error("task '" + task + "' has a non-finite human score");
    }
}

// 53-bit uniform in [0, 1); written out so results do not depend on the
// standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_index(std::mt19937_64& rng, int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

SentenceEmbedding embed_tokens(
    const Eigen::MatrixXd& matrix,
    const std::unordered_map<std::string, int>& index,
    const std::vector<std::string>& tokens) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(matrix.cols());
    int found = 0;
    for (const auto& token : tokens) {
        auto it = index.find(token);
        if (it == index.end()) continue;
        sum += matrix.row(it->second).transpose();
        ++found;
    }
    if (found == 0) return {std::move(sum), true};
    return {sum / found, false};
}

}  // namespace

int CategorizationTask::distinct_categories() const {
    std::set<std::string> labels;
    for (const auto& item : items) labels.insert(item.category);
    return static_cast<int>(labels.size());
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    check_paired(xs, ys, "pearson");
    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        throw Error("pearson: correlation undefined for constant input");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (xs[i] != xs[j]) return xs[i] < xs[j];
        return i < j;
    });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    check_paired(xs, ys, "spearman");
    if (is_constant(xs) || is_constant(ys)) {
        throw Error("spearman: correlation undefined for constant input");
    }
    return pearson(average_ranks(xs), average_ranks(ys));
}

EvalResult eval_similarity(const Embedding& emb, const SimilarityTask& task) {
    validate(emb);
    if (task.pairs.size() < 2) {
        throw Error("similarity task '" + task.name +
                    "' needs at least two pairs");
    }
    const auto index = build_index(emb);
    std::vector<double> sys, gold;
    int skipped = 0;
    for (const auto& pair : task.pairs) {
        check_finite_score(pair.human_score, task.name);
        auto i1 = index.find(pair.word1);
        auto i2 = index.find(pair.word2);
        if (i1 == index.end() || i2 == index.end()) {
            ++skipped;
            continue;
        }
        sys.push_back(
            safe_cosine(emb.matrix.row(i1->second), emb.matrix.row(i2->second)));
        gold.push_back(pair.human_score);
    }
    if (sys.size() < 2) {
        throw Error("similarity task '" + task.name +
                    "': fewer than two in-vocabulary pairs");
    }
    EvalResult result;
    result.task = task.name;
    result.metric = "spearman";
    result.score = spearman(sys, gold);
    result.evaluated = static_cast<int>(sys.size());
    result.skipped_oov = skipped;
    return result;
}

EvalResult eval_analogy(const Embedding& emb, const AnalogyTask& task) {
    validate(emb);
    if (task.questions.empty()) {
        throw Error("analogy task '" + task.name + "' has no questions");
    }
    const auto index = build_index(emb);
    const Eigen::MatrixXd normalized = normalize_rows(emb.matrix);
    const auto n = normalized.rows();
    int correct = 0, evaluated = 0, skipped = 0;
    for (const auto& q : task.questions) {
        auto ia = index.find(q.a);
        auto ia_star = index.find(q.a_star);
        auto ib = index.find(q.b);
        auto ib_star = index.find(q.b_star);
        if (ia == index.end() || ia_star == index.end() || ib == index.end() ||
            ib_star == index.end()) {
            ++skipped;
            continue;
        }
        const Eigen::VectorXd query =
            (normalized.row(ia_star->second) - normalized.row(ia->second) +
             normalized.row(ib->second))
                .transpose();
        const Eigen::VectorXd scores = normalized * query;
        int best = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == ia->second || i == ia_star->second || i == ib->second) {
                continue;
            }
            if (scores[i] > best_score) {
                best_score = scores[i];
                best = static_cast<int>(i);
            }
        }
        ++evaluated;
        if (best >= 0 && best == ib_star->second) ++correct;
    }
    if (evaluated == 0) {
        throw Error("analogy task '" + task.name + "': no evaluable questions");
    }
    EvalResult result;
    result.task = task.name;
    result.metric = "accuracy";
    result.score = static_cast<double>(correct) / evaluated;
    result.evaluated = evaluated;
    result.skipped_oov = skipped;
    return result;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int restarts) {
    const auto n = static_cast<int>(points.rows());
    const auto d = points.cols();
    if (n < 1) throw Error("kmeans: no points");
    if (k < 1) throw Error("kmeans: k must be positive");
    if (k > n) throw Error("kmeans: k exceeds the number of points");
    if (restarts < 1) throw Error("kmeans: restarts must be positive");

    KMeansResult best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < restarts; ++restart) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(restart));

        // k-means++ seeding: each next center is drawn proportionally to the
        // squared distance from the centers chosen so far.
        Eigen::MatrixXd centers(k, d);
        centers.row(0) = points.row(uniform_index(rng, n));
        Eigen::VectorXd dist2 =
            (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double total = dist2.sum();
            int pick;
            if (total <= 0.0) {
                pick = uniform_index(rng, n);
            } else {
                const double threshold = uniform01(rng) * total;
                double cum = 0.0;
                pick = n - 1;
                for (int i = 0; i < n; ++i) {
                    cum += dist2[i];
                    if (cum > threshold) {
                        pick = i;
                        break;
                    }
                }
            }
            centers.row(c) = points.row(pick);
            dist2 = dist2.cwiseMin(
                (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
        }

        std::vector<int> assign(n, -1);
        std::vector<int> counts(k, 0);
        for (int iter = 0; iter < 300; ++iter) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                int best_c = 0;
                double best_d = (points.row(i) - centers.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    const double dd =
                        (points.row(i) - centers.row(c)).squaredNorm();
                    if (dd < best_d) {
                        best_d = dd;
                        best_c = c;
                    }
                }
                if (assign[i] != best_c) {
                    assign[i] = best_c;
                    changed = true;
                }
            }
            if (!changed) break;
            Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
            std::fill(counts.begin(), counts.end(), 0);
            for (int i = 0; i < n; ++i) {
                sums.row(assign[i]) += points.row(i);
                ++counts[assign[i]];
            }
            for (int c = 0; c < k; ++c) {
                // An empty cluster keeps its previous center.
                if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
            }
        }

        double sse = 0.0;
        for (int i = 0; i < n; ++i) {
            sse += (points.row(i) - centers.row(assign[i])).squaredNorm();
        }
        if (sse < best.sse) {
            best.sse = sse;
            best.assignment = assign;
        }
    }
    return best;
}

EvalResult eval_categorization(const Embedding& emb,
                               const CategorizationTask& task,
                               std::uint64_t seed, int restarts) {
    validate(emb);
    const int k = task.distinct_categories();
    if (k < 2) {
        throw Error("categorization task '" + task.name +
                    "' needs at least two categories");
    }
    const auto index = build_index(emb);
    std::vector<int> rows;
    std::vector<std::string> labels;
    int skipped = 0;
    for (const auto& item : task.items) {
        auto it = index.find(item.word);
        if (it == index.end()) {
            ++skipped;
            continue;
        }
        rows.push_back(it->second);
        labels.push_back(item.category);
    }
    const auto m = static_cast<int>(rows.size());
    if (m < k) {
        throw Error("categorization task '" + task.name + "': only " +
                    std::to_string(m) + " in-vocabulary items for " +
                    std::to_string(k) + " categories");
    }
    Eigen::MatrixXd points(m, emb.dim());
    for (int i = 0; i < m; ++i) points.row(i) = emb.matrix.row(rows[i]);

    const KMeansResult clustering = kmeans(points, k, seed, restarts);
    std::vector<std::unordered_map<std::string, int>> votes(k);
    for (int i = 0; i < m; ++i) ++votes[clustering.assignment[i]][labels[i]];
    int correct = 0;
    for (const auto& cluster : votes) {
        int top = 0;
        for (const auto& [label, count] : cluster) top = std::max(top, count);
        correct += top;
    }
    EvalResult result;
    result.task = task.name;
    result.metric = "purity";
    result.score = static_cast<double>(correct) / m;
    result.evaluated = m;
    result.skipped_oov = skipped;
    return result;
}

SentenceEmbedding sentence_embed(const Embedding& emb,
                                 const std::vector<std::string>& tokens) {
    return embed_tokens(emb.matrix, build_index(emb), tokens);
}

STSLevel parse_sts_level(const std::string& name) {
    if (name == "word") return STSLevel::Word;
    if (name == "sentence") return STSLevel::Sentence;
    throw Error("unknown STS level '" + name + "' (expected word or sentence)");
}

std::string sts_level_name(STSLevel level) {
    switch (level) {
        case STSLevel::Word: return "word";
        case STSLevel::Sentence: return "sentence";
    }
    throw Error("sts_level_name: invalid level");
}

EvalResult eval_sts(const Embedding& emb, const STSTask& task, STSLevel level,
                    const MethodConfig& method) {
    validate(emb);
    if (task.items.size() < 2) {
        throw Error("sts task '" + task.name + "' needs at least two items");
    }
    const auto index = build_index(emb);
    EvalResult result;
    result.task = task.name;
    result.metric = "pearson";

    std::vector<double> sys, gold;
    if (level == STSLevel::Word) {
        const Eigen::MatrixXd processed = apply_method(emb.matrix, method);
        for (const auto& item : task.items) {
            check_finite_score(item.human_score, task.name);
            const SentenceEmbedding s1 =
                embed_tokens(processed, index, item.sentence1);
            const SentenceEmbedding s2 =
                embed_tokens(processed, index, item.sentence2);
            if (s1.all_oov || s2.all_oov) {
                ++result.skipped_oov;
                continue;
            }
            sys.push_back(safe_cosine(s1.vector, s2.vector));
            gold.push_back(item.human_score);
        }
    } else {
        std::vector<Eigen::VectorXd> vectors;  // sentence1, sentence2 per pair
        for (const auto& item : task.items) {
            check_finite_score(item.human_score, task.name);
            SentenceEmbedding s1 = embed_tokens(emb.matrix, index, item.sentence1);
            SentenceEmbedding s2 = embed_tokens(emb.matrix, index, item.sentence2);
            if (s1.all_oov || s2.all_oov) {
                ++result.skipped_oov;
                continue;
            }
            vectors.push_back(std::move(s1.vector));
            vectors.push_back(std::move(s2.vector));
            gold.push_back(item.human_score);
        }
        if (gold.size() >= 2) {
            Eigen::MatrixXd stacked(static_cast<Eigen::Index>(vectors.size()),
                                    emb.dim());
            for (std::size_t i = 0; i < vectors.size(); ++i) {
                stacked.row(static_cast<Eigen::Index>(i)) =
                    vectors[i].transpose();
            }
            const Eigen::MatrixXd processed = apply_method(stacked, method);
            for (std::size_t i = 0; i < gold.size(); ++i) {
                const auto r = static_cast<Eigen::Index>(2 * i);
                sys.push_back(safe_cosine(processed.row(r), processed.row(r + 1)));
            }
        }
    }
    if (sys.size() < 2) {
        throw Error("sts task '" + task.name +
                    "': fewer than two evaluable pairs");
    }
    result.score = pearson(sys, gold);
    result.evaluated = static_cast<int>(sys.size());
    return result;
}

ScoreTable macro_average(
    const std::vector<EvalResult>& results,
    const std::map<std::string, std::string>& task_category) {
    if (results.empty()) throw Error("macro_average: no results");

    std::map<std::string, std::vector<double>> by_category;
    double total = 0.0;
    for (const auto& result : results) {
        auto it = task_category.find(result.task);
        if (it == task_category.end()) {
            throw Error("macro_average: no category for task '" + result.task +
                        "'");
        }
        by_category[it->second].push_back(result.score);
        total += result.score;
    }

    static const std::vector<std::string> canonical = {"similarity", "analogy",
                                                       "concept", "sts"};
    std::vector<std::string> order;
    for (const auto& cat : canonical) {
        if (by_category.count(cat) != 0) order.push_back(cat);
    }
    for (const auto& [cat, scores] : by_category) {
        if (std::find(canonical.begin(), canonical.end(), cat) ==
            canonical.end()) {
            order.push_back(cat);
        }
    }

    ScoreTable table;
    table.col_names = order;
    table.col_names.push_back("overall");
    std::vector<std::optional<double>> row;
    for (const auto& cat : order) {
        const auto& scores = by_category[cat];
        row.push_back(std::accumulate(scores.begin(), scores.end(), 0.0) /
                      static_cast<double>(scores.size()));
    }
    row.push_back(total / static_cast<double>(results.size()));
    table.add_row("macro", std::move(row));
    return table;
}

}  // namespace specshrink
