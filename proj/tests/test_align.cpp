#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "specshrink/align.hpp"
#include "specshrink/spectral.hpp"

using namespace specshrink;
using testutil::max_abs_diff;
using testutil::random_matrix;

TEST_CASE("parse_retrieval round-trips") {
    CHECK(parse_retrieval("nn") == Retrieval::NN);
    CHECK(parse_retrieval("csls") == Retrieval::CSLS);
    CHECK(retrieval_name(Retrieval::NN) == "nn");
    CHECK(retrieval_name(Retrieval::CSLS) == "csls");
    CHECK_THROWS_AS(parse_retrieval("knn"), Error);
}

TEST_CASE("procrustes maps identical inputs with the identity") {
    std::mt19937_64 rng(81);
    const Eigen::MatrixXd x = random_matrix(rng, 30, 5);
    const OrthogonalMap map = procrustes(x, x);
    CHECK(max_abs_diff(map.W, Eigen::MatrixXd::Identity(5, 5)) < 1e-8);
}

TEST_CASE("procrustes recovers a planted orthogonal map") {
    std::mt19937_64 rng(82);
    const Eigen::MatrixXd r =
        Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(rng, 6, 6)).householderQ();
    const Eigen::MatrixXd x = random_matrix(rng, 40, 6);
    const Eigen::MatrixXd y = x * r;

    const OrthogonalMap map = procrustes(x, y);
    CHECK(max_abs_diff(map.W, r) < 1e-6);
    CHECK(max_abs_diff(map.W.transpose() * map.W, Eigen::MatrixXd::Identity(6, 6)) < 1e-8);
}

TEST_CASE("procrustes stays orthogonal and close under noise") {
    std::mt19937_64 rng(83);
    const Eigen::MatrixXd r =
        Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(rng, 6, 6)).householderQ();
    const Eigen::MatrixXd x = random_matrix(rng, 80, 6);
    const Eigen::MatrixXd y = x * r + 0.01 * random_matrix(rng, 80, 6);

    const OrthogonalMap map = procrustes(x, y);
    CHECK(max_abs_diff(map.W.transpose() * map.W, Eigen::MatrixXd::Identity(6, 6)) < 1e-8);
    CHECK(max_abs_diff(map.W, r) < 0.1);
}

TEST_CASE("procrustes rejects mismatched shapes") {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 3);
    const Eigen::MatrixXd b = Eigen::MatrixXd::Zero(5, 3);
    const Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 2);
    CHECK_THROWS_AS(procrustes(a, b), Error);
    CHECK_THROWS_AS(procrustes(a, c), Error);
}

TEST_CASE("nn retrieval matches a brute-force cosine ranking") {
    std::mt19937_64 rng(84);
    const Embedding tgt = testutil::make_embedding(random_matrix(rng, 200, 6), "t");
    const Eigen::VectorXd query = random_matrix(rng, 6, 1);

    const std::vector<std::string> ranked = retrieve(query, tgt, Retrieval::NN);
    REQUIRE(ranked.size() == 200);

    // Independent ranking: stable sort of cosines, descending, index order on
    // ties, computed with the same normalize-then-dot arithmetic.
    const Eigen::MatrixXd rows = normalize_rows(tgt.matrix);
    Eigen::VectorXd qn = query;
    qn.normalize();
    const Eigen::VectorXd scores = rows * qn;
    std::vector<int> order(200);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        if (scores[i] != scores[j]) return scores[i] > scores[j];
        return i < j;
    });
    for (int i = 0; i < 200; ++i) {
        CHECK(ranked[static_cast<std::size_t>(i)] ==
              tgt.vocab[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    }
}

TEST_CASE("retrieval puts an exact match first under nn") {
    std::mt19937_64 rng(85);
    const Embedding tgt = testutil::make_embedding(random_matrix(rng, 25, 4), "t");
    const Eigen::VectorXd query = 3.0 * tgt.matrix.row(7).transpose();
    const std::vector<std::string> ranked = retrieve(query, tgt, Retrieval::NN);
    CHECK(ranked.front() == "t7");
}

TEST_CASE("csls with an empty context ranks like nn") {
    // Without context rows the hubness penalty for targets is dropped, and
    // the query's own penalty r_S(x) is a constant shift, so the order is
    // the plain cosine order.
    std::mt19937_64 rng(86);
    const Embedding tgt = testutil::make_embedding(random_matrix(rng, 40, 5), "t");
    const Eigen::VectorXd query = random_matrix(rng, 5, 1);
    const std::vector<std::string> nn = retrieve(query, tgt, Retrieval::NN, 10);
    const std::vector<std::string> csls = retrieve(query, tgt, Retrieval::CSLS, 10);
    CHECK(nn == csls);
}

TEST_CASE("csls demotes a crafted hub below the true match") {
    // Targets: t0 is the true match (cosine 0.96 with the query), t1 is a hub
    // (cosine 0.98). The context crowds around the hub, giving it a large
    // r_T penalty, so CSLS flips the order while NN prefers the hub.
    const int d = 4;
    Eigen::MatrixXd tgt_rows(4, d);
    tgt_rows.row(0) << 0.96, std::sqrt(1.0 - 0.96 * 0.96), 0.0, 0.0;  // true match
    tgt_rows.row(1) << 0.98, 0.0, std::sqrt(1.0 - 0.98 * 0.98), 0.0;  // hub
    tgt_rows.row(2) << 0.0, 0.0, 0.0, 1.0;
    tgt_rows.row(3) << 0.0, 1.0, 0.0, 0.0;
    const Embedding tgt = testutil::make_embedding(tgt_rows, "t");

    Eigen::VectorXd query(d);
    query << 1.0, 0.0, 0.0, 0.0;

    // Context queries hugging the hub direction.
    Eigen::MatrixXd context(6, d);
    for (int i = 0; i < 6; ++i) {
        Eigen::VectorXd c = tgt_rows.row(1).transpose();
        c[3] += 0.05 * (i + 1);
        context.row(i) = c.transpose() / c.norm();
    }

    const std::vector<std::string> nn = retrieve(query, tgt, Retrieval::NN);
    CHECK(nn.front() == "t1");  // the hub wins on raw cosine

    const std::vector<std::string> csls =
        retrieve(query, tgt, Retrieval::CSLS, 3, context);
    CHECK(csls.front() == "t0");

    // Independent score check for the top two candidates.
    const Eigen::MatrixXd ctx_n = normalize_rows(context);
    auto topk_mean = [&](const Eigen::VectorXd& scores, int k) {
        std::vector<double> v(scores.data(), scores.data() + scores.size());
        std::sort(v.begin(), v.end(), std::greater<double>());
        double sum = 0.0;
        for (int i = 0; i < k; ++i) sum += v[static_cast<std::size_t>(i)];
        return sum / k;
    };
    const Eigen::MatrixXd tgt_n = normalize_rows(tgt_rows);
    const Eigen::VectorXd qn = query / query.norm();
    const double r_s = topk_mean(tgt_n * qn, 3);
    const double score_true =
        2.0 * tgt_n.row(0).dot(qn) - topk_mean(ctx_n * tgt_n.row(0).transpose(), 3) - r_s;
    const double score_hub =
        2.0 * tgt_n.row(1).dot(qn) - topk_mean(ctx_n * tgt_n.row(1).transpose(), 3) - r_s;
    CHECK(score_true > score_hub);
}

TEST_CASE("csls validates k against the target vocabulary") {
    std::mt19937_64 rng(87);
    const Embedding tgt = testutil::make_embedding(random_matrix(rng, 5, 3), "t");
    const Eigen::VectorXd query = random_matrix(rng, 3, 1);
    CHECK_THROWS_AS(retrieve(query, tgt, Retrieval::CSLS, 6), Error);
    CHECK_THROWS_AS(retrieve(query, tgt, Retrieval::CSLS, 0), Error);
    // NN ignores k entirely, so a small vocabulary is fine there.
    CHECK_NOTHROW(retrieve(query, tgt, Retrieval::NN, 10));
}

TEST_CASE("retrieve validates the query dimension") {
    std::mt19937_64 rng(88);
    const Embedding tgt = testutil::make_embedding(random_matrix(rng, 5, 3), "t");
    const Eigen::VectorXd bad = random_matrix(rng, 4, 1);
    CHECK_THROWS_AS(retrieve(bad, tgt, Retrieval::NN), Error);
}

TEST_CASE("eval_translation is perfect on an identical-language pair") {
    std::mt19937_64 rng(89);
    const Embedding src = testutil::make_embedding(random_matrix(rng, 60, 8), "w");
    const Embedding tgt = src;

    BilingualDictionary train;
    for (int i = 0; i < 40; ++i) {
        train.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                 src.vocab[static_cast<std::size_t>(i)]});
    }
    BilingualDictionary test;
    for (int i = 40; i < 55; ++i) {
        test.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                src.vocab[static_cast<std::size_t>(i)]});
    }

    for (Retrieval mode : {Retrieval::NN, Retrieval::CSLS}) {
        const EvalResult result = eval_translation(src, tgt, train, test, mode);
        CHECK(result.metric == "precision@1");
        CHECK(result.score == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(result.evaluated == 15);
        CHECK(result.skipped_oov == 0);
    }
}

TEST_CASE("eval_translation recovers a rotated vocabulary") {
    std::mt19937_64 rng(90);
    const Embedding src = testutil::make_embedding(random_matrix(rng, 50, 6), "s");
    const Eigen::MatrixXd r =
        Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(rng, 6, 6)).householderQ();

    // The target vectors are rotated row-normalized source vectors, so the
    // fitted map sends each source word exactly onto its counterpart.
    Embedding tgt;
    tgt.vocab = testutil::make_vocab(50, "t");
    tgt.matrix = normalize_rows(src.matrix) * r;

    BilingualDictionary train;
    for (int i = 0; i < 35; ++i) {
        train.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                 tgt.vocab[static_cast<std::size_t>(i)]});
    }
    BilingualDictionary test;
    for (int i = 35; i < 50; ++i) {
        test.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                tgt.vocab[static_cast<std::size_t>(i)]});
    }
    for (Retrieval mode : {Retrieval::NN, Retrieval::CSLS}) {
        const EvalResult result = eval_translation(src, tgt, train, test, mode);
        CHECK(result.score == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(result.evaluated == 15);
    }
}

TEST_CASE("eval_translation counts unique sources and skips out-of-vocabulary ones") {
    std::mt19937_64 rng(91);
    const Embedding src = testutil::make_embedding(random_matrix(rng, 20, 4), "w");
    const Embedding tgt = src;
    BilingualDictionary train;
    for (int i = 0; i < 12; ++i) {
        train.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                 src.vocab[static_cast<std::size_t>(i)]});
    }
    BilingualDictionary test;
    test.entries.push_back({"w12", "w12"});
    test.entries.push_back({"w12", "w13"});   // same source twice: one unit
    test.entries.push_back({"w14", "w14"});
    test.entries.push_back({"ghost", "w15"});  // source out of vocabulary
    test.entries.push_back({"w16", "phantom"});  // all translations OOV

    const EvalResult result = eval_translation(src, tgt, train, test, Retrieval::NN);
    CHECK(result.evaluated == 2);    // w12 and w14
    CHECK(result.skipped_oov == 2);  // ghost and w16
    CHECK(result.score == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eval_translation accepts any listed translation as correct") {
    // Source s0 maps to both t9 (wrong vector) and t0 (its true image); the
    // rank-1 target being either listed translation counts as a hit.
    std::mt19937_64 rng(92);
    Eigen::MatrixXd vectors = random_matrix(rng, 12, 5);
    const Embedding src = testutil::make_embedding(vectors, "s");
    Embedding tgt;
    tgt.vocab = testutil::make_vocab(12, "t");
    tgt.matrix = vectors;

    BilingualDictionary train;
    for (int i = 2; i < 12; ++i) {
        train.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                 tgt.vocab[static_cast<std::size_t>(i)]});
    }
    BilingualDictionary test;
    test.entries.push_back({"s0", "t9"});
    test.entries.push_back({"s0", "t0"});
    test.entries.push_back({"s1", "t1"});
    const EvalResult result = eval_translation(src, tgt, train, test, Retrieval::NN);
    CHECK(result.evaluated == 2);
    CHECK(result.score == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eval_translation rejects empty or unusable dictionaries") {
    std::mt19937_64 rng(93);
    const Embedding src = testutil::make_embedding(random_matrix(rng, 10, 3), "w");
    const Embedding tgt = src;
    BilingualDictionary train;
    for (int i = 0; i < 6; ++i) {
        train.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                 src.vocab[static_cast<std::size_t>(i)]});
    }
    BilingualDictionary empty;
    CHECK_THROWS_AS(eval_translation(src, tgt, train, empty, Retrieval::NN), Error);
    CHECK_THROWS_AS(eval_translation(src, tgt, empty, empty, Retrieval::NN), Error);

    BilingualDictionary unusable;
    unusable.entries.push_back({"nope", "nada"});
    CHECK_THROWS_AS(eval_translation(src, tgt, train, unusable, Retrieval::NN), Error);
}

TEST_CASE("translation score is invariant to isotropic scaling") {
    std::mt19937_64 rng(94);
    const Embedding src = testutil::make_embedding(random_matrix(rng, 30, 5), "w");
    const Embedding tgt = src;
    BilingualDictionary train;
    for (int i = 0; i < 20; ++i) {
        train.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                 src.vocab[static_cast<std::size_t>(i)]});
    }
    BilingualDictionary test;
    for (int i = 20; i < 30; ++i) {
        test.entries.push_back({src.vocab[static_cast<std::size_t>(i)],
                                src.vocab[static_cast<std::size_t>(i)]});
    }
    const double base = eval_translation(src, tgt, train, test, Retrieval::CSLS).score;
    Embedding scaled = src;
    scaled.matrix *= 2.0;
    CHECK(eval_translation(scaled, tgt, train, test, Retrieval::CSLS).score == base);
}
