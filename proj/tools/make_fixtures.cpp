// Regenerates the bundled toy fixtures deterministically. The random stream
// is a fixed-seed mt19937_64 with a hand-rolled Box-Muller transform so the
// bytes do not depend on the standard library's distribution internals.

#include "specshrink/io.hpp"
#include "specshrink/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace {

using specshrink::Embedding;

constexpr std::uint64_t kSeed = 745237;
constexpr int kWords = 1000;
constexpr int kDim = 50;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal(std::mt19937_64& rng) {
    // Box-Muller; u1 is kept away from zero so the log stays finite.
    const double u1 =
        (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

Eigen::VectorXd normal_vector(std::mt19937_64& rng, int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = normal(rng);
    return v;
}

std::string word_name(int i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "w%03d", i);
    return buf;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b) / (a.norm() * b.norm());
}

std::string upper(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::toupper(c));
    return out;
}

Eigen::VectorXd mean_of(const Embedding& emb, const std::vector<int>& rows) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(emb.dim());
    for (int r : rows) sum += emb.matrix.row(r).transpose();
    return sum / static_cast<double>(rows.size());
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(kSeed);

    // --- embedding: decaying column scales, a planted common mean, and two
    // structured blocks (analogy offsets at rows 800..819, three category
    // blobs at rows 900..929).
    Embedding emb;
    emb.matrix.resize(kWords, kDim);
    for (int i = 0; i < kWords; ++i) {
        for (int j = 0; j < kDim; ++j) emb.matrix(i, j) = normal(rng);
    }
    Eigen::VectorXd scale(kDim);
    for (int j = 0; j < kDim; ++j) {
        scale[j] = std::exp(-2.5 * j / (kDim - 1) + 0.2 * normal(rng));
    }
    std::sort(scale.data(), scale.data() + kDim, std::greater<>());
    emb.matrix = emb.matrix * scale.asDiagonal();
    const Eigen::VectorXd mean_shift = 0.5 * normal_vector(rng, kDim);
    emb.matrix.rowwise() += mean_shift.transpose();

    const Eigen::VectorXd offset =
        3.0 * normal_vector(rng, kDim).normalized();
    for (int pair = 0; pair < 10; ++pair) {
        const Eigen::VectorXd base = 3.0 * normal_vector(rng, kDim).normalized();
        emb.matrix.row(800 + 2 * pair) =
            (base + 0.1 * normal_vector(rng, kDim)).transpose();
        emb.matrix.row(801 + 2 * pair) =
            (base + offset + 0.1 * normal_vector(rng, kDim)).transpose();
    }

    for (int cluster = 0; cluster < 3; ++cluster) {
        const Eigen::VectorXd center =
            8.0 * normal_vector(rng, kDim).normalized();
        for (int m = 0; m < 10; ++m) {
            emb.matrix.row(900 + 10 * cluster + m) =
                (center + 0.5 * normal_vector(rng, kDim)).transpose();
        }
    }

    for (int i = 0; i < kWords; ++i) emb.vocab.push_back(word_name(i));
    specshrink::save_embedding(emb, dir + "/embedding_toy.txt");

    // --- similarity: 11 random in-vocabulary pairs with rounded
    // cosine-derived gold scores, plus one out-of-vocabulary pair.
    {
        std::string out = "# word1<TAB>word2<TAB>score\n";
        for (int p = 0; p < 11; ++p) {
            const int a = static_cast<int>(rng() % 800);
            int b = static_cast<int>(rng() % 800);
            if (b == a) b = (b + 1) % 800;
            const double cos =
                cosine(emb.matrix.row(a).transpose(),
                       emb.matrix.row(b).transpose());
            const double gold = std::round((cos + 1.0) * 500.0) / 100.0;
            out += word_name(a) + "\t" + word_name(b) + "\t" +
                   specshrink::format_g9(gold) + "\n";
        }
        out += "oovword\tw123\t5.0\n";
        specshrink::write_text_atomic(dir + "/similarity_toy.tsv", out);
    }

    // --- analogy: every ordered pair among the first six offset pairs, one
    // section header, one out-of-vocabulary question.
    {
        std::string out = ": toy-relation\n";
        for (int j = 0; j < 6; ++j) {
            for (int k = 0; k < 6; ++k) {
                if (j == k) continue;
                out += word_name(800 + 2 * j) + " " + word_name(801 + 2 * j) +
                       " " + word_name(800 + 2 * k) + " " +
                       word_name(801 + 2 * k) + "\n";
            }
        }
        out += "oovword " + word_name(801) + " " + word_name(802) + " " +
               word_name(803) + "\n";
        specshrink::write_text_atomic(dir + "/analogy_toy.txt", out);
    }

    // --- categorization: the three blobs, one out-of-vocabulary item.
    {
        std::string out = "# word<TAB>label\n";
        for (int cluster = 0; cluster < 3; ++cluster) {
            for (int m = 0; m < 10; ++m) {
                out += word_name(900 + 10 * cluster + m) + "\tcat" +
                       std::to_string(cluster) + "\n";
            }
        }
        out += "zzznotinvocab\tcat0\n";
        specshrink::write_text_atomic(dir + "/categorization_toy.tsv", out);
    }

    // --- sts: gold equals the cosine of raw averaged vectors, so the
    // untransformed word-level run correlates perfectly. Decorations
    // (punctuation, case) disappear under the loader's tokenizer.
    {
        std::string out = "# sentence1<TAB>sentence2<TAB>score\n";
        for (int p = 0; p < 8; ++p) {
            std::vector<int> s1_rows, s2_rows;
            std::vector<std::string> s1_tokens, s2_tokens;
            for (int t = 0; t < 4; ++t) {
                const int r1 = static_cast<int>(rng() % 200);
                const int r2 = static_cast<int>(rng() % 200);
                s1_rows.push_back(r1);
                s2_rows.push_back(r2);
                s1_tokens.push_back(word_name(r1));
                s2_tokens.push_back(word_name(r2));
            }
            const double gold = cosine(mean_of(emb, s1_rows),
                                       mean_of(emb, s2_rows));
            if (p == 0) s1_tokens[0] += ",";
            if (p == 1) s2_tokens[1] = upper(s2_tokens[1]);
            std::string s1, s2;
            for (const auto& t : s1_tokens) s1 += (s1.empty() ? "" : " ") + t;
            for (const auto& t : s2_tokens) s2 += (s2.empty() ? "" : " ") + t;
            out += s1 + "\t" + s2 + "\t" + specshrink::format_g9(gold) + "\n";
        }
        out += "zzz qqq\tw001 w002\t0.5\n";
        specshrink::write_text_atomic(dir + "/sts_toy.tsv", out);
    }

    // --- dictionaries: identity language. Train on w000..w299, test on
    // w300..w349 plus one out-of-vocabulary source and one dropped target.
    {
        std::string train, test;
        for (int i = 0; i < 300; ++i) {
            train += word_name(i) + " " + word_name(i) + "\n";
        }
        for (int i = 300; i < 350; ++i) {
            test += word_name(i) + " " + word_name(i) + "\n";
        }
        test += "oovsource oovtarget\n";
        test += word_name(300) + " notaword\n";
        specshrink::write_text_atomic(dir + "/dict_train_toy.txt", train);
        specshrink::write_text_atomic(dir + "/dict_test_toy.txt", test);
    }

    specshrink::write_text_atomic(
        dir + "/manifest_toy.tsv",
        "similarity\ttoy-similarity\tsimilarity_toy.tsv\n"
        "analogy\ttoy-analogy\tanalogy_toy.txt\n"
        "concept\ttoy-concept\tcategorization_toy.tsv\n");

    std::cout << "wrote fixtures to " << dir << "\n";
    return 0;
}
