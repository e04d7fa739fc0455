#include "specshrink/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace specshrink {

namespace {

std::string loc(const std::string& path, int line_no) {
    return path + ":" + std::to_string(line_no) + ": ";
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
    for (char c : line) {
        if (c != ' ' && c != '\t') return false;
    }
    return true;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && s[b] == ' ') ++b;
    while (e > b && s[e - 1] == ' ') --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool parse_double(const std::string& token, double* out) {
    if (token.empty()) return false;
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) return false;
    *out = value;
    return true;
}

bool is_uint(const std::string& token) {
    if (token.empty()) return false;
    for (char c : token) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

// Applies fn(line, line_no) to every record line, skipping blanks and
// '#'-comments. Used by every dataset loader, not by the embedding loader
// (embedding files have no comment syntax).
template <typename Fn>
void for_each_record(const std::string& path, const char* kind, Fn&& fn) {
    std::ifstream in(path);
    if (!in) {
        throw Error(std::string("cannot open ") + kind + " file '" + path +
                    "'");
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line) || line[0] == '#') continue;
        fn(line, line_no);
    }
}

}  // namespace

std::string format_g9(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp + "'");
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw Error("write failed for '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

Embedding load_embedding(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open embedding file '" + path + "'");

    std::string line;
    int line_no = 0;
    int blank_line_no = 0;
    bool first = true;
    long long header_n = -1, header_d = -1;
    Eigen::Index dim = -1;
    std::vector<std::string> vocab;
    std::vector<double> data;
    std::unordered_map<std::string, int> first_seen;  // word -> line number

    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.empty()) {
            // Tolerated only as trailing blank lines.
            if (blank_line_no == 0) blank_line_no = line_no;
            continue;
        }
        if (blank_line_no != 0) {
            throw Error(loc(path, blank_line_no) +
                        "blank line inside embedding file");
        }
        if (first) {
            first = false;
            if (tokens.size() == 2 && is_uint(tokens[0]) && is_uint(tokens[1])) {
                header_n = std::stoll(tokens[0]);
                header_d = std::stoll(tokens[1]);
                if (header_n < 1 || header_d < 1) {
                    throw Error(loc(path, line_no) +
                                "header declares an empty embedding");
                }
                dim = static_cast<Eigen::Index>(header_d);
                if (header_n * header_d <= (1LL << 30)) {
                    data.reserve(static_cast<std::size_t>(header_n * header_d));
                    vocab.reserve(static_cast<std::size_t>(header_n));
                }
                continue;
            }
        }
        if (header_n >= 0 &&
            static_cast<long long>(vocab.size()) == header_n) {
            throw Error(loc(path, line_no) + "header declares " +
                        std::to_string(header_n) +
                        " rows but the file has more");
        }
        const auto values = static_cast<Eigen::Index>(tokens.size()) - 1;
        if (values < 1) {
            throw Error(loc(path, line_no) + "row '" + tokens[0] +
                        "' has no vector values");
        }
        if (dim < 0) {
            dim = values;
        } else if (values != dim) {
            throw Error(loc(path, line_no) + "row '" + tokens[0] + "' has " +
                        std::to_string(values) + " values, expected " +
                        std::to_string(dim));
        }
        const auto [it, inserted] =
            first_seen.emplace(tokens[0], line_no);
        if (!inserted) {
            throw Error(loc(path, line_no) + "duplicate word '" + tokens[0] +
                        "' (first at line " + std::to_string(it->second) +
                        ")");
        }
        for (std::size_t j = 1; j < tokens.size(); ++j) {
            double value = 0.0;
            if (!parse_double(tokens[j], &value)) {
                throw Error(loc(path, line_no) + "malformed number '" +
                            tokens[j] + "'");
            }
            if (!std::isfinite(value)) {
                throw Error(loc(path, line_no) + "non-finite value '" +
                            tokens[j] + "'");
            }
            data.push_back(value);
        }
        vocab.push_back(tokens[0]);
    }
    if (vocab.empty()) {
        throw Error("embedding file '" + path + "' has no rows");
    }
    if (header_n >= 0 && static_cast<long long>(vocab.size()) != header_n) {
        throw Error("embedding file '" + path + "': header declares " +
                    std::to_string(header_n) + " rows but the file has " +
                    std::to_string(vocab.size()));
    }

    Embedding emb;
    emb.matrix = Eigen::Map<const Eigen::Matrix<
        double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        data.data(), static_cast<Eigen::Index>(vocab.size()), dim);
    emb.vocab = std::move(vocab);
    validate(emb);
    return emb;
}

void save_embedding(const Embedding& emb, const std::string& path) {
    validate(emb);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp + "'");
        out << emb.size() << ' ' << emb.dim() << '\n';
        char buf[64];
        std::string row;
        for (Eigen::Index i = 0; i < emb.size(); ++i) {
            row.clear();
            row += emb.vocab[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < emb.dim(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.9g", emb.matrix(i, j));
                row += ' ';
                row += buf;
            }
            row += '\n';
            out.write(row.data(), static_cast<std::streamsize>(row.size()));
        }
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw Error("write failed for '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

SimilarityTask load_similarity_task(const std::string& path,
                                    const std::string& name) {
    SimilarityTask task;
    task.name = name;
    for_each_record(path, "similarity task", [&](const std::string& line,
                                                 int line_no) {
        const auto fields = split_tabs(line);
        if (fields.size() != 3) {
            throw Error(loc(path, line_no) +
                        "expected word1<TAB>word2<TAB>score");
        }
        SimilarityPair pair;
        pair.word1 = trim(fields[0]);
        pair.word2 = trim(fields[1]);
        if (pair.word1.empty() || pair.word2.empty()) {
            throw Error(loc(path, line_no) + "empty word");
        }
        if (!parse_double(trim(fields[2]), &pair.human_score) ||
            !std::isfinite(pair.human_score)) {
            throw Error(loc(path, line_no) + "invalid score '" + fields[2] +
                        "'");
        }
        task.pairs.push_back(std::move(pair));
    });
    if (task.pairs.size() < 2) {
        throw Error("similarity task file '" + path +
                    "' needs at least two pairs");
    }
    return task;
}

AnalogyTask load_analogy_task(const std::string& path,
                              const std::string& name) {
    AnalogyTask task;
    task.name = name;
    for_each_record(
        path, "analogy task", [&](const std::string& line, int line_no) {
            if (line[0] == ':') return;  // section marker
            const auto tokens = split_ws(line);
            if (tokens.size() != 4) {
                throw Error(loc(path, line_no) +
                            "expected four words 'a a* b b*'");
            }
            task.questions.push_back({tokens[0], tokens[1], tokens[2],
                                      tokens[3]});
        });
    if (task.questions.empty()) {
        throw Error("analogy task file '" + path + "' has no questions");
    }
    return task;
}

CategorizationTask load_categorization_task(const std::string& path,
                                            const std::string& name) {
    CategorizationTask task;
    task.name = name;
    for_each_record(path, "categorization task", [&](const std::string& line,
                                                     int line_no) {
        const auto fields = split_tabs(line);
        if (fields.size() != 2) {
            throw Error(loc(path, line_no) + "expected word<TAB>label");
        }
        CategorizationItem item;
        item.word = trim(fields[0]);
        item.category = trim(fields[1]);
        if (item.word.empty() || item.category.empty()) {
            throw Error(loc(path, line_no) + "empty field");
        }
        task.items.push_back(std::move(item));
    });
    if (task.items.empty()) {
        throw Error("categorization task file '" + path + "' has no items");
    }
    if (task.distinct_categories() < 2) {
        throw Error("categorization task file '" + path +
                    "' needs at least two categories");
    }
    return task;
}

STSTask load_sts_task(const std::string& path, const std::string& name) {
    STSTask task;
    task.name = name;
    for_each_record(
        path, "sts task", [&](const std::string& line, int line_no) {
            const auto fields = split_tabs(line);
            if (fields.size() != 3) {
                throw Error(loc(path, line_no) +
                            "expected sentence1<TAB>sentence2<TAB>score");
            }
            STSItem item;
            item.sentence1 = tokenize_sentence(fields[0]);
            item.sentence2 = tokenize_sentence(fields[1]);
            if (!parse_double(trim(fields[2]), &item.human_score) ||
                !std::isfinite(item.human_score)) {
                throw Error(loc(path, line_no) + "invalid score '" +
                            fields[2] + "'");
            }
            task.items.push_back(std::move(item));
        });
    if (task.items.size() < 2) {
        throw Error("sts task file '" + path + "' needs at least two items");
    }
    return task;
}

BilingualDictionary load_dictionary(const std::string& path) {
    BilingualDictionary dict;
    for_each_record(
        path, "dictionary", [&](const std::string& line, int line_no) {
            const auto tokens = split_ws(line);
            if (tokens.size() != 2) {
                throw Error(loc(path, line_no) +
                            "expected 'source target' word pair");
            }
            dict.entries.push_back({tokens[0], tokens[1]});
        });
    if (dict.entries.empty()) {
        throw Error("dictionary file '" + path + "' is empty");
    }
    return dict;
}

std::vector<std::string> tokenize_sentence(const std::string& text) {
    std::vector<std::string> tokens;
    for (const auto& raw : split_ws(text)) {
        std::string t;
        t.reserve(raw.size());
        for (char c : raw) {
            t += static_cast<char>(
                std::tolower(static_cast<unsigned char>(c)));
        }
        std::size_t b = 0, e = t.size();
        while (b < e && std::ispunct(static_cast<unsigned char>(t[b]))) ++b;
        while (e > b && std::ispunct(static_cast<unsigned char>(t[e - 1]))) {
            --e;
        }
        if (e > b) tokens.push_back(t.substr(b, e - b));
    }
    return tokens;
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    static const std::unordered_set<std::string> known = {
        "similarity", "analogy", "concept", "sts"};
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    std::vector<ManifestEntry> entries;
    std::unordered_set<std::string> names;
    for_each_record(
        path, "manifest", [&](const std::string& line, int line_no) {
            const auto fields = split_tabs(line);
            if (fields.size() != 3) {
                throw Error(loc(path, line_no) +
                            "expected category<TAB>name<TAB>path");
            }
            ManifestEntry entry;
            entry.category = trim(fields[0]);
            entry.name = trim(fields[1]);
            const std::string rel = trim(fields[2]);
            if (known.count(entry.category) == 0) {
                throw Error(loc(path, line_no) + "unknown category '" +
                            entry.category + "'");
            }
            if (entry.name.empty() || rel.empty()) {
                throw Error(loc(path, line_no) + "empty field");
            }
            if (!names.insert(entry.name).second) {
                throw Error(loc(path, line_no) + "duplicate task name '" +
                            entry.name + "'");
            }
            entry.path = (base / rel).string();
            entries.push_back(std::move(entry));
        });
    if (entries.empty()) {
        throw Error("manifest '" + path + "' lists no tasks");
    }
    return entries;
}

}  // namespace specshrink
