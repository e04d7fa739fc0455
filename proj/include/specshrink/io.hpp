#pragma once

#include "specshrink/align.hpp"
#include "specshrink/evaluate.hpp"
#include "specshrink/types.hpp"

#include <string>
#include <vector>

namespace specshrink {

// Shortest-practical decimal rendering at 9 significant digits (%.9g); used
// for every number the toolkit writes.
std::string format_g9(double value);

// Writes content to path via a temporary file in the same directory followed
// by an atomic rename.
void write_text_atomic(const std::string& path, const std::string& content);

// word2vec text format: an optional "n d" header line (detected when the
// first line is exactly two non-negative integers), then one
// "word v1 ... vd" line per word. Errors carry path and line number.
Embedding load_embedding(const std::string& path);

// Streams "n d" header plus one row per word at 9 significant digits,
// write-then-rename. Memory use stays bounded by one row.
void save_embedding(const Embedding& emb, const std::string& path);

// Dataset loaders. All files are UTF-8, one record per line; blank lines and
// lines starting with '#' are skipped. Errors carry path and line number.
//   similarity:     word1<TAB>word2<TAB>score
//   analogy:        ": section-name" starts a section; else "a a* b b*"
//   categorization: word<TAB>label
//   sts:            sentence1<TAB>sentence2<TAB>score
//   dictionary:     source<SPACE>target
SimilarityTask load_similarity_task(const std::string& path,
                                    const std::string& name);
AnalogyTask load_analogy_task(const std::string& path, const std::string& name);
CategorizationTask load_categorization_task(const std::string& path,
                                            const std::string& name);
STSTask load_sts_task(const std::string& path, const std::string& name);
BilingualDictionary load_dictionary(const std::string& path);

// STS preprocessing: lowercase, split on whitespace, strip surrounding ASCII
// punctuation per token, drop tokens that end up empty.
std::vector<std::string> tokenize_sentence(const std::string& text);

struct ManifestEntry {
    std::string category;  // similarity | analogy | concept | sts
    std::string name;
    std::string path;  // resolved relative to the manifest's directory
};

// Manifest format: category<TAB>name<TAB>path per line, comments/blanks as
// above. Task names must be unique.
std::vector<ManifestEntry> load_manifest(const std::string& path);

}  // namespace specshrink
