#include "specshrink/align.hpp"
#include "specshrink/evaluate.hpp"
#include "specshrink/io.hpp"
#include "specshrink/postprocess.hpp"
#include "specshrink/shrinkage.hpp"
#include "specshrink/spectral.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace {

using namespace specshrink;

void configure_threads() {
    const char* env = std::getenv("SPECTRAL_SHRINK_THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 0) {
        throw Error("SPECTRAL_SHRINK_THREADS must be a non-negative integer");
    }
    Eigen::setNbThreads(static_cast<int>(value));  // 0 = automatic
}

struct MethodOpts {
    std::string method = "beta";
    int top_k = 2;
    BetaGrid grid;
};

void add_method_flags(CLI::App* cmd, MethodOpts& opts) {
    cmd->add_option("--method", opts.method,
                    "Post-processing method: none, beta, top-pc, ledoit-wolf")
        ->capture_default_str();
    cmd->add_option("--top-k", opts.top_k,
                    "Principal components removed by method top-pc")
        ->capture_default_str();
    cmd->add_option("--beta-start", opts.grid.start, "Beta grid start")
        ->capture_default_str();
    cmd->add_option("--beta-stop", opts.grid.stop, "Beta grid stop (exclusive)")
        ->capture_default_str();
    cmd->add_option("--beta-step", opts.grid.step, "Beta grid step")
        ->capture_default_str();
}

MethodConfig to_config(const MethodOpts& opts) {
    MethodConfig cfg;
    cfg.method = parse_method(opts.method);
    cfg.top_k = opts.top_k;
    cfg.grid = opts.grid;
    return cfg;
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

std::string result_line(const EvalResult& r, const std::string& extra = "") {
    std::string out = "result task=" + r.task;
    if (!extra.empty()) out += " " + extra;
    out += " metric=" + r.metric + " score=" + format_g9(r.score) +
           " evaluated=" + std::to_string(r.evaluated) +
           " skipped_oov=" + std::to_string(r.skipped_oov);
    return out;
}

void warn_degenerate(const ShrinkageReport& report) {
    if (report.degenerate_spectrum) {
        std::cerr << "warning: degenerate spectrum; beta_star fell back to "
                     "the grid maximum\n";
    }
}

std::string report_csv(const ShrinkageReport& report) {
    std::ostringstream oss;
    report.write_csv(oss);
    return oss.str();
}

std::string spectrum_csv(const Spectrum& spectrum) {
    std::string out = "rank,singular_value\n";
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        out += std::to_string(i + 1) + "," + format_g9(spectrum.values[i]) +
               "\n";
    }
    return out;
}

void run_postprocess(const std::string& input, const std::string& output,
                     const std::string& report_path, const MethodOpts& opts) {
    const Embedding emb = load_embedding(input);
    const MethodConfig cfg = to_config(opts);
    ShrinkageReport report;
    LWResult lw;
    const Embedding processed = apply_method(emb, cfg, &report, &lw);
    save_embedding(processed, output);
    if (cfg.method == Method::Beta) {
        const std::string path =
            report_path.empty() ? output + ".report.csv" : report_path;
        write_text_atomic(path, report_csv(report));
        warn_degenerate(report);
        std::cout << "beta_star = " << format_g9(report.beta_star) << "\n";
    } else if (cfg.method == Method::LedoitWolf) {
        if (lw.zero_input) {
            std::cerr << "warning: zero covariance; ledoit-wolf returned the "
                         "centered input unchanged\n";
        }
        std::cout << "lw_mixing = " << format_g9(lw.mixing) << "\n";
    }
    std::cout << "wrote " << output << "\n";
}

void run_diagnose(const std::string& input, const std::string& prefix,
                  const BetaGrid& grid) {
    const Embedding emb = load_embedding(input);
    const ThinSVD svd = thin_svd(center_rows(emb.matrix));
    const ShrinkageReport report = search_beta(svd.S, grid);
    write_text_atomic(prefix + ".grid.csv", report_csv(report));
    write_text_atomic(prefix + ".spectrum.csv", spectrum_csv(svd.S));
    warn_degenerate(report);
    std::cout << "beta_star = " << format_g9(report.beta_star) << "\n";
    std::cout << "wrote " << prefix << ".grid.csv and " << prefix
              << ".spectrum.csv\n";
}

void run_translate(const std::string& src_path, const std::string& tgt_path,
                   const std::string& train_path, const std::string& test_path,
                   const std::string& retrieval, int csls_k,
                   const MethodOpts& opts) {
    Embedding src = load_embedding(src_path);
    Embedding tgt = load_embedding(tgt_path);
    const BilingualDictionary train = load_dictionary(train_path);
    const BilingualDictionary test = load_dictionary(test_path);
    const MethodConfig cfg = to_config(opts);

    ShrinkageReport src_report, tgt_report;
    src = apply_method(src, cfg, &src_report);
    tgt = apply_method(tgt, cfg, &tgt_report);
    if (cfg.method == Method::Beta) {
        warn_degenerate(src_report);
        warn_degenerate(tgt_report);
        std::cout << "beta_star_src = " << format_g9(src_report.beta_star)
                  << "\n";
        std::cout << "beta_star_tgt = " << format_g9(tgt_report.beta_star)
                  << "\n";
    }

    std::vector<Retrieval> modes;
    if (retrieval.empty()) {
        modes = {Retrieval::NN, Retrieval::CSLS};
    } else {
        modes = {parse_retrieval(retrieval)};
    }
    for (const Retrieval mode : modes) {
        const EvalResult r =
            eval_translation(src, tgt, train, test, mode, csls_k);
        std::cout << result_line(r, "retrieval=" + retrieval_name(mode))
                  << "\n";
    }
}

// One manifest entry with its loaded payload; exactly one of the task
// members is populated, according to entry.category.
struct LoadedTask {
    ManifestEntry entry;
    SimilarityTask sim;
    AnalogyTask ana;
    CategorizationTask cat;
    STSTask sts;
};

void run_compare(const std::string& emb_path, const std::string& manifest_path,
                 const std::string& prefix, std::uint64_t seed,
                 const std::string& level_name, const std::string& format,
                 const MethodOpts& opts) {
    if (format != "csv" && format != "markdown") {
        throw Error("unknown format '" + format +
                    "' (expected csv or markdown)");
    }
    const STSLevel level = parse_sts_level(level_name);
    const Embedding emb = load_embedding(emb_path);

    std::vector<LoadedTask> tasks;
    for (const ManifestEntry& entry : load_manifest(manifest_path)) {
        LoadedTask task;
        task.entry = entry;
        if (entry.category == "similarity") {
            task.sim = load_similarity_task(entry.path, entry.name);
        } else if (entry.category == "analogy") {
            task.ana = load_analogy_task(entry.path, entry.name);
        } else if (entry.category == "concept") {
            task.cat = load_categorization_task(entry.path, entry.name);
        } else {
            task.sts = load_sts_task(entry.path, entry.name);
        }
        tasks.push_back(std::move(task));
    }

    ScoreTable table;
    for (const auto& task : tasks) table.col_names.push_back(task.entry.name);
    std::vector<std::string> avg_cols;
    for (const std::string cat :
         {"similarity", "analogy", "concept", "sts"}) {
        for (const auto& task : tasks) {
            if (task.entry.category == cat) {
                avg_cols.push_back("avg-" + cat);
                break;
            }
        }
    }
    avg_cols.push_back("avg-overall");
    for (const auto& col : avg_cols) table.col_names.push_back(col);

    double beta_star = std::numeric_limits<double>::quiet_NaN();
    const std::vector<Method> methods = {Method::None, Method::TopPc,
                                         Method::LedoitWolf, Method::Beta};
    for (const Method method : methods) {
        MethodConfig cfg = to_config(opts);
        cfg.method = method;

        std::vector<std::optional<double>> row;
        bool processed_ok = true;
        Embedding processed;
        ShrinkageReport report;
        try {
            processed = apply_method(emb, cfg, &report);
        } catch (const Error& err) {
            processed_ok = false;
            std::cerr << "warning: method '" << method_name(method)
                      << "' failed: " << err.what() << "\n";
        }
        if (method == Method::Beta && processed_ok) {
            warn_degenerate(report);
            beta_star = report.beta_star;
        }

        std::vector<EvalResult> results;
        std::map<std::string, std::string> category_of;
        for (const auto& task : tasks) {
            std::optional<double> cell;
            if (processed_ok) {
                try {
                    EvalResult r;
                    if (task.entry.category == "similarity") {
                        r = eval_similarity(processed, task.sim);
                    } else if (task.entry.category == "analogy") {
                        r = eval_analogy(processed, task.ana);
                    } else if (task.entry.category == "concept") {
                        r = eval_categorization(processed, task.cat, seed);
                    } else {
                        // STS applies the post-processor itself so that the
                        // word/sentence level distinction stays meaningful.
                        r = eval_sts(emb, task.sts, level, cfg);
                    }
                    cell = r.score;
                    results.push_back(r);
                    category_of[r.task] = task.entry.category;
                } catch (const Error& err) {
                    std::cerr << "warning: task '" << task.entry.name
                              << "' with method '" << method_name(method)
                              << "': " << err.what() << "\n";
                }
            }
            row.push_back(cell);
        }

        std::unordered_map<std::string, double> averages;
        if (!results.empty()) {
            const ScoreTable macro = macro_average(results, category_of);
            for (std::size_t j = 0; j < macro.col_names.size(); ++j) {
                const std::string key =
                    macro.col_names[j] == "overall"
                        ? "avg-overall"
                        : "avg-" + macro.col_names[j];
                averages[key] = *macro.cells[0][j];
            }
        }
        for (const auto& col : avg_cols) {
            auto it = averages.find(col);
            if (it == averages.end()) {
                row.push_back(std::nullopt);
            } else {
                row.push_back(it->second);
            }
        }
        table.add_row(method_name(method), std::move(row));
    }

    write_text_atomic(prefix + ".csv", table.to_csv());
    write_text_atomic(prefix + ".md", table.to_markdown());
    if (!std::isnan(beta_star)) {
        std::cout << "beta_star = " << format_g9(beta_star) << "\n";
    }
    std::cout << (format == "csv" ? table.to_csv() : table.to_markdown());
    std::cout << "wrote " << prefix << ".csv and " << prefix << ".md\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectrum shrinkage toolkit for word embeddings"};
    app.require_subcommand(1);

    // postprocess
    auto* post = app.add_subcommand(
        "postprocess", "Transform an embedding and write the result");
    std::string post_input, post_output, post_report;
    MethodOpts post_opts;
    post->add_option("input", post_input, "Input embedding (word2vec text)")
        ->required();
    post->add_option("--output", post_output, "Output embedding path")
        ->required();
    post->add_option("--report", post_report,
                     "Beta-grid report CSV path (default <output>.report.csv)");
    add_method_flags(post, post_opts);
    post->callback(
        [&] { run_postprocess(post_input, post_output, post_report, post_opts); });

    // diagnose
    auto* diag = app.add_subcommand(
        "diagnose", "Write beta-grid and spectrum CSVs for plotting");
    std::string diag_input, diag_prefix;
    MethodOpts diag_opts;
    diag->add_option("input", diag_input, "Input embedding")->required();
    diag->add_option("--output", diag_prefix, "Output path prefix")->required();
    diag->add_option("--beta-start", diag_opts.grid.start, "Beta grid start")
        ->capture_default_str();
    diag->add_option("--beta-stop", diag_opts.grid.stop,
                     "Beta grid stop (exclusive)")
        ->capture_default_str();
    diag->add_option("--beta-step", diag_opts.grid.step, "Beta grid step")
        ->capture_default_str();
    diag->callback([&] { run_diagnose(diag_input, diag_prefix, diag_opts.grid); });

    // eval-sim
    auto* esim = app.add_subcommand(
        "eval-sim", "Word similarity (Spearman of cosine vs human scores)");
    std::string esim_emb, esim_task, esim_name;
    esim->add_option("embedding", esim_emb, "Embedding file")->required();
    esim->add_option("task", esim_task, "Similarity task file")->required();
    esim->add_option("--name", esim_name, "Task name (default: file stem)");
    esim->callback([&] {
        const Embedding emb = load_embedding(esim_emb);
        const std::string name =
            esim_name.empty() ? stem_of(esim_task) : esim_name;
        std::cout << result_line(eval_similarity(
                         emb, load_similarity_task(esim_task, name)))
                  << "\n";
    });

    // eval-analogy
    auto* eana = app.add_subcommand("eval-analogy",
                                    "Word analogy (3CosAdd accuracy)");
    std::string eana_emb, eana_task, eana_name;
    eana->add_option("embedding", eana_emb, "Embedding file")->required();
    eana->add_option("task", eana_task, "Analogy task file")->required();
    eana->add_option("--name", eana_name, "Task name (default: file stem)");
    eana->callback([&] {
        const Embedding emb = load_embedding(eana_emb);
        const std::string name =
            eana_name.empty() ? stem_of(eana_task) : eana_name;
        std::cout << result_line(
                         eval_analogy(emb, load_analogy_task(eana_task, name)))
                  << "\n";
    });

    // eval-cat
    auto* ecat = app.add_subcommand(
        "eval-cat", "Concept categorization (k-means purity)");
    std::string ecat_emb, ecat_task, ecat_name;
    std::uint64_t ecat_seed = 42;
    ecat->add_option("embedding", ecat_emb, "Embedding file")->required();
    ecat->add_option("task", ecat_task, "Categorization task file")->required();
    ecat->add_option("--name", ecat_name, "Task name (default: file stem)");
    ecat->add_option("--seed", ecat_seed, "Clustering seed")
        ->capture_default_str();
    ecat->callback([&] {
        const Embedding emb = load_embedding(ecat_emb);
        const std::string name =
            ecat_name.empty() ? stem_of(ecat_task) : ecat_name;
        std::cout << result_line(eval_categorization(
                         emb, load_categorization_task(ecat_task, name),
                         ecat_seed))
                  << "\n";
    });

    // eval-sts
    auto* ests = app.add_subcommand(
        "eval-sts", "Semantic textual similarity (Pearson of cosines)");
    std::string ests_emb, ests_task, ests_name, ests_level = "word";
    MethodOpts ests_opts;
    ests_opts.method = "none";
    ests->add_option("embedding", ests_emb, "Embedding file")->required();
    ests->add_option("task", ests_task, "STS task file")->required();
    ests->add_option("--name", ests_name, "Task name (default: file stem)");
    ests->add_option("--level", ests_level,
                     "Apply the method at word or sentence level")
        ->capture_default_str();
    add_method_flags(ests, ests_opts);
    ests->callback([&] {
        const Embedding emb = load_embedding(ests_emb);
        const std::string name =
            ests_name.empty() ? stem_of(ests_task) : ests_name;
        std::cout << result_line(eval_sts(emb, load_sts_task(ests_task, name),
                                          parse_sts_level(ests_level),
                                          to_config(ests_opts)))
                  << "\n";
    });

    // translate
    auto* trans = app.add_subcommand(
        "translate", "Supervised word translation (Procrustes, precision@1)");
    std::string trans_src, trans_tgt, trans_train, trans_test, trans_retrieval;
    int trans_csls_k = 10;
    MethodOpts trans_opts;
    trans_opts.method = "none";
    trans->add_option("source", trans_src, "Source embedding")->required();
    trans->add_option("target", trans_tgt, "Target embedding")->required();
    trans->add_option("train", trans_train, "Training dictionary")->required();
    trans->add_option("test", trans_test, "Test dictionary")->required();
    trans->add_option("--retrieval", trans_retrieval,
                      "Retrieval mode nn or csls (default: both)");
    trans->add_option("--csls-k", trans_csls_k, "CSLS neighborhood size")
        ->capture_default_str();
    add_method_flags(trans, trans_opts);
    trans->callback([&] {
        run_translate(trans_src, trans_tgt, trans_train, trans_test,
                      trans_retrieval, trans_csls_k, trans_opts);
    });

    // compare
    auto* comp = app.add_subcommand(
        "compare", "Run every method over a task manifest and tabulate");
    std::string comp_emb, comp_manifest, comp_prefix;
    std::string comp_level = "word", comp_format = "markdown";
    std::uint64_t comp_seed = 42;
    MethodOpts comp_opts;
    comp->add_option("embedding", comp_emb, "Embedding file")->required();
    comp->add_option("manifest", comp_manifest, "Task manifest")->required();
    comp->add_option("--output", comp_prefix, "Output path prefix")
        ->required();
    comp->add_option("--seed", comp_seed, "Clustering seed")
        ->capture_default_str();
    comp->add_option("--level", comp_level, "STS level: word or sentence")
        ->capture_default_str();
    comp->add_option("--format", comp_format, "Stdout format: csv or markdown")
        ->capture_default_str();
    comp->add_option("--top-k", comp_opts.top_k,
                     "Principal components removed by top-pc")
        ->capture_default_str();
    comp->add_option("--beta-start", comp_opts.grid.start, "Beta grid start")
        ->capture_default_str();
    comp->add_option("--beta-stop", comp_opts.grid.stop,
                     "Beta grid stop (exclusive)")
        ->capture_default_str();
    comp->add_option("--beta-step", comp_opts.grid.step, "Beta grid step")
        ->capture_default_str();
    comp->callback([&] {
        run_compare(comp_emb, comp_manifest, comp_prefix, comp_seed,
                    comp_level, comp_format, comp_opts);
    });

    try {
        configure_threads();
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
