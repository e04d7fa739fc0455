#include "specshrink/postprocess.hpp"

#include <utility>

namespace specshrink {

Method parse_method(const std::string& name) {
    if (name == "none") return Method::None;
    if (name == "beta") return Method::Beta;
    if (name == "top-pc") return Method::TopPc;
    if (name == "ledoit-wolf") return Method::LedoitWolf;
    throw Error("unknown method '" + name +
                "' (expected none, beta, top-pc, or ledoit-wolf)");
}

std::string method_name(Method method) {
    switch (method) {
        case Method::None: return "none";
        case Method::Beta: return "beta";
        case Method::TopPc: return "top-pc";
        case Method::LedoitWolf: return "ledoit-wolf";
    }
    throw Error("method_name: invalid method");
}

Eigen::MatrixXd apply_method(const Eigen::MatrixXd& m, const MethodConfig& cfg,
                             ShrinkageReport* shrink_report,
                             LWResult* lw_result) {
    switch (cfg.method) {
        case Method::None:
            return m;
        case Method::Beta: {
            auto [out, report] = postprocess_beta(m, cfg.grid);
            if (shrink_report != nullptr) {
                *shrink_report = std::move(report);
            }
            return out;
        }
        case Method::TopPc:
            return remove_top_pcs(m, cfg.top_k);
        case Method::LedoitWolf: {
            auto [out, result] = ledoit_wolf(m);
            if (lw_result != nullptr) {
                *lw_result = std::move(result);
            }
            return out;
        }
    }
    throw Error("apply_method: invalid method");
}

Embedding apply_method(const Embedding& emb, const MethodConfig& cfg,
                       ShrinkageReport* shrink_report, LWResult* lw_result) {
    validate(emb);
    Embedding out;
    out.vocab = emb.vocab;
    out.matrix = apply_method(emb.matrix, cfg, shrink_report, lw_result);
    return out;
}

}  // namespace specshrink
