#pragma once

#include "specshrink/baselines.hpp"
#include "specshrink/shrinkage.hpp"
#include "specshrink/types.hpp"

#include <string>

namespace specshrink {

enum class Method {
    None,        // pass the vectors through untouched
    Beta,        // geodesic spectrum shrinkage with the selected exponent
    TopPc,       // center, then drop the projection onto the top components
    LedoitWolf,  // linear covariance shrinkage toward the isotropic target
};

struct MethodConfig {
    Method method = Method::Beta;
    int top_k = 2;   // only used by Method::TopPc
    BetaGrid grid;   // only used by Method::Beta
};

// Accepts "none", "beta", "top-pc", "ledoit-wolf"; throws Error otherwise.
Method parse_method(const std::string& name);
std::string method_name(Method method);

// Runs the configured post-processing on the raw matrix. Method::None copies
// the input (no centering); every other method centers internally. Optional
// out-params receive the diagnostics of the method that produced them and are
// left untouched by the others.
Eigen::MatrixXd apply_method(const Eigen::MatrixXd& m, const MethodConfig& cfg,
                             ShrinkageReport* shrink_report = nullptr,
                             LWResult* lw_result = nullptr);
Embedding apply_method(const Embedding& emb, const MethodConfig& cfg,
                       ShrinkageReport* shrink_report = nullptr,
                       LWResult* lw_result = nullptr);

}  // namespace specshrink
