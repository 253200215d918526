#include "trisearch/core/types.hpp"

#include <cmath>

namespace trisearch {

std::string_view schema_key(Schema s) {
    switch (s) {
    case Schema::query_code:
        return "qc";
    case Schema::query_comment:
        return "qm";
    case Schema::code_code:
        return "cg";
    }
    return "qc";
}

Schema schema_from_key(std::string_view key) {
    if (key == "qc")
        return Schema::query_code;
    if (key == "qm")
        return Schema::query_comment;
    if (key == "cg")
        return Schema::code_code;
    throw ParameterError("unknown schema key: " + std::string(key));
}

EmbeddingVector::EmbeddingVector(std::vector<float> values, bool normalized)
    : values_(std::move(values)), normalized_(normalized) {
    if (values_.empty())
        throw ParameterError("embedding vector must have positive dimension");
    for (float v : values_) {
        if (!std::isfinite(v))
            throw ParameterError("embedding vector contains a non-finite entry");
    }
    if (normalized_ && std::fabs(l2_norm() - 1.0) >= 1e-6)
        throw ParameterError("embedding vector flagged normalized but |v| != 1");
}

double EmbeddingVector::l2_norm() const noexcept {
    double sum = 0.0;
    for (float v : values_)
        sum += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(sum);
}

double SchemaScores::get(Schema s) const noexcept {
    switch (s) {
    case Schema::query_code:
        return qc;
    case Schema::query_comment:
        return qm;
    case Schema::code_code:
        return cg;
    }
    return qc;
}

std::string_view weight_origin_name(WeightOrigin o) {
    switch (o) {
    case WeightOrigin::defaults:
        return "default";
    case WeightOrigin::calibrated:
        return "calibrated";
    case WeightOrigin::manual:
        return "manual";
    }
    return "manual";
}

WeightOrigin weight_origin_from_name(std::string_view name) {
    if (name == "default")
        return WeightOrigin::defaults;
    if (name == "calibrated")
        return WeightOrigin::calibrated;
    if (name == "manual")
        return WeightOrigin::manual;
    throw ParameterError("unknown weight origin: " + std::string(name));
}

FusionWeights::FusionWeights(double alpha, double beta, double gamma, WeightOrigin origin)
    : alpha_(alpha), beta_(beta), gamma_(gamma), origin_(origin) {
    auto in_unit = [](double w) { return w >= 0.0 && w <= 1.0; };
    if (!in_unit(alpha_) || !in_unit(beta_) || !in_unit(gamma_))
        throw ParameterError("fusion weights must lie in [0, 1]");
    if (std::fabs(alpha_ + beta_ + gamma_ - 1.0) >= 1e-9)
        throw ParameterError("fusion weights must sum to 1");
}

FusionWeights FusionWeights::defaults() {
    return FusionWeights(0.65, 0.25, 0.10, WeightOrigin::defaults);
}

FusionWeights FusionWeights::unit(Schema s) {
    switch (s) {
    case Schema::query_code:
        return FusionWeights(1.0, 0.0, 0.0);
    case Schema::query_comment:
        return FusionWeights(0.0, 1.0, 0.0);
    case Schema::code_code:
        return FusionWeights(0.0, 0.0, 1.0);
    }
    return FusionWeights(1.0, 0.0, 0.0);
}

double FusionWeights::weight(Schema s) const noexcept {
    switch (s) {
    case Schema::query_code:
        return alpha_;
    case Schema::query_comment:
        return beta_;
    case Schema::code_code:
        return gamma_;
    }
    return alpha_;
}

} // namespace trisearch
