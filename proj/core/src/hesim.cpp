#include "dtnet/hesim.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "dtnet/errors.hpp"

namespace dtnet {

HeContext::HeContext(HEParams params) : params_(params) {
    if (params_.slots < 1) throw InputError("HeContext: slot count must be positive");
    if (params_.depth_budget < 0) throw InputError("HeContext: depth budget must be >= 0");
}

void HeContext::check_level(int level) const {
    if (level > params_.depth_budget) throw DepthExceeded(level, params_.depth_budget);
}

CipherVec HeContext::encrypt(std::span<const double> values) const {
    if (values.size() > params_.slots)
        throw InputError("encrypt: " + std::to_string(values.size()) + " values exceed " +
                         std::to_string(params_.slots) + " slots");
    CipherVec ct;
    ct.slots.assign(params_.slots, 0.0);
    std::copy(values.begin(), values.end(), ct.slots.begin());
    return ct;
}

std::vector<double> HeContext::decrypt(const CipherVec& ct) const { return ct.slots; }

std::vector<CipherVec> HeContext::encrypt_batch(const Matrix& X) const {
    if (X.rows() > params_.slots)
        throw InputError("encrypt_batch: batch of " + std::to_string(X.rows()) +
                         " points exceeds " + std::to_string(params_.slots) + " slots");
    std::vector<CipherVec> cts;
    cts.reserve(X.cols());
    std::vector<double> column(X.rows());
    for (std::size_t k = 0; k < X.cols(); ++k) {
        for (std::size_t j = 0; j < X.rows(); ++j) column[j] = X(j, k);
        cts.push_back(encrypt(column));
    }
    return cts;
}

Matrix HeContext::decrypt_scores(const std::vector<CipherVec>& cts, std::size_t batch_size) const {
    if (batch_size > params_.slots)
        throw InputError("decrypt_scores: batch_size exceeds slot count");
    Matrix out(batch_size, cts.size());
    for (std::size_t k = 0; k < cts.size(); ++k)
        for (std::size_t j = 0; j < batch_size; ++j) out(j, k) = cts[k].slots[j];
    return out;
}

CipherVec HeContext::encode_weight_ct(double w) const {
    if (!std::isfinite(w)) throw InputError("encode_weight: non-finite value");
    CipherVec ct;
    ct.slots.assign(params_.slots, w);
    return ct;
}

PlainVec HeContext::encode_weight_plain(double w) const {
    if (!std::isfinite(w)) throw InputError("encode_weight: non-finite value");
    return PlainVec{std::vector<double>(params_.slots, w)};
}

CipherVec HeContext::add(const CipherVec& a, const CipherVec& b) const {
    if (a.slots.size() != b.slots.size()) throw InputError("he add: slot count mismatch");
    CipherVec out;
    out.level = std::max(a.level, b.level);
    out.slots.resize(a.slots.size());
    for (std::size_t i = 0; i < a.slots.size(); ++i) out.slots[i] = a.slots[i] + b.slots[i];
    return out;
}

CipherVec HeContext::add(const CipherVec& a, const PlainVec& b) const {
    if (a.slots.size() != b.slots.size()) throw InputError("he add: slot count mismatch");
    CipherVec out;
    out.level = a.level;
    out.slots.resize(a.slots.size());
    for (std::size_t i = 0; i < a.slots.size(); ++i) out.slots[i] = a.slots[i] + b.slots[i];
    return out;
}

CipherVec HeContext::mul(const CipherVec& a, const CipherVec& b) const {
    if (a.slots.size() != b.slots.size()) throw InputError("he mul: slot count mismatch");
    int level = std::max(a.level, b.level) + 1;
    check_level(level);
    CipherVec out;
    out.level = level;
    out.slots.resize(a.slots.size());
    for (std::size_t i = 0; i < a.slots.size(); ++i) out.slots[i] = a.slots[i] * b.slots[i];
    return out;
}

CipherVec HeContext::mul_plain(const CipherVec& a, const PlainVec& p) const {
    if (a.slots.size() != p.slots.size()) throw InputError("he mul_plain: slot count mismatch");
    CipherVec out;
    out.level = a.level;
    out.slots.resize(a.slots.size());
    for (std::size_t i = 0; i < a.slots.size(); ++i) out.slots[i] = a.slots[i] * p.slots[i];
    return out;
}

CipherVec HeContext::mul_plain(const CipherVec& a, double scalar) const {
    if (!std::isfinite(scalar)) throw InputError("he mul_plain: non-finite scalar");
    CipherVec out;
    out.level = a.level;
    out.slots.resize(a.slots.size());
    for (std::size_t i = 0; i < a.slots.size(); ++i) out.slots[i] = a.slots[i] * scalar;
    return out;
}

CipherVec HeContext::dot_recursive(std::span<const CipherVec> weights,
                                   std::span<const CipherVec> inputs,
                                   int split_parallel_depth) const {
    if (weights.size() != inputs.size()) throw InputError("dot_recursive: length mismatch");
    if (weights.empty()) throw InputError("dot_recursive: empty operands");
    if (weights.size() == 1) return mul(weights[0], inputs[0]);
    std::size_t half = weights.size() / 2;
    auto lw = weights.first(half), rw = weights.subspan(half);
    auto lx = inputs.first(half), rx = inputs.subspan(half);
    if (split_parallel_depth > 0) {
        auto right = std::async(std::launch::async, [&] {
            return dot_recursive(rw, rx, split_parallel_depth - 1);
        });
        CipherVec left = dot_recursive(lw, lx, split_parallel_depth - 1);
        return add(left, right.get());
    }
    return add(dot_recursive(lw, lx, 0), dot_recursive(rw, rx, 0));
}

namespace {

// Balanced product over factors[lo, hi).
CipherVec balanced_product(const HeContext& ctx, const std::vector<CipherVec>& factors,
                           std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return factors[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return ctx.mul(balanced_product(ctx, factors, lo, mid), balanced_product(ctx, factors, mid, hi));
}

}  // namespace

CipherVec HeContext::poly_activation(const PolyActivation& a, const CipherVec& x,
                                     bool encrypted_coefficients) const {
    CipherVec acc;
    acc.slots.assign(x.slots.size(), a.coeffs.empty() ? 0.0 : a.coeffs[0]);
    acc.level = 0;
    if (encrypted_coefficients) {
        for (std::size_t k = 1; k < a.coeffs.size(); ++k) {
            if (a.coeffs[k] == 0.0) continue;
            std::vector<CipherVec> factors(k + 1, x);
            factors[0] = encode_weight_ct(a.coeffs[k]);
            acc = add(acc, balanced_product(*this, factors, 0, factors.size()));
        }
        return acc;
    }
    // plaintext coefficients scale shared powers x^k = x^(k/2) * x^(k-k/2)
    std::vector<CipherVec> powers(a.coeffs.size());
    for (std::size_t k = 1; k < a.coeffs.size(); ++k) {
        if (k == 1)
            powers[1] = x;
        else
            powers[k] = mul(powers[k / 2], powers[k - k / 2]);
        if (a.coeffs[k] != 0.0) acc = add(acc, mul_plain(powers[k], a.coeffs[k]));
    }
    return acc;
}

HeInferenceResult HeContext::infer(const DTNetModel& model, const Matrix& X,
                                   bool encrypt_weights) const {
    std::vector<CipherVec> activations = encrypt_batch(X);

    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const DenseLayer& layer = model.layers[l];
        const bool is_output = l + 1 == model.layers.size();
        if (layer.W.cols() != activations.size())
            throw InputError("he infer: layer fan-in mismatch");
        std::vector<CipherVec> next;
        next.reserve(layer.W.rows());
        for (std::size_t o = 0; o < layer.W.rows(); ++o) {
            CipherVec z;
            if (encrypt_weights) {
                std::vector<CipherVec> wrow;
                wrow.reserve(layer.W.cols());
                for (std::size_t j = 0; j < layer.W.cols(); ++j)
                    wrow.push_back(encode_weight_ct(layer.W(o, j)));
                z = dot_recursive(wrow, activations);
                z = add(z, encode_weight_ct(layer.b[o]));
            } else {
                z = mul_plain(activations[0], encode_weight_plain(layer.W(o, 0)));
                for (std::size_t j = 1; j < layer.W.cols(); ++j)
                    z = add(z, mul_plain(activations[j], encode_weight_plain(layer.W(o, j))));
                z = add(z, encode_weight_plain(layer.b[o]));
            }
            if (!is_output)
                z = poly_activation(model.arch.hidden[l].activation, z, encrypt_weights);
            next.push_back(std::move(z));
        }
        activations = std::move(next);
    }

    HeInferenceResult result;
    result.final_level = 0;
    for (const auto& ct : activations) result.final_level = std::max(result.final_level, ct.level);
    result.scores = decrypt_scores(activations, X.rows());
    result.labels.resize(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i)
        result.labels[i] = static_cast<int>(argmax(result.scores.row(i)));
    return result;
}

}  // namespace dtnet
