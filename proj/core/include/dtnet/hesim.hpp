#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtnet/activation.hpp"
#include "dtnet/matrix.hpp"
#include "dtnet/network.hpp"

namespace dtnet {

// Parameters of the simulated leveled scheme. Slot arithmetic is exact
// (binary64, no noise); the scheme is modeled purely as slotwise SIMD
// arithmetic plus multiplicative-level bookkeeping.
struct HEParams {
    std::size_t slots = 16384;
    int depth_budget = 10;  // Omega: max ciphertext-ciphertext depth
    int log2_ring = 16;     // informational; slots = m/4 when built from a ring

    static HEParams from_ring(int log2_ring, int depth_budget) {
        HEParams p;
        p.log2_ring = log2_ring;
        p.slots = static_cast<std::size_t>(1) << (log2_ring - 2);
        p.depth_budget = depth_budget;
        return p;
    }
};

// Simulated SIMD ciphertext: slot values plus consumed multiplicative levels.
struct CipherVec {
    std::vector<double> slots;
    int level = 0;
};

struct PlainVec {
    std::vector<double> slots;
};

struct DepthExceeded : std::runtime_error {
    int attempted_level;
    int budget;
    DepthExceeded(int attempted, int b)
        : std::runtime_error("multiplicative depth budget exceeded: level " +
                             std::to_string(attempted) + " > budget " + std::to_string(b)),
          attempted_level(attempted),
          budget(b) {}
};

struct HeInferenceResult {
    Matrix scores;            // points x classes
    std::vector<int> labels;  // argmax per point, lowest class on ties
    int final_level = 0;
};

// Evaluator for the simulated scheme. Ciphertext-ciphertext multiplication
// consumes one level and is rejected beyond the budget; additions and
// plaintext multiplications are free.
class HeContext {
  public:
    explicit HeContext(HEParams params);

    const HEParams& params() const { return params_; }

    // ---- encode / encrypt / decrypt ----

    // Pads or rejects to exactly `slots` values; fresh ciphertexts are level 0.
    CipherVec encrypt(std::span<const double> values) const;
    std::vector<double> decrypt(const CipherVec& ct) const;

    // Feature-major packing: ciphertext k carries feature k of point j in
    // slot j; unused slots are zero.
    std::vector<CipherVec> encrypt_batch(const Matrix& X) const;

    // First batch_size slots of each score ciphertext, as points x classes.
    Matrix decrypt_scores(const std::vector<CipherVec>& cts, std::size_t batch_size) const;

    // Vertical repetition: one scalar replicated across every slot.
    CipherVec encode_weight_ct(double w) const;
    PlainVec encode_weight_plain(double w) const;

    // ---- arithmetic ----

    CipherVec add(const CipherVec& a, const CipherVec& b) const;
    CipherVec add(const CipherVec& a, const PlainVec& b) const;
    CipherVec mul(const CipherVec& a, const CipherVec& b) const;
    CipherVec mul_plain(const CipherVec& a, const PlainVec& p) const;
    CipherVec mul_plain(const CipherVec& a, double scalar) const;

    // sum_k w_k * x_k by balanced binary recursion over index halves. The
    // reduction tree is a function of n alone, so results do not depend on
    // how many recursion levels actually fork (split_parallel_depth).
    CipherVec dot_recursive(std::span<const CipherVec> weights, std::span<const CipherVec> inputs,
                            int split_parallel_depth = 0) const;

    // Evaluates the polynomial on every slot. Each term c_k x^k is a balanced
    // product over the coefficient ciphertext and k copies of x, so the level
    // increase equals the activation's depth. With encrypted_coefficients off
    // the coefficients are plaintext scalings of shared powers instead.
    CipherVec poly_activation(const PolyActivation& a, const CipherVec& x,
                              bool encrypted_coefficients = true) const;

    // Full DTNet forward pass on one encrypted mini-batch (no softmax).
    HeInferenceResult infer(const DTNetModel& model, const Matrix& X,
                            bool encrypt_weights = true) const;

  private:
    void check_level(int level) const;
    HEParams params_;
};

}  // namespace dtnet
