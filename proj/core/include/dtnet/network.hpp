#pragma once

#include <cstdint>
#include <vector>

#include "dtnet/activation.hpp"
#include "dtnet/matrix.hpp"

namespace dtnet {

struct HiddenLayerSpec {
    int width = 0;
    PolyActivation activation;
};

// Student skeleton: dense layers with polynomial activations, one or two
// hidden layers, linear output (softmax is never materialized).
struct DTNetArch {
    int input_dim = 0;
    std::vector<HiddenLayerSpec> hidden;
    int output_dim = 0;

    std::string describe() const;  // e.g. "32|32/approxSigmoid"
};

// Ciphertext multiplications on the longest path of the network circuit:
// one per dense layer for the weight product plus the activation depths.
// One hidden layer: phi + 2; two: phi1 + phi2 + 3.
int multiplicative_depth(const DTNetArch& arch);

std::size_t parameter_count(const DTNetArch& arch);

struct DenseLayer {
    Matrix W;               // width x fan_in, row per neuron
    std::vector<double> b;  // width
};

struct DTNetModel {
    DTNetArch arch;
    std::vector<DenseLayer> layers;  // hidden layers then output layer
};

struct TrainConfig {
    int epochs = 500;
    double learning_rate = 0.01;
    double dropout_rate = 0.02;
    int batch_size = 128;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
};

struct ForwardOptions {
    bool train_mode = false;
    double dropout_rate = 0.0;
    std::uint64_t seed = 0;
};

struct ForwardCache {
    std::vector<Matrix> pre;       // per hidden layer, before activation
    std::vector<Matrix> post;      // per hidden layer, after activation (and dropout)
    std::vector<Matrix> dropout;   // inverted-scaling masks, train mode only
};

// Batch forward pass; returns logits (rows x output_dim). Dropout masks are
// applied after each hidden activation only in train mode, with inverted
// scaling so inference needs no rescale.
Matrix net_forward(const DTNetModel& m, const Matrix& X, const ForwardOptions& opts = {},
                   ForwardCache* cache = nullptr);

// Argmax over logits, lowest class on ties.
std::vector<int> net_predict(const DTNetModel& m, const Matrix& X);

DTNetModel init_model(const DTNetArch& arch, std::uint64_t seed);

// Mini-batch ADAM on softmax cross-entropy against integer labels.
DTNetModel train_dtnet(const DTNetArch& arch, const Matrix& X, const std::vector<int>& y,
                       const TrainConfig& cfg);

// Soft-target variant: rows of `targets` are class distributions.
DTNetModel train_dtnet(const DTNetArch& arch, const Matrix& X, const Matrix& targets,
                       const TrainConfig& cfg);

// Mean cross-entropy of softmax(logits) against labels, no dropout.
double cross_entropy(const DTNetModel& m, const Matrix& X, const std::vector<int>& y);

// Parameter gradients in layer order (W then b per layer), flattened.
// Exposed for gradient verification.
std::vector<double> parameter_gradients(const DTNetModel& m, const Matrix& X,
                                        const std::vector<int>& y);
std::vector<double> flatten_parameters(const DTNetModel& m);
void assign_parameters(DTNetModel& m, const std::vector<double>& theta);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& expected);

}  // namespace dtnet
