#include "dtnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dtnet/errors.hpp"
#include "dtnet/rng.hpp"

namespace dtnet {

std::string DTNetArch::describe() const {
    std::string s;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        if (i) s += "|";
        s += std::to_string(hidden[i].width);
    }
    s += "/";
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        if (i) s += "|";
        s += hidden[i].activation.name;
    }
    return s;
}

int multiplicative_depth(const DTNetArch& arch) {
    if (arch.hidden.empty() || arch.hidden.size() > 2)
        throw InputError("multiplicative_depth: supported templates have 1 or 2 hidden layers");
    int depth = 1;  // output-layer weight product
    for (const auto& h : arch.hidden) depth += 1 + h.activation.depth;
    return depth;
}

std::size_t parameter_count(const DTNetArch& arch) {
    std::size_t count = 0;
    std::size_t fan_in = static_cast<std::size_t>(arch.input_dim);
    for (const auto& h : arch.hidden) {
        count += fan_in * static_cast<std::size_t>(h.width) + static_cast<std::size_t>(h.width);
        fan_in = static_cast<std::size_t>(h.width);
    }
    count += fan_in * static_cast<std::size_t>(arch.output_dim) +
             static_cast<std::size_t>(arch.output_dim);
    return count;
}

namespace {

// z = x * W^T + b, one row per input point
Matrix affine(const Matrix& X, const DenseLayer& layer) {
    Matrix Z(X.rows(), layer.W.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        for (std::size_t o = 0; o < layer.W.rows(); ++o) {
            double acc = layer.b[o];
            for (std::size_t j = 0; j < layer.W.cols(); ++j) acc += X(i, j) * layer.W(o, j);
            Z(i, o) = acc;
        }
    }
    return Z;
}

void check_finite(const Matrix& M, std::size_t layer_index) {
    for (double v : M.data())
        if (!std::isfinite(v))
            throw NumericError("non-finite activation in layer " + std::to_string(layer_index));
}

}  // namespace

Matrix net_forward(const DTNetModel& m, const Matrix& X, const ForwardOptions& opts,
                   ForwardCache* cache) {
    if (X.cols() != static_cast<std::size_t>(m.arch.input_dim))
        throw InputError("net_forward: input has " + std::to_string(X.cols()) +
                         " features, model expects " + std::to_string(m.arch.input_dim));
    if (cache) {
        cache->pre.clear();
        cache->post.clear();
        cache->dropout.clear();
    }
    Rng rng(split_seed(opts.seed, 0xd70u));
    Matrix A = X;
    for (std::size_t l = 0; l < m.arch.hidden.size(); ++l) {
        Matrix Z = affine(A, m.layers[l]);
        check_finite(Z, l);
        const PolyActivation& act = m.arch.hidden[l].activation;
        Matrix H(Z.rows(), Z.cols());
        for (std::size_t i = 0; i < Z.data().size(); ++i) H.data()[i] = act.eval(Z.data()[i]);
        if (cache) cache->pre.push_back(Z);
        if (opts.train_mode && opts.dropout_rate > 0.0) {
            Matrix mask(H.rows(), H.cols());
            double keep_scale = 1.0 / (1.0 - opts.dropout_rate);
            for (double& v : mask.data()) v = rng.bernoulli(opts.dropout_rate) ? 0.0 : keep_scale;
            for (std::size_t i = 0; i < H.data().size(); ++i) H.data()[i] *= mask.data()[i];
            if (cache) cache->dropout.push_back(std::move(mask));
        }
        check_finite(H, l);
        if (cache) cache->post.push_back(H);
        A = std::move(H);
    }
    Matrix logits = affine(A, m.layers.back());
    check_finite(logits, m.layers.size() - 1);
    return logits;
}

std::vector<int> net_predict(const DTNetModel& m, const Matrix& X) {
    Matrix logits = net_forward(m, X);
    std::vector<int> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = static_cast<int>(argmax(logits.row(i)));
    return out;
}

DTNetModel init_model(const DTNetArch& arch, std::uint64_t seed) {
    if (arch.input_dim < 1 || arch.output_dim < 1)
        throw InputError("init_model: input and output dims must be positive");
    if (arch.hidden.empty() || arch.hidden.size() > 2)
        throw InputError("init_model: supported templates have 1 or 2 hidden layers");
    Rng rng(split_seed(seed, 0x111u));
    DTNetModel m;
    m.arch = arch;
    std::size_t fan_in = static_cast<std::size_t>(arch.input_dim);
    auto add_layer = [&](std::size_t width) {
        DenseLayer layer;
        layer.W = Matrix(width, fan_in);
        layer.b.assign(width, 0.0);
        double bound = std::sqrt(6.0 / static_cast<double>(fan_in + width));
        for (double& v : layer.W.data()) v = rng.uniform(-bound, bound);
        m.layers.push_back(std::move(layer));
        fan_in = width;
    };
    for (const auto& h : arch.hidden) add_layer(static_cast<std::size_t>(h.width));
    add_layer(static_cast<std::size_t>(arch.output_dim));
    return m;
}

namespace {

// softmax per row, numerically shifted
Matrix softmax_rows(const Matrix& logits) {
    Matrix P(logits.rows(), logits.cols());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        auto row = logits.row(i);
        double mx = *std::max_element(row.begin(), row.end());
        double denom = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            P(i, k) = std::exp(row[k] - mx);
            denom += P(i, k);
        }
        for (std::size_t k = 0; k < row.size(); ++k) P(i, k) /= denom;
    }
    return P;
}

struct Gradients {
    std::vector<Matrix> dW;
    std::vector<std::vector<double>> db;
    double loss = 0.0;
};

// Forward + backward over one batch against target distributions.
Gradients backward(const DTNetModel& m, const Matrix& X, const Matrix& targets,
                   const ForwardOptions& opts) {
    ForwardCache cache;
    Matrix logits = net_forward(m, X, opts, &cache);
    Matrix P = softmax_rows(logits);
    const double inv_n = 1.0 / static_cast<double>(X.rows());

    Gradients g;
    g.dW.resize(m.layers.size());
    g.db.resize(m.layers.size());

    for (std::size_t i = 0; i < P.rows(); ++i)
        for (std::size_t k = 0; k < P.cols(); ++k)
            if (targets(i, k) > 0.0) g.loss -= targets(i, k) * std::log(std::max(P(i, k), 1e-300));
    g.loss *= inv_n;

    // delta on logits
    Matrix delta(P.rows(), P.cols());
    for (std::size_t i = 0; i < P.data().size(); ++i)
        delta.data()[i] = (P.data()[i] - targets.data()[i]) * inv_n;

    for (std::size_t l = m.layers.size(); l-- > 0;) {
        const Matrix& input = l == 0 ? X : cache.post[l - 1];
        const DenseLayer& layer = m.layers[l];
        Matrix dW(layer.W.rows(), layer.W.cols());
        std::vector<double> db(layer.b.size(), 0.0);
        for (std::size_t i = 0; i < delta.rows(); ++i) {
            for (std::size_t o = 0; o < dW.rows(); ++o) {
                double d = delta(i, o);
                if (d == 0.0) continue;
                db[o] += d;
                for (std::size_t j = 0; j < dW.cols(); ++j) dW(o, j) += d * input(i, j);
            }
        }
        g.dW[l] = std::move(dW);
        g.db[l] = std::move(db);
        if (l == 0) break;

        // propagate to the previous hidden layer
        Matrix prev(delta.rows(), layer.W.cols());
        for (std::size_t i = 0; i < delta.rows(); ++i)
            for (std::size_t j = 0; j < layer.W.cols(); ++j) {
                double acc = 0.0;
                for (std::size_t o = 0; o < layer.W.rows(); ++o)
                    acc += delta(i, o) * layer.W(o, j);
                prev(i, j) = acc;
            }
        // through dropout, then through the activation
        if (!cache.dropout.empty())
            for (std::size_t i = 0; i < prev.data().size(); ++i)
                prev.data()[i] *= cache.dropout[l - 1].data()[i];
        const PolyActivation& act = m.arch.hidden[l - 1].activation;
        const Matrix& Z = cache.pre[l - 1];
        for (std::size_t i = 0; i < prev.data().size(); ++i)
            prev.data()[i] *= act.grad(Z.data()[i]);
        delta = std::move(prev);
    }
    return g;
}

Matrix one_hot(const std::vector<int>& y, std::size_t n_classes) {
    Matrix T(y.size(), n_classes);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || static_cast<std::size_t>(y[i]) >= n_classes)
            throw InputError("label out of range: " + std::to_string(y[i]));
        T(i, static_cast<std::size_t>(y[i])) = 1.0;
    }
    return T;
}

struct AdamState {
    std::vector<double> m, v;
    void init(std::size_t n) {
        m.assign(n, 0.0);
        v.assign(n, 0.0);
    }
};

DTNetModel train_impl(const DTNetArch& arch, const Matrix& X, const Matrix& targets,
                      const TrainConfig& cfg) {
    if (X.rows() == 0) throw InputError("train_dtnet: empty training set");
    if (X.rows() != targets.rows()) throw InputError("train_dtnet: X/targets row mismatch");
    if (targets.cols() != static_cast<std::size_t>(arch.output_dim))
        throw InputError("train_dtnet: target width != output_dim");
    if (arch.output_dim < 2) throw InputError("train_dtnet: need at least two classes");
    if (cfg.batch_size < 1) throw InputError("train_dtnet: batch_size must be positive");

    DTNetModel model = init_model(arch, cfg.seed);

    std::vector<AdamState> wstate(model.layers.size()), bstate(model.layers.size());
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        wstate[l].init(model.layers[l].W.data().size());
        bstate[l].init(model.layers[l].b.size());
    }

    Rng shuffle_rng(split_seed(cfg.seed, 0x5afu));
    std::vector<std::size_t> order(X.rows());
    std::iota(order.begin(), order.end(), 0);

    long step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            Matrix bx(stop - start, X.cols());
            Matrix bt(stop - start, targets.cols());
            for (std::size_t i = start; i < stop; ++i) {
                for (std::size_t j = 0; j < X.cols(); ++j) bx(i - start, j) = X(order[i], j);
                for (std::size_t k = 0; k < targets.cols(); ++k)
                    bt(i - start, k) = targets(order[i], k);
            }
            ForwardOptions opts;
            opts.train_mode = true;
            opts.dropout_rate = cfg.dropout_rate;
            opts.seed = split_seed(cfg.seed, 0xd0ULL + static_cast<std::uint64_t>(step));
            Gradients g = backward(model, bx, bt, opts);
            if (!std::isfinite(g.loss))
                throw NumericError("training diverged: loss is not finite at epoch " +
                                   std::to_string(epoch) + ", batch " +
                                   std::to_string(start / static_cast<std::size_t>(cfg.batch_size)));
            ++step;
            double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                auto update = [&](std::vector<double>& theta, const std::vector<double>& grad,
                                  AdamState& st) {
                    for (std::size_t i = 0; i < theta.size(); ++i) {
                        st.m[i] = cfg.beta1 * st.m[i] + (1.0 - cfg.beta1) * grad[i];
                        st.v[i] = cfg.beta2 * st.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
                        double mhat = st.m[i] / bc1;
                        double vhat = st.v[i] / bc2;
                        theta[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
                    }
                };
                update(model.layers[l].W.data(), g.dW[l].data(), wstate[l]);
                update(model.layers[l].b, g.db[l], bstate[l]);
            }
        }
    }
    return model;
}

}  // namespace

DTNetModel train_dtnet(const DTNetArch& arch, const Matrix& X, const std::vector<int>& y,
                       const TrainConfig& cfg) {
    return train_impl(arch, X, one_hot(y, static_cast<std::size_t>(arch.output_dim)), cfg);
}

DTNetModel train_dtnet(const DTNetArch& arch, const Matrix& X, const Matrix& targets,
                       const TrainConfig& cfg) {
    return train_impl(arch, X, targets, cfg);
}

double cross_entropy(const DTNetModel& m, const Matrix& X, const std::vector<int>& y) {
    Matrix P = softmax_rows(net_forward(m, X));
    double loss = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i)
        loss -= std::log(std::max(P(i, static_cast<std::size_t>(y[i])), 1e-300));
    return loss / static_cast<double>(X.rows());
}

std::vector<double> parameter_gradients(const DTNetModel& m, const Matrix& X,
                                        const std::vector<int>& y) {
    Gradients g = backward(m, X, one_hot(y, static_cast<std::size_t>(m.arch.output_dim)), {});
    std::vector<double> flat;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        flat.insert(flat.end(), g.dW[l].data().begin(), g.dW[l].data().end());
        flat.insert(flat.end(), g.db[l].begin(), g.db[l].end());
    }
    return flat;
}

std::vector<double> flatten_parameters(const DTNetModel& m) {
    std::vector<double> flat;
    for (const auto& layer : m.layers) {
        flat.insert(flat.end(), layer.W.data().begin(), layer.W.data().end());
        flat.insert(flat.end(), layer.b.begin(), layer.b.end());
    }
    return flat;
}

void assign_parameters(DTNetModel& m, const std::vector<double>& theta) {
    std::size_t pos = 0;
    for (auto& layer : m.layers) {
        for (double& v : layer.W.data()) v = theta.at(pos++);
        for (double& v : layer.b) v = theta.at(pos++);
    }
    if (pos != theta.size()) throw InputError("assign_parameters: size mismatch");
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& expected) {
    if (predicted.size() != expected.size()) throw InputError("accuracy: size mismatch");
    if (predicted.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == expected[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace dtnet
