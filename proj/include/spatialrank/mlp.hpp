#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spatialrank/core.hpp"
#include "spatialrank/dataset.hpp"
#include "spatialrank/rng.hpp"

// The relation classifier: in_dim -> 16 -> 32 -> 9 dense MLP with batch
// normalization and ReLU after each hidden layer, trained with softmax
// cross-entropy and Adam. Everything is written out by hand in double
// precision so the backward pass can be validated against central finite
// differences.

namespace spatialrank {

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

struct DenseLayer {
    Mat W;                   // out_dim x in_dim
    std::vector<double> b;   // out_dim
};

struct BatchNorm {
    std::vector<double> gamma;
    std::vector<double> beta;
    std::vector<double> running_mean;
    std::vector<double> running_var;
};

struct MlpConfig {
    int in_dim = 8;
    double epsilon = 1e-5;
    double momentum = 0.1;
};

inline constexpr int kHidden1 = 16;
inline constexpr int kHidden2 = 32;

struct MlpModel {
    MlpConfig config;
    DenseLayer l1, l2, l3;
    BatchNorm bn1, bn2;

    // Fan-in-scaled uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
    static MlpModel init(int in_dim, std::uint64_t seed) {
        if (in_dim != 8 && in_dim != 11)
            throw std::invalid_argument("in_dim must be 8 or 11, got " + std::to_string(in_dim));
        MlpModel m;
        m.config.in_dim = in_dim;
        std::mt19937_64 rng(mix_seed(seed, 0xA11CE));
        auto init_dense = [&rng](DenseLayer& layer, int out_dim, int fan_in) {
            layer.W = Mat(out_dim, fan_in);
            layer.b.assign(out_dim, 0.0);
            const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
            for (double& v : layer.W.a) v = uniform_in(rng, -bound, bound);
            for (double& v : layer.b) v = uniform_in(rng, -bound, bound);
        };
        auto init_bn = [](BatchNorm& bn, int dim) {
            bn.gamma.assign(dim, 1.0);
            bn.beta.assign(dim, 0.0);
            bn.running_mean.assign(dim, 0.0);
            bn.running_var.assign(dim, 1.0);
        };
        init_dense(m.l1, kHidden1, in_dim);
        init_dense(m.l2, kHidden2, kHidden1);
        init_dense(m.l3, kNumRelations, kHidden2);
        init_bn(m.bn1, kHidden1);
        init_bn(m.bn2, kHidden2);
        return m;
    }
};

// Fixed traversal order for optimizers and the gradient checker.
inline std::vector<std::vector<double>*> trainable_tensors(MlpModel& m) {
    return {&m.l1.W.a, &m.l1.b, &m.bn1.gamma, &m.bn1.beta,
            &m.l2.W.a, &m.l2.b, &m.bn2.gamma, &m.bn2.beta,
            &m.l3.W.a, &m.l3.b};
}

struct Gradients {
    std::vector<std::vector<double>> g;  // mirrors trainable_tensors order

    static Gradients zeros_like(MlpModel& m) {
        Gradients out;
        for (const auto* t : trainable_tensors(m)) out.g.emplace_back(t->size(), 0.0);
        return out;
    }
};

enum class Mode { Train, Eval };

struct BnCache {
    Mat input;    // pre-normalization activations
    Mat xhat;     // normalized activations
    std::vector<double> mean, var;
};

struct ForwardCache {
    Mat input;
    BnCache bn1, bn2;
    Mat h1, h2;   // post-ReLU hidden activations
    Mat logits;
};

namespace detail {

inline Mat dense_forward(const DenseLayer& layer, const Mat& x) {
    Mat out(x.rows, layer.W.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int o = 0; o < layer.W.rows; ++o) {
            double acc = layer.b[o];
            for (int k = 0; k < layer.W.cols; ++k) acc += x(i, k) * layer.W(o, k);
            out(i, o) = acc;
        }
    return out;
}

// Train mode normalizes by batch statistics (biased variance) and updates the
// running stats with momentum (unbiased variance, matching BatchNorm1d
// convention); eval mode uses the running statistics.
inline Mat batchnorm_forward(BatchNorm& bn, const Mat& z, Mode mode, double eps,
                             double momentum, BnCache* cache) {
    const int batch = z.rows;
    const int dim = z.cols;
    Mat out(batch, dim);
    std::vector<double> mean(dim), var(dim);
    if (mode == Mode::Train) {
        for (int c = 0; c < dim; ++c) {
            double mu = 0.0;
            for (int i = 0; i < batch; ++i) mu += z(i, c);
            mu /= batch;
            double v = 0.0;
            for (int i = 0; i < batch; ++i) v += (z(i, c) - mu) * (z(i, c) - mu);
            v /= batch;
            mean[c] = mu;
            var[c] = v;
            const double unbiased = batch > 1 ? v * batch / (batch - 1) : v;
            bn.running_mean[c] = (1.0 - momentum) * bn.running_mean[c] + momentum * mu;
            bn.running_var[c] = (1.0 - momentum) * bn.running_var[c] + momentum * unbiased;
        }
    } else {
        mean = bn.running_mean;
        var = bn.running_var;
    }
    Mat xhat(batch, dim);
    for (int c = 0; c < dim; ++c) {
        const double inv_std = 1.0 / std::sqrt(var[c] + eps);
        for (int i = 0; i < batch; ++i) {
            xhat(i, c) = (z(i, c) - mean[c]) * inv_std;
            out(i, c) = bn.gamma[c] * xhat(i, c) + bn.beta[c];
        }
    }
    if (cache) {
        cache->input = z;
        cache->xhat = std::move(xhat);
        cache->mean = std::move(mean);
        cache->var = std::move(var);
    }
    return out;
}

inline void relu_inplace(Mat& m) {
    for (double& v : m.a) v = v > 0.0 ? v : 0.0;
}

}  // namespace detail

inline Mat forward(MlpModel& model, const std::vector<FeatureVector>& batch, Mode mode,
                   ForwardCache* cache = nullptr) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    const int in_dim = model.config.in_dim;
    for (const FeatureVector& f : batch)
        if (static_cast<int>(f.size()) != in_dim)
            throw std::invalid_argument("feature length " + std::to_string(f.size()) +
                                        " does not match model in_dim " + std::to_string(in_dim));
    if (mode == Mode::Train && batch.size() < 2)
        throw std::invalid_argument("train-mode forward needs a batch of at least 2");

    Mat x(static_cast<int>(batch.size()), in_dim);
    for (int i = 0; i < x.rows; ++i)
        for (int c = 0; c < in_dim; ++c) x(i, c) = batch[i][c];

    const double eps = model.config.epsilon;
    const double mom = model.config.momentum;

    Mat z1 = detail::dense_forward(model.l1, x);
    Mat h1 = detail::batchnorm_forward(model.bn1, z1, mode, eps, mom, cache ? &cache->bn1 : nullptr);
    detail::relu_inplace(h1);
    Mat z2 = detail::dense_forward(model.l2, h1);
    Mat h2 = detail::batchnorm_forward(model.bn2, z2, mode, eps, mom, cache ? &cache->bn2 : nullptr);
    detail::relu_inplace(h2);
    Mat logits = detail::dense_forward(model.l3, h2);

    if (cache) {
        cache->input = std::move(x);
        cache->h1 = std::move(h1);
        cache->h2 = std::move(h2);
        cache->logits = logits;
    }
    return logits;
}

inline RelationDistribution softmax_row(const Mat& logits, int row) {
    RelationDistribution probs{};
    double mx = logits(row, 0);
    for (int c = 1; c < kNumRelations; ++c) mx = std::max(mx, logits(row, c));
    double z = 0.0;
    for (int c = 0; c < kNumRelations; ++c) {
        probs[c] = std::exp(logits(row, c) - mx);
        z += probs[c];
    }
    for (double& p : probs) p /= z;
    return probs;
}

struct CrossEntropyResult {
    double loss = 0.0;
    Mat dlogits;
};

inline CrossEntropyResult softmax_cross_entropy(const Mat& logits, const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) != logits.rows)
        throw std::invalid_argument("labels/logits batch size mismatch");
    CrossEntropyResult res;
    res.dlogits = Mat(logits.rows, kNumRelations);
    for (int i = 0; i < logits.rows; ++i) {
        const int label = labels[i];
        if (label < 0 || label >= kNumRelations)
            throw std::invalid_argument("label out of range: " + std::to_string(label));
        const RelationDistribution p = softmax_row(logits, i);
        res.loss += -std::log(std::max(p[label], 1e-300));
        for (int c = 0; c < kNumRelations; ++c)
            res.dlogits(i, c) = (p[c] - (c == label ? 1.0 : 0.0)) / logits.rows;
    }
    res.loss /= logits.rows;
    return res;
}

namespace detail {

// Accumulates dW/db and returns the gradient w.r.t. the layer input.
inline Mat dense_backward(const DenseLayer& layer, const Mat& input, const Mat& dout,
                          std::vector<double>& dW, std::vector<double>& db) {
    for (int o = 0; o < layer.W.rows; ++o)
        for (int k = 0; k < layer.W.cols; ++k) {
            double acc = 0.0;
            for (int i = 0; i < input.rows; ++i) acc += dout(i, o) * input(i, k);
            dW[static_cast<std::size_t>(o) * layer.W.cols + k] = acc;
        }
    for (int o = 0; o < layer.W.rows; ++o) {
        double acc = 0.0;
        for (int i = 0; i < input.rows; ++i) acc += dout(i, o);
        db[o] = acc;
    }
    Mat dx(input.rows, layer.W.cols);
    for (int i = 0; i < input.rows; ++i)
        for (int k = 0; k < layer.W.cols; ++k) {
            double acc = 0.0;
            for (int o = 0; o < layer.W.rows; ++o) acc += dout(i, o) * layer.W(o, k);
            dx(i, k) = acc;
        }
    return dx;
}

// Backward through batch-statistics normalization. The batch mean and
// variance depend on every row, hence the two correction terms.
inline Mat batchnorm_backward(const BatchNorm& bn, const BnCache& cache, const Mat& dout,
                              double eps, std::vector<double>& dgamma,
                              std::vector<double>& dbeta) {
    const int batch = dout.rows;
    const int dim = dout.cols;
    Mat dx(batch, dim);
    for (int c = 0; c < dim; ++c) {
        const double inv_std = 1.0 / std::sqrt(cache.var[c] + eps);
        double sum_dy = 0.0, sum_dy_xhat = 0.0;
        for (int i = 0; i < batch; ++i) {
            sum_dy += dout(i, c);
            sum_dy_xhat += dout(i, c) * cache.xhat(i, c);
        }
        dgamma[c] = sum_dy_xhat;
        dbeta[c] = sum_dy;
        for (int i = 0; i < batch; ++i) {
            dx(i, c) = bn.gamma[c] * inv_std / batch *
                       (batch * dout(i, c) - sum_dy - cache.xhat(i, c) * sum_dy_xhat);
        }
    }
    return dx;
}

inline void relu_backward_inplace(Mat& dout, const Mat& post_relu) {
    for (std::size_t i = 0; i < dout.a.size(); ++i)
        if (post_relu.a[i] <= 0.0) dout.a[i] = 0.0;
}

}  // namespace detail

inline Gradients backward(MlpModel& model, const ForwardCache& cache, const Mat& dlogits) {
    Gradients grads = Gradients::zeros_like(model);
    // indices into the trainable tensor order
    enum { W1, B1, G1, Be1, W2, B2, G2, Be2, W3, B3 };
    Mat dh2 = detail::dense_backward(model.l3, cache.h2, dlogits, grads.g[W3], grads.g[B3]);
    detail::relu_backward_inplace(dh2, cache.h2);
    Mat dz2 = detail::batchnorm_backward(model.bn2, cache.bn2, dh2, model.config.epsilon,
                                         grads.g[G2], grads.g[Be2]);
    Mat dh1 = detail::dense_backward(model.l2, cache.h1, dz2, grads.g[W2], grads.g[B2]);
    detail::relu_backward_inplace(dh1, cache.h1);
    Mat dz1 = detail::batchnorm_backward(model.bn1, cache.bn1, dh1, model.config.epsilon,
                                         grads.g[G1], grads.g[Be1]);
    detail::dense_backward(model.l1, cache.input, dz1, grads.g[W1], grads.g[B1]);
    return grads;
}

struct AdamState {
    double learning_rate = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long t = 0;
    std::vector<std::vector<double>> m, v;

    static AdamState init(MlpModel& model, double learning_rate) {
        AdamState s;
        s.learning_rate = learning_rate;
        for (const auto* tensor : trainable_tensors(model)) {
            s.m.emplace_back(tensor->size(), 0.0);
            s.v.emplace_back(tensor->size(), 0.0);
        }
        return s;
    }
};

inline void adam_step(MlpModel& model, const Gradients& grads, AdamState& state) {
    auto tensors = trainable_tensors(model);
    if (grads.g.size() != tensors.size())
        throw std::invalid_argument("gradient/parameter tensor count mismatch");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t ti = 0; ti < tensors.size(); ++ti) {
        std::vector<double>& theta = *tensors[ti];
        const std::vector<double>& g = grads.g[ti];
        if (g.size() != theta.size())
            throw std::invalid_argument("gradient tensor shape mismatch");
        for (std::size_t i = 0; i < theta.size(); ++i) {
            state.m[ti][i] = state.beta1 * state.m[ti][i] + (1.0 - state.beta1) * g[i];
            state.v[ti][i] = state.beta2 * state.v[ti][i] + (1.0 - state.beta2) * g[i] * g[i];
            const double mhat = state.m[ti][i] / bc1;
            const double vhat = state.v[ti][i] / bc2;
            theta[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

struct TrainConfig {
    int epochs = 100;
    int batch_size = 12;
    double learning_rate = 1e-5;
    std::uint64_t seed = 0;
    bool use_geo = false;
    bool shuffle = true;
};

// Deterministic training loop over feature/label pairs derived from the
// instances. The last incomplete batch of each epoch is dropped (BatchNorm
// needs batch variance).
inline std::pair<MlpModel, std::vector<double>> train(const std::vector<ClauseInstance>& instances,
                                                      const TrainConfig& config) {
    if (config.epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (config.batch_size < 2) throw std::invalid_argument("batch_size must be at least 2");
    if (instances.size() < static_cast<std::size_t>(config.batch_size))
        throw std::invalid_argument("need at least one full batch of instances");

    std::vector<FeatureVector> features;
    std::vector<int> labels;
    features.reserve(instances.size());
    labels.reserve(instances.size());
    for (const ClauseInstance& inst : instances) {
        features.push_back(assemble_features(inst.subject.box, inst.object.box, config.use_geo));
        labels.push_back(static_cast<int>(inst.relation));
    }

    MlpModel model = MlpModel::init(feature_dim(config.use_geo), config.seed);
    AdamState adam = AdamState::init(model, config.learning_rate);
    std::mt19937_64 shuffle_rng(mix_seed(config.seed, 0x5AFF1E));

    std::vector<std::size_t> order(instances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> loss_history;
    loss_history.reserve(config.epochs);
    const std::size_t num_batches = instances.size() / config.batch_size;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) seeded_shuffle(order, shuffle_rng);
        double epoch_loss = 0.0;
        for (std::size_t b = 0; b < num_batches; ++b) {
            std::vector<FeatureVector> batch;
            std::vector<int> batch_labels;
            batch.reserve(config.batch_size);
            for (int i = 0; i < config.batch_size; ++i) {
                const std::size_t idx = order[b * config.batch_size + i];
                batch.push_back(features[idx]);
                batch_labels.push_back(labels[idx]);
            }
            ForwardCache cache;
            Mat logits = forward(model, batch, Mode::Train, &cache);
            CrossEntropyResult ce = softmax_cross_entropy(logits, batch_labels);
            Gradients grads = backward(model, cache, ce.dlogits);
            adam_step(model, grads, adam);
            epoch_loss += ce.loss;
        }
        loss_history.push_back(epoch_loss / static_cast<double>(num_batches));
    }
    return {std::move(model), std::move(loss_history)};
}

inline RelationDistribution predict(const MlpModel& model, const FeatureVector& features) {
    MlpModel scratch = model;  // eval forward never mutates, but forward takes non-const
    Mat logits = forward(scratch, {features}, Mode::Eval);
    return softmax_row(logits, 0);
}

// Central finite differences over the trainable scalars (a seeded subsample
// when the model has more than max_scalars of them). Returns the max
// relative error against the analytic backward pass.
inline double gradient_check(const MlpModel& model, const std::vector<FeatureVector>& batch,
                             const std::vector<int>& labels, double step = 1e-5,
                             std::size_t max_scalars = 200, std::uint64_t seed = 0) {
    if (batch.size() < 2) throw std::invalid_argument("gradient check needs batch >= 2");

    auto loss_at = [&](const MlpModel& m) {
        MlpModel scratch = m;
        Mat logits = forward(scratch, batch, Mode::Train);
        return softmax_cross_entropy(logits, labels).loss;
    };

    MlpModel scratch = model;
    ForwardCache cache;
    Mat logits = forward(scratch, batch, Mode::Train, &cache);
    CrossEntropyResult ce = softmax_cross_entropy(logits, labels);
    Gradients analytic = backward(scratch, cache, ce.dlogits);

    // flatten coordinates as (tensor, offset) pairs
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    {
        MlpModel probe = model;
        auto tensors = trainable_tensors(probe);
        for (std::size_t ti = 0; ti < tensors.size(); ++ti)
            for (std::size_t i = 0; i < tensors[ti]->size(); ++i) coords.push_back({ti, i});
    }
    if (coords.size() > max_scalars) {
        std::mt19937_64 rng(mix_seed(seed, 0x6C4D));
        seeded_shuffle(coords, rng);
        coords.resize(max_scalars);
    }

    double max_rel_err = 0.0;
    for (const auto& [ti, i] : coords) {
        MlpModel plus = model;
        MlpModel minus = model;
        (*trainable_tensors(plus)[ti])[i] += step;
        (*trainable_tensors(minus)[ti])[i] -= step;
        const double numeric = (loss_at(plus) - loss_at(minus)) / (2.0 * step);
        const double a = analytic.g[ti][i];
        // The floor must sit above central-difference rounding noise
        // (~ulp(loss)/(2*step) ~ 1e-11), or near-cancelled gradients report
        // noise as error.
        const double rel = std::abs(a - numeric) /
                           std::max({std::abs(a), std::abs(numeric), 1e-6});
        max_rel_err = std::max(max_rel_err, rel);
    }
    return max_rel_err;
}

// --- Checkpoint serialization --------------------------------------------

inline constexpr int kCheckpointVersion = 1;

inline nlohmann::json save_checkpoint(const MlpModel& model) {
    auto mat_to_json = [](const Mat& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < m.rows; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < m.cols; ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    auto bn_to_json = [](const BatchNorm& bn) {
        return nlohmann::json{{"gamma", bn.gamma},
                              {"beta", bn.beta},
                              {"running_mean", bn.running_mean},
                              {"running_var", bn.running_var}};
    };
    return nlohmann::json{
        {"version", kCheckpointVersion},
        {"in_dim", model.config.in_dim},
        {"layers",
         {nlohmann::json{{"W", mat_to_json(model.l1.W)}, {"b", model.l1.b}},
          nlohmann::json{{"W", mat_to_json(model.l2.W)}, {"b", model.l2.b}},
          nlohmann::json{{"W", mat_to_json(model.l3.W)}, {"b", model.l3.b}}}},
        {"batchnorms", {bn_to_json(model.bn1), bn_to_json(model.bn2)}},
        {"config", {{"epsilon", model.config.epsilon}, {"momentum", model.config.momentum}}},
    };
}

inline MlpModel load_checkpoint(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("version"))
        throw std::runtime_error("malformed checkpoint: missing version");
    if (j.at("version").get<int>() != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version " +
                                 j.at("version").dump());
    MlpModel m;
    try {
        m.config.in_dim = j.at("in_dim").get<int>();
        m.config.epsilon = j.at("config").at("epsilon").get<double>();
        m.config.momentum = j.at("config").at("momentum").get<double>();
        auto mat_from_json = [](const nlohmann::json& rows, int exp_rows, int exp_cols) {
            Mat m2(exp_rows, exp_cols);
            if (static_cast<int>(rows.size()) != exp_rows)
                throw std::runtime_error("checkpoint matrix row count mismatch");
            for (int r = 0; r < exp_rows; ++r) {
                if (static_cast<int>(rows[r].size()) != exp_cols)
                    throw std::runtime_error("checkpoint matrix column count mismatch");
                for (int c = 0; c < exp_cols; ++c) m2(r, c) = rows[r][c].get<double>();
            }
            return m2;
        };
        auto vec_from_json = [](const nlohmann::json& arr, int exp) {
            auto v = arr.get<std::vector<double>>();
            if (static_cast<int>(v.size()) != exp)
                throw std::runtime_error("checkpoint vector size mismatch");
            return v;
        };
        const auto& layers = j.at("layers");
        m.l1.W = mat_from_json(layers.at(0).at("W"), kHidden1, m.config.in_dim);
        m.l1.b = vec_from_json(layers.at(0).at("b"), kHidden1);
        m.l2.W = mat_from_json(layers.at(1).at("W"), kHidden2, kHidden1);
        m.l2.b = vec_from_json(layers.at(1).at("b"), kHidden2);
        m.l3.W = mat_from_json(layers.at(2).at("W"), kNumRelations, kHidden2);
        m.l3.b = vec_from_json(layers.at(2).at("b"), kNumRelations);
        const auto& bns = j.at("batchnorms");
        auto bn_from_json = [&](const nlohmann::json& b, int dim) {
            BatchNorm bn;
            bn.gamma = vec_from_json(b.at("gamma"), dim);
            bn.beta = vec_from_json(b.at("beta"), dim);
            bn.running_mean = vec_from_json(b.at("running_mean"), dim);
            bn.running_var = vec_from_json(b.at("running_var"), dim);
            for (double v : bn.running_var)
                if (!(v > 0.0)) throw std::runtime_error("running_var entries must be positive");
            return bn;
        };
        m.bn1 = bn_from_json(bns.at(0), kHidden1);
        m.bn2 = bn_from_json(bns.at(1), kHidden2);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed checkpoint: ") + e.what());
    }
    return m;
}

inline void save_checkpoint_file(const std::filesystem::path& path, const MlpModel& model) {
    write_text_atomic(path, save_checkpoint(model).dump(2) + "\n");
}

inline MlpModel load_checkpoint_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed checkpoint: ") + e.what());
    }
    return load_checkpoint(j);
}

}  // namespace spatialrank
