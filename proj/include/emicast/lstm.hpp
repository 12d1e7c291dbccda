#ifndef EMICAST_LSTM_HPP
#define EMICAST_LSTM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "emicast/core.hpp"
#include "emicast/preprocess.hpp"

namespace emicast {

// ============================================================================
// Model
// ============================================================================

/// One layer's parameters. Gate rows of W, U and b are stacked in the fixed
/// order [input i, forget f, cell candidate g, output o], h rows per gate.
struct LstmLayerParams {
    int input_size = 0;
    int hidden_size = 0;
    Matrix W;              // 4h x input_size
    Matrix U;              // 4h x hidden_size
    std::vector<double> b; // 4h
};

struct AffineHead {
    std::vector<double> w; // hidden_size of the last layer
    double b = 0.0;
};

/// Stacked LSTM regressor. All layers except the last feed full hidden
/// sequences upward; the last layer's final hidden state feeds the head.
struct LstmModel {
    std::vector<LstmLayerParams> layers;
    AffineHead head;
    double dropout_rate = 0.0;
    int seq_len = 0;

    std::vector<int> layer_sizes() const {
        std::vector<int> sizes;
        for (const auto& l : layers) sizes.push_back(l.hidden_size);
        return sizes;
    }
};

/// Glorot-uniform init on W and U (bound sqrt(6/(fan_in+fan_out)) with
/// fan_in = columns, fan_out = rows); forget-gate bias slice set to 1.0,
/// all other biases zero. Fully determined by `seed`.
inline LstmModel init_model(const std::vector<int>& layer_sizes, int seq_len, double dropout,
                            std::uint64_t seed) {
    if (layer_sizes.empty()) fail(ErrorCode::BadArgument, "need at least one layer");
    for (int h : layer_sizes)
        if (h < 1) fail(ErrorCode::BadArgument, "layer sizes must be positive");
    if (seq_len < 1) fail(ErrorCode::BadArgument, "seq_len must be positive");
    if (!(dropout >= 0.0 && dropout < 1.0))
        fail(ErrorCode::BadArgument, "dropout must lie in [0,1)");

    Rng rng(seed);
    auto glorot_fill = [&](Matrix& m) {
        const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
        for (double& v : m.data()) v = rng.uniform(-bound, bound);
    };

    LstmModel model;
    model.dropout_rate = dropout;
    model.seq_len = seq_len;
    int input = 1;
    for (int h : layer_sizes) {
        LstmLayerParams p;
        p.input_size = input;
        p.hidden_size = h;
        p.W = Matrix(4 * h, input);
        p.U = Matrix(4 * h, h);
        p.b.assign(4 * h, 0.0);
        glorot_fill(p.W);
        glorot_fill(p.U);
        for (int r = h; r < 2 * h; ++r) p.b[r] = 1.0; // forget gate
        model.layers.push_back(std::move(p));
        input = h;
    }
    model.head.w.resize(input);
    const double bound = std::sqrt(6.0 / static_cast<double>(input + 1));
    for (double& v : model.head.w) v = rng.uniform(-bound, bound);
    model.head.b = 0.0;
    return model;
}

// ============================================================================
// Forward pass
// ============================================================================

/// Everything the backward pass needs from one cell step: the inputs and the
/// post-activation gate values (activation derivatives are recovered from
/// the values themselves).
struct CellCache {
    std::vector<double> x, h_prev, c_prev;
    std::vector<double> gate_i, gate_f, gate_g, gate_o;
    std::vector<double> c, tanh_c;
};

struct LayerCache {
    std::vector<CellCache> steps;
    std::vector<double> drop_mask; // seq_len*h inverted-dropout mask on this layer's output; empty = none
};

struct SampleCache {
    std::vector<LayerCache> layers;
    std::vector<double> final_hidden; // last layer, last step
};

struct ForwardCache {
    std::vector<SampleCache> samples;
    std::vector<int> layer_sizes;
    int seq_len = 0;
    bool training = false;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Single gated cell step:
///   i,f,o = sigmoid(W x + U h_prev + b), g = tanh(...)
///   c_t = f .* c_prev + i .* g,  h_t = o .* tanh(c_t)
inline std::pair<std::vector<double>, std::vector<double>> cell_forward(
    const LstmLayerParams& p, const std::vector<double>& x, const std::vector<double>& h_prev,
    const std::vector<double>& c_prev, CellCache* cache = nullptr) {
    const int h = p.hidden_size;
    if (static_cast<int>(x.size()) != p.input_size ||
        static_cast<int>(h_prev.size()) != h || static_cast<int>(c_prev.size()) != h)
        fail(ErrorCode::ShapeMismatch, "cell_forward input shapes do not match the layer");

    std::vector<double> z(4 * h);
    for (int r = 0; r < 4 * h; ++r) {
        double acc = p.b[r];
        const double* wr = p.W.row(r);
        for (int c = 0; c < p.input_size; ++c) acc += wr[c] * x[c];
        const double* ur = p.U.row(r);
        for (int c = 0; c < h; ++c) acc += ur[c] * h_prev[c];
        z[r] = acc;
    }

    std::vector<double> gi(h), gf(h), gg(h), go(h), c_t(h), tanh_c(h), h_t(h);
    for (int u = 0; u < h; ++u) {
        gi[u] = sigmoid(z[u]);
        gf[u] = sigmoid(z[h + u]);
        gg[u] = std::tanh(z[2 * h + u]);
        go[u] = sigmoid(z[3 * h + u]);
        c_t[u] = gf[u] * c_prev[u] + gi[u] * gg[u];
        tanh_c[u] = std::tanh(c_t[u]);
        h_t[u] = go[u] * tanh_c[u];
    }

    if (cache) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->c_prev = c_prev;
        cache->gate_i = std::move(gi);
        cache->gate_f = std::move(gf);
        cache->gate_g = std::move(gg);
        cache->gate_o = std::move(go);
        cache->c = c_t;
        cache->tanh_c = std::move(tanh_c);
    }
    return {std::move(h_t), std::move(c_t)};
}

/// Batch forward. `inputs` is batch x seq_len of scalars. In training mode an
/// inverted dropout mask (scale 1/(1-rate)) is drawn per inter-layer boundary
/// and recorded in the cache; inference applies none.
inline std::pair<std::vector<double>, ForwardCache> forward(const LstmModel& model,
                                                            const Matrix& inputs, bool training,
                                                            Rng* rng = nullptr) {
    if (inputs.rows() < 1) fail(ErrorCode::ShapeMismatch, "empty batch");
    if (inputs.cols() != model.seq_len)
        fail(ErrorCode::ShapeMismatch, "input sequence length " + std::to_string(inputs.cols()) +
                                           " != model seq_len " + std::to_string(model.seq_len));
    const bool use_dropout = training && model.dropout_rate > 0.0 && model.layers.size() > 1;
    if (use_dropout && !rng)
        fail(ErrorCode::BadArgument, "training forward with dropout needs an rng");

    const int batch = inputs.rows();
    const int seq = model.seq_len;
    const int n_layers = static_cast<int>(model.layers.size());

    ForwardCache cache;
    cache.samples.resize(batch);
    cache.layer_sizes = model.layer_sizes();
    cache.seq_len = seq;
    cache.training = training;

    std::vector<double> preds(batch);
    for (int s = 0; s < batch; ++s) {
        SampleCache& sc = cache.samples[s];
        sc.layers.resize(n_layers);

        // per-step inputs to the current layer
        std::vector<std::vector<double>> layer_in(seq);
        for (int t = 0; t < seq; ++t) layer_in[t] = {inputs(s, t)};

        std::vector<double> h_last;
        for (int l = 0; l < n_layers; ++l) {
            const LstmLayerParams& p = model.layers[l];
            LayerCache& lc = sc.layers[l];
            lc.steps.resize(seq);

            std::vector<double> h(p.hidden_size, 0.0), c(p.hidden_size, 0.0);
            std::vector<std::vector<double>> h_seq(seq);
            for (int t = 0; t < seq; ++t) {
                auto [h_t, c_t] = cell_forward(p, layer_in[t], h, c, &lc.steps[t]);
                h = std::move(h_t);
                c = std::move(c_t);
                h_seq[t] = h;
            }
            h_last = h;

            if (l + 1 < n_layers) {
                if (use_dropout) {
                    const double keep_scale = 1.0 / (1.0 - model.dropout_rate);
                    lc.drop_mask.resize(static_cast<std::size_t>(seq) * p.hidden_size);
                    for (int t = 0; t < seq; ++t)
                        for (int u = 0; u < p.hidden_size; ++u) {
                            const double m =
                                rng->uniform() < model.dropout_rate ? 0.0 : keep_scale;
                            lc.drop_mask[static_cast<std::size_t>(t) * p.hidden_size + u] = m;
                            h_seq[t][u] *= m;
                        }
                }
                layer_in = std::move(h_seq);
            }
        }

        sc.final_hidden = h_last;
        double y = model.head.b;
        for (std::size_t u = 0; u < h_last.size(); ++u) y += model.head.w[u] * h_last[u];
        preds[s] = y;
    }
    return {std::move(preds), std::move(cache)};
}

// ============================================================================
// Loss
// ============================================================================

/// Batch-mean squared error and its gradient w.r.t. the predictions.
inline std::pair<double, std::vector<double>> mse_loss(const std::vector<double>& pred,
                                                       const std::vector<double>& target) {
    if (pred.size() != target.size())
        fail(ErrorCode::LengthMismatch, std::to_string(pred.size()) + " pred vs " +
                                            std::to_string(target.size()) + " target");
    if (pred.empty()) fail(ErrorCode::LengthMismatch, "empty prediction vector");

    const double inv_n = 1.0 / static_cast<double>(pred.size());
    double loss = 0.0;
    std::vector<double> grad(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - target[i];
        loss += e * e;
        grad[i] = 2.0 * e * inv_n;
    }
    return {loss * inv_n, std::move(grad)};
}

// ============================================================================
// Backward pass (BPTT)
// ============================================================================

struct LayerGrads {
    Matrix dW, dU;
    std::vector<double> db;
};

struct LstmGradients {
    std::vector<LayerGrads> layers;
    std::vector<double> head_w;
    double head_b = 0.0;
};

inline LstmGradients zero_gradients(const LstmModel& model) {
    LstmGradients g;
    for (const auto& p : model.layers) {
        LayerGrads lg;
        lg.dW = Matrix(4 * p.hidden_size, p.input_size);
        lg.dU = Matrix(4 * p.hidden_size, p.hidden_size);
        lg.db.assign(4 * p.hidden_size, 0.0);
        g.layers.push_back(std::move(lg));
    }
    g.head_w.assign(model.head.w.size(), 0.0);
    return g;
}

/// Exact gradients of the loss w.r.t. every parameter, accumulated over time
/// steps and the batch. `loss_grad` carries d(loss)/d(prediction) per sample,
/// so whatever batch-mean convention the loss used flows through unchanged.
/// Dropout masks recorded at forward time are replayed.
inline LstmGradients backward(const LstmModel& model, const ForwardCache& cache,
                              const std::vector<double>& loss_grad) {
    if (cache.layer_sizes != model.layer_sizes() || cache.seq_len != model.seq_len)
        fail(ErrorCode::StaleCache, "cache shapes do not match the model");
    if (cache.samples.size() != loss_grad.size())
        fail(ErrorCode::StaleCache, "cache batch size does not match loss gradient");

    const int n_layers = static_cast<int>(model.layers.size());
    const int seq = model.seq_len;
    LstmGradients grads = zero_gradients(model);

    // column-access transposes, shared across the batch
    std::vector<Matrix> w_t(n_layers), u_t(n_layers);
    for (int l = 0; l < n_layers; ++l) {
        if (l > 0) w_t[l] = model.layers[l].W.transposed();
        u_t[l] = model.layers[l].U.transposed();
    }

    for (std::size_t s = 0; s < cache.samples.size(); ++s) {
        const SampleCache& sc = cache.samples[s];
        const double dpred = loss_grad[s];

        for (std::size_t u = 0; u < grads.head_w.size(); ++u)
            grads.head_w[u] += dpred * sc.final_hidden[u];
        grads.head_b += dpred;

        // d(loss)/d(layer output h_t) per step, for the layer being processed
        std::vector<std::vector<double>> dh_seq(seq);
        const int top_h = model.layers[n_layers - 1].hidden_size;
        for (int t = 0; t < seq; ++t) dh_seq[t].assign(top_h, 0.0);
        for (int u = 0; u < top_h; ++u) dh_seq[seq - 1][u] = dpred * model.head.w[u];

        for (int l = n_layers - 1; l >= 0; --l) {
            const LstmLayerParams& p = model.layers[l];
            const LayerCache& lc = sc.layers[l];
            LayerGrads& lg = grads.layers[l];
            const int h = p.hidden_size;

            // dropout applied to this layer's output before the layer above
            if (!lc.drop_mask.empty()) {
                for (int t = 0; t < seq; ++t)
                    for (int u = 0; u < h; ++u)
                        dh_seq[t][u] *= lc.drop_mask[static_cast<std::size_t>(t) * h + u];
            }

            std::vector<std::vector<double>> dx_seq;
            if (l > 0) {
                dx_seq.resize(seq);
                for (int t = 0; t < seq; ++t) dx_seq[t].assign(p.input_size, 0.0);
            }

            std::vector<double> dh_carry(h, 0.0), dc_carry(h, 0.0), dz(4 * h);
            for (int t = seq - 1; t >= 0; --t) {
                const CellCache& cc = lc.steps[t];
                for (int u = 0; u < h; ++u) {
                    const double dh = dh_seq[t][u] + dh_carry[u];
                    const double i = cc.gate_i[u], f = cc.gate_f[u];
                    const double g = cc.gate_g[u], o = cc.gate_o[u];
                    const double tc = cc.tanh_c[u];
                    const double dc = dc_carry[u] + dh * o * (1.0 - tc * tc);
                    dz[u] = dc * g * i * (1.0 - i);
                    dz[h + u] = dc * cc.c_prev[u] * f * (1.0 - f);
                    dz[2 * h + u] = dc * i * (1.0 - g * g);
                    dz[3 * h + u] = dh * tc * o * (1.0 - o);
                    dc_carry[u] = dc * f;
                }

                for (int r = 0; r < 4 * h; ++r) {
                    const double d = dz[r];
                    if (d == 0.0) continue;
                    double* dw = lg.dW.row(r);
                    for (int c = 0; c < p.input_size; ++c) dw[c] += d * cc.x[c];
                    double* du = lg.dU.row(r);
                    for (int c = 0; c < h; ++c) du[c] += d * cc.h_prev[c];
                    lg.db[r] += d;
                }

                for (int c = 0; c < h; ++c) {
                    const double* ur = u_t[l].row(c);
                    double acc = 0.0;
                    for (int r = 0; r < 4 * h; ++r) acc += ur[r] * dz[r];
                    dh_carry[c] = acc;
                }
                if (l > 0) {
                    for (int c = 0; c < p.input_size; ++c) {
                        const double* wr = w_t[l].row(c);
                        double acc = 0.0;
                        for (int r = 0; r < 4 * h; ++r) acc += wr[r] * dz[r];
                        dx_seq[t][c] = acc;
                    }
                }
            }
            if (l > 0) dh_seq = std::move(dx_seq);
        }
    }
    return grads;
}

// ============================================================================
// Parameter flattening
// ============================================================================

// Flat order: per layer W (row-major), U (row-major), b; then head w, head b.
inline std::size_t parameter_count(const LstmModel& model) {
    std::size_t n = 0;
    for (const auto& p : model.layers)
        n += p.W.data().size() + p.U.data().size() + p.b.size();
    return n + model.head.w.size() + 1;
}

inline std::vector<double> flatten_parameters(const LstmModel& model) {
    std::vector<double> flat;
    flat.reserve(parameter_count(model));
    for (const auto& p : model.layers) {
        flat.insert(flat.end(), p.W.data().begin(), p.W.data().end());
        flat.insert(flat.end(), p.U.data().begin(), p.U.data().end());
        flat.insert(flat.end(), p.b.begin(), p.b.end());
    }
    flat.insert(flat.end(), model.head.w.begin(), model.head.w.end());
    flat.push_back(model.head.b);
    return flat;
}

inline void assign_parameters(LstmModel& model, const std::vector<double>& flat) {
    if (flat.size() != parameter_count(model))
        fail(ErrorCode::ShapeMismatch, "flat parameter vector has the wrong length");
    std::size_t k = 0;
    for (auto& p : model.layers) {
        for (double& v : p.W.data()) v = flat[k++];
        for (double& v : p.U.data()) v = flat[k++];
        for (double& v : p.b) v = flat[k++];
    }
    for (double& v : model.head.w) v = flat[k++];
    model.head.b = flat[k++];
}

inline std::vector<double> flatten_gradients(const LstmModel& model, const LstmGradients& g) {
    if (g.layers.size() != model.layers.size() || g.head_w.size() != model.head.w.size())
        fail(ErrorCode::ShapeMismatch, "gradients do not match the model");
    std::vector<double> flat;
    flat.reserve(parameter_count(model));
    for (const auto& lg : g.layers) {
        flat.insert(flat.end(), lg.dW.data().begin(), lg.dW.data().end());
        flat.insert(flat.end(), lg.dU.data().begin(), lg.dU.data().end());
        flat.insert(flat.end(), lg.db.begin(), lg.db.end());
    }
    flat.insert(flat.end(), g.head_w.begin(), g.head_w.end());
    flat.push_back(g.head_b);
    return flat;
}

// ============================================================================
// Adam
// ============================================================================

struct AdamState {
    std::vector<double> m, v;
    long long t = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

inline AdamState make_adam_state(std::size_t n_params, double lr = 1e-3) {
    AdamState s;
    s.m.assign(n_params, 0.0);
    s.v.assign(n_params, 0.0);
    s.lr = lr;
    return s;
}

/// Standard Adam with bias correction:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
///   theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
inline void adam_step_flat(std::vector<double>& params, const std::vector<double>& grads,
                           AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        fail(ErrorCode::ShapeMismatch, "adam buffers disagree with parameter count");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double g = grads[k];
        state.m[k] = state.beta1 * state.m[k] + (1.0 - state.beta1) * g;
        state.v[k] = state.beta2 * state.v[k] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[k] / bc1;
        const double v_hat = state.v[k] / bc2;
        params[k] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

inline void adam_step(LstmModel& model, const LstmGradients& grads, AdamState& state) {
    std::vector<double> params = flatten_parameters(model);
    const std::vector<double> flat_grads = flatten_gradients(model, grads);
    adam_step_flat(params, flat_grads, state);
    assign_parameters(model, params);
}

// ============================================================================
// Training loop
// ============================================================================

struct TrainConfig {
    int batch_size = 32;
    int epochs = 100;
    double dropout = 0.0;
    double lr = 1e-3;
    std::uint64_t seed = 42;
    std::optional<double> clip_norm;   // global-norm clipping; off by default
    double validation_fraction = 0.1;  // chronological tail of the samples
};

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0; // NaN when no validation split
};

/// Mini-batch training: per epoch, a seed-deterministic shuffle of the train
/// indices, forward/backward/adam per batch (last batch may be smaller), then
/// one validation pass. The validation split is the chronological tail.
inline std::vector<EpochStats> train(LstmModel& model, const SupervisedSet& data,
                                     const TrainConfig& cfg) {
    if (data.size() == 0) fail(ErrorCode::EmptyData, "no training samples");
    if (cfg.batch_size < 1) fail(ErrorCode::BadArgument, "batch_size must be >= 1");
    if (cfg.epochs < 0) fail(ErrorCode::BadArgument, "epochs must be >= 0");
    if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0))
        fail(ErrorCode::BadArgument, "dropout must lie in [0,1)");
    if (!(cfg.validation_fraction >= 0.0 && cfg.validation_fraction < 1.0))
        fail(ErrorCode::BadArgument, "validation_fraction must lie in [0,1)");
    if (cfg.clip_norm && !(*cfg.clip_norm > 0.0))
        fail(ErrorCode::BadArgument, "clip_norm must be positive when set");
    if (data.seq_len != model.seq_len)
        fail(ErrorCode::ShapeMismatch, "data seq_len does not match the model");

    model.dropout_rate = cfg.dropout;

    const std::size_t n = data.size();
    const std::size_t n_val =
        static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(n)));
    const std::size_t n_train = n - n_val;
    if (n_train == 0) fail(ErrorCode::EmptyPartition, "validation split leaves no training data");

    Matrix val_inputs;
    std::vector<double> val_targets;
    if (n_val > 0) {
        val_inputs = Matrix(static_cast<int>(n_val), data.seq_len);
        for (std::size_t k = 0; k < n_val; ++k) {
            for (int j = 0; j < data.seq_len; ++j)
                val_inputs(static_cast<int>(k), j) =
                    data.inputs(static_cast<int>(n_train + k), j);
            val_targets.push_back(data.targets[n_train + k]);
        }
    }

    std::vector<EpochStats> history;
    if (cfg.epochs == 0) return history;

    Rng rng(cfg.seed);
    AdamState adam = make_adam_state(parameter_count(model), cfg.lr);
    std::vector<std::size_t> order(n_train);
    for (std::size_t i = 0; i < n_train; ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_sse = 0.0;

        for (std::size_t begin = 0; begin < n_train; begin += cfg.batch_size) {
            const std::size_t end = std::min(begin + cfg.batch_size, n_train);
            const int bsize = static_cast<int>(end - begin);
            Matrix batch(bsize, data.seq_len);
            std::vector<double> targets(bsize);
            for (int k = 0; k < bsize; ++k) {
                const std::size_t src = order[begin + k];
                for (int j = 0; j < data.seq_len; ++j)
                    batch(k, j) = data.inputs(static_cast<int>(src), j);
                targets[k] = data.targets[src];
            }

            auto [preds, cache] = forward(model, batch, true, &rng);
            auto [loss, loss_grad] = mse_loss(preds, targets);
            if (!std::isfinite(loss))
                fail(ErrorCode::NonFiniteLoss,
                     "epoch " + std::to_string(epoch) + ", batch at sample " +
                         std::to_string(begin) + ": loss = " + std::to_string(loss));

            LstmGradients grads = backward(model, cache, loss_grad);
            if (cfg.clip_norm) {
                std::vector<double> flat = flatten_gradients(model, grads);
                double sq = 0.0;
                for (double g : flat) sq += g * g;
                const double norm = std::sqrt(sq);
                if (norm > *cfg.clip_norm && norm > 0.0) {
                    const double scale = *cfg.clip_norm / norm;
                    for (auto& lg : grads.layers) {
                        for (double& v : lg.dW.data()) v *= scale;
                        for (double& v : lg.dU.data()) v *= scale;
                        for (double& v : lg.db) v *= scale;
                    }
                    for (double& v : grads.head_w) v *= scale;
                    grads.head_b *= scale;
                }
            }
            adam_step(model, grads, adam);
            epoch_sse += loss * bsize;
        }

        EpochStats stats;
        stats.train_loss = epoch_sse / static_cast<double>(n_train);
        if (n_val > 0) {
            auto [val_preds, val_cache] = forward(model, val_inputs, false);
            (void)val_cache;
            stats.val_loss = mse_loss(val_preds, val_targets).first;
        } else {
            stats.val_loss = std::numeric_limits<double>::quiet_NaN();
        }
        history.push_back(stats);
    }
    return history;
}

// ============================================================================
// Forecasting
// ============================================================================

inline double predict_one(const LstmModel& model, const std::vector<double>& window) {
    Matrix batch(1, model.seq_len);
    for (int j = 0; j < model.seq_len; ++j) batch(0, j) = window[static_cast<std::size_t>(j)];
    return forward(model, batch, false).first[0];
}

/// Recursive closed-loop forecast: each prediction is appended to the window
/// and the oldest value dropped. Inference mode throughout.
inline std::vector<double> predict_horizon(const LstmModel& model,
                                           const std::vector<double>& seed_window, int horizon) {
    if (static_cast<int>(seed_window.size()) != model.seq_len)
        fail(ErrorCode::BadWindow, "seed window length " + std::to_string(seed_window.size()) +
                                       " != model seq_len " + std::to_string(model.seq_len));
    if (horizon < 1) fail(ErrorCode::BadArgument, "horizon must be positive");

    std::vector<double> window = seed_window;
    std::vector<double> out;
    out.reserve(horizon);
    for (int step = 0; step < horizon; ++step) {
        const double y = predict_one(model, window);
        out.push_back(y);
        window.erase(window.begin());
        window.push_back(y);
    }
    return out;
}

} // namespace emicast

#endif // EMICAST_LSTM_HPP
