#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace mergesim {

/// One fully-connected layer; weights are row-major (out x in).
template <typename T>
struct DenseLayer {
    int in = 0;
    int out = 0;
    std::vector<T> w;
    std::vector<T> b;
};

/// Cascaded dense network: feature-extractor and function-approximator
/// stages are just consecutive hidden layers with ReLU between them and a
/// linear output head.
template <typename T>
struct DenseNet {
    std::vector<DenseLayer<T>> layers;

    int input_width() const { return layers.empty() ? 0 : layers.front().in; }
    int output_width() const { return layers.empty() ? 0 : layers.back().out; }

    size_t parameter_count() const {
        size_t n = 0;
        for (const auto& l : layers) n += l.w.size() + l.b.size();
        return n;
    }

    template <typename U>
    DenseNet<U> cast() const {
        DenseNet<U> out;
        out.layers.reserve(layers.size());
        for (const auto& l : layers) {
            DenseLayer<U> nl{l.in, l.out, {}, {}};
            nl.w.assign(l.w.begin(), l.w.end());
            nl.b.assign(l.b.begin(), l.b.end());
            out.layers.push_back(std::move(nl));
        }
        return out;
    }
};

/// He-style uniform initialization (variance 2/fan_in), zero biases,
/// deterministic per seed.
template <typename T>
DenseNet<T> init_network(int input_width, const std::vector<int>& hidden, int outputs,
                         uint64_t seed) {
    if (input_width <= 0) throw std::invalid_argument("init_network: bad input width");
    std::mt19937_64 rng(seed);
    DenseNet<T> net;
    std::vector<int> dims{input_width};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(outputs);
    for (size_t i = 0; i + 1 < dims.size(); ++i) {
        DenseLayer<T> layer{dims[i], dims[i + 1], {}, {}};
        const double limit = std::sqrt(6.0 / dims[i]);
        std::uniform_real_distribution<double> dist(-limit, limit);
        layer.w.resize(static_cast<size_t>(layer.in) * layer.out);
        for (auto& w : layer.w) w = static_cast<T>(dist(rng));
        layer.b.assign(layer.out, T{0});
        net.layers.push_back(std::move(layer));
    }
    return net;
}

namespace detail {

template <typename T>
void affine(const DenseLayer<T>& l, std::span<const T> x, std::vector<T>& out) {
    out.resize(l.out);
    for (int i = 0; i < l.out; ++i) {
        T acc = l.b[i];
        const T* row = l.w.data() + static_cast<size_t>(i) * l.in;
        for (int j = 0; j < l.in; ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
}

} // namespace detail

/// Forward pass: ReLU after every layer except the last.
template <typename T>
std::vector<T> forward(const DenseNet<T>& net, std::span<const T> input) {
    if (static_cast<int>(input.size()) != net.input_width())
        throw std::invalid_argument("forward: input width mismatch");
    std::vector<T> cur(input.begin(), input.end());
    std::vector<T> next;
    for (size_t li = 0; li < net.layers.size(); ++li) {
        detail::affine(net.layers[li], std::span<const T>(cur), next);
        if (li + 1 < net.layers.size())
            for (auto& v : next) v = std::max(v, T{0});
        std::swap(cur, next);
    }
    return cur;
}

/// Per-parameter gradient buffers, accumulated in 64-bit.
struct Gradients {
    struct Layer {
        std::vector<double> w;
        std::vector<double> b;
    };
    std::vector<Layer> layers;

    template <typename T>
    static Gradients zeros_like(const DenseNet<T>& net) {
        Gradients g;
        g.layers.reserve(net.layers.size());
        for (const auto& l : net.layers)
            g.layers.push_back({std::vector<double>(l.w.size(), 0.0),
                                std::vector<double>(l.b.size(), 0.0)});
        return g;
    }
};

template <typename T>
struct TransitionBatch {
    std::vector<std::vector<T>> obs;
    std::vector<int> action;
    std::vector<double> reward;
    std::vector<std::vector<T>> next_obs;
    std::vector<uint8_t> terminal;

    size_t size() const { return obs.size(); }
};

/// Mean squared TD error against the frozen target network; terminal
/// transitions bootstrap nothing.
template <typename T>
double td_loss(const DenseNet<T>& net, const DenseNet<T>& target_net,
               const TransitionBatch<T>& batch, double gamma) {
    if (batch.size() == 0) throw std::invalid_argument("td_loss: empty batch");
    double loss = 0.0;
    for (size_t s = 0; s < batch.size(); ++s) {
        double target = batch.reward[s];
        if (!batch.terminal[s]) {
            const auto q_next = forward(target_net, std::span<const T>(batch.next_obs[s]));
            target += gamma * static_cast<double>(
                                  *std::max_element(q_next.begin(), q_next.end()));
        }
        const auto q = forward(net, std::span<const T>(batch.obs[s]));
        const double residual = static_cast<double>(q[batch.action[s]]) - target;
        loss += residual * residual;
    }
    return loss / static_cast<double>(batch.size());
}

/// Loss plus analytic gradients w.r.t. the online network only (the target
/// network is detached).
template <typename T>
std::pair<double, Gradients> td_loss_and_grads(const DenseNet<T>& net,
                                               const DenseNet<T>& target_net,
                                               const TransitionBatch<T>& batch, double gamma) {
    if (batch.size() == 0) throw std::invalid_argument("td_loss_and_grads: empty batch");
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("td_loss_and_grads: gamma out of [0,1)");

    const size_t n_layers = net.layers.size();
    Gradients grads = Gradients::zeros_like(net);
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    std::vector<std::vector<T>> acts(n_layers + 1);  // acts[0] = input
    std::vector<std::vector<T>> pre(n_layers);       // pre-activation per layer

    for (size_t s = 0; s < batch.size(); ++s) {
        double target = batch.reward[s];
        if (!batch.terminal[s]) {
            const auto q_next = forward(target_net, std::span<const T>(batch.next_obs[s]));
            target += gamma * static_cast<double>(
                                  *std::max_element(q_next.begin(), q_next.end()));
        }
        if (!std::isfinite(target)) throw std::runtime_error("td target non-finite");

        acts[0] = batch.obs[s];
        for (size_t li = 0; li < n_layers; ++li) {
            detail::affine(net.layers[li], std::span<const T>(acts[li]), pre[li]);
            acts[li + 1] = pre[li];
            if (li + 1 < n_layers)
                for (auto& v : acts[li + 1]) v = std::max(v, T{0});
        }

        const double residual =
            static_cast<double>(acts[n_layers][batch.action[s]]) - target;
        loss += residual * residual * inv_n;

        // d(loss)/d(output): nonzero only at the taken action
        std::vector<double> delta(net.layers.back().out, 0.0);
        delta[batch.action[s]] = 2.0 * residual * inv_n;

        for (size_t li = n_layers; li-- > 0;) {
            const auto& layer = net.layers[li];
            auto& gl = grads.layers[li];
            const auto& input = acts[li];
            for (int i = 0; i < layer.out; ++i) {
                const double di = delta[i];
                if (di == 0.0) continue;
                gl.b[i] += di;
                double* grow = gl.w.data() + static_cast<size_t>(i) * layer.in;
                for (int j = 0; j < layer.in; ++j)
                    grow[j] += di * static_cast<double>(input[j]);
            }
            if (li == 0) break;
            std::vector<double> prev(layer.in, 0.0);
            for (int i = 0; i < layer.out; ++i) {
                const double di = delta[i];
                if (di == 0.0) continue;
                const T* wrow = layer.w.data() + static_cast<size_t>(i) * layer.in;
                for (int j = 0; j < layer.in; ++j)
                    prev[j] += di * static_cast<double>(wrow[j]);
            }
            // ReLU mask of the previous layer
            for (int j = 0; j < layer.in; ++j)
                if (pre[li - 1][j] <= T{0}) prev[j] = 0.0;
            delta = std::move(prev);
        }
    }
    if (!std::isfinite(loss)) throw std::runtime_error("td loss non-finite");
    return {loss, std::move(grads)};
}

/// Adam optimizer state; moments are kept in 64-bit regardless of the
/// parameter type.
struct AdamState {
    double alpha = 0.0005;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;

    template <typename T>
    static AdamState init(const DenseNet<T>& net, double alpha = 0.0005) {
        AdamState st;
        st.alpha = alpha;
        for (const auto& l : net.layers) {
            st.m_w.emplace_back(l.w.size(), 0.0);
            st.v_w.emplace_back(l.w.size(), 0.0);
            st.m_b.emplace_back(l.b.size(), 0.0);
            st.v_b.emplace_back(l.b.size(), 0.0);
        }
        return st;
    }
};

template <typename T>
void adam_step(DenseNet<T>& net, const Gradients& grads, AdamState& st) {
    ++st.step;
    const double bc1 = 1.0 - std::pow(st.beta1, st.step);
    const double bc2 = 1.0 - std::pow(st.beta2, st.step);
    auto update = [&](std::vector<T>& params, const std::vector<double>& g,
                      std::vector<double>& m, std::vector<double>& v) {
        for (size_t i = 0; i < params.size(); ++i) {
            m[i] = st.beta1 * m[i] + (1.0 - st.beta1) * g[i];
            v[i] = st.beta2 * v[i] + (1.0 - st.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            params[i] = static_cast<T>(static_cast<double>(params[i]) -
                                       st.alpha * mhat / (std::sqrt(vhat) + st.epsilon));
        }
    };
    for (size_t li = 0; li < net.layers.size(); ++li) {
        update(net.layers[li].w, grads.layers[li].w, st.m_w[li], st.v_w[li]);
        update(net.layers[li].b, grads.layers[li].b, st.m_b[li], st.v_b[li]);
    }
}

/// Central-difference probe of the analytic gradients on randomly selected
/// parameters; returns the maximum relative error over the probes.
template <typename T>
double finite_diff_check(const DenseNet<T>& net, const DenseNet<T>& target_net,
                         const TransitionBatch<T>& batch, double gamma, int probes,
                         std::mt19937_64& rng, double step = 1e-4) {
    if (probes < 1) throw std::invalid_argument("finite_diff_check: probes < 1");
    auto [loss, grads] = td_loss_and_grads(net, target_net, batch, gamma);
    (void)loss;

    DenseNet<T> work = net;
    double max_rel = 0.0;
    std::uniform_int_distribution<size_t> layer_dist(0, net.layers.size() - 1);
    for (int p = 0; p < probes; ++p) {
        const size_t li = layer_dist(rng);
        auto& layer = work.layers[li];
        const bool probe_bias = std::uniform_int_distribution<int>(0, 9)(rng) == 0;
        auto& params = probe_bias ? layer.b : layer.w;
        const auto& g = probe_bias ? grads.layers[li].b : grads.layers[li].w;
        std::uniform_int_distribution<size_t> idx_dist(0, params.size() - 1);
        const size_t idx = idx_dist(rng);

        const T saved = params[idx];
        params[idx] = static_cast<T>(static_cast<double>(saved) + step);
        const double loss_plus = td_loss(work, target_net, batch, gamma);
        params[idx] = static_cast<T>(static_cast<double>(saved) - step);
        const double loss_minus = td_loss(work, target_net, batch, gamma);
        params[idx] = saved;

        const double numeric = (loss_plus - loss_minus) / (2.0 * step);
        const double analytic = g[idx];
        const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
        max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
    }
    return max_rel;
}

} // namespace mergesim
