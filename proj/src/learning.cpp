#include "sift/learning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "sift/errors.hpp"
#include "sift/io.hpp"
#include "sift/kernels.hpp"
#include "sift/rng.hpp"

namespace sift {

namespace {

// One 3-layer perceptron laid out flat: W1 b1 W2 b2 W3 b3, row-major weights.
struct MlpView {
    int in = 0, hidden = 0, out = 0;
    const double *w1, *b1, *w2, *b2, *w3, *b3;

    static std::size_t size(int in, int hidden, int out) {
        return std::size_t(hidden) * in + hidden + std::size_t(hidden) * hidden + hidden +
               std::size_t(out) * hidden + out;
    }
};

MlpView mlp_view(const double* base, int in, int hidden, int out) {
    MlpView v;
    v.in = in;
    v.hidden = hidden;
    v.out = out;
    v.w1 = base;
    v.b1 = v.w1 + std::size_t(hidden) * in;
    v.w2 = v.b1 + hidden;
    v.b2 = v.w2 + std::size_t(hidden) * hidden;
    v.w3 = v.b2 + hidden;
    v.b3 = v.w3 + std::size_t(out) * hidden;
    return v;
}

void relu_inplace(double* x, int n) {
    for (int i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

// Forward pass; z1/z2 receive pre-activation values when caching for backward.
void mlp_forward(const MlpView& m, const double* x, double* z1, double* z2, double* out) {
    simd::matvec(m.w1, m.hidden, m.in, x, z1);
    for (int i = 0; i < m.hidden; ++i) z1[i] += m.b1[i];
    std::vector<double> a1(z1, z1 + m.hidden);
    relu_inplace(a1.data(), m.hidden);
    simd::matvec(m.w2, m.hidden, m.hidden, a1.data(), z2);
    for (int i = 0; i < m.hidden; ++i) z2[i] += m.b2[i];
    std::vector<double> a2(z2, z2 + m.hidden);
    relu_inplace(a2.data(), m.hidden);
    simd::matvec(m.w3, m.out, m.hidden, a2.data(), out);
    for (int i = 0; i < m.out; ++i) out[i] += m.b3[i];
}

struct MlpGradView {
    double *w1, *b1, *w2, *b2, *w3, *b3;
};

MlpGradView mlp_grad_view(double* base, int in, int hidden, int out) {
    auto v = mlp_view(base, in, hidden, out);
    return {const_cast<double*>(v.w1), const_cast<double*>(v.b1), const_cast<double*>(v.w2),
            const_cast<double*>(v.b2), const_cast<double*>(v.w3), const_cast<double*>(v.b3)};
}

// Backward from d_out; x/z1/z2 are the cached forward values. Accumulates
// parameter gradients; optionally emits the input gradient.
void mlp_backward(const MlpView& m, const double* x, const double* z1, const double* z2,
                  const double* d_out, MlpGradView g, double* d_in) {
    std::vector<double> a1(z1, z1 + m.hidden), a2(z2, z2 + m.hidden);
    relu_inplace(a1.data(), m.hidden);
    relu_inplace(a2.data(), m.hidden);

    // Layer 3: out = W3 a2 + b3
    std::vector<double> d_a2(m.hidden, 0.0);
    for (int r = 0; r < m.out; ++r) {
        simd::axpy(d_out[r], a2.data(), g.w3 + std::size_t(r) * m.hidden, m.hidden);
        g.b3[r] += d_out[r];
        simd::axpy(d_out[r], m.w3 + std::size_t(r) * m.hidden, d_a2.data(), m.hidden);
    }
    // Layer 2: a2 = relu(W2 a1 + b2)
    std::vector<double> d_z2(m.hidden);
    for (int i = 0; i < m.hidden; ++i) d_z2[i] = z2[i] > 0.0 ? d_a2[i] : 0.0;
    std::vector<double> d_a1(m.hidden, 0.0);
    for (int r = 0; r < m.hidden; ++r) {
        simd::axpy(d_z2[r], a1.data(), g.w2 + std::size_t(r) * m.hidden, m.hidden);
        g.b2[r] += d_z2[r];
        simd::axpy(d_z2[r], m.w2 + std::size_t(r) * m.hidden, d_a1.data(), m.hidden);
    }
    // Layer 1: a1 = relu(W1 x + b1)
    std::vector<double> d_z1(m.hidden);
    for (int i = 0; i < m.hidden; ++i) d_z1[i] = z1[i] > 0.0 ? d_a1[i] : 0.0;
    for (int r = 0; r < m.hidden; ++r) {
        simd::axpy(d_z1[r], x, g.w1 + std::size_t(r) * m.in, m.in);
        g.b1[r] += d_z1[r];
        if (d_in) simd::axpy(d_z1[r], m.w1 + std::size_t(r) * m.in, d_in, m.in);
    }
}

}  // namespace

SetRegressor::SetRegressor(int feature_dim_, int num_classes_, int width_, std::uint64_t init_seed)
    : feature_dim(feature_dim_), num_classes(num_classes_), width(width_) {
    if (feature_dim < 1 || num_classes < 2 || width < 1)
        throw ConfigError("SetRegressor: need feature_dim >= 1, num_classes >= 2, width >= 1");
    params.resize(param_count());

    auto rng = make_engine(init_seed);
    // Uniform fan-in init. Each layer block is W then b in storage order,
    // both drawn with the same 1/sqrt(fan_in) bound.
    double* p = params.data();
    auto fill_layer = [&](int rows, int cols) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (std::size_t i = 0; i < std::size_t(rows) * cols + rows; ++i) *p++ = u(rng);
    };
    fill_layer(width, embed_dim());  // phi
    fill_layer(width, width);
    fill_layer(width, width);
    fill_layer(width, width);  // rho
    fill_layer(width, width);
    fill_layer(1, width);
}

std::size_t SetRegressor::param_count() const {
    return MlpView::size(embed_dim(), width, width) + MlpView::size(width, width, 1);
}

namespace {

void embed_point(const SetRegressor& m, const DataPoint& p, double* out) {
    std::copy(p.features.begin(), p.features.end(), out);
    std::fill(out + m.feature_dim, out + m.embed_dim(), 0.0);
    out[m.feature_dim + p.label] = 1.0;
}

MlpView phi_view(const SetRegressor& m) { return mlp_view(m.params.data(), m.embed_dim(), m.width, m.width); }

MlpView rho_view(const SetRegressor& m) {
    return mlp_view(m.params.data() + MlpView::size(m.embed_dim(), m.width, m.width), m.width, m.width, 1);
}

}  // namespace

void SetRegressor::phi_forward(const DataPoint& p, double* out) const {
    if (static_cast<int>(p.features.size()) != feature_dim)
        throw ConfigError("SetRegressor: point feature dimension mismatch");
    if (p.label < 0 || p.label >= num_classes) throw ConfigError("SetRegressor: point label out of range");
    std::vector<double> x(embed_dim()), z1(width), z2(width);
    embed_point(*this, p, x.data());
    mlp_forward(phi_view(*this), x.data(), z1.data(), z2.data(), out);
}

double SetRegressor::rho_forward(const double* pooled) const {
    std::vector<double> z1(width), z2(width);
    double out;
    mlp_forward(rho_view(*this), pooled, z1.data(), z2.data(), &out);
    return out;
}

double SetRegressor::predict(const Dataset& data, const SubsetMask& mask) const {
    if (mask.universe_size() != data.size()) throw ConfigError("SetRegressor::predict: mask universe mismatch");
    std::vector<double> pooled(width, 0.0), h(width);
    for (int i : mask.members()) {  // ascending: fixed summation order
        phi_forward(data.points[i], h.data());
        simd::axpy(1.0, h.data(), pooled.data(), width);
    }
    return rho_forward(pooled.data()) * target_std + target_mean;
}

double marginal_gain(const SetRegressor& model, const Dataset& data, const SubsetMask& base, int candidate) {
    if (candidate < 0 || candidate >= data.size()) throw ConfigError("marginal_gain: candidate out of range");
    if (base.contains(candidate)) return 0.0;
    std::vector<double> pooled(model.width, 0.0), h(model.width);
    for (int i : base.members()) {
        model.phi_forward(data.points[i], h.data());
        simd::axpy(1.0, h.data(), pooled.data(), model.width);
    }
    const double before = model.rho_forward(pooled.data());
    model.phi_forward(data.points[candidate], h.data());
    simd::axpy(1.0, h.data(), pooled.data(), model.width);
    const double after = model.rho_forward(pooled.data());
    return (after - before) * model.target_std;
}

RegressorEvaluator::RegressorEvaluator(const SetRegressor& model, const Dataset& data)
    : model_(model), n_(data.size()), phi_(std::size_t(data.size()) * model.width) {
    for (int i = 0; i < n_; ++i) model_.phi_forward(data.points[i], phi_.data() + std::size_t(i) * model_.width);
}

double RegressorEvaluator::value(const SubsetMask& mask) const {
    if (mask.universe_size() != n_) throw ConfigError("RegressorEvaluator: mask universe mismatch");
    std::vector<double> pooled(model_.width, 0.0);
    for (int i : mask.members())
        simd::axpy(1.0, phi_.data() + std::size_t(i) * model_.width, pooled.data(), model_.width);
    return model_.rho_forward(pooled.data()) * model_.target_std + model_.target_mean;
}

namespace {

// Cached activations for one sample (all member points plus rho).
struct SampleTape {
    std::vector<double> x;       // |S| x embed
    std::vector<double> pz1;     // |S| x width (phi pre-activations)
    std::vector<double> pz2;
    std::vector<double> phi_out; // |S| x width
    std::vector<double> pooled;  // width
    std::vector<double> rz1, rz2;  // width
    double yhat = 0.0;
};

double forward_sample(const SetRegressor& m, const Dataset& data, const SubsetMask& mask, SampleTape& t) {
    const int w = m.width, e = m.embed_dim();
    const int s = mask.size();
    t.x.resize(std::size_t(s) * e);
    t.pz1.resize(std::size_t(s) * w);
    t.pz2.resize(std::size_t(s) * w);
    t.phi_out.resize(std::size_t(s) * w);
    t.pooled.assign(w, 0.0);
    t.rz1.resize(w);
    t.rz2.resize(w);

    const auto phi = phi_view(m);
    for (int j = 0; j < s; ++j) {
        const int i = mask.members()[j];
        embed_point(m, data.points[i], t.x.data() + std::size_t(j) * e);
        mlp_forward(phi, t.x.data() + std::size_t(j) * e, t.pz1.data() + std::size_t(j) * w,
                    t.pz2.data() + std::size_t(j) * w, t.phi_out.data() + std::size_t(j) * w);
        simd::axpy(1.0, t.phi_out.data() + std::size_t(j) * w, t.pooled.data(), w);
    }
    mlp_forward(rho_view(m), t.pooled.data(), t.rz1.data(), t.rz2.data(), &t.yhat);
    return t.yhat;
}

// Backward for one sample given dL/dyhat; accumulates into flat `grad`.
void backward_sample(const SetRegressor& m, const SubsetMask& mask, const SampleTape& t, double d_yhat,
                     std::vector<double>& grad) {
    const int w = m.width, e = m.embed_dim();
    const std::size_t phi_size = MlpView::size(e, w, w);
    auto rho_g = mlp_grad_view(grad.data() + phi_size, w, w, 1);
    auto phi_g = mlp_grad_view(grad.data(), e, w, w);

    std::vector<double> d_pooled(w, 0.0);
    mlp_backward(rho_view(m), t.pooled.data(), t.rz1.data(), t.rz2.data(), &d_yhat, rho_g,
                 d_pooled.data());
    const auto phi = phi_view(m);
    const int s = mask.size();
    for (int j = 0; j < s; ++j) {
        mlp_backward(phi, t.x.data() + std::size_t(j) * e, t.pz1.data() + std::size_t(j) * w,
                     t.pz2.data() + std::size_t(j) * w, d_pooled.data(), phi_g, nullptr);
    }
}

void standardize_targets(SetRegressor& model, const std::vector<UtilitySample>& samples) {
    if (samples.empty()) throw ConfigError("train: no samples");
    double mean = 0.0;
    for (const auto& s : samples) mean += s.utility;
    mean /= samples.size();
    double var = 0.0;
    for (const auto& s : samples) var += (s.utility - mean) * (s.utility - mean);
    var /= samples.size();
    model.target_mean = mean;
    model.target_std = var > 0.0 ? std::sqrt(var) : 1.0;
}

}  // namespace

TrainResult train(SetRegressor& model, const Dataset& data, const std::vector<UtilitySample>& samples,
                  const TrainConfig& cfg) {
    if (cfg.epochs < 0 || cfg.batch_size < 1) throw ConfigError("train: bad epochs or batch size");
    standardize_targets(model, samples);
    TrainResult result;
    if (cfg.epochs == 0) return result;

    const std::size_t np = model.params.size();
    std::vector<double> grad(np), m1(np, 0.0), m2(np, 0.0);
    std::vector<int> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    auto rng = make_engine(cfg.shuffle_seed);
    SampleTape tape;
    std::int64_t step = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double sse = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            const double inv = 1.0 / static_cast<double>(end - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t b = start; b < end; ++b) {
                const auto& sample = samples[order[b]];
                const double target = (sample.utility - model.target_mean) / model.target_std;
                const double yhat = forward_sample(model, data, sample.mask, tape);
                const double err = yhat - target;
                sse += err * err;
                backward_sample(model, sample.mask, tape, 2.0 * err * inv, grad);
            }
            // Adam with bias correction.
            ++step;
            const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t i = 0; i < np; ++i) {
                m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * grad[i];
                m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
                model.params[i] -= cfg.learning_rate * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + cfg.adam_epsilon);
            }
        }
        const double epoch_mse = sse / samples.size() * model.target_std * model.target_std;
        if (!std::isfinite(epoch_mse))
            throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch));
        result.loss_trace.push_back(epoch_mse);
    }
    return result;
}

double mse_loss(const SetRegressor& model, const Dataset& data, const std::vector<UtilitySample>& samples) {
    if (samples.empty()) throw ConfigError("mse_loss: no samples");
    SampleTape tape;
    double sse = 0.0;
    for (const auto& s : samples) {
        const double target = (s.utility - model.target_mean) / model.target_std;
        const double err = forward_sample(model, data, s.mask, tape) - target;
        sse += err * err;
    }
    return sse / samples.size();
}

std::vector<double> mse_gradient(const SetRegressor& model, const Dataset& data,
                                 const std::vector<UtilitySample>& samples) {
    if (samples.empty()) throw ConfigError("mse_gradient: no samples");
    std::vector<double> grad(model.params.size(), 0.0);
    SampleTape tape;
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (const auto& s : samples) {
        const double target = (s.utility - model.target_mean) / model.target_std;
        const double err = forward_sample(model, data, s.mask, tape) - target;
        backward_sample(model, s.mask, tape, 2.0 * err * inv, grad);
    }
    return grad;
}

std::vector<UtilitySample> sample_utilities(const UtilityOracle& oracle, int m, SamplePolicy policy,
                                            int fixed_k, std::uint64_t seed,
                                            const std::string& persist_path) {
    if (m < 1) throw ConfigError("sample_utilities: need m >= 1");
    const int n = oracle.universe_size();

    // Masks are a pure function of (seed, index); regenerate all, resume evals.
    std::vector<UtilitySample> out(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i < m; ++i) {
        auto rng = make_engine(derive_seed(seed, static_cast<std::uint64_t>(i)));
        out[i].mask = sample_subset(n, policy, fixed_k, rng);
    }
    out[m].mask = SubsetMask(n);

    std::size_t have = 0;
    if (!persist_path.empty()) {
        const auto existing = maybe_read_samples(persist_path, n);
        have = std::min(existing.size(), out.size());
        for (std::size_t i = 0; i < have; ++i) {
            if (!(existing[i].mask == out[i].mask))
                throw IoError("sample_utilities: persisted samples disagree with this seed/policy");
            out[i].utility = existing[i].utility;
        }
    }

    int workers = 1;
    if (const char* env = std::getenv("SIFT_WORKERS")) {
        workers = std::clamp(std::atoi(env), 1, 64);
    }

    const std::size_t todo_begin = have;
    if (todo_begin < out.size()) {
        if (workers == 1) {
            for (std::size_t i = todo_begin; i < out.size(); ++i) {
                out[i].utility = oracle.eval(out[i].mask);
                if (!persist_path.empty()) append_sample(persist_path, out[i]);
            }
        } else {
            std::atomic<std::size_t> next{todo_begin};
            auto work = [&] {
                for (std::size_t i = next.fetch_add(1); i < out.size(); i = next.fetch_add(1))
                    out[i].utility = oracle.eval(out[i].mask);
            };
            std::vector<std::thread> pool;
            for (int t = 0; t < workers; ++t) pool.emplace_back(work);
            for (auto& t : pool) t.join();
            if (!persist_path.empty()) {
                for (std::size_t i = todo_begin; i < out.size(); ++i) append_sample(persist_path, out[i]);
            }
        }
    }
    return out;
}

}  // namespace sift
