#include "sift/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sift/errors.hpp"
#include "sift/kernels.hpp"
#include "sift/rng.hpp"

namespace sift {

namespace {

std::string mask_to_string(const SubsetMask& m) {
    std::string s = "{";
    for (std::size_t i = 0; i < m.members().size(); ++i) {
        if (i) s += ",";
        s += std::to_string(m.members()[i]);
    }
    return s + "}";
}

int majority_label(const std::vector<int>& labels, int num_classes) {
    std::vector<int> counts(num_classes, 0);
    for (int l : labels) counts[l]++;
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

TabularUtility::TabularUtility(int n) : n_(n) {
    if (n < 1) throw ConfigError("TabularUtility: empty universe");
    if (n > 62) throw CapacityError("TabularUtility: universe size exceeds the limit of 62");
}

void TabularUtility::set_entry(const SubsetMask& mask, double value) {
    if (mask.universe_size() != n_) throw ConfigError("TabularUtility: mask universe mismatch");
    entries_[mask.bits()] = value;
}

void TabularUtility::set_default(DefaultKind kind, std::vector<double> params) {
    const std::size_t need = kind == DefaultKind::constant ? 1 : kind == DefaultKind::affine_in_size ? 2 : 0;
    if (params.size() != need) throw ConfigError("TabularUtility: wrong default parameter count");
    default_kind_ = kind;
    default_params_ = std::move(params);
}

double TabularUtility::eval(const SubsetMask& mask) const {
    if (mask.universe_size() != n_) throw ConfigError("TabularUtility: mask universe mismatch");
    auto it = entries_.find(mask.bits());
    if (it != entries_.end()) return it->second;
    switch (default_kind_) {
        case DefaultKind::constant:
            return default_params_[0];
        case DefaultKind::affine_in_size:
            return default_params_[0] + default_params_[1] * mask.size();
        case DefaultKind::none:
            break;
    }
    throw OracleError("TabularUtility: no entry and no default for mask " + mask_to_string(mask));
}

std::vector<std::pair<SubsetMask, double>> TabularUtility::sorted_entries() const {
    std::vector<std::pair<std::uint64_t, double>> flat(entries_.begin(), entries_.end());
    std::sort(flat.begin(), flat.end());
    std::vector<std::pair<SubsetMask, double>> out;
    out.reserve(flat.size());
    for (auto& [bits, v] : flat) out.emplace_back(SubsetMask::from_bits(n_, bits), v);
    return out;
}

CachingOracle::CachingOracle(const UtilityOracle& inner) : inner_(inner) {
    const int n = inner.universe_size();
    if (n <= 20) {
        dense_.assign(std::size_t(1) << n, 0.0);
        dense_known_.assign(std::size_t(1) << n, 0);
    }
}

double CachingOracle::eval(const SubsetMask& mask) const {
    if (inner_.universe_size() > 64) {
        // No single-word key exists; pack the member list into a byte string.
        std::string key;
        key.reserve(mask.members().size() * sizeof(int));
        for (int m : mask.members())
            key.append(reinterpret_cast<const char*>(&m), sizeof(int));
        std::lock_guard<std::mutex> lock(mu_);
        auto it = wide_.find(key);
        if (it != wide_.end()) return it->second;
        const double v = inner_.eval(mask);
        ++inner_calls_;
        wide_.emplace(std::move(key), v);
        return v;
    }
    const std::uint64_t key = mask.bits();
    std::lock_guard<std::mutex> lock(mu_);
    if (!dense_.empty()) {
        if (!dense_known_[key]) {
            dense_[key] = inner_.eval(mask);
            dense_known_[key] = 1;
            ++inner_calls_;
        }
        return dense_[key];
    }
    auto it = sparse_.find(key);
    if (it != sparse_.end()) return it->second;
    const double v = inner_.eval(mask);
    ++inner_calls_;
    sparse_.emplace(key, v);
    return v;
}

std::uint64_t CachingOracle::inner_calls() const {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_calls_;
}

// ---- logistic proxy ----

int LogisticModel::predict(std::span<const double> x) const {
    if (constant_class >= 0) return constant_class;
    if (num_classes == 2) {
        const double z = simd::dot(weights.data(), x.data(), x.size()) + bias[0];
        return z >= 0.0 ? 1 : 0;  // p >= 0.5 goes to the positive class
    }
    int best = 0;
    double best_z = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < num_classes; ++c) {
        const double z = simd::dot(weights.data() + std::size_t(c) * dim, x.data(), x.size()) + bias[c];
        if (z > best_z) {
            best_z = z;
            best = c;
        }
    }
    return best;
}

LogisticModel train_logistic(const Dataset& data, const SubsetMask& mask, const LogisticTrainConfig& cfg) {
    if (mask.universe_size() != data.size()) throw ConfigError("train_logistic: mask universe mismatch");
    if (mask.empty()) throw ConfigError("train_logistic: empty training mask");

    std::vector<const DataPoint*> pts;
    pts.reserve(mask.size());
    std::vector<int> labels;
    for (int i : mask.members()) {
        pts.push_back(&data.points[i]);
        labels.push_back(data.points[i].label);
    }

    LogisticModel model;
    model.dim = data.feature_dim();
    model.num_classes = data.num_classes;

    const bool single_class = std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels[0]; });
    if (single_class) {
        model.constant_class = labels[0];
        return model;
    }

    const int rows = data.num_classes == 2 ? 1 : data.num_classes;
    const int d = model.dim;
    const int m = mask.size();
    model.weights.assign(std::size_t(rows) * d, 0.0);
    model.bias.assign(rows, 0.0);

    auto rng = make_engine(cfg.seed);
    std::uniform_real_distribution<double> init(-0.01, 0.01);
    for (double& w : model.weights) w = init(rng);

    std::vector<double> grad(d);
    for (int r = 0; r < rows; ++r) {
        double* w = model.weights.data() + std::size_t(r) * d;
        double& b = model.bias[r];
        const int positive = data.num_classes == 2 ? 1 : r;
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double gb = 0.0;
            for (int i = 0; i < m; ++i) {
                const double z = simd::dot(w, pts[i]->features.data(), d) + b;
                const double r_i = sigmoid(z) - (labels[i] == positive ? 1.0 : 0.0);
                simd::axpy(r_i / m, pts[i]->features.data(), grad.data(), d);
                gb += r_i / m;
            }
            simd::axpy(cfg.l2, w, grad.data(), d);
            simd::axpy(-cfg.learning_rate, grad.data(), w, d);
            b -= cfg.learning_rate * gb;
        }
    }
    return model;
}

double logistic_ovr_loss(const Dataset& data, const SubsetMask& mask, int cls, std::span<const double> w,
                         double bias, double l2) {
    if (mask.empty()) throw ConfigError("logistic_ovr_loss: empty mask");
    const int d = data.feature_dim();
    if (static_cast<int>(w.size()) != d) throw ConfigError("logistic_ovr_loss: weight size mismatch");
    double loss = 0.0;
    for (int i : mask.members()) {
        const auto& p = data.points[i];
        const double z = simd::dot(w.data(), p.features.data(), d) + bias;
        const double y = p.label == cls ? 1.0 : 0.0;
        loss += softplus(z) - y * z;  // cross-entropy: -y log(p) - (1-y) log(1-p)
    }
    loss /= mask.size();
    loss += 0.5 * l2 * simd::dot(w.data(), w.data(), d);
    return loss;
}

int knn_predict(const Dataset& data, const SubsetMask& mask, int k, std::span<const double> query) {
    if (mask.empty()) throw ConfigError("knn_predict: empty training mask");
    if (k < 1) throw ConfigError("knn_predict: k must be positive");
    const int d = data.feature_dim();
    std::vector<std::pair<double, int>> by_dist;
    by_dist.reserve(mask.size());
    for (int i : mask.members()) {
        by_dist.emplace_back(simd::squared_distance(data.points[i].features.data(), query.data(), d), i);
    }
    // Ties in distance resolve toward the lower index (pair ordering).
    std::sort(by_dist.begin(), by_dist.end());
    const int take = std::min<int>(k, static_cast<int>(by_dist.size()));
    std::vector<int> counts(data.num_classes, 0);
    for (int t = 0; t < take; ++t) counts[data.points[by_dist[t].second].label]++;
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

// ---- proxy oracle ----

ProxyUtilityOracle::ProxyUtilityOracle(Dataset train, Dataset validation, ProxyKind kind, ProxyMetric metric,
                                       LogisticTrainConfig cfg, int knn_k)
    : train_(std::move(train)),
      validation_(std::move(validation)),
      kind_(kind),
      metric_(metric),
      cfg_(cfg),
      knn_k_(knn_k) {
    train_.validate();
    validation_.validate();
    if (train_.feature_dim() != validation_.feature_dim())
        throw ConfigError("ProxyUtilityOracle: train/validation feature dimensions differ");
    if (validation_.size() == 0) throw ConfigError("ProxyUtilityOracle: empty validation set");
    if (train_.num_classes != validation_.num_classes)
        throw ConfigError("ProxyUtilityOracle: train/validation class counts differ");
    if (metric_ == ProxyMetric::group_averaged_accuracy) {
        for (const auto& p : validation_.points) {
            if (!p.group) throw ConfigError("ProxyUtilityOracle: group metric needs groups on every validation point");
        }
    }
}

double ProxyUtilityOracle::score_constant(int cls) const {
    std::vector<int> preds(validation_.size(), cls);
    return score_predictions(preds);
}

double ProxyUtilityOracle::score_predictions(const std::vector<int>& predicted) const {
    if (metric_ == ProxyMetric::accuracy) {
        int hits = 0;
        for (int i = 0; i < validation_.size(); ++i) hits += predicted[i] == validation_.points[i].label;
        return static_cast<double>(hits) / validation_.size();
    }
    // Unweighted mean of per-group accuracies over the groups present.
    std::unordered_map<int, std::pair<int, int>> per_group;  // group -> (hits, total)
    for (int i = 0; i < validation_.size(); ++i) {
        auto& [hits, total] = per_group[*validation_.points[i].group];
        hits += predicted[i] == validation_.points[i].label;
        total += 1;
    }
    std::vector<int> groups;
    for (auto& [g, _] : per_group) groups.push_back(g);
    std::sort(groups.begin(), groups.end());
    double acc = 0.0;
    for (int g : groups) {
        auto& [hits, total] = per_group[g];
        acc += static_cast<double>(hits) / total;
    }
    return acc / groups.size();
}

double ProxyUtilityOracle::eval(const SubsetMask& mask) const {
    if (mask.universe_size() != train_.size()) throw ConfigError("ProxyUtilityOracle: mask universe mismatch");
    if (mask.empty()) {
        std::vector<int> labels;
        labels.reserve(validation_.size());
        for (const auto& p : validation_.points) labels.push_back(p.label);
        return score_constant(majority_label(labels, validation_.num_classes));
    }

    std::vector<int> preds(validation_.size());
    if (kind_ == ProxyKind::logistic) {
        const LogisticModel model = train_logistic(train_, mask, cfg_);
        for (int i = 0; i < validation_.size(); ++i) preds[i] = model.predict(validation_.points[i].features);
    } else {
        for (int i = 0; i < validation_.size(); ++i)
            preds[i] = knn_predict(train_, mask, knn_k_, validation_.points[i].features);
    }
    return score_predictions(preds);
}

// ---- structural checks ----

namespace {

std::vector<double> eval_all(const UtilityOracle& oracle, int n) {
    std::vector<double> table(std::size_t(1) << n);
    for (std::uint64_t b = 0; b < table.size(); ++b) table[b] = oracle.eval(SubsetMask::from_bits(n, b));
    return table;
}

}  // namespace

PropertyCheck check_monotone(const UtilityOracle& oracle, double tol) {
    const int n = oracle.universe_size();
    if (n > 12) throw CapacityError("check_monotone: universe size exceeds the exhaustive limit of 12");
    const auto u = eval_all(oracle, n);
    for (std::uint64_t s = 0; s < u.size(); ++s) {
        for (int i = 0; i < n; ++i) {
            if (s & (1ULL << i)) continue;
            if (u[s] > u[s | (1ULL << i)] + tol) {
                return {false, PropertyWitness{SubsetMask::from_bits(n, s),
                                               SubsetMask::from_bits(n, s | (1ULL << i)), i}};
            }
        }
    }
    return {true, std::nullopt};
}

PropertyCheck check_submodular(const UtilityOracle& oracle, double tol) {
    const int n = oracle.universe_size();
    if (n > 12) throw CapacityError("check_submodular: universe size exceeds the exhaustive limit of 12");
    const auto u = eval_all(oracle, n);
    // The pairwise form is equivalent to the S subseteq T definition and a
    // violation converts directly into a witness with T = S + {j}.
    for (std::uint64_t s = 0; s < u.size(); ++s) {
        for (int i = 0; i < n; ++i) {
            if (s & (1ULL << i)) continue;
            const double gain_s = u[s | (1ULL << i)] - u[s];
            for (int j = 0; j < n; ++j) {
                if (j == i || (s & (1ULL << j))) continue;
                const std::uint64_t t = s | (1ULL << j);
                const double gain_t = u[t | (1ULL << i)] - u[t];
                if (gain_s + tol < gain_t) {
                    return {false,
                            PropertyWitness{SubsetMask::from_bits(n, s), SubsetMask::from_bits(n, t), i}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

}  // namespace sift
