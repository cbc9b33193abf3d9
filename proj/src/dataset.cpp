#include "sift/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "sift/errors.hpp"
#include "sift/rng.hpp"

namespace sift {

std::uint64_t binom(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (n > 62) throw CapacityError("binom: n exceeds the 64-bit capacity limit of 62");
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // Stays integral: r * (n-k+i) is divisible by i at every step.
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

SubsetMask::SubsetMask(int n, std::vector<int> members) : n_(n), members_(std::move(members)) {
    if (n < 0) throw ConfigError("SubsetMask: negative universe size");
    std::sort(members_.begin(), members_.end());
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i] < 0 || members_[i] >= n_) throw ConfigError("SubsetMask: member out of range");
        if (i > 0 && members_[i] == members_[i - 1]) throw ConfigError("SubsetMask: duplicate member");
    }
}

bool SubsetMask::contains(int i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
}

std::uint64_t SubsetMask::bits() const {
    if (n_ > 64) throw CapacityError("SubsetMask::bits: universe size exceeds the 64-bit limit");
    std::uint64_t b = 0;
    for (int m : members_) b |= (1ULL << m);
    return b;
}

SubsetMask SubsetMask::from_bits(int n, std::uint64_t bits) {
    if (n < 0 || n > 64) throw CapacityError("SubsetMask::from_bits: universe size exceeds the 64-bit limit");
    if (n < 64 && (bits >> n) != 0) throw ConfigError("SubsetMask::from_bits: bit set beyond universe");
    SubsetMask m(n);
    for (int i = 0; i < n; ++i) {
        if (bits & (1ULL << i)) m.members_.push_back(i);
    }
    return m;
}

SubsetMask SubsetMask::with(int i) const {
    if (i < 0 || i >= n_) throw ConfigError("SubsetMask::with: member out of range");
    if (contains(i)) return *this;
    SubsetMask out = *this;
    out.members_.insert(std::upper_bound(out.members_.begin(), out.members_.end(), i), i);
    return out;
}

SubsetMask SubsetMask::without(int i) const {
    SubsetMask out = *this;
    auto it = std::lower_bound(out.members_.begin(), out.members_.end(), i);
    if (it != out.members_.end() && *it == i) out.members_.erase(it);
    return out;
}

SubsetMask SubsetMask::complement() const {
    SubsetMask out(n_);
    out.members_.reserve(n_ - size());
    for (int i = 0; i < n_; ++i) {
        if (!contains(i)) out.members_.push_back(i);
    }
    return out;
}

void for_each_subset(int n, int k, const std::function<void(const SubsetMask&)>& fn) {
    if (n < 0 || k < 0 || k > n) throw ConfigError("for_each_subset: need 0 <= k <= n");
    if (n > 24) throw CapacityError("for_each_subset: n exceeds the enumeration limit of 24");
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(SubsetMask(n, idx));
        // Advance to the next combination in lexicographic order.
        int j = k - 1;
        while (j >= 0 && idx[j] == n - k + j) --j;
        if (j < 0) break;
        ++idx[j];
        for (int t = j + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
}

std::vector<SubsetMask> enumerate_subsets(int n, int k) {
    std::vector<SubsetMask> out;
    out.reserve(binom(n, k));
    for_each_subset(n, k, [&](const SubsetMask& m) { out.push_back(m); });
    return out;
}

void Dataset::validate() const {
    for (int i = 0; i < size(); ++i) {
        const auto& p = points[i];
        if (p.id != i) throw ConfigError("Dataset: ids must be contiguous from 0");
        if (static_cast<int>(p.features.size()) != feature_dim())
            throw ConfigError("Dataset: inconsistent feature dimensions");
        if (p.label < 0 || p.label >= num_classes) throw ConfigError("Dataset: label out of range");
    }
}

namespace {

// Uniform k-subset of {0..n-1} via partial Fisher-Yates, returned canonical.
std::vector<int> draw_k_of_n(int n, int k, std::mt19937_64& rng) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> d(i, n - 1);
        std::swap(pool[i], pool[d(rng)]);
    }
    pool.resize(k);
    return pool;
}

int round_half_up_count(double fraction, int n) {
    return static_cast<int>(std::floor(fraction * n + 0.5));
}

}  // namespace

SubsetMask sample_subset(int n, SamplePolicy policy, int k, std::mt19937_64& rng) {
    if (n < 1) throw ConfigError("sample_subset: empty universe");
    int size = k;
    if (policy == SamplePolicy::uniform_size_then_uniform_subset) {
        std::uniform_int_distribution<int> d(1, n);
        size = d(rng);
    } else if (size < 0 || size > n) {
        throw ConfigError("sample_subset: fixed size out of range");
    }
    return SubsetMask(n, draw_k_of_n(n, size, rng));
}

std::pair<Dataset, CorruptionLog> flip_labels(const Dataset& data, double fraction, std::uint64_t seed) {
    data.validate();
    if (data.num_classes < 2) throw ConfigError("flip_labels: need at least 2 classes");
    if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("flip_labels: fraction must lie in (0,1)");
    const int count = round_half_up_count(fraction, data.size());
    if (count < 1) throw ConfigError("flip_labels: fraction rounds to zero flips");

    auto rng = make_engine(seed);
    auto picked = draw_k_of_n(data.size(), count, rng);
    std::sort(picked.begin(), picked.end());

    Dataset out = data;
    for (int idx : picked) {
        // Uniform over the other classes: draw from [0, C-2] and skip the old label.
        std::uniform_int_distribution<int> d(0, data.num_classes - 2);
        int lab = d(rng);
        if (lab >= out.points[idx].label) ++lab;
        out.points[idx].label = lab;
    }
    return {std::move(out), CorruptionLog{"label_flip", fraction, 0.0, std::move(picked)}};
}

std::pair<Dataset, CorruptionLog> add_feature_noise(const Dataset& data, double fraction, double sigma,
                                                    std::uint64_t seed) {
    data.validate();
    if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("add_feature_noise: fraction must lie in (0,1)");
    if (!(sigma > 0.0)) throw ConfigError("add_feature_noise: sigma must be positive");
    const int count = round_half_up_count(fraction, data.size());
    if (count < 1) throw ConfigError("add_feature_noise: fraction rounds to zero points");

    auto rng = make_engine(seed);
    auto picked = draw_k_of_n(data.size(), count, rng);
    std::sort(picked.begin(), picked.end());

    Dataset out = data;
    std::normal_distribution<double> noise(0.0, sigma);
    for (int idx : picked) {
        for (double& f : out.points[idx].features) f += noise(rng);
    }
    return {std::move(out), CorruptionLog{"feature_noise", fraction, sigma, std::move(picked)}};
}

Dataset gen_synthetic_gaussian(int n, int d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw ConfigError("gen_synthetic_gaussian: need n >= 1 and d >= 1");
    auto rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Dataset out;
    out.num_classes = 2;
    out.points.resize(n);
    for (int i = 0; i < n; ++i) {
        auto& p = out.points[i];
        p.id = i;
        p.features.resize(d);
        double s = 0.0;
        for (double& f : p.features) {
            f = gauss(rng);
            s += f;
        }
        p.label = s > 0.0 ? 1 : 0;
    }
    return out;
}

Dataset gen_redundant_2d(std::uint64_t seed) {
    auto rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&] {
        std::vector<double> f{0.1 + gauss(rng), -0.1 + gauss(rng)};
        return f;
    };

    std::vector<std::vector<double>> pos, neg;
    while (pos.size() < 9 || neg.size() < 2) {
        auto f = draw();
        if (f[0] + f[1] > 0.0) {
            if (pos.size() < 9) pos.push_back(std::move(f));
        } else if (neg.size() < 2) {
            neg.push_back(std::move(f));
        }
    }

    Dataset out;
    out.num_classes = 2;
    int id = 0;
    for (auto& f : pos) out.points.push_back(DataPoint{id++, std::move(f), 1, std::nullopt});
    std::normal_distribution<double> jitter(0.0, 1e-5);
    for (const auto& f : neg) {
        out.points.push_back(DataPoint{id++, f, 0, std::nullopt});
        for (int r = 0; r < 2; ++r) {
            std::vector<double> g{f[0] + jitter(rng), f[1] + jitter(rng)};
            out.points.push_back(DataPoint{id++, std::move(g), 0, std::nullopt});
        }
    }
    return out;
}

}  // namespace sift
