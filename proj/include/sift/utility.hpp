#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sift/dataset.hpp"
#include "sift/subsets.hpp"

namespace sift {

// A set function over {0..n-1}. Implementations must be deterministic:
// the same mask always yields the same value.
class UtilityOracle {
  public:
    virtual ~UtilityOracle() = default;
    virtual int universe_size() const = 0;
    virtual double eval(const SubsetMask& mask) const = 0;
};

// Explicit lookup table with an optional default rule for masks without an
// entry. Universe capped at 62 (entries are keyed by bit pattern).
class TabularUtility : public UtilityOracle {
  public:
    enum class DefaultKind { none, constant, affine_in_size };

    explicit TabularUtility(int n);

    void set_entry(const SubsetMask& mask, double value);
    void set_default(DefaultKind kind, std::vector<double> params);

    int universe_size() const override { return n_; }
    double eval(const SubsetMask& mask) const override;

    std::size_t entry_count() const { return entries_.size(); }
    DefaultKind default_kind() const { return default_kind_; }
    const std::vector<double>& default_params() const { return default_params_; }
    // Entries in ascending bit-pattern order (stable serialization).
    std::vector<std::pair<SubsetMask, double>> sorted_entries() const;

  private:
    int n_ = 0;
    std::unordered_map<std::uint64_t, double> entries_;
    DefaultKind default_kind_ = DefaultKind::none;
    std::vector<double> default_params_;
};

// Wraps a set function defined in code (used for coverage objectives and
// test games too irregular for a table).
class FunctionalOracle : public UtilityOracle {
  public:
    FunctionalOracle(int n, std::function<double(const SubsetMask&)> fn)
        : n_(n), fn_(std::move(fn)) {}
    int universe_size() const override { return n_; }
    double eval(const SubsetMask& mask) const override { return fn_(mask); }

  private:
    int n_;
    std::function<double(const SubsetMask&)> fn_;
};

// Memoizing wrapper. Values are exactly those of the inner oracle; safe for
// concurrent eval calls.
class CachingOracle : public UtilityOracle {
  public:
    explicit CachingOracle(const UtilityOracle& inner);
    int universe_size() const override { return inner_.universe_size(); }
    double eval(const SubsetMask& mask) const override;
    std::uint64_t inner_calls() const;

  private:
    const UtilityOracle& inner_;
    mutable std::mutex mu_;
    mutable std::vector<double> dense_;      // used when n <= 20
    mutable std::vector<char> dense_known_;
    mutable std::unordered_map<std::uint64_t, double> sparse_;
    mutable std::unordered_map<std::string, double> wide_;  // universes past 64 points
    mutable std::uint64_t inner_calls_ = 0;
};

// ---- proxy models ----

struct LogisticTrainConfig {
    double learning_rate = 0.5;
    int epochs = 200;
    double l2 = 1e-4;  // penalty on weights; biases unregularized
    std::uint64_t seed = 0;
};

// One-vs-rest logistic classifier trained by full-batch gradient descent.
// Binary problems use a single row; prediction is positive at p >= 0.5.
// Multiclass prediction is the argmax score, ties to the smaller label.
struct LogisticModel {
    int dim = 0;
    int num_classes = 2;
    int constant_class = -1;      // >= 0: always predict this class
    std::vector<double> weights;  // row-major, one row per binary subproblem
    std::vector<double> bias;

    int predict(std::span<const double> x) const;
};

// Trains on the masked subset of `data`. Deterministic given the config seed.
// Empty masks and single-class masks yield a constant predictor (majority
// label of the mask, ties to the smaller label; empty mask is the caller's
// concern and is rejected here).
LogisticModel train_logistic(const Dataset& data, const SubsetMask& mask, const LogisticTrainConfig& cfg);

// Mean cross-entropy of the one-vs-rest subproblem for class `cls` on the
// masked subset, plus (l2/2)*||w||^2. train_logistic descends exactly this;
// exposed so convergence can be audited by finite differences.
double logistic_ovr_loss(const Dataset& data, const SubsetMask& mask, int cls, std::span<const double> w,
                         double bias, double l2);

// Majority label among the min(K, |mask|) nearest neighbors of `query`
// within the masked subset (Euclidean). Distance ties prefer the lower
// index; vote ties prefer the smaller label. Mask must be nonempty.
int knn_predict(const Dataset& data, const SubsetMask& mask, int k, std::span<const double> query);

enum class ProxyKind { logistic, knn };
enum class ProxyMetric { accuracy, group_averaged_accuracy };

// Utility = validation metric of a proxy model trained on the masked subset.
// The empty mask scores the majority-class constant predictor (majority of
// the validation labels, ties to the smaller label).
class ProxyUtilityOracle : public UtilityOracle {
  public:
    ProxyUtilityOracle(Dataset train, Dataset validation, ProxyKind kind, ProxyMetric metric,
                       LogisticTrainConfig cfg = {}, int knn_k = 5);

    int universe_size() const override { return train_.size(); }
    double eval(const SubsetMask& mask) const override;

    const Dataset& train_data() const { return train_; }
    const Dataset& validation_data() const { return validation_; }

  private:
    double score_constant(int cls) const;
    double score_predictions(const std::vector<int>& predicted) const;

    Dataset train_;
    Dataset validation_;
    ProxyKind kind_;
    ProxyMetric metric_;
    LogisticTrainConfig cfg_;
    int knn_k_;
};

// ---- structural property checks ----

// Witness for a failed check: S subseteq T, i not in T with the violation.
struct PropertyWitness {
    SubsetMask s;
    SubsetMask t;
    int i = -1;
};

struct PropertyCheck {
    bool holds = true;
    std::optional<PropertyWitness> witness;
};

// Exhaustive monotonicity check: U(S) <= U(T) for all S subseteq T.
// Universe capped at 12.
PropertyCheck check_monotone(const UtilityOracle& oracle, double tol = 0.0);

// Exhaustive submodularity check: U(S+i) - U(S) >= U(T+i) - U(T) for all
// S subseteq T, i outside T. Universe capped at 12.
PropertyCheck check_submodular(const UtilityOracle& oracle, double tol = 0.0);

}  // namespace sift
