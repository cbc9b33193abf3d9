#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sift/dataset.hpp"
#include "sift/subsets.hpp"
#include "sift/utility.hpp"

namespace sift {

struct UtilitySample {
    SubsetMask mask;
    double utility = 0.0;
};

// Permutation-invariant set-function regressor f(S) = rho(sum_{x in S} phi(x)).
// phi and rho are both 3-layer perceptrons of uniform `width` with ReLU
// between layers and linear outputs; the per-point embedding is the feature
// vector concatenated with a one-hot label. Summation always runs in
// ascending index order, so predictions are bit-stable under any permutation
// of the caller's view of the set. The empty set evaluates rho(0).
//
// Targets are standardized during training; target_mean/target_std map
// predictions back to utility units.
struct SetRegressor {
    int feature_dim = 0;
    int num_classes = 0;
    int width = 0;
    double target_mean = 0.0;
    double target_std = 1.0;
    std::vector<double> params;

    SetRegressor() = default;
    // Seeded uniform fan-in init: every weight and bias of a layer with
    // fan_in inputs is drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    SetRegressor(int feature_dim, int num_classes, int width, std::uint64_t init_seed);

    int embed_dim() const { return feature_dim + num_classes; }
    std::size_t param_count() const;

    // phi for one point; `out` must hold `width` doubles.
    void phi_forward(const DataPoint& p, double* out) const;
    // rho for a pooled feature; `pooled` holds `width` doubles.
    // Returns the standardized prediction.
    double rho_forward(const double* pooled) const;

    // Full prediction in utility units. Mask members must index `data`.
    double predict(const Dataset& data, const SubsetMask& mask) const;
};

// predict(base + candidate) - predict(base), computed with one pooled-sum
// update instead of re-embedding the base. Agrees with the two-predict
// difference to ~1e-12 (association order of the pooled sum differs).
double marginal_gain(const SetRegressor& model, const Dataset& data, const SubsetMask& base, int candidate);

// Caches phi for every point of a dataset so set evaluations inside greedy
// loops cost one pooled sum plus one rho pass.
class RegressorEvaluator {
  public:
    RegressorEvaluator(const SetRegressor& model, const Dataset& data);
    double value(const SubsetMask& mask) const;

  private:
    const SetRegressor& model_;
    int n_;
    std::vector<double> phi_;  // n x width, row per point
};

struct TrainConfig {
    int epochs = 20;
    int batch_size = 32;
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t shuffle_seed = 0;
};

struct TrainResult {
    // Mean training MSE per epoch, in utility units (not standardized).
    std::vector<double> loss_trace;
};

// Adam + minibatch MSE with a seeded, reproducible shuffle. epochs == 0
// leaves the parameters untouched. Throws TrainingError (naming the epoch)
// if the loss turns non-finite. Standardization constants are recomputed
// from `samples` and stored on the model.
TrainResult train(SetRegressor& model, const Dataset& data, const std::vector<UtilitySample>& samples,
                  const TrainConfig& cfg);

// Full-batch MSE and its parameter gradient in standardized target space
// (the objective train() descends). Exposed for gradient audits.
double mse_loss(const SetRegressor& model, const Dataset& data, const std::vector<UtilitySample>& samples);
std::vector<double> mse_gradient(const SetRegressor& model, const Dataset& data,
                                 const std::vector<UtilitySample>& samples);

// Draws m masks under `policy` (stream i is derived from (seed, i), so a
// resumed run regenerates the identical sequence), evaluates the oracle on
// each, and appends the (empty set, U(empty)) anchor pair as sample m.
// If `persist_path` is nonempty, samples are appended to that JSON-lines
// file as they are computed and an interrupted run resumes after the last
// persisted line. SIFT_WORKERS > 1 fans the oracle evaluations out over
// that many threads without changing any output.
std::vector<UtilitySample> sample_utilities(const UtilityOracle& oracle, int m, SamplePolicy policy,
                                            int fixed_k, std::uint64_t seed,
                                            const std::string& persist_path = "");

}  // namespace sift
