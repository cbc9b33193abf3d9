#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sift/subsets.hpp"

namespace sift {

struct DataPoint {
    int id = 0;
    std::vector<double> features;
    int label = 0;
    std::optional<int> group;
};

struct Dataset {
    std::vector<DataPoint> points;
    int num_classes = 2;  // labels are 0..num_classes-1

    int size() const { return static_cast<int>(points.size()); }
    int feature_dim() const { return points.empty() ? 0 : static_cast<int>(points[0].features.size()); }
    const DataPoint& operator[](int i) const { return points[i]; }

    // Validates ids (contiguous from 0), uniform feature dims, labels in range.
    void validate() const;
};

// Which points were corrupted and how; consumed by detection experiments.
struct CorruptionLog {
    std::string kind;  // "label_flip" | "feature_noise"
    double fraction = 0.0;
    double sigma = 0.0;        // 0 for label flips
    std::vector<int> indices;  // ascending
};

enum class SamplePolicy {
    uniform_size_then_uniform_subset,  // size uniform on {1..n}, then uniform subset of that size
    fixed_size,
};

// Uniform subset draw under the given policy. fixed_size uses k; the other
// policy ignores it.
SubsetMask sample_subset(int n, SamplePolicy policy, int k, std::mt19937_64& rng);

// Flips the labels of exactly round(fraction*n) points (round half up).
// Each flipped point gets a label drawn uniformly from the other classes.
// Requires num_classes >= 2, fraction in (0,1), and a nonzero flip count.
std::pair<Dataset, CorruptionLog> flip_labels(const Dataset& data, double fraction, std::uint64_t seed);

// Adds i.i.d. N(0, sigma^2) noise to every feature of round(fraction*n)
// points; unselected points are copied bit-identically.
std::pair<Dataset, CorruptionLog> add_feature_noise(const Dataset& data, double fraction, double sigma,
                                                    std::uint64_t seed);

// n points with d i.i.d. standard normal features; label 1 iff the
// coordinate sum is > 0, else 0. Defaults follow the synthetic benchmark
// recipe (n=200, d=50).
Dataset gen_synthetic_gaussian(int n, int d, std::uint64_t seed);

// 15-point 2-D instance with a redundant negative class: rejection-samples
// N((0.1,-0.1), I) draws until 9 positives (coordinate sum > 0) and 2
// negatives are found, then replicates each negative twice with N(0, 1e-10)
// coordinate noise. Layout: ids 0..8 positives; 9 = first negative,
// 10..11 its replicas; 12 = second negative, 13..14 its replicas.
Dataset gen_redundant_2d(std::uint64_t seed);

}  // namespace sift
