#pragma once

#include "txnembed/types.hpp"

#include <cstdint>

namespace txnembed::cluster {

struct KmeansParams {
    int k = 8;
    uint64_t seed = 1;
    int max_iter = 100;
    double tol = 1e-6;  // stop when relative inertia improvement drops below
    int threads = 1;
};

struct Clustering {
    std::vector<int> assignments;  // cluster index per point
    Matrix centroids;              // k x dim
    double inertia = 0.0;          // sum of squared distances to assigned centroid
    int iterations = 0;
    std::vector<double> inertia_history;  // one value per Lloyd iteration
};

/// Lloyd iterations from k-means++ seeding. Deterministic for a fixed seed:
/// assignment ties break toward the lower cluster index and the update step
/// reduces in point order. Empty clusters are re-seeded at the point farthest
/// from its assigned centroid, so all k clusters are non-empty on return.
/// Inertia is non-increasing across iterations.
Clustering kmeans(const Matrix& points, const KmeansParams& params);

}  // namespace txnembed::cluster
