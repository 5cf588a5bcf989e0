#include "txnembed/kmeans.hpp"

#include "txnembed/parallel.hpp"
#include "txnembed/rng.hpp"

#include <cmath>
#include <limits>

namespace txnembed::cluster {

namespace {

// k-means++: first centroid uniform, then proportional to squared distance to
// the nearest chosen centroid. Falls back to the first unchosen point when
// all remaining distances are zero (duplicate-heavy data, k close to n).
Matrix plus_plus_init(const Matrix& points, int k, rng::Engine& eng) {
    const Eigen::Index n = points.rows();
    Matrix centroids(k, points.cols());
    std::vector<double> dist2(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<uint8_t> chosen(static_cast<size_t>(n), 0);

    Eigen::Index first = static_cast<Eigen::Index>(eng.uniform_below(static_cast<uint64_t>(n)));
    centroids.row(0) = points.row(first);
    chosen[static_cast<size_t>(first)] = 1;

    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d2 = (points.row(i) - centroids.row(c - 1)).squaredNorm();
            auto& best = dist2[static_cast<size_t>(i)];
            if (d2 < best) best = d2;
            total += best;
        }
        Eigen::Index pick = -1;
        if (total > 0.0) {
            double r = eng.uniform01() * total;
            for (Eigen::Index i = 0; i < n; ++i) {
                r -= dist2[static_cast<size_t>(i)];
                if (r <= 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) pick = n - 1;
        }
        if (pick < 0 || chosen[static_cast<size_t>(pick)]) {
            pick = -1;
            for (Eigen::Index i = 0; i < n; ++i)
                if (!chosen[static_cast<size_t>(i)]) {
                    pick = i;
                    break;
                }
            if (pick < 0) pick = 0;  // k > distinct points; duplicates allowed
        }
        centroids.row(c) = points.row(pick);
        chosen[static_cast<size_t>(pick)] = 1;
    }
    return centroids;
}

}  // namespace

Clustering kmeans(const Matrix& points, const KmeansParams& params) {
    const Eigen::Index n = points.rows();
    const int k = params.k;
    if (k < 1) throw std::invalid_argument("kmeans requires k >= 1");
    if (static_cast<Eigen::Index>(k) > n)
        throw std::invalid_argument("kmeans requires k <= number of points (k=" +
                                    std::to_string(k) + ", n=" + std::to_string(n) + ")");

    rng::Engine eng(rng::derive(params.seed, "kmeans"));
    Clustering result;
    result.centroids = plus_plus_init(points, k, eng);
    result.assignments.assign(static_cast<size_t>(n), 0);

    const Vector point_sq = points.rowwise().squaredNorm();
    std::vector<double> min_dist(static_cast<size_t>(n), 0.0);
    double prev_inertia = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < params.max_iter; ++iter) {
        result.iterations = iter + 1;

        // Assignment: argmin over centroids of ||x||^2 - 2 x.c + ||c||^2,
        // ties toward the lower cluster index.
        const Matrix cross = points * result.centroids.transpose();  // n x k
        const Vector cent_sq = result.centroids.rowwise().squaredNorm();
        bool changed = false;
        parallel_for(n, params.threads, [&](long i0, long i1) {
            for (long i = i0; i < i1; ++i) {
                int best = 0;
                double best_d = point_sq(i) - 2.0 * cross(i, 0) + cent_sq(0);
                for (int c = 1; c < k; ++c) {
                    const double d = point_sq(i) - 2.0 * cross(i, c) + cent_sq(c);
                    if (d < best_d) {
                        best_d = d;
                        best = c;
                    }
                }
                if (result.assignments[static_cast<size_t>(i)] != best) {
                    result.assignments[static_cast<size_t>(i)] = best;
                    changed = true;
                }
                min_dist[static_cast<size_t>(i)] = std::max(0.0, best_d);
            }
        });

        // Update: mean of members, accumulated in point order.
        Matrix sums = Matrix::Zero(k, points.cols());
        std::vector<long> counts(static_cast<size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = result.assignments[static_cast<size_t>(i)];
            sums.row(c) += points.row(i);
            ++counts[static_cast<size_t>(c)];
        }

        // Re-seed empty clusters at the globally farthest point.
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) continue;
            Eigen::Index far = 0;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int own = result.assignments[static_cast<size_t>(i)];
                if (counts[static_cast<size_t>(own)] <= 1) continue;  // keep donors non-empty
                if (min_dist[static_cast<size_t>(i)] > far_d) {
                    far_d = min_dist[static_cast<size_t>(i)];
                    far = i;
                }
            }
            const int old = result.assignments[static_cast<size_t>(far)];
            sums.row(old) -= points.row(far);
            --counts[static_cast<size_t>(old)];
            sums.row(c) = points.row(far);
            counts[static_cast<size_t>(c)] = 1;
            result.assignments[static_cast<size_t>(far)] = c;
            min_dist[static_cast<size_t>(far)] = 0.0;
            changed = true;
        }

        for (int c = 0; c < k; ++c)
            result.centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<size_t>(c)]);

        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            inertia += (points.row(i) - result.centroids.row(result.assignments[static_cast<size_t>(i)]))
                           .squaredNorm();
        result.inertia = inertia;
        result.inertia_history.push_back(inertia);

        if (!changed) break;
        if (prev_inertia < std::numeric_limits<double>::infinity()) {
            const double rel =
                prev_inertia > 0.0 ? (prev_inertia - inertia) / prev_inertia : 0.0;
            if (rel >= 0.0 && rel < params.tol) break;
        }
        prev_inertia = inertia;
    }
    return result;
}

}  // namespace txnembed::cluster
