#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "types.hpp"

namespace bellorder {

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;

    /// |value - target| in units of the standard error.
    double z_score(double target) const {
        return std_error > 0 ? std::abs(value - target) / std_error
                             : (value == target ? 0.0 : INFINITY);
    }
    bool within(double target, double n_sigma) const { return z_score(target) <= n_sigma; }
};

//---------------------------------------------------------------------------//
/*!
 * Running sum and sum of outer products of a fixed-size feature vector.
 *
 * Merging is plain addition, so a fixed-order reduction over chunks gives
 * bit-identical results regardless of which thread filled which chunk.
 */
template <int Dim>
class MomentAccumulator {
public:
    using Vector = Eigen::Matrix<double, Dim, 1>;
    using Matrix = Eigen::Matrix<double, Dim, Dim>;

    void add(const Vector& y) {
        sum_ += y;
        outer_.template selfadjointView<Eigen::Lower>().rankUpdate(y);
        ++count_;
    }

    void merge(const MomentAccumulator& other) {
        sum_ += other.sum_;
        outer_ += other.outer_;
        count_ += other.count_;
    }

    std::uint64_t count() const { return count_; }
    Vector mean() const { return sum_ / static_cast<double>(count_); }

    /// Unbiased sample covariance.
    Matrix covariance() const {
        const double n = static_cast<double>(count_);
        const Vector mu = mean();
        Matrix full = outer_.template selfadjointView<Eigen::Lower>();
        return (full - n * mu * mu.transpose()) / (n - 1.0);
    }

    /// Sample mean of component i with its i.i.d. standard error.
    EstimateWithError component(int i) const {
        const double n = static_cast<double>(count_);
        const double var = std::max(covariance()(i, i), 0.0);
        return {mean()(i), std::sqrt(var / n), count_};
    }

private:
    Vector sum_ = Vector::Zero();
    Matrix outer_ = Matrix::Zero();
    std::uint64_t count_ = 0;
};

/// First-order (delta method) estimate of f(E[y]) from an accumulator,
/// with the gradient taken by central differences.
template <int Dim, typename F>
EstimateWithError delta_method(const MomentAccumulator<Dim>& acc, F&& f) {
    using Vector = typename MomentAccumulator<Dim>::Vector;
    const Vector mu = acc.mean();
    const double value = f(mu);
    Vector grad;
    for (int i = 0; i < Dim; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(mu(i)));
        Vector up = mu, down = mu;
        up(i) += h;
        down(i) -= h;
        grad(i) = (f(up) - f(down)) / (2.0 * h);
    }
    const double var = grad.dot(acc.covariance() * grad);
    const double n = static_cast<double>(acc.count());
    return {value, std::sqrt(std::max(var, 0.0) / n), acc.count()};
}

/// Half-open sample range [begin, end) owned by chunk c of n_chunks.
inline std::pair<std::uint64_t, std::uint64_t> chunk_range(std::uint64_t n_samples, std::uint32_t n_chunks,
                                                           std::uint32_t c) {
    const std::uint64_t base = n_samples / n_chunks;
    const std::uint64_t extra = n_samples % n_chunks;
    const std::uint64_t begin = c * base + std::min<std::uint64_t>(c, extra);
    return {begin, begin + base + (c < extra ? 1 : 0)};
}

/// Run work(chunk) for every chunk on a small thread pool and return the
/// per-chunk results in chunk order.
template <typename Result>
std::vector<Result> run_chunks(std::uint32_t n_chunks, const std::function<Result(std::uint32_t)>& work) {
    std::vector<Result> results(n_chunks);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_workers = std::min<unsigned>(hw, n_chunks);
    std::atomic<std::uint32_t> next{0};
    std::vector<std::exception_ptr> errors(n_workers);
    auto worker = [&](unsigned w) {
        try {
            for (std::uint32_t c = next++; c < n_chunks; c = next++) results[c] = work(c);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (n_workers == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker, w);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

/// Reduce per-chunk accumulators in chunk order.
template <int Dim>
MomentAccumulator<Dim> reduce_in_order(const std::vector<MomentAccumulator<Dim>>& parts) {
    MomentAccumulator<Dim> total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

}  // namespace bellorder
