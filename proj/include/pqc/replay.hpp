#pragma once

#include "pqc/common.hpp"
#include "pqc/experience.hpp"
#include "pqc/rng.hpp"

namespace pqc {

// Loss-prioritized replay. Item i is sampled with probability
// p_i^alpha / sum_j p_j^alpha where p_i = |last loss_i| + eps; importance
// weights are (N * P(i))^-beta normalized by their maximum. Insertion,
// sampling, and priority updates must be serialized by the caller.
class PERBuffer {
public:
    PERBuffer(size_t capacity, double alpha, double eps, double beta0, double beta1)
        : capacity_(capacity), alpha_(alpha), eps_(eps), beta0_(beta0), beta1_(beta1),
          beta_(beta0) {
        if (capacity == 0) throw ConfigError("PERBuffer: zero capacity");
        tree_size_ = 1;
        while (tree_size_ < capacity) tree_size_ *= 2;
        sum_tree_.assign(2 * tree_size_, 0.0);
        min_tree_.assign(2 * tree_size_, kInfPriority);
        items_.reserve(std::min<size_t>(capacity, 1 << 20));
    }

    size_t size() const { return items_.size(); }
    size_t capacity() const { return capacity_; }
    double beta() const { return beta_; }

    // Linear annealing of the IS exponent over the training budget.
    void set_progress(double frac) {
        frac = std::clamp(frac, 0.0, 1.0);
        beta_ = beta0_ + (beta1_ - beta0_) * frac;
    }

    // New experiences enter at the maximum priority seen so far.
    void insert(const Experience& e) { insert_with_priority(e, max_raw_priority_); }

    void insert_with_priority(Experience e, double raw_priority) {
        e.priority = raw_priority;
        max_raw_priority_ = std::max(max_raw_priority_, raw_priority);
        size_t slot;
        if (items_.size() < capacity_) {
            slot = items_.size();
            items_.push_back(e);
        } else {
            slot = head_;
            items_[slot] = e;
        }
        head_ = (slot + 1) % capacity_;
        set_mass(slot, std::pow(raw_priority, alpha_));
    }

    struct SampleBatch {
        std::vector<size_t> indices;
        std::vector<double> is_weights;
    };

    SampleBatch sample(size_t batch, Rng& rng) const {
        if (items_.empty()) throw EmptyBuffer("PERBuffer: sample from empty buffer");
        SampleBatch out;
        out.indices.reserve(batch);
        out.is_weights.reserve(batch);
        const double total = sum_tree_[1];
        const double n = static_cast<double>(items_.size());
        // weights normalized by the max weight = (N * P_min)^-beta
        const double min_p = min_tree_[1] / total;
        const double max_w = std::pow(n * min_p, -beta_);
        for (size_t b = 0; b < batch; ++b) {
            double u = rng.uniform() * total;
            size_t idx = descend(u);
            double p = mass(idx) / total;
            double w = std::pow(n * p, -beta_) / max_w;
            out.indices.push_back(idx);
            out.is_weights.push_back(w);
        }
        return out;
    }

    void update_priorities(const std::vector<size_t>& indices,
                           const std::vector<double>& losses) {
        if (indices.size() != losses.size())
            throw ShapeMismatch("PERBuffer: update size mismatch");
        for (size_t k = 0; k < indices.size(); ++k) {
            double raw = std::abs(losses[k]) + eps_;
            items_[indices[k]].priority = raw;
            max_raw_priority_ = std::max(max_raw_priority_, raw);
            set_mass(indices[k], std::pow(raw, alpha_));
        }
    }

    const Experience& item(size_t i) const { return items_[i]; }

private:
    static constexpr double kInfPriority = 1e300;

    double mass(size_t slot) const { return sum_tree_[tree_size_ + slot]; }

    void set_mass(size_t slot, double m) {
        size_t i = tree_size_ + slot;
        sum_tree_[i] = m;
        min_tree_[i] = m;
        for (i /= 2; i >= 1; i /= 2) {
            sum_tree_[i] = sum_tree_[2 * i] + sum_tree_[2 * i + 1];
            min_tree_[i] = std::min(min_tree_[2 * i], min_tree_[2 * i + 1]);
        }
    }

    size_t descend(double u) const {
        size_t i = 1;
        while (i < tree_size_) {
            double left = sum_tree_[2 * i];
            if (left > 0.0 && u <= left) {
                i = 2 * i;
            } else {
                u -= left;
                i = 2 * i + 1;
            }
        }
        size_t slot = i - tree_size_;
        return std::min(slot, items_.size() - 1);
    }

    size_t capacity_, tree_size_;
    double alpha_, eps_, beta0_, beta1_;
    double beta_ = 0.4;
    double max_raw_priority_ = 1.0;
    size_t head_ = 0;
    std::vector<Experience> items_;
    std::vector<double> sum_tree_;
    std::vector<double> min_tree_;
};

}  // namespace pqc
