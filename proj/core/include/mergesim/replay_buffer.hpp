#pragma once

#include "mergesim/episode_init.hpp"
#include "mergesim/qnet.hpp"

#include <cstdint>
#include <vector>

namespace mergesim {

enum class PriorityMode {
    Inverse,  // 1 / (1 + distance / d_scale): favors near-merge samples
    Literal,  // eps + distance: weight grows with distance
};

struct ReplayScoring {
    PriorityMode mode = PriorityMode::Inverse;
    double d_scale = 50.0;  // [m]
    double epsilon = 1e-3;  // floor for the literal mode
};

/// Sampling priority from the mission vehicle's distance to the merge point
/// at the time the transition was generated.
double score_entry(double distance_to_merge, const ReplayScoring& scoring);

struct ReplayEntry {
    std::vector<float> obs;
    int action = 0;
    double reward = 0.0;
    std::vector<float> next_obs;
    bool terminal = false;
    double distance_to_merge = 0.0;  // [m], >= 0
};

/// FIFO ring buffer with proportional prioritized sampling backed by a sum
/// tree; push and single-draw are O(log capacity).
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity, ReplayScoring scoring = {});

    void push(ReplayEntry entry);

    size_t size() const { return size_; }
    size_t capacity() const { return capacity_; }

    const ReplayEntry& entry(size_t slot) const { return entries_[slot]; }
    double priority(size_t slot) const;

    /// Draws batch_size distinct entries, each with probability proportional
    /// to its priority. Throws when the buffer holds fewer entries.
    TransitionBatch<float> sample_batch(size_t batch_size, Rng& rng);

    /// Single prioritized draw (with replacement); exposed for statistical
    /// tests.
    size_t sample_index(Rng& rng);

private:
    void set_priority(size_t slot, double p);
    size_t draw(double mass) const;

    size_t capacity_;
    ReplayScoring scoring_;
    std::vector<ReplayEntry> entries_;
    std::vector<double> tree_;  // binary sum tree, leaves at [capacity_, 2*capacity_)
    size_t cursor_ = 0;
    size_t size_ = 0;
};

} // namespace mergesim
