#include "mergesim/replay_buffer.hpp"

#include <cmath>
#include <stdexcept>

namespace mergesim {

double score_entry(double distance_to_merge, const ReplayScoring& scoring) {
    if (distance_to_merge < 0.0)
        throw std::invalid_argument("score_entry: negative distance");
    switch (scoring.mode) {
        case PriorityMode::Inverse:
            return 1.0 / (1.0 + distance_to_merge / scoring.d_scale);
        case PriorityMode::Literal:
            return scoring.epsilon + distance_to_merge;
    }
    return 0.0;
}

ReplayBuffer::ReplayBuffer(size_t capacity, ReplayScoring scoring)
    : capacity_(capacity), scoring_(scoring) {
    if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: zero capacity");
    entries_.resize(capacity_);
    tree_.assign(2 * capacity_, 0.0);
}

void ReplayBuffer::set_priority(size_t slot, double p) {
    size_t node = capacity_ + slot;
    tree_[node] = p;
    for (node /= 2; node >= 1; node /= 2)
        tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
}

double ReplayBuffer::priority(size_t slot) const { return tree_[capacity_ + slot]; }

void ReplayBuffer::push(ReplayEntry entry) {
    const double p = score_entry(entry.distance_to_merge, scoring_);
    entries_[cursor_] = std::move(entry);
    set_priority(cursor_, p);
    cursor_ = (cursor_ + 1) % capacity_;
    if (size_ < capacity_) ++size_;
}

size_t ReplayBuffer::draw(double mass) const {
    size_t node = 1;
    while (node < capacity_) {
        const size_t left = 2 * node;
        if (mass < tree_[left]) {
            node = left;
        } else {
            mass -= tree_[left];
            node = left + 1;
        }
    }
    return node - capacity_;
}

size_t ReplayBuffer::sample_index(Rng& rng) {
    if (size_ == 0) throw std::logic_error("sample_index: empty buffer");
    const double total = tree_[1];
    if (total <= 0.0) throw std::logic_error("sample_index: zero total priority");
    std::uniform_real_distribution<double> u(0.0, total);
    size_t slot = draw(u(rng));
    if (slot >= size_) slot = size_ - 1;  // float-roundoff guard at the tail
    return slot;
}

TransitionBatch<float> ReplayBuffer::sample_batch(size_t batch_size, Rng& rng) {
    if (size_ < batch_size)
        throw std::logic_error("sample_batch: buffer smaller than batch");

    // without replacement: mask drawn leaves, restore afterwards
    std::vector<std::pair<size_t, double>> masked;
    masked.reserve(batch_size);
    TransitionBatch<float> batch;
    for (size_t k = 0; k < batch_size; ++k) {
        const size_t slot = sample_index(rng);
        masked.emplace_back(slot, priority(slot));
        set_priority(slot, 0.0);
        const auto& e = entries_[slot];
        batch.obs.push_back(e.obs);
        batch.action.push_back(e.action);
        batch.reward.push_back(e.reward);
        batch.next_obs.push_back(e.next_obs);
        batch.terminal.push_back(e.terminal ? 1 : 0);
    }
    for (const auto& [slot, p] : masked) set_priority(slot, p);
    return batch;
}

} // namespace mergesim
