#include "hyperwalk/state.hpp"

#include <bit>

#include "hyperwalk/simd/kernels.hpp"

namespace hyperwalk {

namespace {
std::int64_t popcount_words(std::span<const std::uint64_t> w) {
    return simd::popcount(w.data(), w.size());
}
}  // namespace

HyperState::HyperState(std::int64_t n)
    : n_(n), hamming_(0),
      words_(static_cast<std::size_t>(word_count(n)), 0u) {
    if (n < 1) throw length_mismatch_error("state length must be >= 1");
}

HyperState::HyperState(std::int64_t n, std::vector<std::uint64_t> words)
    : n_(n), words_(std::move(words)) {
    if (n < 1) throw length_mismatch_error("state length must be >= 1");
    if (static_cast<std::int64_t>(words_.size()) != word_count(n)) {
        throw length_mismatch_error("word buffer does not match state length");
    }
    // Mask tail bits beyond n.
    if (n & 63) {
        words_.back() &= (~std::uint64_t{0}) >> (64 - (n & 63));
    }
    hamming_ = popcount_words(words_);
}

HyperState HyperState::from_string(const std::string& bits) {
    const auto n = static_cast<std::int64_t>(bits.size());
    std::vector<std::uint64_t> words(
        static_cast<std::size_t>(word_count(n)), 0u);
    for (std::int64_t k = 0; k < n; ++k) {
        const char c = bits[static_cast<std::size_t>(k)];
        if (c == '1') {
            words[static_cast<std::size_t>(k >> 6)] |= std::uint64_t{1}
                                                       << (k & 63);
        } else if (c != '0') {
            throw io_error("state string may contain only '0' and '1'");
        }
    }
    return HyperState(n, std::move(words));
}

HyperState HyperState::from_index(std::int64_t n, std::uint64_t index) {
    if (n > 63) throw too_large_error("from_index supports n <= 63");
    std::vector<std::uint64_t> words(
        static_cast<std::size_t>(word_count(n)), 0u);
    words[0] = index;
    return HyperState(n, std::move(words));
}

std::string HyperState::to_string() const {
    std::string s(static_cast<std::size_t>(n_), '0');
    for (std::int64_t k = 0; k < n_; ++k) {
        if (bit(k)) s[static_cast<std::size_t>(k)] = '1';
    }
    return s;
}

std::uint64_t HyperState::index() const {
    if (n_ > 63) throw too_large_error("index() supports n <= 63");
    return words_[0];
}

TransitionCounts transition_counts(const HyperState& x, const HyperState& y) {
    if (x.n() != y.n()) {
        throw length_mismatch_error("transition_counts: states differ in length");
    }
    const auto inner =
        simd::popcount_and(x.words().data(), y.words().data(), x.words().size());
    return transition_counts(x.n(), x.hamming(), y.hamming(), inner);
}

TransitionCounts transition_counts(std::int64_t n, std::int64_t hx,
                                   std::int64_t hy, std::int64_t inner) {
    TransitionCounts c;
    c.n11 = inner;
    c.n10 = hx - inner;
    c.n01 = hy - inner;
    c.n00 = n - hx - hy + inner;
    if (c.n00 < 0 || c.n01 < 0 || c.n10 < 0 || c.n11 < 0) {
        throw invalid_counts_error("transition statistics are inconsistent");
    }
    return c;
}

SamplePath::SamplePath(std::vector<HyperState> states)
    : states_(std::move(states)) {
    if (states_.empty()) throw length_mismatch_error("path must be non-empty");
    n_ = states_.front().n();
    for (const auto& s : states_) {
        if (s.n() != n_) {
            throw length_mismatch_error("path states differ in length");
        }
    }
}

}  // namespace hyperwalk
