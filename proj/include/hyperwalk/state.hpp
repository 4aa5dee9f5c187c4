#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hyperwalk/errors.hpp"

namespace hyperwalk {

// A vertex of {0,1}^n stored as packed 64-bit words, coordinate k at bit
// (k % 64) of word (k / 64).  The Hamming weight is cached.  Immutable after
// construction.
class HyperState {
  public:
    explicit HyperState(std::int64_t n);  // all-zero state
    HyperState(std::int64_t n, std::vector<std::uint64_t> words);
    // "0101..." with coordinate k = 1 leftmost.
    static HyperState from_string(const std::string& bits);
    static HyperState from_index(std::int64_t n, std::uint64_t index);

    std::int64_t n() const { return n_; }
    std::int64_t hamming() const { return hamming_; }
    bool bit(std::int64_t k) const {
        return (words_[static_cast<std::size_t>(k >> 6)] >> (k & 63)) & 1u;
    }
    std::span<const std::uint64_t> words() const { return words_; }
    std::string to_string() const;
    // Packed little-endian index; only valid for n <= 63.
    std::uint64_t index() const;

    friend bool operator==(const HyperState&, const HyperState&) = default;

    static std::int64_t word_count(std::int64_t n) { return (n + 63) >> 6; }

  private:
    std::int64_t n_;
    std::int64_t hamming_;
    std::vector<std::uint64_t> words_;
};

// Transition counts N_ab = #{k : x[k]=a, y[k]=b} for one step x -> y.
struct TransitionCounts {
    std::int64_t n00 = 0;
    std::int64_t n01 = 0;
    std::int64_t n10 = 0;
    std::int64_t n11 = 0;

    std::int64_t total() const { return n00 + n01 + n10 + n11; }
    std::int64_t from_zero() const { return n00 + n01; }
    std::int64_t from_one() const { return n10 + n11; }

    friend bool operator==(const TransitionCounts&,
                           const TransitionCounts&) = default;
};

TransitionCounts transition_counts(const HyperState& x, const HyperState& y);
// Same counts from the summary statistics (|x|, |y|, <x,y>).
TransitionCounts transition_counts(std::int64_t n, std::int64_t hx,
                                   std::int64_t hy, std::int64_t inner);

// A time-ordered trajectory x_0, ..., x_T, all states of the same length.
class SamplePath {
  public:
    SamplePath() = default;
    explicit SamplePath(std::vector<HyperState> states);

    std::int64_t n() const { return n_; }
    std::int64_t steps() const {
        return static_cast<std::int64_t>(states_.size()) - 1;
    }
    const std::vector<HyperState>& states() const { return states_; }
    const HyperState& at(std::int64_t t) const {
        return states_[static_cast<std::size_t>(t)];
    }

  private:
    std::int64_t n_ = 0;
    std::vector<HyperState> states_;
};

}  // namespace hyperwalk
