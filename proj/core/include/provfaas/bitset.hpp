#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace provfaas {

// Fixed-universe bitset sized at runtime. Node and edge sets over dense ids.
class DynamicBitset {
public:
    DynamicBitset() = default;
    explicit DynamicBitset(std::size_t bits)
        : size_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    void set(std::size_t i) { words_[i >> 6] |= (1ULL << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(1ULL << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    // Set operations require the same universe size; mixing bitsets built
    // against different graph snapshots is a bug worth failing loudly on.
    DynamicBitset& operator|=(const DynamicBitset& o) {
        check_same_universe(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    DynamicBitset& operator&=(const DynamicBitset& o) {
        check_same_universe(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    friend DynamicBitset operator|(DynamicBitset a, const DynamicBitset& b) { return a |= b; }
    friend DynamicBitset operator&(DynamicBitset a, const DynamicBitset& b) { return a &= b; }

    bool operator==(const DynamicBitset& o) const = default;

    // True when every set bit of *this is also set in o.
    bool is_subset_of(const DynamicBitset& o) const {
        check_same_universe(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    template <typename F>
    void for_each_set(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                const int b = std::countr_zero(w);
                f(wi * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each_set([&](std::size_t i) { out.push_back(i); });
        return out;
    }

private:
    void check_same_universe(const DynamicBitset& o) const {
        if (size_ != o.size_) throw std::invalid_argument("DynamicBitset: universe size mismatch");
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace provfaas
