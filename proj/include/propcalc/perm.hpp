#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace propcalc {

// Permutation of {1..n}. Values are one-based throughout, matching the
// convention used in the JSON interchange format.
class Perm {
public:
    Perm() = default;
    explicit Perm(std::vector<int> images) : img_(std::move(images)) {
        std::vector<bool> seen(img_.size(), false);
        for (int v : img_) {
            if (v < 1 || v > static_cast<int>(img_.size()) || seen[v - 1])
                throw std::invalid_argument("Perm: images are not a bijection of {1..n}");
            seen[v - 1] = true;
        }
    }

    static Perm identity(int n) {
        std::vector<int> img(n);
        std::iota(img.begin(), img.end(), 1);
        return Perm(std::move(img));
    }

    int size() const { return static_cast<int>(img_.size()); }

    // image of i, one-based
    int operator()(int i) const {
        if (i < 1 || i > size()) throw std::invalid_argument("Perm: index out of range");
        return img_[i - 1];
    }

    const std::vector<int>& images() const { return img_; }

    bool is_identity() const {
        for (int i = 1; i <= size(); ++i)
            if (img_[i - 1] != i) return false;
        return true;
    }

    Perm inverse() const {
        std::vector<int> inv(img_.size());
        for (int i = 1; i <= size(); ++i) inv[img_[i - 1] - 1] = i;
        return Perm(std::move(inv));
    }

    bool operator==(const Perm& other) const { return img_ == other.img_; }
    bool operator!=(const Perm& other) const { return img_ != other.img_; }
    bool operator<(const Perm& other) const { return img_ < other.img_; }

private:
    std::vector<int> img_;
};

// (p*q)(i) = p(q(i))
Perm compose(const Perm& p, const Perm& q);

// All permutations of {1..n} in lexicographic order of their image vectors.
std::vector<Perm> all_perms(int n);

// Ordered partition of n into m blocks.
struct OrderedPartition {
    std::vector<int> sizes;

    int total() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }
    int blocks() const { return static_cast<int>(sizes.size()); }

    // The monotone map {1..n} -> {1..m} whose fibre sizes are the blocks.
    std::vector<int> monotone_map() const;
};

// Unshuffling of f : {1..n} -> {1..m}: the unique permutation w such that
// sorting the pairs (f(i), i) lexicographically places index i at position
// w(i); equivalently p_f . w = f for the monotone map p_f with the same
// fibre sizes.
Perm unshuffle(const std::vector<int>& f, int m);

// Block permutation: reorders the fibres of p according to sigma without
// changing the relative order inside each fibre. Equals unshuffle(sigma . p).
Perm block_perm(const Perm& sigma, const OrderedPartition& p);

// Twist between two total orders on the same finite set: beta^{-1} . alpha.
template <class T>
Perm twist(const std::vector<T>& alpha, const std::vector<T>& beta) {
    if (alpha.size() != beta.size())
        throw std::invalid_argument("twist: orders have different sizes");
    std::vector<int> img(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        auto it = std::find(beta.begin(), beta.end(), alpha[i]);
        if (it == beta.end())
            throw std::invalid_argument("twist: orders are not on the same set");
        img[i] = static_cast<int>(it - beta.begin()) + 1;
    }
    return Perm(std::move(img));
}

// Restriction of a total order to a subset: the subsequence lying in the set.
template <class T>
std::vector<T> restrict_order(const std::vector<T>& alpha, const std::vector<T>& subset) {
    for (const T& d : subset)
        if (std::find(alpha.begin(), alpha.end(), d) == alpha.end())
            throw std::invalid_argument("restrict_order: subset is not contained in the order");
    std::vector<T> out;
    for (const T& a : alpha)
        if (std::find(subset.begin(), subset.end(), a) != subset.end()) out.push_back(a);
    return out;
}

// Insertion of alpha over beta in d: beta's prefix before d, all of alpha,
// then beta's suffix after d.
template <class T>
std::vector<T> insert_order(const std::vector<T>& alpha, const std::vector<T>& beta, const T& d) {
    auto it = std::find(beta.begin(), beta.end(), d);
    if (it == beta.end()) throw std::invalid_argument("insert_order: element not in beta");
    for (const T& a : alpha)
        if (std::find(beta.begin(), beta.end(), a) != beta.end() && !(a == d))
            throw std::invalid_argument("insert_order: orders overlap");
    std::vector<T> out(beta.begin(), it);
    out.insert(out.end(), alpha.begin(), alpha.end());
    out.insert(out.end(), it + 1, beta.end());
    return out;
}

// result[i] = vec[perm(i+1)-1]; realizes precomposition of a total order
// (stored as a vector) with a permutation.
template <class T>
std::vector<T> apply_perm_to_positions(const Perm& perm, const std::vector<T>& vec) {
    if (perm.size() != static_cast<int>(vec.size()))
        throw std::invalid_argument("apply_perm_to_positions: size mismatch");
    std::vector<T> out(vec.size());
    for (int i = 1; i <= perm.size(); ++i) out[i - 1] = vec[perm(i) - 1];
    return out;
}

}  // namespace propcalc
