#include "propcalc/perm.hpp"

namespace propcalc {

Perm compose(const Perm& p, const Perm& q) {
    if (p.size() != q.size()) throw std::invalid_argument("compose: size mismatch");
    std::vector<int> img(p.size());
    for (int i = 1; i <= p.size(); ++i) img[i - 1] = p(q(i));
    return Perm(std::move(img));
}

std::vector<Perm> all_perms(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    std::vector<Perm> out;
    do {
        out.push_back(Perm(img));
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

std::vector<int> OrderedPartition::monotone_map() const {
    std::vector<int> f;
    f.reserve(total());
    for (int b = 0; b < blocks(); ++b) {
        if (sizes[b] < 0) throw std::invalid_argument("OrderedPartition: negative block");
        for (int k = 0; k < sizes[b]; ++k) f.push_back(b + 1);
    }
    return f;
}

Perm unshuffle(const std::vector<int>& f, int m) {
    const int n = static_cast<int>(f.size());
    for (int v : f)
        if (v < 1 || v > m) throw std::invalid_argument("unshuffle: value out of range");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // pairs (f(i), i) are distinct, but keep the sort stable so the
    // derivation is auditable
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return f[a] < f[b]; });
    std::vector<int> img(n);
    for (int pos = 0; pos < n; ++pos) img[order[pos]] = pos + 1;
    return Perm(std::move(img));
}

Perm block_perm(const Perm& sigma, const OrderedPartition& p) {
    if (sigma.size() != p.blocks())
        throw std::invalid_argument("block_perm: block count mismatch");
    std::vector<int> f = p.monotone_map();
    for (int& v : f) v = sigma(v);
    return unshuffle(f, p.blocks());
}

}  // namespace propcalc
