#include "qgp/perm.hpp"

#include <algorithm>
#include <numeric>

#include "qgp/errors.hpp"

namespace qgp::perm {

bool Permutation::is_identity() const {
    for (int i = 0; i < k(); ++i)
        if (image[i] != i) return false;
    return true;
}

Permutation identity(int k) {
    Permutation p;
    p.image.resize(k);
    std::iota(p.image.begin(), p.image.end(), 0);
    return p;
}

bool is_valid(const Permutation& p) {
    std::vector<char> seen(p.k(), 0);
    for (int v : p.image) {
        if (v < 0 || v >= p.k() || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.k() != b.k())
        throw OrderMismatchError("compose: permutations of different order (" +
                                 std::to_string(a.k()) + " vs " + std::to_string(b.k()) + ")");
    Permutation c;
    c.image.resize(a.k());
    for (int i = 0; i < a.k(); ++i) c.image[i] = a.image[b.image[i]];
    return c;
}

Permutation inverse(const Permutation& p) {
    Permutation q;
    q.image.resize(p.k());
    for (int i = 0; i < p.k(); ++i) q.image[p.image[i]] = i;
    return q;
}

std::vector<std::vector<int>> cycle_decomposition(const Permutation& p) {
    std::vector<std::vector<int>> cycles;
    std::vector<char> seen(p.k(), 0);
    // Scanning start points in increasing order makes every cycle begin at its
    // minimum and sorts cycles by minima, which is the canonical form.
    for (int start = 0; start < p.k(); ++start) {
        if (seen[start]) continue;
        std::vector<int> cycle;
        int i = start;
        do {
            seen[i] = 1;
            cycle.push_back(i);
            i = p.image[i];
        } while (i != start);
        cycles.push_back(std::move(cycle));
    }
    return cycles;
}

CycleType cycle_type(const Permutation& p) {
    CycleType t;
    t.nu.assign(p.k(), 0);
    for (const auto& c : cycle_decomposition(p)) ++t.nu[c.size() - 1];
    return t;
}

int cycle_count(const Permutation& p) {
    int n = 0;
    std::vector<char> seen(p.k(), 0);
    for (int start = 0; start < p.k(); ++start) {
        if (seen[start]) continue;
        ++n;
        for (int i = start; !seen[i]; i = p.image[i]) seen[i] = 1;
    }
    return n;
}

Integer character(const Permutation& p, long d) { return ipow(d, cycle_count(p)); }

Integer trace_obs_power(const Permutation& p, long d) {
    // Tr[O^L] per cycle: L odd gives 0 (traceless), L even gives d (O² = 1).
    const auto cycles = cycle_decomposition(p);
    for (const auto& c : cycles)
        if (c.size() % 2 != 0) return Integer(0);
    return ipow(d, static_cast<int>(cycles.size()));
}

std::vector<Permutation> enumerate_group(int k, int max_k) {
    if (k > max_k)
        throw CapacityError("enumerate_group: k = " + std::to_string(k) +
                            " exceeds the configured limit " + std::to_string(max_k));
    std::vector<Permutation> out;
    Permutation p = identity(k);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.image.begin(), p.image.end()));
    return out;
}

namespace {

void pairings_rec(std::vector<int>& image, std::vector<char>& used, int k,
                  std::vector<Permutation>& out) {
    int lo = 0;
    while (lo < k && used[lo]) ++lo;
    if (lo == k) {
        out.push_back(Permutation{image});
        return;
    }
    used[lo] = 1;
    for (int hi = lo + 1; hi < k; ++hi) {
        if (used[hi]) continue;
        used[hi] = 1;
        image[lo] = hi;
        image[hi] = lo;
        pairings_rec(image, used, k, out);
        used[hi] = 0;
    }
    used[lo] = 0;
}

}  // namespace

std::vector<Permutation> enumerate_pairings(int k, int max_k) {
    if (k % 2 != 0)
        throw Error("enumerate_pairings: order must be even, got " + std::to_string(k));
    if (k > max_k)
        throw CapacityError("enumerate_pairings: k = " + std::to_string(k) +
                            " exceeds the configured limit " + std::to_string(max_k));
    std::vector<Permutation> out;
    std::vector<int> image(k, -1);
    std::vector<char> used(k, 0);
    pairings_rec(image, used, k, out);
    return out;
}

Integer pairing_count(int k) {
    if (k % 2 != 0) return 0;
    Integer n = 1;
    for (int j = k - 1; j > 1; j -= 2) n *= j;
    return n;
}

// Tr[Lambda P_d(p)] factorizes completely over tensor slots: summing the
// basis index attached to slot t contracts the bra of slot t against the ket
// of slot p(t), leaving prod_t <psi_{a(p(t))} | psi_{a(t)}>. This equals the
// usual product of inner products around each cycle.
std::complex<double> trace_state_product(const Permutation& p, const Eigen::MatrixXcd& g,
                                         const std::vector<int>& assignment) {
    if (static_cast<int>(assignment.size()) != p.k())
        throw OrderMismatchError("trace_state_product: assignment length != k");
    std::complex<double> out(1.0, 0.0);
    for (int t = 0; t < p.k(); ++t) {
        const int row = assignment[p.image[t]];
        const int col = assignment[t];
        if (row < 0 || row >= g.rows() || col < 0 || col >= g.cols())
            throw Error("trace_state_product: assignment index out of range");
        out *= g(row, col);
    }
    return out;
}

Rational trace_state_product_exact(const Permutation& p, const RationalMatrix& g,
                                   const std::vector<int>& assignment) {
    if (static_cast<int>(assignment.size()) != p.k())
        throw OrderMismatchError("trace_state_product_exact: assignment length != k");
    Rational out(1);
    for (int t = 0; t < p.k(); ++t) {
        const int row = assignment[p.image[t]];
        const int col = assignment[t];
        if (row < 0 || row >= g.rows() || col < 0 || col >= g.cols())
            throw Error("trace_state_product_exact: assignment index out of range");
        out *= g(row, col);
    }
    return out;
}

}  // namespace qgp::perm
