#include "qgp/brauer.hpp"

#include <algorithm>

#include "qgp/errors.hpp"

namespace qgp::brauer {

std::vector<std::pair<int, int>> PairPartition::pairs() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(k());
    for (int p = 0; p < 2 * k(); ++p)
        if (p < partner[p]) out.emplace_back(p, partner[p]);
    return out;
}

bool is_valid(const PairPartition& s) {
    const int n = static_cast<int>(s.partner.size());
    if (n == 0 || n % 2 != 0) return false;
    for (int p = 0; p < n; ++p) {
        const int q = s.partner[p];
        if (q < 0 || q >= n || q == p || s.partner[q] != p) return false;
    }
    return true;
}

PairPartition identity_diagram(int k) {
    PairPartition s;
    s.partner.resize(2 * k);
    for (int t = 0; t < k; ++t) {
        s.partner[t] = t + k;
        s.partner[t + k] = t;
    }
    return s;
}

PairPartition from_permutation(const perm::Permutation& p) {
    const int k = p.k();
    PairPartition s;
    s.partner.resize(2 * k);
    for (int t = 0; t < k; ++t) {
        s.partner[t] = k + p.image[t];
        s.partner[k + p.image[t]] = t;
    }
    return s;
}

bool is_permutation_diagram(const PairPartition& s) {
    const int k = s.k();
    for (int t = 0; t < k; ++t)
        if (s.partner[t] < k) return false;
    return true;
}

perm::Permutation to_permutation(const PairPartition& s) {
    if (!is_permutation_diagram(s))
        throw Error("to_permutation: diagram has bottom-bottom or top-top pairs");
    const int k = s.k();
    perm::Permutation p;
    p.image.resize(k);
    for (int t = 0; t < k; ++t) p.image[t] = s.partner[t] - k;
    return p;
}

namespace {

void matchings_rec(std::vector<int>& partner, int n, std::vector<PairPartition>& out) {
    int lo = 0;
    while (lo < n && partner[lo] >= 0) ++lo;
    if (lo == n) {
        out.push_back(PairPartition{partner});
        return;
    }
    for (int hi = lo + 1; hi < n; ++hi) {
        if (partner[hi] >= 0) continue;
        partner[lo] = hi;
        partner[hi] = lo;
        matchings_rec(partner, n, out);
        partner[lo] = -1;
        partner[hi] = -1;
    }
}

}  // namespace

std::vector<PairPartition> enumerate_brauer(int k, int max_k) {
    if (k > max_k)
        throw CapacityError("enumerate_brauer: k = " + std::to_string(k) +
                            " exceeds the configured limit " + std::to_string(max_k));
    std::vector<PairPartition> out;
    std::vector<int> partner(2 * k, -1);
    matchings_rec(partner, 2 * k, out);
    return out;
}

PairPartition transpose(const PairPartition& s) {
    const int k = s.k();
    const int n = 2 * k;
    PairPartition t;
    t.partner.resize(n);
    auto flip = [k, n](int p) { return (p + k) % n; };
    for (int p = 0; p < n; ++p) t.partner[flip(p)] = flip(s.partner[p]);
    return t;
}

std::pair<PairPartition, int> brauer_compose(const PairPartition& a, const PairPartition& b) {
    if (a.k() != b.k())
        throw OrderMismatchError("brauer_compose: diagrams of different order (" +
                                 std::to_string(a.k()) + " vs " + std::to_string(b.k()) + ")");
    const int k = a.k();

    // Stack b below a and follow strands. Vertices 0..2k-1 are b's points,
    // 2k..4k-1 are a's points (offset by 2k). Junction edges join b's top
    // point k+t to a's bottom point t. Endpoints (degree 1) are b's bottom
    // row (result bottom) and a's top row (result top); junction vertices
    // have degree 2, so each component is a path between endpoints or a
    // closed loop, and walking simply alternates partner / junction edges.
    const int total = 4 * k;
    auto is_endpoint = [&](int v) {
        return v < k /* b bottom */ || v >= 3 * k /* a top */;
    };
    auto take_partner = [&](int v) {
        return v < 2 * k ? b.partner[v] : 2 * k + a.partner[v - 2 * k];
    };
    auto take_junction = [&](int v) {
        // b top (k..2k-1) <-> a bottom (2k..3k-1)
        return v < 2 * k ? v + k : v - k;
    };
    auto as_result_point = [&](int v) {
        return v < k ? v : (v - 3 * k) + k;  // b bottom t -> t ; a top t -> k + t
    };

    std::vector<char> visited(total, 0);
    PairPartition result;
    result.partner.assign(2 * k, -1);

    for (int start = 0; start < total; ++start) {
        if (!is_endpoint(start) || visited[start]) continue;
        visited[start] = 1;
        int v = take_partner(start);
        while (!is_endpoint(v)) {
            visited[v] = 1;
            v = take_junction(v);
            visited[v] = 1;
            v = take_partner(v);
        }
        visited[v] = 1;
        const int p = as_result_point(start);
        const int q = as_result_point(v);
        result.partner[p] = q;
        result.partner[q] = p;
    }

    // Whatever junction vertices remain lie on closed loops. Each loop is one
    // factor of d; walk it once with the same alternation.
    int loops = 0;
    for (int start = k; start < 3 * k; ++start) {
        if (visited[start]) continue;
        ++loops;
        int v = start;
        do {
            visited[v] = 1;
            v = take_partner(v);
            visited[v] = 1;
            v = take_junction(v);
        } while (v != start);
    }
    return {result, loops};
}

std::vector<std::vector<int>> brauer_cycles(const PairPartition& s) {
    const int k = s.k();
    const int n = 2 * k;
    auto bar = [k, n](int p) { return (p + k) % n; };
    std::vector<std::vector<int>> cycles;
    std::vector<char> seen(n, 0);
    std::vector<int> stack;
    for (int start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<int> orbit;
        stack.assign(1, start);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = 1;
            orbit.push_back(v);
            stack.push_back(s.partner[v]);
            stack.push_back(bar(v));
        }
        std::sort(orbit.begin(), orbit.end());
        cycles.push_back(std::move(orbit));
    }
    return cycles;
}

BrauerCycleType brauer_cycle_type(const PairPartition& s) {
    BrauerCycleType t;
    t.nu.assign(s.k(), 0);
    for (const auto& c : brauer_cycles(s)) ++t.nu[c.size() / 2 - 1];
    return t;
}

Integer character(const PairPartition& s, long d) {
    return ipow(d, static_cast<int>(brauer_cycles(s).size()));
}

Integer trace_obs_power(const PairPartition& s, long d) {
    const auto cycles = brauer_cycles(s);
    for (const auto& c : cycles) {
        if ((c.size() / 2) % 2 != 0) return 0;  // odd cycle: a Tr[O^odd] = 0 factor
    }
    return ipow(d, static_cast<int>(cycles.size()));
}

double trace_state_product_brauer(const PairPartition& s, const Eigen::MatrixXd& g_real,
                                  const std::vector<int>& assignment) {
    const int k = s.k();
    if (static_cast<int>(assignment.size()) != k)
        throw OrderMismatchError("trace_state_product_brauer: assignment length != k");
    double out = 1.0;
    for (const auto& [p, q] : s.pairs()) {
        const int i = assignment[p % k];
        const int j = assignment[q % k];
        if (i < 0 || i >= g_real.rows() || j < 0 || j >= g_real.cols())
            throw Error("trace_state_product_brauer: assignment index out of range");
        out *= g_real(i, j);
    }
    return out;
}

Rational trace_state_product_brauer_exact(const PairPartition& s, const RationalMatrix& g,
                                          const std::vector<int>& assignment) {
    const int k = s.k();
    if (static_cast<int>(assignment.size()) != k)
        throw OrderMismatchError("trace_state_product_brauer_exact: assignment length != k");
    Rational out(1);
    for (const auto& [p, q] : s.pairs()) {
        const int i = assignment[p % k];
        const int j = assignment[q % k];
        if (i < 0 || i >= g.rows() || j < 0 || j >= g.cols())
            throw Error("trace_state_product_brauer_exact: assignment index out of range");
        out *= g(i, j);
    }
    return out;
}

}  // namespace qgp::brauer
