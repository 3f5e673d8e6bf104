#include "qgp/weingarten.hpp"

#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "qgp/errors.hpp"

namespace qgp::weingarten {

std::string to_string(Group g) {
    return g == Group::unitary ? "unitary" : "orthogonal";
}

Group group_from_string(const std::string& name) {
    if (name == "unitary" || name == "U" || name == "u") return Group::unitary;
    if (name == "orthogonal" || name == "O" || name == "o") return Group::orthogonal;
    throw Error("unknown group '" + name + "' (expected 'unitary' or 'orthogonal')");
}

int default_k_max(Group g) { return g == Group::unitary ? 6 : 4; }

namespace {

int resolve_k_max(Group g, int max_k) { return max_k < 0 ? default_k_max(g) : max_k; }

void check_order(Group g, int k, long d, int max_k) {
    if (k < 1) throw Error("moment order must be at least 1");
    if (d < 1) throw Error("dimension must be at least 1");
    if (k > max_k)
        throw CapacityError("moment order k = " + std::to_string(k) +
                            " exceeds the exact-inversion limit " + std::to_string(max_k) +
                            " for the " + to_string(g) + " group (basis size grows as " +
                            (g == Group::unitary ? "k!" : "(2k-1)!!") + ")");
}

}  // namespace

RationalMatrix gram_matrix(Group g, int k, long d, int max_k) {
    check_order(g, k, d, resolve_k_max(g, max_k));
    if (g == Group::unitary) {
        const auto basis = perm::enumerate_group(k, k);
        const int n = static_cast<int>(basis.size());
        RationalMatrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = Rational(perm::character(perm::compose(basis[i], basis[j]), d));
        return a;
    }
    const auto basis = brauer::enumerate_brauer(k, k);
    const int n = static_cast<int>(basis.size());
    RationalMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const auto [comp, loops] = brauer::brauer_compose(basis[i], basis[j]);
            Rational entry(ipow(d, loops) * brauer::character(comp, d));
            a(i, j) = entry;
            a(j, i) = entry;  // Tr[FG] = Tr[GF]
        }
    }
    return a;
}

WeingartenTable build_table(Group g, int k, long d, int max_k) {
    check_order(g, k, d, resolve_k_max(g, max_k));
    WeingartenTable t;
    t.group = g;
    t.k = k;
    t.d = d;
    if (g == Group::unitary)
        t.perm_basis = perm::enumerate_group(k, k);
    else
        t.brauer_basis = brauer::enumerate_brauer(k, k);
    t.gram = gram_matrix(g, k, d, resolve_k_max(g, max_k));
    try {
        t.wg = invert(t.gram);
    } catch (const SingularGramError&) {
        throw SingularGramError("commutant basis is linearly dependent at d = " +
                                std::to_string(d) + ", k = " + std::to_string(k) +
                                " (" + to_string(g) + "); need d >= k");
    }
    return t;
}

void MomentSpec::validate(Group g) const {
    if (inner == nullptr) throw Error("moment spec has no inner-product matrix");
    if (assignment.empty()) throw Error("moment spec has an empty slot assignment");
    for (int s : assignment)
        if (s < 0 || s >= inner->m())
            throw Error("slot assignment references state " + std::to_string(s) +
                        " outside the dataset (m = " + std::to_string(inner->m()) + ")");
    if (g == Group::orthogonal && !inner->real_flag)
        throw RealStatesRequiredError(
            "orthogonal-group moments require a real-amplitude dataset");
}

namespace {

void check_table_matches(const WeingartenTable& table, const MomentSpec& spec) {
    spec.validate(table.group);
    if (spec.k() != table.k)
        throw OrderMismatchError("slot assignment has k = " + std::to_string(spec.k()) +
                                 " but the table was built for k = " +
                                 std::to_string(table.k));
}

}  // namespace

Rational exact_moment(const WeingartenTable& table, const MomentSpec& spec) {
    check_table_matches(table, spec);
    if (!spec.inner->exact)
        throw Error(
            "dataset has no exact inner products; use exact_moment_numeric instead");
    const RationalMatrix& g_exact = *spec.inner->exact;
    const int n = table.size();

    std::vector<Rational> obs(n);    // Tr[P_ν O^(⊗k)]
    std::vector<Rational> state(n);  // Tr[Λ P_μ]
    for (int i = 0; i < n; ++i) {
        if (table.group == Group::unitary) {
            obs[i] = Rational(perm::trace_obs_power(table.perm_basis[i], table.d));
            state[i] =
                perm::trace_state_product_exact(table.perm_basis[i], g_exact, spec.assignment);
        } else {
            obs[i] = Rational(brauer::trace_obs_power(table.brauer_basis[i], table.d));
            state[i] = brauer::trace_state_product_brauer_exact(table.brauer_basis[i], g_exact,
                                                                spec.assignment);
        }
    }

    Rational total(0);
    for (int nu = 0; nu < n; ++nu) {
        if (obs[nu] == 0) continue;
        Rational row(0);
        for (int mu = 0; mu < n; ++mu) row += table.wg(nu, mu) * state[mu];
        total += obs[nu] * row;
    }
    return total;
}

double exact_moment_numeric(const WeingartenTable& table, const MomentSpec& spec) {
    check_table_matches(table, spec);
    const int n = table.size();

    std::vector<double> obs(n);
    std::vector<std::complex<double>> state(n);
    if (table.group == Group::unitary) {
        for (int i = 0; i < n; ++i) {
            obs[i] = to_double(Rational(perm::trace_obs_power(table.perm_basis[i], table.d)));
            state[i] =
                perm::trace_state_product(table.perm_basis[i], spec.inner->g, spec.assignment);
        }
    } else {
        const Eigen::MatrixXd g_real = spec.inner->g.real();
        for (int i = 0; i < n; ++i) {
            obs[i] =
                to_double(Rational(brauer::trace_obs_power(table.brauer_basis[i], table.d)));
            state[i] = brauer::trace_state_product_brauer(table.brauer_basis[i], g_real,
                                                          spec.assignment);
        }
    }

    std::complex<double> total(0.0, 0.0);
    for (int nu = 0; nu < n; ++nu) {
        if (obs[nu] == 0.0) continue;
        std::complex<double> row(0.0, 0.0);
        for (int mu = 0; mu < n; ++mu) row += to_double(table.wg(nu, mu)) * state[mu];
        total += obs[nu] * row;
    }
    // The moment is an expectation of a product of real random variables;
    // imaginary parts of the slot traces cancel in the sum.
    return total.real();
}

Rational exact_moment(Group g, long d, const MomentSpec& spec) {
    return exact_moment(build_table(g, static_cast<int>(spec.assignment.size()), d), spec);
}

double exact_moment_numeric(Group g, long d, const MomentSpec& spec) {
    return exact_moment_numeric(build_table(g, static_cast<int>(spec.assignment.size()), d),
                                spec);
}

Rational exact_covariance(const Rational& overlap, long d, Group g) {
    const Rational dd(d);
    if (g == Group::unitary) {
        // d/(d²-1) · (w - 1/d)
        return dd / (dd * dd - 1) * (overlap - Rational(1, d));
    }
    // 2(d+1)/((d+2)(d-1)) · (w·(1 - 1/(d+1)) - 1/(d+1))
    const Rational dp1 = dd + 1;
    return Rational(2) * dp1 / ((dd + 2) * (dd - 1)) *
           (overlap * (Rational(1) - Rational(1) / dp1) - Rational(1) / dp1);
}

double exact_covariance(double overlap, long d, Group g) {
    const double dd = static_cast<double>(d);
    if (g == Group::unitary) return dd / (dd * dd - 1.0) * (overlap - 1.0 / dd);
    return 2.0 * (dd + 1.0) / ((dd + 2.0) * (dd - 1.0)) *
           (overlap * (1.0 - 1.0 / (dd + 1.0)) - 1.0 / (dd + 1.0));
}

Rational cross_observable_covariance() { return Rational(0); }

// --- table cache -------------------------------------------------------------

namespace {

using nlohmann::json;

json matrix_to_json(const RationalMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) {
            const Rational& q = m(i, j);
            row.push_back({q.get_num().get_str(), q.get_den().get_str()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RationalMatrix matrix_from_json(const json& rows) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw Error("cached table has an empty matrix");
    RationalMatrix m(n, static_cast<int>(rows.at(0).size()));
    for (int i = 0; i < n; ++i) {
        const json& row = rows.at(i);
        if (static_cast<int>(row.size()) != m.cols())
            throw Error("cached table has a ragged matrix");
        for (int j = 0; j < m.cols(); ++j)
            m(i, j) = rational_from_strings(row.at(j).at(0).get<std::string>(),
                                            row.at(j).at(1).get<std::string>());
    }
    return m;
}

constexpr const char* kCacheFormat = "weingarten-table";
constexpr int kCacheVersion = 1;

}  // namespace

std::string table_filename(Group g, int k, long d) {
    std::ostringstream ss;
    ss << "wg_" << to_string(g) << "_k" << k << "_d" << d << ".json";
    return ss.str();
}

void save_table(const WeingartenTable& table, const std::string& path) {
    json doc;
    doc["format"] = kCacheFormat;
    doc["version"] = kCacheVersion;
    doc["group"] = to_string(table.group);
    doc["k"] = table.k;
    doc["d"] = table.d;
    json basis = json::array();
    if (table.group == Group::unitary)
        for (const auto& p : table.perm_basis) basis.push_back(p.image);
    else
        for (const auto& s : table.brauer_basis) basis.push_back(s.partner);
    doc["basis"] = std::move(basis);
    doc["gram"] = matrix_to_json(table.gram);
    doc["wg"] = matrix_to_json(table.wg);

    std::ofstream out(path);
    if (!out) throw Error("cannot write table cache file: " + path);
    out << doc.dump(1, '\t') << "\n";
    if (!out) throw Error("failed while writing table cache file: " + path);
}

WeingartenTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read table cache file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error("malformed table cache file " + path + ": " + e.what());
    }
    if (doc.value("format", "") != kCacheFormat || doc.value("version", 0) != kCacheVersion)
        throw Error("unrecognized table cache format in " + path);

    WeingartenTable t;
    try {
        t.group = group_from_string(doc.at("group").get<std::string>());
        t.k = doc.at("k").get<int>();
        t.d = doc.at("d").get<long>();
        for (const auto& entry : doc.at("basis")) {
            if (t.group == Group::unitary) {
                perm::Permutation p{entry.get<std::vector<int>>()};
                if (!perm::is_valid(p) || p.k() != t.k)
                    throw Error("corrupt permutation basis in " + path);
                t.perm_basis.push_back(std::move(p));
            } else {
                brauer::PairPartition s{entry.get<std::vector<int>>()};
                if (!brauer::is_valid(s) || s.k() != t.k)
                    throw Error("corrupt diagram basis in " + path);
                t.brauer_basis.push_back(std::move(s));
            }
        }
        t.gram = matrix_from_json(doc.at("gram"));
        t.wg = matrix_from_json(doc.at("wg"));
    } catch (const json::exception& e) {
        // Missing keys or wrong value types count as corruption, not a crash.
        throw Error("malformed table cache file " + path + ": " + e.what());
    }

    const int n = t.size();
    const int basis_n = t.group == Group::unitary ? static_cast<int>(t.perm_basis.size())
                                                  : static_cast<int>(t.brauer_basis.size());
    if (basis_n != n || t.wg.rows() != n || t.gram.cols() != n || t.wg.cols() != n)
        throw Error("inconsistent matrix shapes in " + path);
    // Cheap corruption check for the sizes we actually cache: A·W must be the
    // identity. (Skipped above 256 where the product would dominate a rebuild.)
    if (n <= 256 && !t.gram.multiply(t.wg).is_identity())
        throw Error("cached table fails the inversion identity: " + path);
    return t;
}

WeingartenTable cached_table(Group g, int k, long d, const std::string& cache_dir,
                             int max_k) {
    if (cache_dir.empty()) return build_table(g, k, d, max_k);
    namespace fs = std::filesystem;
    const fs::path dir(cache_dir);
    const fs::path path = dir / table_filename(g, k, d);
    if (fs::exists(path)) {
        try {
            WeingartenTable t = load_table(path.string());
            if (t.group == g && t.k == k && t.d == d) return t;
        } catch (const Error&) {
            // fall through to a rebuild; the fresh table overwrites the stale file
        }
    }
    WeingartenTable t = build_table(g, k, d, max_k);
    std::error_code ec;
    fs::create_directories(dir, ec);
    save_table(t, path.string());
    return t;
}

}  // namespace qgp::weingarten
