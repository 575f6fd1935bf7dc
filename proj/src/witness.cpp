#include "boundsim/witness.hpp"

#include "boundsim/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace boundsim {

namespace {

constexpr double kTieTol = 1e-12;

// Minimum-cost perfect matching on the square cost matrix restricted to the
// given rows and columns (Hungarian algorithm with potentials). Returns the
// assignment as column indices aligned with `rows`.
std::vector<int> hungarian_min(const Eigen::MatrixXd& cost, const std::vector<int>& rows,
                               const std::vector<int>& cols) {
    const int n = static_cast<int>(rows.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    auto a = [&](int i, int j) { return cost(rows[i - 1], cols[j - 1]); };

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> assign(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) assign[static_cast<std::size_t>(match[j] - 1)] = cols[j - 1];
    return assign;
}

double assignment_value(const ProbabilityTable& t, const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.empty()) return 0.0;
    const std::vector<int> a = hungarian_min(-t, rows, cols);
    double s = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) s += t(rows[i], a[i]);
    return s;
}

Relabeling exhaustive(const ProbabilityTable& table) {
    const int d = static_cast<int>(table.rows());
    Permutation sigma(static_cast<std::size_t>(d));
    std::iota(sigma.begin(), sigma.end(), 0);
    Relabeling best{sigma, correlation(table, sigma)};
    while (std::next_permutation(sigma.begin(), sigma.end())) {
        const double c = correlation(table, sigma);
        if (c > best.value + kTieTol) best = {sigma, c};
    }
    return best;
}

// Hungarian optimum, then fix sigma(0), sigma(1), ... to the smallest column
// that still admits an optimal completion.
Relabeling assignment(const ProbabilityTable& table) {
    const int d = static_cast<int>(table.rows());
    std::vector<int> all(static_cast<std::size_t>(d));
    std::iota(all.begin(), all.end(), 0);
    const double optimum = assignment_value(table, all, all);

    Permutation sigma(static_cast<std::size_t>(d), -1);
    std::vector<int> free_cols = all;
    double fixed = 0.0;
    for (int i = 0; i < d; ++i) {
        std::vector<int> rest_rows;
        for (int r = i + 1; r < d; ++r) rest_rows.push_back(r);
        for (std::size_t ci = 0; ci < free_cols.size(); ++ci) {
            const int j = free_cols[ci];
            std::vector<int> rest_cols = free_cols;
            rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(ci));
            const double total = fixed + table(i, j) + assignment_value(table, rest_rows, rest_cols);
            if (total >= optimum - kTieTol || ci + 1 == free_cols.size()) {
                sigma[static_cast<std::size_t>(i)] = j;
                fixed += table(i, j);
                free_cols = std::move(rest_cols);
                break;
            }
        }
    }
    return {sigma, correlation(table, sigma)};
}

void check_permutation(const Permutation& sigma, int d) {
    if (static_cast<int>(sigma.size()) != d) throw UnsupportedLabeling("permutation has wrong length");
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    for (int s : sigma) {
        if (s < 0 || s >= d || seen[static_cast<std::size_t>(s)])
            throw UnsupportedLabeling("relabeling is not a bijection");
        seen[static_cast<std::size_t>(s)] = 1;
    }
}

}  // namespace

std::string to_string(LabelingMode mode) {
    switch (mode) {
        case LabelingMode::MethodsD3: return "methods";
        case LabelingMode::Fixed: return "fixed";
        case LabelingMode::Maximize: return "max";
    }
    return "?";
}

double joint_prob(const ComplexMatrix& rho, const Ket& ket_a, const Ket& ket_b) {
    if (rho.rows() != rho.cols() || rho.rows() != ket_a.size() * ket_b.size())
        throw DimensionMismatch("joint_prob: state is " + std::to_string(rho.rows()) + "-dimensional, kets give " +
                                std::to_string(ket_a.size() * ket_b.size()));
    const Ket ab = kron(ket_a, ket_b);
    const double p = ab.dot(rho * ab).real();
    return std::clamp(p, 0.0, 1.0);
}

ProbabilityTable joint_table(const ComplexMatrix& rho, const Basis& basis_a, const Basis& basis_b) {
    if (basis_a.size() != basis_b.size()) throw DimensionMismatch("bases differ in size");
    const Eigen::Index d = static_cast<Eigen::Index>(basis_a.size());
    ProbabilityTable t(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            t(i, j) = joint_prob(rho, basis_a[static_cast<std::size_t>(i)], basis_b[static_cast<std::size_t>(j)]);
    return t;
}

double correlation(const ProbabilityTable& table, const Permutation& sigma) {
    double c = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) c += table(static_cast<Eigen::Index>(i), sigma[i]);
    return c;
}

double correlation(const ComplexMatrix& rho, const Basis& basis_a, const Basis& basis_b, const Permutation& sigma) {
    check_permutation(sigma, static_cast<int>(basis_a.size()));
    return correlation(joint_table(rho, basis_a, basis_b), sigma);
}

Relabeling best_relabeling(const ProbabilityTable& table) {
    return table.rows() <= 6 ? exhaustive(table) : assignment(table);
}

Relabeling best_relabeling(const ComplexMatrix& rho, const Basis& basis_a, const Basis& basis_b) {
    return best_relabeling(joint_table(rho, basis_a, basis_b));
}

Labeling methods_labeling_d3() {
    return Labeling{{{1, 2, 0}, {0, 1, 2}, {0, 1, 2}, {0, 1, 2}}, true};
}

double separable_bound(int m, int d) {
    if (m < 1 || d < 2) throw OutOfRange("separable_bound needs m >= 1 and d >= 2");
    return 1.0 + static_cast<double>(m - 1) / d;
}

CorrelationReport mcp_from_tables(int d, const std::vector<ProbabilityTable>& tables, const LabelingChoice& choice) {
    const int m = static_cast<int>(tables.size());
    CorrelationReport rep;
    rep.d = d;
    rep.m = m;
    rep.mode = choice.mode;
    rep.bound = separable_bound(m, d);

    switch (choice.mode) {
        case LabelingMode::MethodsD3:
            if (d != 3 || m != 4) throw UnsupportedLabeling("methods labeling is defined for d = 3 with 4 bases");
            rep.labeling = methods_labeling_d3();
            break;
        case LabelingMode::Fixed:
            if (static_cast<int>(choice.fixed.sigma.size()) != m)
                throw UnsupportedLabeling("labeling has " + std::to_string(choice.fixed.sigma.size()) +
                                          " permutations for " + std::to_string(m) + " bases");
            for (const Permutation& s : choice.fixed.sigma) check_permutation(s, d);
            rep.labeling = choice.fixed;
            break;
        case LabelingMode::Maximize:
            rep.labeling.conjugate_bob = true;
            break;
    }

    for (int k = 0; k < m; ++k) {
        const ProbabilityTable& t = tables[static_cast<std::size_t>(k)];
        if (t.rows() != d || t.cols() != d) throw DimensionMismatch("joint table is not d x d");
        double c = 0.0;
        if (choice.mode == LabelingMode::Maximize) {
            Relabeling best = best_relabeling(t);
            c = best.value;
            rep.labeling.sigma.push_back(std::move(best.sigma));
        } else {
            c = correlation(t, rep.labeling.sigma[static_cast<std::size_t>(k)]);
        }
        rep.correlations.push_back(c);
    }
    // fixed order summation keeps the report bit-reproducible
    for (double c : rep.correlations) rep.sum += c;
    if (m == d + 1) rep.witness = 2.0 - rep.sum;
    return rep;
}

CorrelationReport mcp(const ComplexMatrix& rho, const MubFamily& fam, const LabelingChoice& labeling) {
    const int d = fam.d;
    if (rho.rows() != Eigen::Index{d} * d || rho.cols() != rho.rows())
        throw DimensionMismatch("state dimension " + std::to_string(rho.rows()) + " does not match family d = " +
                                std::to_string(d));
    const bool conjugate = labeling.mode != LabelingMode::Fixed || labeling.fixed.conjugate_bob;
    std::vector<ProbabilityTable> tables;
    tables.reserve(fam.bases.size());
    for (const Basis& b : fam.bases) tables.push_back(joint_table(rho, b, conjugate ? conjugate_basis(b) : b));
    CorrelationReport rep = mcp_from_tables(d, tables, labeling);
    rep.labeling.conjugate_bob = conjugate;
    return rep;
}

BellResponse::BellResponse(const MubFamily& fam, bool conjugate_bob) : d_(fam.d), conjugate_bob_(conjugate_bob) {
    std::vector<Ket> bell;
    for (int k = 0; k < d_; ++k)
        for (int l = 0; l < d_; ++l) bell.push_back(bell_vector(d_, k, l));

    for (const Basis& a : fam.bases) {
        const Basis b = conjugate_bob ? conjugate_basis(a) : a;
        std::vector<ProbabilityTable> per_state(bell.size(), ProbabilityTable::Zero(d_, d_));
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) {
                const Ket ab = kron(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
                for (std::size_t s = 0; s < bell.size(); ++s) per_state[s](i, j) = std::norm(ab.dot(bell[s]));
            }
        tables_.push_back(std::move(per_state));
    }
}

const ProbabilityTable& BellResponse::table(int m, int k, int l) const {
    return tables_[static_cast<std::size_t>(m)][static_cast<std::size_t>(k * d_ + l)];
}

std::vector<ProbabilityTable> BellResponse::tables(const SimplexCoeffs& coeffs) const {
    if (coeffs.d != d_) throw DimensionMismatch("coefficients and response differ in d");
    std::vector<ProbabilityTable> out;
    out.reserve(tables_.size());
    for (const auto& per_state : tables_) {
        ProbabilityTable t = ProbabilityTable::Zero(d_, d_);
        for (std::size_t s = 0; s < per_state.size(); ++s)
            if (coeffs.c[s] != 0.0) t += coeffs.c[s] * per_state[s];
        out.push_back(std::move(t));
    }
    return out;
}

CorrelationReport mcp_simplex(const SimplexCoeffs& coeffs, const BellResponse& response,
                              const LabelingChoice& labeling) {
    const bool conjugate = labeling.mode != LabelingMode::Fixed || labeling.fixed.conjugate_bob;
    if (conjugate != response.conjugate_bob())
        throw UnsupportedLabeling("Bob conjugation of the labeling differs from the precomputed response");
    CorrelationReport rep = mcp_from_tables(coeffs.d, response.tables(coeffs), labeling);
    rep.labeling.conjugate_bob = conjugate;
    return rep;
}

}  // namespace boundsim
