#include "boundsim/search.hpp"

#include "boundsim/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace boundsim {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const VectorXd& a, const VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// The state family as an affine map q -> c(q) together with the partial
// transpose A(q) = sum c_{k,l}(q) P_{k,l}^{T_A}, split into the diagonal
// blocks of its (q-independent) sparsity pattern.
class FamilyModel {
public:
    explicit FamilyModel(int d)
        : d_(d), np_(d > 3 ? 4 : 3), fam_(mub_family(d)), response_(fam_) {
        const std::size_t n = static_cast<std::size_t>(d * d);
        c0_ = coeffs_from_family(params(VectorXd::Zero(np_))).c;
        for (int p = 0; p < np_; ++p) {
            const std::vector<double> cp = coeffs_from_family(params(VectorXd::Unit(np_, p))).c;
            std::vector<double> g(n);
            for (std::size_t s = 0; s < n; ++s) g[s] = cp[s] - c0_[s];
            g_.push_back(std::move(g));
        }

        std::vector<ComplexMatrix> pt;
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) pt.push_back(partial_transpose(bell_state(d, k, l), d, d, Subsystem::A));
        find_blocks(pt);

        for (const auto& idx : blocks_) {
            const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
            ComplexMatrix a0 = ComplexMatrix::Zero(m, m);
            std::vector<ComplexMatrix> ai(static_cast<std::size_t>(np_), ComplexMatrix::Zero(m, m));
            for (std::size_t s = 0; s < n; ++s) {
                ComplexMatrix sub(m, m);
                for (Eigen::Index i = 0; i < m; ++i)
                    for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = pt[s](idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
                a0 += c0_[s] * sub;
                for (int p = 0; p < np_; ++p) ai[static_cast<std::size_t>(p)] += g_[static_cast<std::size_t>(p)][s] * sub;
            }
            a0_.push_back(std::move(a0));
            ai_.push_back(std::move(ai));
        }
    }

    int d() const { return d_; }
    int np() const { return np_; }
    const MubFamily& family() const { return fam_; }
    const BellResponse& response() const { return response_; }
    std::size_t blocks() const { return a0_.size(); }
    const std::vector<std::vector<double>>& gradients() const { return g_; }

    FamilyParams params(const VectorXd& q) const {
        FamilyParams p{d_, q(0), q(1), q(2), std::nullopt};
        if (np_ == 4) p.q4 = q(3);
        return p;
    }

    std::vector<double> coeff_vec(const VectorXd& q) const {
        std::vector<double> c = c0_;
        for (int p = 0; p < np_; ++p)
            for (std::size_t s = 0; s < c.size(); ++s) c[s] += q(p) * g_[static_cast<std::size_t>(p)][s];
        return c;
    }

    ComplexMatrix block(std::size_t b, const VectorXd& q) const {
        ComplexMatrix a = a0_[b];
        for (int p = 0; p < np_; ++p) a += q(p) * ai_[b][static_cast<std::size_t>(p)];
        return a;
    }
    const ComplexMatrix& block_gradient(std::size_t b, int p) const { return ai_[b][static_cast<std::size_t>(p)]; }

    double min_pt_eig(const VectorXd& q) const {
        double m = kInf;
        for (std::size_t b = 0; b < blocks(); ++b) m = std::min(m, herm_eigvals(block(b, q)).min());
        return m;
    }

    // witness(q) = offset + slope . q for a fixed relabeling
    void linear_witness(const Labeling& lab, double& offset, VectorXd& slope) const {
        const std::size_t n = c0_.size();
        std::vector<double> h(n, 0.0);
        for (int m = 0; m < response_.bases(); ++m) {
            const Permutation& sigma = lab.sigma[static_cast<std::size_t>(m)];
            for (int k = 0; k < d_; ++k)
                for (int l = 0; l < d_; ++l) {
                    const ProbabilityTable& t = response_.table(m, k, l);
                    double s = 0.0;
                    for (int i = 0; i < d_; ++i) s += t(i, sigma[static_cast<std::size_t>(i)]);
                    h[static_cast<std::size_t>(k * d_ + l)] += s;
                }
        }
        offset = 2.0;
        slope = VectorXd::Zero(np_);
        for (std::size_t s = 0; s < n; ++s) {
            offset -= h[s] * c0_[s];
            for (int p = 0; p < np_; ++p) slope(p) -= h[s] * g_[static_cast<std::size_t>(p)][s];
        }
    }

    // Parameter box implied by 0 <= c <= 1 on each weight block.
    void box(VectorXd& lo, VectorXd& hi) const {
        const double dd = d_;
        lo.resize(np_);
        hi.resize(np_);
        lo(0) = -(dd * dd - dd - 1.0) / dd;
        hi(0) = dd * dd - dd - 1.0;
        lo(1) = -(dd * dd - 1.0) / dd;
        hi(1) = dd + 1.0;
        lo(2) = -1.0;
        hi(2) = 1.0;
        if (np_ == 4) {
            lo(3) = -1.0;
            hi(3) = 1.0 / (dd - 3.0);
        }
    }

private:
    void find_blocks(const std::vector<ComplexMatrix>& pt) {
        const int n = d_ * d_;
        std::vector<int> label(static_cast<std::size_t>(n), -1);
        int next = 0;
        for (int seed = 0; seed < n; ++seed) {
            if (label[static_cast<std::size_t>(seed)] >= 0) continue;
            std::vector<int> stack{seed};
            label[static_cast<std::size_t>(seed)] = next;
            std::vector<int> members;
            while (!stack.empty()) {
                const int i = stack.back();
                stack.pop_back();
                members.push_back(i);
                for (int j = 0; j < n; ++j) {
                    if (label[static_cast<std::size_t>(j)] >= 0) continue;
                    bool linked = false;
                    for (const auto& m : pt)
                        if (std::abs(m(i, j)) > 1e-13) {
                            linked = true;
                            break;
                        }
                    if (linked) {
                        label[static_cast<std::size_t>(j)] = next;
                        stack.push_back(j);
                    }
                }
            }
            std::sort(members.begin(), members.end());
            blocks_.push_back(std::move(members));
            ++next;
        }
    }

    int d_;
    int np_;
    MubFamily fam_;
    BellResponse response_;
    std::vector<double> c0_;
    std::vector<std::vector<double>> g_;
    std::vector<std::vector<int>> blocks_;
    std::vector<ComplexMatrix> a0_;
    std::vector<std::vector<ComplexMatrix>> ai_;
};

// Barrier part  -sum log c_s(q) - sum_b log det A_b(q), with optional
// gradient and Hessian. Returns false outside the open feasible set.
bool barrier(const FamilyModel& model, const VectorXd& q, double& value, VectorXd* grad, MatrixXd* hess) {
    const int np = model.np();
    value = 0.0;
    if (grad) *grad = VectorXd::Zero(np);
    if (hess) *hess = MatrixXd::Zero(np, np);

    const std::vector<double> c = model.coeff_vec(q);
    const auto& g = model.gradients();
    for (std::size_t s = 0; s < c.size(); ++s) {
        if (!(c[s] > 0.0)) return false;
        value -= std::log(c[s]);
        if (!grad) continue;
        for (int p = 0; p < np; ++p) {
            const double gp = g[static_cast<std::size_t>(p)][s];
            (*grad)(p) -= gp / c[s];
            for (int r = 0; r < np; ++r) (*hess)(p, r) += gp * g[static_cast<std::size_t>(r)][s] / (c[s] * c[s]);
        }
    }

    for (std::size_t b = 0; b < model.blocks(); ++b) {
        const Eigen::LLT<ComplexMatrix> llt(model.block(b, q));
        if (llt.info() != Eigen::Success) return false;
        const ComplexMatrix& l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < l.rows(); ++i) {
            const double pivot = l(i, i).real();
            if (!(pivot > 0.0)) return false;
            value -= 2.0 * std::log(pivot);
        }
        if (!grad) continue;
        std::vector<ComplexMatrix> x(static_cast<std::size_t>(np));
        for (int p = 0; p < np; ++p) {
            const ComplexMatrix y = llt.matrixL().solve(model.block_gradient(b, p));
            x[static_cast<std::size_t>(p)] = ComplexMatrix(llt.matrixL().solve(ComplexMatrix(y.adjoint()))).adjoint();
            (*grad)(p) -= x[static_cast<std::size_t>(p)].trace().real();
        }
        for (int p = 0; p < np; ++p)
            for (int r = p; r < np; ++r) {
                const double h = (x[static_cast<std::size_t>(p)].array() * x[static_cast<std::size_t>(r)].conjugate().array()).sum().real();
                (*hess)(p, r) += h;
                if (r != p) (*hess)(r, p) += h;
            }
    }
    return true;
}

// Minimizes slope . q over the feasible set by following the central path
// of  t * slope . q + barrier(q)  from a strictly feasible start.
VectorXd barrier_minimize(const FamilyModel& model, const VectorXd& slope, VectorXd q, long& evaluations) {
    const double barrier_degree = 2.0 * model.d() * model.d();
    constexpr double kGap = 1e-11;
    constexpr double kGrowth = 10.0;
    constexpr double kArmijo = 0.25;

    for (double t = 1.0;; t *= kGrowth) {
        for (int iter = 0; iter < 200; ++iter) {
            double b0 = 0.0;
            VectorXd grad;
            MatrixXd hess;
            ++evaluations;
            if (!barrier(model, q, b0, &grad, &hess)) return q;
            grad += t * slope;
            const VectorXd step = hess.ldlt().solve(-grad);
            const double slope_along = grad.dot(step);
            if (-slope_along / 2.0 <= 1e-12) break;

            bool moved = false;
            for (double s = 1.0; s > 1e-14; s *= 0.5) {
                const VectorXd trial = q + s * step;
                double b1 = 0.0;
                ++evaluations;
                if (!barrier(model, trial, b1, nullptr, nullptr)) continue;
                const double change = t * slope.dot(s * step) + (b1 - b0);
                if (change <= kArmijo * s * slope_along) {
                    q = trial;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        if (barrier_degree / t < kGap) break;
    }
    return q;
}

struct Start {
    VectorXd q;
    Labeling labeling;
};

struct Candidate {
    VectorXd q;
    double witness = kInf;
    long evaluations = 0;
    std::vector<TraceEntry> trace;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.witness != b.witness) return a.witness < b.witness;
    return lex_less(a.q, b.q);
}

Candidate refine(const FamilyModel& model, const Start& start, int start_index, const LabelingChoice& choice,
                 int rounds) {
    Candidate best;
    VectorXd q = 0.95 * start.q;  // strictly inside: mixes in the interior point q = 0
    Labeling lab = start.labeling;
    for (int round = 0; round < std::max(rounds, 1); ++round) {
        double offset = 0.0;
        VectorXd slope;
        model.linear_witness(lab, offset, slope);
        q = barrier_minimize(model, slope, q, best.evaluations);

        const SimplexCoeffs c = coeffs_from_family(model.params(q));
        const CorrelationReport rep = mcp_simplex(c, model.response(), choice);
        ++best.evaluations;
        const double w = *rep.witness;
        best.trace.push_back({start_index, round, w});
        if (w < best.witness || (w == best.witness && lex_less(q, best.q))) {
            best.witness = w;
            best.q = q;
        }
        if (choice.mode != LabelingMode::Maximize || rep.labeling.sigma == lab.sigma) break;
        lab = rep.labeling;
    }
    return best;
}

}  // namespace

void SliceSpec::validate() const {
    if (!(q1_lo < q1_hi) || !(q2_lo < q2_hi)) throw InvalidConfig("slice ranges need lo < hi");
    if (res_q1 < 2 || res_q2 < 2) throw InvalidConfig("slice resolution must be >= 2 per axis");
}

std::string to_string(CellClass c) {
    switch (c) {
        case CellClass::Unphysical: return "unphysical";
        case CellClass::SeparableOrUndetected: return "separable-or-undetected";
        case CellClass::FreeEntangled: return "free-entangled";
        case CellClass::BoundEntangled: return "bound-entangled";
    }
    return "?";
}

std::size_t ClassifiedGrid::count(CellClass c) const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [c](const GridCell& g) { return g.cls == c; }));
}

ClassifiedGrid scan_slice(const SliceSpec& spec, const ScanOptions& options) {
    spec.validate();
    const MubFamily fam = mub_family(3);
    const BellResponse response(fam);

    ClassifiedGrid grid{spec, std::vector<GridCell>(static_cast<std::size_t>(spec.res_q1 * spec.res_q2))};
    detail::parallel_for(grid.cells.size(), options.threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(spec.res_q1));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(spec.res_q1));
        GridCell& cell = grid.cells[idx];
        cell.q1 = spec.q1_at(i);
        cell.q2 = spec.q2_at(j);
        const SimplexCoeffs c = coeffs_from_family(FamilyParams{3, cell.q1, cell.q2, spec.q3, std::nullopt});
        cell.physical = c.physical(options.psd_tol);
        cell.min_pt_eig = ppt_min_eig(state_from_coeffs(c), 3);
        cell.ppt = cell.min_pt_eig >= -options.ppt_tol;
        cell.witness = *mcp_simplex(c, response, options.labeling).witness;
        if (!cell.physical)
            cell.cls = CellClass::Unphysical;
        else if (!cell.ppt)
            cell.cls = CellClass::FreeEntangled;
        else if (cell.witness < -kWitnessTol)
            cell.cls = CellClass::BoundEntangled;
        else
            cell.cls = CellClass::SeparableOrUndetected;
    });
    return grid;
}

OptimizationResult optimize_witness(int d, const LabelingChoice& labeling, const OptimizationBudget& budget) {
    static constexpr int kSupported[] = {3, 4, 5, 7, 8, 9};
    if (std::find(std::begin(kSupported), std::end(kSupported), d) == std::end(kSupported))
        throw UnsupportedDimension("optimize_witness supports d in {3,4,5,7,8,9}, got " + std::to_string(d));

    const FamilyModel model(d);
    const int np = model.np();
    VectorXd lo, hi;
    model.box(lo, hi);
    // validates the labeling for this d before any heavy work
    mcp_simplex(coeffs_from_family(model.params(VectorXd::Zero(np))), model.response(), labeling);

    // coarse grid
    const int per_axis = budget.grid_points > 0 ? budget.grid_points : (d == 3 ? 11 : 7);
    if (per_axis < 2) throw InvalidConfig("grid needs at least 2 points per axis");
    std::size_t total = 1;
    for (int p = 0; p < np; ++p) total *= static_cast<std::size_t>(per_axis);

    struct GridPoint {
        VectorXd q;
        bool feasible = false;
        double witness = kInf;
        Labeling labeling;
    };
    std::vector<GridPoint> points(total);
    detail::parallel_for(total, budget.threads, [&](std::size_t idx) {
        GridPoint& g = points[idx];
        g.q.resize(np);
        std::size_t rest = idx;
        for (int p = 0; p < np; ++p) {
            const int k = static_cast<int>(rest % static_cast<std::size_t>(per_axis));
            rest /= static_cast<std::size_t>(per_axis);
            g.q(p) = lo(p) + (hi(p) - lo(p)) * k / (per_axis - 1);
        }
        const std::vector<double> c = model.coeff_vec(g.q);
        if (*std::min_element(c.begin(), c.end()) < 0.0) return;
        if (model.min_pt_eig(g.q) < -kPptTol) return;
        g.feasible = true;
        const CorrelationReport rep = mcp_simplex(coeffs_from_family(model.params(g.q)), model.response(), labeling);
        g.witness = *rep.witness;
        g.labeling = rep.labeling;
    });

    long evaluations = static_cast<long>(total);
    std::vector<const GridPoint*> ranked;
    for (const auto& g : points)
        if (g.feasible) ranked.push_back(&g);
    std::sort(ranked.begin(), ranked.end(), [](const GridPoint* a, const GridPoint* b) {
        if (a->witness != b->witness) return a->witness < b->witness;
        return lex_less(a->q, b->q);
    });

    std::vector<Start> starts;
    auto add_start = [&](const VectorXd& q, const Labeling& lab) {
        for (const Start& s : starts)
            if (s.labeling.sigma == lab.sigma) return;  // same convex program
        starts.push_back({q, lab});
    };
    for (std::size_t r = 0; r < ranked.size() && static_cast<int>(r) < budget.restarts; ++r)
        add_start(ranked[r]->q, ranked[r]->labeling);

    std::mt19937_64 rng(budget.seed);
    for (int r = 0; r < budget.random_restarts; ++r) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            VectorXd q(np);
            for (int p = 0; p < np; ++p) q(p) = std::uniform_real_distribution<double>(lo(p), hi(p))(rng);
            ++evaluations;
            const std::vector<double> c = model.coeff_vec(q);
            if (*std::min_element(c.begin(), c.end()) < 0.0 || model.min_pt_eig(q) < -kPptTol) continue;
            add_start(q, mcp_simplex(coeffs_from_family(model.params(q)), model.response(), labeling).labeling);
            break;
        }
    }
    if (starts.empty()) {
        const VectorXd zero = VectorXd::Zero(np);
        add_start(zero, mcp_simplex(coeffs_from_family(model.params(zero)), model.response(), labeling).labeling);
    }

    std::vector<Candidate> candidates(starts.size());
    detail::parallel_for(starts.size(), budget.threads, [&](std::size_t s) {
        candidates[s] = refine(model, starts[s], static_cast<int>(s), labeling, budget.relabel_rounds);
    });

    OptimizationResult result;
    result.d = d;
    const Candidate* best = &candidates.front();
    for (const Candidate& c : candidates) {
        evaluations += c.evaluations;
        result.trace.insert(result.trace.end(), c.trace.begin(), c.trace.end());
        if (candidate_less(c, *best)) best = &c;
    }

    // Independent re-evaluation on the full density matrix.
    VectorXd q = best->q;
    ComplexMatrix rho;
    SimplexCoeffs coeffs;
    for (int guard = 0;; ++guard) {
        coeffs = coeffs_from_family(model.params(q));
        rho = state_from_coeffs(coeffs);
        result.min_pt_eig = ppt_min_eig(rho, d);
        if ((result.min_pt_eig >= -kPptTol && coeffs.min() >= 0.0) || guard >= 60) break;
        q *= 1.0 - 1e-9;  // back off toward the maximally mixed interior point
    }
    const CorrelationReport rep = mcp(rho, model.family(), labeling);
    result.best = model.params(q);
    result.witness = *rep.witness;
    result.labeling = rep.labeling;
    result.min_coeff = coeffs.min();
    result.evaluations = evaluations;
    return result;
}

std::vector<HorodeckiRow> horodecki_sweep(double lambda_lo, double lambda_hi, double step,
                                          const LabelingChoice& labeling) {
    if (!(lambda_lo >= 0.0 && lambda_hi <= 5.0 && lambda_lo <= lambda_hi))
        throw OutOfRange("Horodecki sweep range must lie within [0, 5]");
    if (!(step > 0.0)) throw OutOfRange("sweep step must be positive");

    const MubFamily fam = mub_family(3);
    const long n = static_cast<long>(std::floor((lambda_hi - lambda_lo) / step + 1e-9)) + 1;
    std::vector<HorodeckiRow> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        HorodeckiRow r;
        r.lambda = std::min(lambda_lo + static_cast<double>(i) * step, lambda_hi);
        const ComplexMatrix rho = state_from_coeffs(coeffs_from_family(horodecki_params(r.lambda)));
        r.min_pt_eig = ppt_min_eig(rho, 3);
        r.witness = *mcp(rho, fam, labeling).witness;
        r.ppt = r.min_pt_eig >= -kPptTol;
        r.bound_entangled = r.ppt && r.witness < -kWitnessTol;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace boundsim
