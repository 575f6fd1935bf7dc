#include "boundsim/expsim.hpp"

#include "boundsim/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace boundsim {

namespace {

enum class Domain : std::uint32_t { Mcp = 1, Tomography = 2 };

std::mt19937_64 substream(std::uint64_t seed, Domain domain, std::uint64_t stream, std::uint32_t extra) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(domain), static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), extra};
    return std::mt19937_64(seq);
}

long long poisson(double mean, std::mt19937_64& rng) {
    if (!(mean > 0.0)) return 0;
    return std::poisson_distribution<long long>(mean)(rng);
}

void check_bell(int d, WeylIndex bell) {
    if (bell.k < 0 || bell.k >= d || bell.l < 0 || bell.l >= d)
        throw IndexOutOfRange("Bell index (" + std::to_string(bell.k) + "," + std::to_string(bell.l) + ") for d = " +
                              std::to_string(d));
}

double pair_prob(const Ket& bell, const Ket& ket_a, const Ket& ket_b) {
    return std::min(1.0, std::norm(kron(ket_a, ket_b).dot(bell)));
}

std::vector<CountRecord> mcp_records(const MubFamily& fam, const NoiseModel& noise, bool draw) {
    noise.validate();
    const int d = fam.d;
    std::vector<Ket> bell;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) bell.push_back(bell_vector(d, k, l));

    std::vector<CountRecord> out;
    for (int m = 0; m < fam.size(); ++m) {
        const Basis& a = fam.bases[static_cast<std::size_t>(m)];
        const Basis b = conjugate_basis(a);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                CountRecord rec;
                rec.setting = (m * d + i) * d + j;
                for (std::size_t s = 0; s < bell.size(); ++s) {
                    const double p = pair_prob(bell[s], a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
                    const double mean = noise.windows * (noise.peak * d * p + noise.background);
                    if (draw) {
                        auto rng = substream(noise.seed, Domain::Mcp, static_cast<std::uint64_t>(rec.setting),
                                             static_cast<std::uint32_t>(s));
                        rec.counts.push_back(static_cast<double>(poisson(mean, rng)));
                    } else {
                        rec.counts.push_back(mean);
                    }
                }
                out.push_back(std::move(rec));
            }
    }
    return out;
}

std::vector<double> tomography_counts(const ComplexMatrix& rho, const TomographySet& set, const NoiseModel& noise,
                                      bool draw) {
    noise.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(set.d) * set.d;
    if (rho.rows() != n || rho.cols() != n)
        throw DimensionMismatch("tomography state must be " + std::to_string(n) + "-dimensional");
    require_state(rho, "simulate_tomography");
    std::vector<double> out(set.pairs());
    for (std::size_t p = 0; p < set.pairs(); ++p) {
        const Ket psi = set.pair(p);
        const double prob = std::clamp(psi.dot(rho * psi).real(), 0.0, 1.0);
        const double mean = noise.windows * (noise.peak * set.d * prob + noise.background);
        if (draw) {
            auto rng = substream(noise.seed, Domain::Tomography, p, 0);
            out[p] = static_cast<double>(poisson(mean, rng));
        } else {
            out[p] = mean;
        }
    }
    return out;
}

}  // namespace

void NoiseModel::validate() const {
    if (!(peak >= 0.0) || !std::isfinite(peak)) throw InvalidConfig("peak rate must be >= 0");
    if (!(background >= 0.0) || !std::isfinite(background)) throw InvalidConfig("background rate must be >= 0");
    if (windows < 1) throw InvalidConfig("need at least one integration window");
}

double expected_count(int d, WeylIndex bell, const Ket& ket_a, const Ket& ket_b, const NoiseModel& noise) {
    noise.validate();
    check_bell(d, bell);
    if (ket_a.size() != d || ket_b.size() != d) throw DimensionMismatch("detection kets must have dimension d");
    if (std::abs(ket_a.norm() - 1.0) > 1e-9 || std::abs(ket_b.norm() - 1.0) > 1e-9)
        throw BadNormalization("detection kets must be unit vectors");
    const double p = pair_prob(bell_vector(d, bell.k, bell.l), ket_a, ket_b);
    return noise.windows * (noise.peak * d * p + noise.background);
}

long long simulate_counts(int d, WeylIndex bell, const Ket& ket_a, const Ket& ket_b, const NoiseModel& noise,
                          std::uint64_t stream) {
    const double mean = expected_count(d, bell, ket_a, ket_b, noise);
    auto rng = substream(noise.seed, Domain::Mcp, stream, static_cast<std::uint32_t>(bell.k * d + bell.l));
    return poisson(mean, rng);
}

std::vector<CountRecord> simulate_mcp(const MubFamily& fam, const NoiseModel& noise) {
    return mcp_records(fam, noise, true);
}

std::vector<CountRecord> expected_mcp(const MubFamily& fam, const NoiseModel& noise) {
    return mcp_records(fam, noise, false);
}

std::vector<CountRecord> retroactive_mix(std::vector<CountRecord> records, const SimplexCoeffs& c) {
    for (double w : c.c)
        if (w < -1e-10) throw NegativeWeight("retroactive mixing needs c_{k,l} >= 0, got " + std::to_string(w));
    for (CountRecord& r : records) {
        if (r.counts.size() != c.c.size())
            throw DimensionMismatch("record " + std::to_string(r.setting) + " has " + std::to_string(r.counts.size()) +
                                    " counts for " + std::to_string(c.c.size()) + " weights");
        r.mixed = 0.0;
        for (std::size_t s = 0; s < c.c.size(); ++s) r.mixed += std::max(c.c[s], 0.0) * r.counts[s];
    }
    return records;
}

ProbabilityTable probabilities_from_counts(const std::vector<double>& gamma, int d) {
    if (d < 1 || gamma.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d))
        throw DimensionMismatch("expected " + std::to_string(d * d) + " counts");
    double total = 0.0;
    for (double g : gamma) {
        if (g < 0.0) throw OutOfRange("negative count");
        total += g;
    }
    if (!(total > 0.0)) throw EmptyCounts("no coincidences recorded for this basis pair");
    ProbabilityTable t(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(i, j) = gamma[static_cast<std::size_t>(i * d + j)] / total;
    return t;
}

CorrelationReport estimate_mcp(const std::vector<CountRecord>& mixed, int d, const LabelingChoice& labeling) {
    const std::size_t per = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    if (d < 2 || mixed.empty() || mixed.size() % per != 0)
        throw DimensionMismatch("MCP records do not tile into d x d tables");
    const std::size_t m = mixed.size() / per;
    std::vector<ProbabilityTable> tables;
    for (std::size_t b = 0; b < m; ++b) {
        std::vector<double> gamma(per);
        for (const CountRecord& r : mixed) {
            const std::size_t s = static_cast<std::size_t>(r.setting);
            if (s / per == b) gamma[s % per] = r.mixed;
        }
        tables.push_back(probabilities_from_counts(gamma, d));
    }
    return mcp_from_tables(d, tables, labeling);
}

Ket TomographySet::pair(std::size_t p) const {
    return kron(kets[p / kets.size()], kets[p % kets.size()]);
}

TomographySet tomography_settings(int d) {
    if (d < 2 || d > kMaxQuditDim) throw OutOfRange("tomography needs 2 <= d <= 16");
    TomographySet set{d, {}};
    for (int i = 0; i < d; ++i) set.kets.push_back(Ket::Unit(d, i));
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (int q = 0; q < 4; ++q) {
                Ket k = Ket::Zero(d);
                k(i) = r;
                k(j) = r * std::polar(1.0, q * std::numbers::pi / 2.0);
                set.kets.push_back(k);
            }
    return set;
}

std::vector<double> simulate_tomography(const ComplexMatrix& rho, const TomographySet& set, const NoiseModel& noise) {
    return tomography_counts(rho, set, noise, true);
}

std::vector<double> expected_tomography(const ComplexMatrix& rho, const TomographySet& set, const NoiseModel& noise) {
    return tomography_counts(rho, set, noise, false);
}

ComplexMatrix reconstruct(const std::vector<double>& counts, const TomographySet& set) {
    if (counts.size() != set.pairs())
        throw DimensionMismatch("expected " + std::to_string(set.pairs()) + " tomography counts, got " +
                                std::to_string(counts.size()));
    double total = 0.0;
    for (double c : counts) {
        if (c < 0.0) throw OutOfRange("negative count");
        total += c;
    }
    if (!(total > 0.0)) throw EmptyCounts("no tomography counts");

    const int n = set.d * set.d;
    const Eigen::Index params = static_cast<Eigen::Index>(n) * n;
    const Eigen::Index rows = static_cast<Eigen::Index>(counts.size());
    Eigen::MatrixXd a(rows, params);
    Eigen::VectorXd b(rows);
    // sum over all pairs of <psi|rho|psi> is (number of kets / d)^2 * tr rho
    const double side = static_cast<double>(set.kets.size()) / set.d;
    const double scale = side * side / total;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Ket psi = set.pair(static_cast<std::size_t>(r));
        Eigen::Index col = 0;
        for (int i = 0; i < n; ++i) a(r, col++) = std::norm(psi(i));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const Complex z = std::conj(psi(i)) * psi(j);
                a(r, col++) = 2.0 * z.real();
                a(r, col++) = -2.0 * z.imag();
            }
        b(r) = counts[static_cast<std::size_t>(r)] * scale;
    }

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < params) throw SingularSystem("tomography settings have rank " + std::to_string(qr.rank()) +
                                                 " < " + std::to_string(params));
    const Eigen::VectorXd x = qr.solve(b);

    ComplexMatrix est(n, n);
    Eigen::Index col = 0;
    for (int i = 0; i < n; ++i) est(i, i) = x(col++);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            est(i, j) = Complex(x(col), x(col + 1));
            est(j, i) = std::conj(est(i, j));
            col += 2;
        }

    const HermitianEigen eig = herm_eig(est);
    double kept = 0.0;
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double v = std::max(eig.values[static_cast<std::size_t>(i)], 0.0);
        kept += v;
        out += v * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    }
    if (!(kept > 0.0)) throw SingularSystem("reconstruction has no positive part");
    return out / kept;
}

MeasurementBudget measurement_budget(int d) {
    if (d < 2) throw OutOfRange("measurement budget needs d >= 2");
    const long long x = d;
    return {x * x - 4 * x * x * x + 4 * x * x * x * x, x + x * x, x * x + x * x * x};
}

int oam_relabel(int l) {
    if (l < -1 || l > 1) throw OutOfRange("OAM value must be -1, 0 or +1, got " + std::to_string(l));
    return l + 1;
}

Ket spdc_state() {
    Ket psi = Ket::Zero(9);
    for (int l = -1; l <= 1; ++l) psi(oam_relabel(l) * 3 + oam_relabel(-l)) = 1.0 / std::sqrt(3.0);
    return psi;
}

Ket relabel_bob_anticorrelated(const Ket& psi, int d) {
    if (psi.size() != static_cast<Eigen::Index>(d) * d) throw DimensionMismatch("ket is not two-qudit");
    Ket out(psi.size());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out(a * d + (d - 1 - b)) = psi(a * d + b);
    return out;
}

}  // namespace boundsim
