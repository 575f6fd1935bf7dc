#include "boundsim/io.hpp"

#include "boundsim/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace boundsim::io {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <class T>
T parse_number(std::string_view s, const char* what) {
    s = trim(s);
    T v{};
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size())
        throw InvalidConfig(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
    return v;
}

// Data lines of a CSV: blank lines, '#' comments and a non-numeric header skipped.
std::vector<std::vector<std::string_view>> csv_rows(std::string_view text) {
    std::vector<std::vector<std::string_view>> rows;
    bool first = true;
    for (std::string_view line : split(text, '\n')) {
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto cells = split(line, ',');
        const std::string_view head = trim(cells.front());
        const bool numeric = !head.empty() && (std::isdigit(static_cast<unsigned char>(head.front())) ||
                                               head.front() == '-' || head.front() == '+' || head.front() == '.');
        if (first && !numeric) {
            first = false;
            continue;
        }
        first = false;
        rows.push_back(std::move(cells));
    }
    return rows;
}

json real_rows(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::uint8_t gray(CellClass c) {
    switch (c) {
        case CellClass::Unphysical: return 0;
        case CellClass::FreeEntangled: return 85;
        case CellClass::SeparableOrUndetected: return 170;
        case CellClass::BoundEntangled: return 255;
    }
    return 0;
}

}  // namespace

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

json to_json(const ComplexMatrix& m) {
    return json{{"dim", m.rows()}, {"re", real_rows(m.real())}, {"im", real_rows(m.imag())}};
}

ComplexMatrix matrix_from_json(const json& j) {
    try {
        const auto n = j.at("dim").get<Eigen::Index>();
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        if (n < 1 || re.size() != static_cast<std::size_t>(n) || im.size() != static_cast<std::size_t>(n))
            throw InvalidConfig("matrix JSON: row count does not match dim");
        ComplexMatrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto& rr = re.at(static_cast<std::size_t>(r));
            const auto& ir = im.at(static_cast<std::size_t>(r));
            if (rr.size() != static_cast<std::size_t>(n) || ir.size() != static_cast<std::size_t>(n))
                throw InvalidConfig("matrix JSON: ragged row " + std::to_string(r));
            for (Eigen::Index c = 0; c < n; ++c)
                m(r, c) = Complex(rr.at(static_cast<std::size_t>(c)).get<double>(),
                                  ir.at(static_cast<std::size_t>(c)).get<double>());
        }
        return m;
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("matrix JSON: ") + e.what());
    }
}

json to_json(const MubFamily& fam) {
    json bases = json::array();
    for (const Basis& b : fam.bases) {
        json vecs = json::array();
        for (const Ket& v : b) {
            json comps = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i) comps.push_back({v(i).real(), v(i).imag()});
            vecs.push_back(std::move(comps));
        }
        bases.push_back(std::move(vecs));
    }
    return json{{"d", fam.d}, {"bases", std::move(bases)}};
}

json to_json(const MubReport& rep) {
    return json{{"max_overlap_deviation", rep.max_overlap_deviation},
                {"max_orthonormality_deviation", rep.max_orthonormality_deviation}};
}

json to_json(const SimplexCoeffs& c) {
    json rows = json::array();
    for (int k = 0; k < c.d; ++k) {
        json row = json::array();
        for (int l = 0; l < c.d; ++l) row.push_back(c.at(k, l));
        rows.push_back(std::move(row));
    }
    return json{{"d", c.d}, {"c", std::move(rows)}};
}

json to_json(const FamilyParams& p) {
    json j{{"d", p.d}, {"q1", p.q1}, {"q2", p.q2}, {"q3", p.q3}};
    if (p.q4) j["q4"] = *p.q4;
    return j;
}

json to_json(const Labeling& l) {
    return json{{"sigma", l.sigma}, {"conjugate_bob", l.conjugate_bob}};
}

json to_json(const CorrelationReport& rep) {
    json j{{"d", rep.d},
           {"bases", rep.m},
           {"labeling_mode", to_string(rep.mode)},
           {"correlations", rep.correlations},
           {"sum", rep.sum},
           {"separable_bound", rep.bound},
           {"violates_bound", rep.violates_bound()},
           {"labeling", to_json(rep.labeling)}};
    j["witness"] = rep.witness ? json(*rep.witness) : json(nullptr);
    return j;
}

json to_json(const OptimizationResult& r) {
    return json{{"d", r.d},
                {"best", to_json(r.best)},
                {"witness", r.witness},
                {"min_pt_eig", r.min_pt_eig},
                {"min_coeff", r.min_coeff},
                {"evaluations", r.evaluations},
                {"labeling", to_json(r.labeling)}};
}

Labeling labeling_from_json(const json& j) {
    try {
        Labeling l;
        l.sigma = j.at("sigma").get<std::vector<Permutation>>();
        if (j.contains("conjugate_bob")) l.conjugate_bob = j.at("conjugate_bob").get<bool>();
        return l;
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("labeling JSON: ") + e.what());
    }
}

std::string coeffs_csv(const SimplexCoeffs& c) {
    std::string out = "k,l,c\n";
    for (int k = 0; k < c.d; ++k)
        for (int l = 0; l < c.d; ++l) out += std::to_string(k) + "," + std::to_string(l) + "," + fmt(c.at(k, l)) + "\n";
    return out;
}

SimplexCoeffs parse_coeffs_csv(std::string_view text) {
    std::map<std::pair<int, int>, double> entries;
    for (const auto& row : csv_rows(text)) {
        if (row.size() != 3) throw InvalidConfig("coefficient CSV rows need k,l,c");
        const int k = parse_number<int>(row[0], "k");
        const int l = parse_number<int>(row[1], "l");
        if (!entries.emplace(std::pair{k, l}, parse_number<double>(row[2], "c")).second)
            throw InvalidConfig("coefficient (" + std::to_string(k) + "," + std::to_string(l) + ") given twice");
    }
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
    if (d < 2 || static_cast<std::size_t>(d * d) != entries.size())
        throw InvalidConfig("coefficient CSV must list d^2 entries, got " + std::to_string(entries.size()));
    SimplexCoeffs c{d, std::vector<double>(static_cast<std::size_t>(d * d))};
    for (const auto& [kl, v] : entries) {
        if (kl.first < 0 || kl.first >= d || kl.second < 0 || kl.second >= d)
            throw InvalidConfig("coefficient index (" + std::to_string(kl.first) + "," + std::to_string(kl.second) +
                                ") outside 0.." + std::to_string(d - 1));
        c.at(kl.first, kl.second) = v;
    }
    return c;
}

std::string grid_csv(const ClassifiedGrid& grid) {
    std::string out = "q1,q2,class,witness,min_pt_eig,i,j,physical,ppt\n";
    for (int j = 0; j < grid.spec.res_q2; ++j)
        for (int i = 0; i < grid.spec.res_q1; ++i) {
            const GridCell& c = grid.at(i, j);
            out += fmt(c.q1) + "," + fmt(c.q2) + "," + to_string(c.cls) + "," + fmt(c.witness) + "," +
                   fmt(c.min_pt_eig) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                   (c.physical ? "1" : "0") + "," + (c.ppt ? "1" : "0") + "\n";
        }
    return out;
}

std::string pgm(const ClassifiedGrid& grid) {
    const int w = grid.spec.res_q1;
    const int h = grid.spec.res_q2;
    std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    for (int row = 0; row < h; ++row) {
        const int j = h - 1 - row;
        for (int i = 0; i < w; ++i) out.push_back(static_cast<char>(gray(grid.at(i, j).cls)));
    }
    return out;
}

std::string horodecki_csv(const std::vector<HorodeckiRow>& rows) {
    std::string out = "lambda,min_pt_eig,witness,ppt,bound_entangled\n";
    for (const auto& r : rows)
        out += fmt(r.lambda) + "," + fmt(r.min_pt_eig) + "," + fmt(r.witness) + "," + (r.ppt ? "1" : "0") + "," +
               (r.bound_entangled ? "1" : "0") + "\n";
    return out;
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
    std::string out = "start,round,witness\n";
    for (const auto& t : trace) out += std::to_string(t.start) + "," + std::to_string(t.round) + "," + fmt(t.witness) + "\n";
    return out;
}

std::string variants_csv(const std::vector<SimplexVariant>& variants, const std::vector<double>& min_pt_eig,
                         const std::vector<double>& witness) {
    if (variants.empty()) return "";
    const int d = variants.front().coeffs.d;
    std::string out = "index,dir_k,dir_l,anchor_k,anchor_l,side";
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out += ",c_" + std::to_string(k) + "_" + std::to_string(l);
    out += ",min_pt_eig,witness\n";
    for (std::size_t v = 0; v < variants.size(); ++v) {
        const auto& x = variants[v];
        out += std::to_string(v) + "," + std::to_string(x.direction.k) + "," + std::to_string(x.direction.l) + "," +
               std::to_string(x.anchor.k) + "," + std::to_string(x.anchor.l) + "," + std::to_string(x.side);
        for (double c : x.coeffs.c) out += "," + fmt(c);
        out += "," + fmt(min_pt_eig.at(v)) + "," + fmt(witness.at(v)) + "\n";
    }
    return out;
}

std::string mcp_counts_csv(const std::vector<CountRecord>& records, int d) {
    std::string out = "setting,basis,i,j";
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out += ",count_" + std::to_string(k) + "_" + std::to_string(l);
    out += ",mixed\n";
    for (const auto& r : records) {
        const int s = r.setting;
        out += std::to_string(s) + "," + std::to_string(s / (d * d)) + "," + std::to_string((s / d) % d) + "," +
               std::to_string(s % d);
        for (double c : r.counts) out += "," + fmt(c);
        out += "," + fmt(r.mixed) + "\n";
    }
    return out;
}

std::string tomography_counts_csv(const std::vector<double>& counts, const TomographySet& set) {
    std::string out = "setting,a,b,count\n";
    const std::size_t n = set.kets.size();
    for (std::size_t p = 0; p < counts.size(); ++p)
        out += std::to_string(p) + "," + std::to_string(p / n) + "," + std::to_string(p % n) + "," + fmt(counts[p]) + "\n";
    return out;
}

std::vector<double> parse_tomography_counts_csv(std::string_view text) {
    std::vector<double> counts;
    for (const auto& row : csv_rows(text)) {
        if (row.size() != 4) throw InvalidConfig("tomography CSV rows need setting,a,b,count");
        const auto s = parse_number<std::size_t>(row[0], "setting");
        if (s != counts.size()) throw InvalidConfig("tomography settings must be listed in order");
        counts.push_back(parse_number<double>(row[3], "count"));
    }
    return counts;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidConfig("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidConfig("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidConfig("write to '" + path + "' failed");
}

}  // namespace boundsim::io
