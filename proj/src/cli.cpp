#include "boundsim/cli.hpp"

#include "boundsim/errors.hpp"
#include "boundsim/expsim.hpp"
#include "boundsim/io.hpp"
#include "boundsim/mubs.hpp"
#include "boundsim/search.hpp"
#include "boundsim/simplex.hpp"
#include "boundsim/witness.hpp"

#include <CLI11.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace boundsim::cli {

namespace {

using io::json;

// JSON config files. Scalar and array keys apply to the subcommand named on
// the command line; an object value keyed by a subcommand name applies to
// that subcommand.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(std::string section) : section_(std::move(section)) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw InvalidConfig(std::string("config file: ") + e.what());
        }
        if (!j.is_object()) throw InvalidConfig("config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        std::vector<std::string> parents;
        if (!section_.empty()) parents.push_back(section_);
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [k2, v2] : value.items()) items.push_back(item({key}, k2, v2));
            } else {
                items.push_back(item(parents, key, value));
            }
        }
        return items;
    }

private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw InvalidConfig("config values must be strings, numbers, booleans or arrays of those");
    }

    static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& key, const json& value) {
        CLI::ConfigItem it;
        it.parents = std::move(parents);
        it.name = key;
        if (value.is_array()) {
            for (const auto& e : value) it.inputs.push_back(scalar(e));
        } else {
            it.inputs.push_back(scalar(value));
        }
        return it;
    }

    std::string section_;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty())
        out << content;
    else
        io::write_file(path, content);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct StateArgs {
    int d = 3;
    std::vector<double> q;
    double lambda = 0.0;
    std::string state_file;
    CLI::Option* d_opt = nullptr;
    CLI::Option* q_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;
    CLI::Option* state_opt = nullptr;
};

struct ResolvedState {
    SimplexCoeffs coeffs;
    std::optional<FamilyParams> params;
};

void add_state_flags(CLI::App* sub, StateArgs& s) {
    s.d_opt = sub->add_option("--d,--dim", s.d, "Qudit dimension")->capture_default_str();
    s.q_opt = sub->add_option("--q", s.q, "Family parameters q1,q2,q3[,q4]")->delimiter(',')->allow_extra_args(false);
    s.lambda_opt = sub->add_option("--lambda", s.lambda, "Horodecki parameter in [0,5] (d = 3)");
    s.state_opt = sub->add_option("--state", s.state_file, "Coefficient CSV with columns k,l,c");
}

int given(const CLI::Option* o) { return o != nullptr && o->count() > 0 ? 1 : 0; }

ResolvedState resolve_state(const StateArgs& s, bool required = true) {
    const int sources = given(s.q_opt) + given(s.lambda_opt) + given(s.state_opt);
    if (sources == 0 && !required) return {};
    if (sources != 1) throw InvalidConfig("give exactly one of --q, --lambda, --state");
    if (given(s.state_opt)) {
        SimplexCoeffs c = io::parse_coeffs_csv(io::read_file(s.state_file));
        if (given(s.d_opt) && c.d != s.d)
            throw InvalidConfig("state file has d = " + std::to_string(c.d) + " but --d " + std::to_string(s.d));
        return {std::move(c), std::nullopt};
    }
    FamilyParams p;
    if (given(s.lambda_opt)) {
        if (s.d != 3) throw InvalidConfig("--lambda is defined for d = 3");
        p = horodecki_params(s.lambda);
    } else {
        const std::size_t want = s.d == 3 ? 3 : 4;
        if (s.q.size() != want && !(s.d > 3 && s.q.size() == 3))
            throw InvalidConfig("--q needs " + std::to_string(want) + " values for d = " + std::to_string(s.d));
        p = FamilyParams{s.d, s.q[0], s.q[1], s.q[2], std::nullopt};
        if (s.q.size() == 4) p.q4 = s.q[3];
    }
    return {coeffs_from_family(p), p};
}

struct LabelingArgs {
    std::string mode;
    std::string file;
};

void add_labeling_flags(CLI::App* sub, LabelingArgs& l, const std::string& fallback) {
    l.mode = fallback;
    sub->add_option("--labeling", l.mode, "Outcome relabeling: methods, max or file")
        ->check(CLI::IsMember({"methods", "max", "file"}))
        ->capture_default_str();
    sub->add_option("--labeling-file", l.file, "JSON {\"sigma\": [[...], ...]} used with --labeling file");
}

LabelingChoice resolve_labeling(const LabelingArgs& l) {
    if (l.mode == "methods") return LabelingChoice::methods();
    if (l.mode == "max") return LabelingChoice::maximize();
    if (l.file.empty()) throw InvalidConfig("--labeling file needs --labeling-file");
    json j;
    try {
        j = json::parse(io::read_file(l.file));
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("labeling file: ") + e.what());
    }
    return LabelingChoice::from(io::labeling_from_json(j));
}

json state_json(const ResolvedState& st) {
    json j{{"coeffs", io::to_json(st.coeffs)}, {"physical", st.coeffs.physical()}, {"min_coeff", st.coeffs.min()}};
    if (st.params) j["params"] = io::to_json(*st.params);
    return j;
}

std::string noise_json_key(const NoiseModel& n) {
    return io::fmt(n.peak) + "," + io::fmt(n.background);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"boundsim: bound entanglement certification with mutually unbiased bases"};
    app.require_subcommand(1);
    app.fallthrough();

    static const std::vector<std::string> kCommands = {"mubs",       "state",    "witness",  "ppt",
                                                       "scan",       "optimize", "horodecki", "simulate",
                                                       "tomography", "variants", "budget"};
    std::string section;
    for (int i = 1; i < argc && section.empty(); ++i)
        for (const auto& c : kCommands)
            if (c == argv[i]) section = c;
    app.config_formatter(std::make_shared<JsonConfig>(section));
    app.set_config("--config", "", "JSON file supplying flag values; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::function<void()> action;
    auto bind = [&](CLI::App* sub, std::function<void()> fn) { sub->callback([&action, fn] { action = fn; }); };

    // mubs
    std::string mubs_action = "verify";
    int mubs_d = 3;
    std::string mubs_out;
    {
        auto* sub = app.add_subcommand("mubs", "Export or verify a complete set of MUBs");
        sub->add_option("action", mubs_action, "export or verify")->check(CLI::IsMember({"export", "verify"}))
            ->capture_default_str();
        sub->add_option("--d,--dim", mubs_d, "Dimension (2,3,4,5,6,7,8,9)")->required();
        sub->add_option("--out", mubs_out, "Output JSON path (default stdout)");
        bind(sub, [&] {
            const MubFamily fam = mub_family(mubs_d);
            const MubReport rep = verify_mub(fam);
            json j = mubs_action == "export" ? io::to_json(fam) : json{{"d", fam.d}};
            j["num_bases"] = fam.size();
            j["report"] = io::to_json(rep);
            emit(mubs_out, dump(j), out);
        });
    }

    // state
    StateArgs state_args;
    std::string state_format = "json";
    std::string state_out;
    {
        auto* sub = app.add_subcommand("state", "Build the density matrix of a magic-simplex state");
        add_state_flags(sub, state_args);
        sub->add_option("--format", state_format, "json or csv (coefficients only)")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        sub->add_option("--out", state_out, "Output path (default stdout)");
        bind(sub, [&] {
            const ResolvedState st = resolve_state(state_args);
            if (state_format == "csv") {
                emit(state_out, io::coeffs_csv(st.coeffs), out);
                return;
            }
            json j = state_json(st);
            j["rho"] = io::to_json(state_from_coeffs(st.coeffs));
            emit(state_out, dump(j), out);
        });
    }

    // witness
    StateArgs witness_args;
    LabelingArgs witness_lab;
    std::string witness_out;
    {
        auto* sub = app.add_subcommand("witness", "Mutual predictabilities and the MUB witness 2 - I_{d+1}");
        add_state_flags(sub, witness_args);
        add_labeling_flags(sub, witness_lab, "max");
        sub->add_option("--out", witness_out, "Output JSON path (default stdout)");
        bind(sub, [&] {
            const ResolvedState st = resolve_state(witness_args);
            const ComplexMatrix rho = state_from_coeffs(st.coeffs);
            const CorrelationReport rep = mcp(rho, mub_family(st.coeffs.d), resolve_labeling(witness_lab));
            json j = state_json(st);
            j["report"] = io::to_json(rep);
            emit(witness_out, dump(j), out);
        });
    }

    // ppt
    StateArgs ppt_args;
    std::string ppt_out;
    {
        auto* sub = app.add_subcommand("ppt", "Partial-transpose spectrum");
        add_state_flags(sub, ppt_args);
        sub->add_option("--out", ppt_out, "Output JSON path (default stdout)");
        bind(sub, [&] {
            const ResolvedState st = resolve_state(ppt_args);
            const int d = st.coeffs.d;
            const Spectrum s =
                herm_eigvals(partial_transpose(state_from_coeffs(st.coeffs), d, d, Subsystem::A));
            json j = state_json(st);
            j["min_pt_eig"] = s.min();
            j["ppt"] = s.min() >= -kPptTol;
            j["pt_spectrum"] = s.values;
            emit(ppt_out, dump(j), out);
        });
    }

    // scan
    SliceSpec scan_spec;
    ScanOptions scan_opts;
    LabelingArgs scan_lab;
    std::vector<double> q1_range, q2_range;
    int scan_res = 0;
    std::string scan_out, scan_pgm;
    {
        auto* sub = app.add_subcommand("scan", "Classify a {q1,q2} slice of the qutrit family");
        sub->add_option("--q3", scan_spec.q3, "Fixed q3")->capture_default_str();
        sub->add_option("--q1-range", q1_range, "q1 window lo,hi (default -1,1)")->delimiter(',')->expected(2);
        sub->add_option("--q2-range", q2_range, "q2 window lo,hi (default -2.5,-0.5)")->delimiter(',')->expected(2);
        sub->add_option("--res", scan_res, "Grid points per axis (sets both)");
        sub->add_option("--res-q1", scan_spec.res_q1, "Grid points along q1")->capture_default_str();
        sub->add_option("--res-q2", scan_spec.res_q2, "Grid points along q2")->capture_default_str();
        add_labeling_flags(sub, scan_lab, "methods");
        sub->add_option("--threads", scan_opts.threads, "Worker threads")->capture_default_str();
        sub->add_option("--psd-tol", scan_opts.psd_tol, "Physicality tolerance")->capture_default_str();
        sub->add_option("--ppt-tol", scan_opts.ppt_tol, "PPT tolerance")->capture_default_str();
        sub->add_option("--out", scan_out, "Per-cell CSV path");
        sub->add_option("--pgm", scan_pgm, "Class heatmap (binary PGM) path");
        bind(sub, [&] {
            if (!q1_range.empty()) {
                scan_spec.q1_lo = q1_range[0];
                scan_spec.q1_hi = q1_range[1];
            }
            if (!q2_range.empty()) {
                scan_spec.q2_lo = q2_range[0];
                scan_spec.q2_hi = q2_range[1];
            }
            if (scan_res > 0) scan_spec.res_q1 = scan_spec.res_q2 = scan_res;
            scan_opts.labeling = resolve_labeling(scan_lab);
            const ClassifiedGrid grid = scan_slice(scan_spec, scan_opts);
            if (!scan_out.empty()) io::write_file(scan_out, io::grid_csv(grid));
            if (!scan_pgm.empty()) io::write_file(scan_pgm, io::pgm(grid));
            json counts;
            for (CellClass c : {CellClass::Unphysical, CellClass::SeparableOrUndetected, CellClass::FreeEntangled,
                                CellClass::BoundEntangled})
                counts[to_string(c)] = grid.count(c);
            out << dump(json{{"q3", scan_spec.q3},
                             {"q1_range", {scan_spec.q1_lo, scan_spec.q1_hi}},
                             {"q2_range", {scan_spec.q2_lo, scan_spec.q2_hi}},
                             {"resolution", {scan_spec.res_q1, scan_spec.res_q2}},
                             {"labeling", to_string(scan_opts.labeling.mode)},
                             {"counts", counts}});
        });
    }

    // optimize
    int opt_d = 3;
    OptimizationBudget budget;
    LabelingArgs opt_lab;
    std::string opt_out, opt_trace;
    {
        auto* sub = app.add_subcommand("optimize", "Minimize the witness over physical PPT family members");
        sub->add_option("--d,--dim", opt_d, "Dimension (3,4,5,7,8,9)")->required();
        add_labeling_flags(sub, opt_lab, "max");
        sub->add_option("--grid", budget.grid_points, "Coarse grid points per axis (0 = automatic)")
            ->capture_default_str();
        sub->add_option("--restarts", budget.restarts, "Grid cells refined")->capture_default_str();
        sub->add_option("--random-restarts", budget.random_restarts, "Extra seeded random starts")
            ->capture_default_str();
        sub->add_option("--rounds", budget.relabel_rounds, "Relabeling rounds per start")->capture_default_str();
        sub->add_option("--threads", budget.threads, "Worker threads")->capture_default_str();
        sub->add_option("--seed", budget.seed, "RNG seed")->envname("BOUNDSIM_SEED")->capture_default_str();
        sub->add_option("--out", opt_out, "Result JSON path (default stdout)");
        sub->add_option("--trace", opt_trace, "Per-start convergence trace CSV path");
        bind(sub, [&] {
            const OptimizationResult r = optimize_witness(opt_d, resolve_labeling(opt_lab), budget);
            if (!opt_trace.empty()) io::write_file(opt_trace, io::trace_csv(r.trace));
            json j = io::to_json(r);
            j["seed"] = budget.seed;
            emit(opt_out, dump(j), out);
        });
    }

    // horodecki
    double h_from = 0.0, h_to = 5.0, h_step = 0.05;
    LabelingArgs h_lab;
    std::string h_out;
    {
        auto* sub = app.add_subcommand("horodecki", "Sweep the Horodecki line");
        sub->add_option("--from", h_from, "First lambda")->capture_default_str();
        sub->add_option("--to", h_to, "Last lambda")->capture_default_str();
        sub->add_option("--step", h_step, "Lambda step")->capture_default_str();
        add_labeling_flags(sub, h_lab, "max");
        sub->add_option("--out", h_out, "Output CSV path (default stdout)");
        bind(sub, [&] { emit(h_out, io::horodecki_csv(horodecki_sweep(h_from, h_to, h_step, resolve_labeling(h_lab))), out); });
    }

    // simulate
    StateArgs sim_args;
    LabelingArgs sim_lab;
    NoiseModel sim_noise;
    std::vector<double> sim_noise_pair;
    std::string sim_protocol = "mcp";
    std::string sim_out, sim_report;
    {
        auto* sub = app.add_subcommand("simulate", "Simulate coincidence counts with Poisson noise");
        add_state_flags(sub, sim_args);
        add_labeling_flags(sub, sim_lab, "max");
        sub->add_option("--protocol", sim_protocol, "mcp or tomography")
            ->check(CLI::IsMember({"mcp", "tomography"}))
            ->capture_default_str();
        sub->add_option("--noise", sim_noise_pair, "peak,background counts per window (default 1500,5)")
            ->delimiter(',')
            ->expected(2);
        sub->add_option("--windows", sim_noise.windows, "Integration windows per setting")->capture_default_str();
        sub->add_option("--seed", sim_noise.seed, "RNG seed")->envname("BOUNDSIM_SEED")->capture_default_str();
        sub->add_option("--out", sim_out, "Count CSV path (default stdout)");
        sub->add_option("--report", sim_report, "Report JSON path");
        bind(sub, [&] {
            if (!sim_noise_pair.empty()) {
                sim_noise.peak = sim_noise_pair[0];
                sim_noise.background = sim_noise_pair[1];
            }
            sim_noise.validate();
            const ResolvedState st = resolve_state(sim_args);
            const int d = st.coeffs.d;
            const ComplexMatrix rho = state_from_coeffs(st.coeffs);
            json rep = state_json(st);
            rep["protocol"] = sim_protocol;
            rep["noise"] = {{"peak", sim_noise.peak},
                            {"background", sim_noise.background},
                            {"windows", sim_noise.windows},
                            {"seed", sim_noise.seed}};
            if (sim_protocol == "mcp") {
                const MubFamily fam = mub_family(d);
                const LabelingChoice lab = resolve_labeling(sim_lab);
                const auto records = retroactive_mix(simulate_mcp(fam, sim_noise), st.coeffs);
                emit(sim_out, io::mcp_counts_csv(records, d), out);
                rep["estimate"] = io::to_json(estimate_mcp(records, d, lab));
                rep["theory"] = io::to_json(mcp(rho, fam, lab));
            } else {
                const TomographySet set = tomography_settings(d);
                const auto counts = simulate_tomography(rho, set, sim_noise);
                emit(sim_out, io::tomography_counts_csv(counts, set), out);
                const ComplexMatrix est = reconstruct(counts, set);
                rep["fidelity"] = fidelity(rho, est);
                rep["min_pt_eig"] = ppt_min_eig(est, d);
                rep["rho"] = io::to_json(est);
            }
            if (!sim_report.empty()) io::write_file(sim_report, dump(rep));
        });
    }

    // tomography
    StateArgs tomo_args;
    NoiseModel tomo_noise;
    std::vector<double> tomo_noise_pair;
    std::string tomo_counts, tomo_out;
    {
        auto* sub = app.add_subcommand("tomography", "Reconstruct a two-qudit state from tomography counts");
        add_state_flags(sub, tomo_args);
        sub->add_option("--counts", tomo_counts, "Count CSV (setting,a,b,count); simulated from the state if absent");
        sub->add_option("--noise", tomo_noise_pair, "peak,background for simulated counts")->delimiter(',')->expected(2);
        sub->add_option("--windows", tomo_noise.windows, "Integration windows per setting")->capture_default_str();
        sub->add_option("--seed", tomo_noise.seed, "RNG seed")->envname("BOUNDSIM_SEED")->capture_default_str();
        sub->add_option("--out", tomo_out, "Output JSON path (default stdout)");
        bind(sub, [&] {
            if (!tomo_noise_pair.empty()) {
                tomo_noise.peak = tomo_noise_pair[0];
                tomo_noise.background = tomo_noise_pair[1];
            }
            const ResolvedState st = resolve_state(tomo_args, !tomo_counts.empty() ? false : true);
            const int d = st.coeffs.d > 0 ? st.coeffs.d : tomo_args.d;
            const TomographySet set = tomography_settings(d);
            std::vector<double> counts;
            if (!tomo_counts.empty())
                counts = io::parse_tomography_counts_csv(io::read_file(tomo_counts));
            else
                counts = simulate_tomography(state_from_coeffs(st.coeffs), set, tomo_noise);
            const ComplexMatrix est = reconstruct(counts, set);
            json j{{"d", d}, {"settings", set.pairs()}, {"min_pt_eig", ppt_min_eig(est, d)}, {"rho", io::to_json(est)}};
            if (st.coeffs.d > 0) j["fidelity"] = fidelity(state_from_coeffs(st.coeffs), est);
            if (tomo_counts.empty()) j["noise"] = noise_json_key(tomo_noise);
            emit(tomo_out, dump(j), out);
        });
    }

    // variants
    std::vector<double> var_q;
    std::string var_out;
    {
        auto* sub = app.add_subcommand("variants", "The 72 unitary-equivalent coefficient tables of a qutrit state");
        sub->add_option("--q", var_q, "q1,q2,q3")->delimiter(',')->expected(3)->required();
        sub->add_option("--out", var_out, "Output CSV path (default stdout)");
        bind(sub, [&] {
            const auto vars = equivalent_variants(FamilyParams{3, var_q[0], var_q[1], var_q[2], std::nullopt});
            const MubFamily fam = mub_family(3);
            std::vector<double> pt, w;
            for (const auto& v : vars) {
                const ComplexMatrix rho = state_from_coeffs(v.coeffs);
                pt.push_back(ppt_min_eig(rho, 3));
                w.push_back(*mcp(rho, fam, LabelingChoice::maximize()).witness);
            }
            emit(var_out, io::variants_csv(vars, pt, w), out);
        });
    }

    // budget
    int budget_d = 3;
    {
        auto* sub = app.add_subcommand("budget", "Measurement counts for tomography and the two MCP variants");
        sub->add_option("--d,--dim", budget_d, "Dimension")->required();
        bind(sub, [&] {
            const MeasurementBudget b = measurement_budget(budget_d);
            out << "n_qst,n_mcp1,n_mcp2\n" << b.qst << "," << b.mcp1 << "," << b.mcp2 << "\n";
        });
    }

    try {
        app.parse(argc, argv);
        if (action) action();
        return kExitOk;
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace boundsim::cli
