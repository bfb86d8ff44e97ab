#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rangelab/error.hpp"
#include "rangelab/format.hpp"
#include "rangelab/io.hpp"
#include "rangelab/lbgeom.hpp"
#include "rangelab/render.hpp"
#include "rangelab/rrds.hpp"
#include "rangelab/suite.hpp"

using namespace rangelab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Calibration {
    double c_cover = 4.0;
    int K = 16;
    double C_m = kCloseRegionFactor;
    double C_o = 32.0;
    double kappa_c = 1.0;
};

/// Every resolved parameter of one invocation.
struct RunConfig {
    std::string command;
    std::size_t n = 10'000;
    std::vector<int> q{16};
    std::string mode = "curvature";
    int delta = 2;
    int dim = 2;
    std::uint64_t seed = 1;
    std::size_t samples = kDefaultMcSamples;
    std::size_t trials = 100;
    std::size_t queries = 50;
    double lb_n = 65536;
    double lb_q = 4;
    std::string points_file;
    std::string query_file;
    std::string kind = "ellipse";
    std::string out;
    std::string csv;
    Calibration cal;
    StructureConfig structure;  // q and mode are filled per run
};

json header(const RunConfig& c) {
    json cfg = {{"command", c.command},
                {"n", c.n},
                {"q", c.q},
                {"mode", c.mode},
                {"delta", c.delta},
                {"dim", c.dim},
                {"samples", c.samples},
                {"trials", c.trials},
                {"queries", c.queries},
                {"lb_n", c.lb_n},
                {"lb_q", c.lb_q},
                {"points_file", c.points_file},
                {"query_file", c.query_file},
                {"kind", c.kind},
                {"calibration",
                 {{"c_cover", c.cal.c_cover}, {"K", c.cal.K}, {"C_m", c.cal.C_m}, {"C_o", c.cal.C_o}, {"kappa_c", c.cal.kappa_c}}},
                {"structure", to_json(c.structure)}};
    return {{"tool", "rangelab"}, {"version", RANGELAB_VERSION}, {"config", cfg}, {"seed", c.seed}};
}

void apply_overrides(RunConfig& c, const json& j) {
    if (!j.is_object()) throw UsageError("--config must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
        auto num = [&] {
            if (!v.is_number()) throw UsageError("--config: " + key + " must be a number");
            return v.get<double>();
        };
        if (key == "c_cover") c.cal.c_cover = num();
        else if (key == "K") c.cal.K = static_cast<int>(num());
        else if (key == "C_m") c.cal.C_m = num();
        else if (key == "C_o") c.cal.C_o = num();
        else if (key == "kappa_c") c.cal.kappa_c = num();
        else if (key == "order") c.structure.order = static_cast<int>(num());
        else if (key == "derivative_bound") c.structure.derivative_bound = num();
        else if (key == "max_degree") c.structure.max_degree = static_cast<int>(num());
        else if (key == "beta_model") c.structure.beta_model = static_cast<int>(num());
        else if (key == "curvature_budget") c.structure.refine.curvature_budget = num();
        else if (key == "per_cell_cap") c.structure.refine.per_cell_cap = static_cast<int>(num());
        else if (key == "step") c.structure.refine.step = num();
        else if (key == "strict_derivatives") {
            if (!v.is_boolean()) throw UsageError("--config: strict_derivatives must be a boolean");
            c.structure.strict_derivatives = v.get<bool>();
        } else
            throw UsageError("--config: unknown key \"" + key + "\"");
    }
    c.structure.cover.c_cover = c.cal.c_cover;
    c.structure.cover.max_slabs = c.cal.K;
}

StructureConfig structure_for(const RunConfig& c, int q) {
    StructureConfig s = c.structure;
    s.q = q;
    try {
        s.mode = mode_from_string(c.mode);
    } catch (const Error&) {
        throw UsageError("--mode must be curvature or derivative");
    }
    return s;
}

std::vector<Vec2> load_points(const RunConfig& c) {
    if (!c.points_file.empty()) return read_points_file(c.points_file);
    if (c.n < 1) throw UsageError("--n must be at least 1");
    return uniform_points(c.n, c.seed);
}

QueryRange load_query(const RunConfig& c) {
    if (!c.query_file.empty()) {
        json j = read_json_file(c.query_file);
        return query_from_json(j.contains("query") ? j.at("query") : j);
    }
    for (QueryKind k : {QueryKind::Disk, QueryKind::Ellipse, QueryKind::Cubic, QueryKind::QuarticSlab})
        if (c.kind == to_string(k)) {
            std::mt19937_64 rng(stream_seed(c.seed, 1));
            return random_query(k, rng);
        }
    throw UsageError("--kind must be disk, ellipse, cubic or quartic_slab");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Input, "cannot write " + path);
    return out;
}

void emit_json(const RunConfig& c, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (c.out.empty())
        std::cout << text;
    else
        open_out(c.out) << text;
}

// ---------------------------------------------------------------------------

int cmd_gen(const RunConfig& c) {
    if (c.n < 1) throw UsageError("--n must be at least 1");
    if (c.out.empty()) throw UsageError("gen needs --out");
    const std::vector<Vec2> pts = uniform_points(c.n, c.seed);
    std::ofstream out = open_out(c.out);
    out << "# " << header(c).dump() << "\n";
    write_points_csv(out, pts);
    return kExitOk;
}

int cmd_build(const RunConfig& c) {
    const RangeStructure s = RangeStructure::build(load_points(c), structure_for(c, c.q.front()));
    std::size_t lo = s.size(), hi = 0;
    for (int i = 0; i < s.grid().cell_count(); ++i) {
        const std::size_t b = s.bucket(s.grid().cell_at(i)).size();
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    emit_json(c, {{"header", header(c)},
                  {"points", s.size()},
                  {"buckets", {{"min", lo}, {"max", hi}, {"mean", double(s.size()) / s.grid().cell_count()}}},
                  {"catalog", catalog_summary(s.catalog())},
                  {"space", to_json(s.space_report(50'000'000, c.seed))}});
    return kExitOk;
}

int cmd_query(RunConfig c, const std::string& replay) {
    if (!replay.empty()) {
        const json art = read_json_file(replay);
        const json& cfg = art.at("header").at("config");
        c.n = cfg.at("n").get<std::size_t>();
        c.q = cfg.at("q").get<std::vector<int>>();
        c.mode = cfg.at("mode").get<std::string>();
        c.points_file = cfg.at("points_file").get<std::string>();
        c.seed = art.at("header").at("seed").get<std::uint64_t>();
        const json& cal = cfg.at("calibration");
        const json& st = cfg.at("structure");
        apply_overrides(c, {{"c_cover", cal.at("c_cover")},
                            {"K", cal.at("K")},
                            {"order", st.at("order")},
                            {"derivative_bound", st.at("derivative_bound")},
                            {"max_degree", st.at("max_degree")},
                            {"beta_model", st.at("beta_model")},
                            {"strict_derivatives", st.at("strict_derivatives")},
                            {"curvature_budget", st.at("curvature_budget")},
                            {"per_cell_cap", st.at("per_cell_cap")},
                            {"step", st.at("step")}});
        c.query_file = replay;
    }
    const std::vector<Vec2> pts = load_points(c);
    const QueryRange range = load_query(c);
    const RangeStructure s = RangeStructure::build(pts, structure_for(c, c.q.front()));
    const QueryResult r = s.query(range);
    const bool pass = r.ids == brute_force_query(pts, range);
    json out = to_json(r);
    out["header"] = header(c);
    out["query"] = to_json(range);
    out["oracle_pass"] = pass;
    emit_json(c, out);
    return pass ? kExitOk : kExitCheck;
}

double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t k = static_cast<std::size_t>(std::ceil(p * v.size())) - 1;
    return v[std::min(k, v.size() - 1)];
}

int cmd_bench(const RunConfig& c) {
    if (c.out.empty()) throw UsageError("bench needs --out for the tradeoff CSV");
    const std::vector<Vec2> pts = load_points(c);
    const std::vector<QueryRange> suite = query_suite(c.queries, c.seed);
    std::vector<std::vector<int>> truth;
    for (const QueryRange& r : suite) truth.push_back(brute_force_query(pts, r));

    std::ofstream out = open_out(c.out);
    out << "# " << header(c).dump() << "\n";
    out << "n,q,mode,modeled_space,tradeoff_space,mean_overscan,p95_overscan,overscan_cap,queries,oracle_pass\n";
    bool all_pass = true;
    for (int q : c.q) {
        RunConfig rc = c;
        rc.q = {q};
        const RangeStructure s = RangeStructure::build(pts, structure_for(c, q));
        std::vector<double> overscan;
        bool pass = true;
        for (std::size_t i = 0; i < suite.size(); ++i) {
            const QueryResult r = s.query(suite[i]);
            overscan.push_back(static_cast<double>(r.stats.overscan()));
            if (r.ids != truth[i]) {
                pass = false;
                const std::string path = c.out + ".failing.json";
                rc.command = "query";
                open_out(path) << json{{"header", header(rc)}, {"query", to_json(suite[i])}}.dump(2) << "\n";
                std::cerr << "oracle mismatch at q=" << q << " query " << i << "; replay with: query --replay " << path
                          << "\n";
                break;
            }
        }
        const SpaceReport sp = s.space_report(50'000'000, c.seed);
        double mean = 0;
        for (double v : overscan) mean += v / overscan.size();
        const double cap = c.cal.C_o * q * std::log(static_cast<double>(pts.size()));
        out << pts.size() << ',' << q << ',' << c.mode << ',' << format_double(sp.modeled_space) << ','
            << format_double(sp.tradeoff_space) << ',' << format_double(mean) << ','
            << format_double(percentile(overscan, 0.95)) << ',' << format_double(cap) << ',' << overscan.size() << ','
            << (pass ? "true" : "false") << "\n";
        out.flush();
        if (!pass) return kExitCheck;
        all_pass = all_pass && pass;
    }
    return all_pass ? kExitOk : kExitCheck;
}

json estimate(const std::string& name, double value, double std_error, json bound, bool pass) {
    return {{"name", name}, {"value", value}, {"stderr", std_error}, {"bound", bound}, {"pass", pass}};
}

int cmd_lbverify(const RunConfig& c) {
    if (c.dim < 2 || c.delta < 2) throw UsageError("lbverify needs --dim >= 2 and --delta >= 2");
    json estimates = json::array();
    const LBParams audit = lb_parameters(c.lb_n, c.lb_q, c.dim, c.delta);

    // Schedule audit.
    const double b = static_cast<double>(audit.beta);
    const double bb = static_cast<double>(audit.beta_plane_pairs);
    const double exponent = b + 2 * b * bb + b * (c.dim - 2) * c.delta - 1;
    estimates.push_back(estimate("q_exponent", audit.q_exponent, 0, exponent, audit.q_exponent == exponent));
    estimates.push_back(estimate("n_exponent", audit.n_exponent, 0, b, audit.n_exponent == b));
    const double et = std::pow(1.0 / audit.coeff_scale, 1.0 / bb) / audit.eta_tau();
    estimates.push_back(estimate("eta_tau_identity", et, 0, 1.0, std::abs(et - 1) <= 1e-9));
    const double gs = audit.grid_step /
                      (audit.delta * std::pow(audit.tau, bb) * std::pow(audit.eta_tau(), (c.dim - 2) * c.delta));
    estimates.push_back(estimate("grid_step_identity", gs, 0, 1.0, std::abs(gs - 1) <= 1e-9));
    json beta_table = json::array();
    const int expected_beta[] = {2, 5, 9, 14, 20};
    bool table_ok = true;
    for (int d = 1; d <= 5; ++d) {
        beta_table.push_back(monic_param_count(2, d));
        table_ok = table_ok && monic_param_count(2, d) == static_cast<std::uint64_t>(expected_beta[d - 1]);
    }
    estimates.push_back(estimate("beta_table_D2", table_ok ? 1 : 0, 0, beta_table, table_ok));
    const double fb = framework_bound(1000, 10, 2, 2, c.cal.kappa_c);
    estimates.push_back(estimate("framework_bound_example", fb, 0, 1000.0 * 10 / (2 * std::exp2(2 * c.cal.kappa_c)),
                                 fb == 1000.0 * 10 / (2 * std::exp2(2 * c.cal.kappa_c))));

    // Geometry mode.
    const LBParams geo = geometry_parameters(c.dim, c.delta, 8);
    const auto fam = packed_family_sample(geo, 20, stream_seed(c.seed, 10));
    std::mt19937_64 rng(stream_seed(c.seed, 11));
    std::uniform_real_distribution<double> unit(1.0, 2.0);
    double lo = INFINITY, hi = 0, shift_err = 0;
    std::vector<double> base(static_cast<std::size_t>(c.dim - 1));
    const PackedPoly plain = PackedPoly::base(c.dim, c.delta);
    for (const PackedPoly& p : fam)
        for (double r : {1e-4, 1e-3})
            for (int i = 0; i < 100; ++i) {
                for (double& v : base) v = unit(rng);
                const double ratio = axis_distance(p, p.shifted(r), base) / r;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                shift_err = std::max(shift_err, std::abs(axis_distance(plain, plain.shifted(r), base) - r));
            }
    estimates.push_back(estimate("axis_distance_ratio_min", lo, 0, 0.5, lo >= 0.5));
    estimates.push_back(estimate("axis_distance_ratio_max", hi, 0, 2.0, hi <= 2.0));
    estimates.push_back(estimate("pure_shift_error", shift_err, 0, 1e-10, shift_err <= 1e-10));

    const McEstimate bm = base_measure(plain, c.samples, stream_seed(c.seed, 12));
    const double bm_ref = std::pow(2.0, 1.0 / c.delta) - 1;
    estimates.push_back(estimate("base_measure_reference", bm.value, bm.std_error, bm_ref,
                                 std::abs(bm.value - bm_ref) <= 4 * bm.std_error + 1e-12));
    const McEstimate sm = slab_measure(fam.front(), 1e-3, c.samples, stream_seed(c.seed, 13));
    estimates.push_back(estimate("slab_measure_over_width", sm.value / 1e-3, sm.std_error / 1e-3, json::array({0.25, 4}),
                                 sm.value / 1e-3 >= 0.25 && sm.value / 1e-3 <= 4));

    const std::vector<double> sweep{4, 8, 16, 32};
    const ScalingStudy study = close_region_scaling(c.dim, c.delta, sweep, c.samples, stream_seed(c.seed, 14), c.cal.C_m);
    estimates.push_back(estimate("close_region_slope", study.slope, 0, -1.0, std::abs(study.slope + 1) <= 0.3));
    estimates.push_back(estimate("close_region_constant", study.fitted_constant, 0, nullptr, true));
    estimates.push_back(estimate("close_region_inversions", study.inversions, 0, 1, study.inversions <= 1));

    // Derandomization: 32 + 32 crossing strips of width 1/64 at n = 4096.
    auto ranges = axis_strips(2, 0, 32, 1.0 / 64);
    for (auto& r : axis_strips(2, 1, 32, 1.0 / 64)) ranges.push_back(r);
    const double n = 4096, t = 12;
    const double c_exp = std::log(static_cast<double>(ranges.size())) / std::log(n);
    const DerandPrecheck pre = derand_precheck(ranges, 2, n, t, c_exp, 32, c.samples, stream_seed(c.seed, 15));
    estimates.push_back(estimate("derand_min_measure", pre.min_measure, 0, pre.required_measure,
                                 pre.min_measure >= pre.required_measure));
    estimates.push_back(estimate("derand_max_pair_measure", pre.max_pair_measure, 0, pre.pair_bound,
                                 pre.max_pair_measure <= pre.pair_bound));
    const DerandResult dr = derand_simulation(ranges, 2, 4096, 12, c.trials, stream_seed(c.seed, 16));
    estimates.push_back(estimate("derand_joint_success", dr.joint, 0, 0.5, dr.joint > 0.5));

    bool pass = true;
    for (const json& e : estimates) pass = pass && e.at("pass").get<bool>();
    json scaling = json::array();
    for (const ScalingPoint& p : study.points)
        scaling.push_back({{"eta_tau", p.eta_tau}, {"estimate", p.estimate}, {"stderr", p.std_error}});
    emit_json(c, {{"header", header(c)},
                  {"params", to_json(audit)},
                  {"geometry_params", to_json(geo)},
                  {"mode", "schedule_audit+geometry"},
                  {"estimates", estimates},
                  {"scaling", scaling},
                  {"derand",
                   {{"trials", dr.trials},
                    {"all_ranges_full", dr.all_ranges_full},
                    {"all_pairs_sparse", dr.all_pairs_sparse},
                    {"joint", dr.joint},
                    {"cap", dr.cap}}},
                  {"close_region_factor", c.cal.C_m},
                  {"kappa_c", c.cal.kappa_c},
                  {"warnings", audit.warnings},
                  {"pass", pass},
                  {"seed", c.seed}});
    if (!c.csv.empty()) {
        std::ofstream csv = open_out(c.csv);
        csv << "# " << header(c).dump() << "\n";
        csv << "eta_tau,estimate,stderr\n";
        for (const ScalingPoint& p : study.points)
            csv << format_double(p.eta_tau) << ',' << format_double(p.estimate) << ',' << format_double(p.std_error) << "\n";
    }
    return pass ? kExitOk : kExitCheck;
}

int cmd_render(const RunConfig& c) {
    if (c.out.empty()) throw UsageError("render needs --out");
    const std::vector<Vec2> pts = load_points(c);
    const RangeStructure s = RangeStructure::build(pts, structure_for(c, c.q.front()));
    std::optional<QueryRange> range;
    if (c.kind != "none" || !c.query_file.empty()) range = load_query(c);
    std::string svg = render_svg(s, range ? &*range : nullptr);
    std::string meta = header(c).dump();
    for (std::size_t p; (p = meta.find("--")) != std::string::npos;) meta.replace(p, 2, "- -");
    svg.insert(svg.find('\n') + 1, "<!-- " + meta + " -->\n");
    open_out(c.out) << svg;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rangelab: semialgebraic range reporting experiments"};
    app.require_subcommand(1);
    RunConfig c;
    std::string config_file, replay;
    std::optional<std::uint64_t> seed;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Master seed (falls back to RANGELAB_SEED, then 1)");
        sub->add_option("--config", config_file, "JSON file overriding calibration constants");
        sub->add_option("--out", c.out, "Output path");
    };
    auto structure = [&](CLI::App* sub) {
        sub->add_option("--n", c.n, "Number of uniform points");
        sub->add_option("--points", c.points_file, "CSV point file instead of --n");
        sub->add_option("--q", c.q, "Grid resolution (bench accepts a list)")->delimiter(',');
        sub->add_option("--mode", c.mode, "curvature or derivative");
    };

    CLI::App* gen = app.add_subcommand("gen", "Write uniform points as CSV");
    common(gen);
    gen->add_option("--n", c.n, "Number of points");
    CLI::App* build = app.add_subcommand("build", "Build a structure and report its space");
    common(build);
    structure(build);
    CLI::App* query = app.add_subcommand("query", "Run one query against the brute-force oracle");
    common(query);
    structure(query);
    query->add_option("--query", c.query_file, "Query JSON {factors, slab}");
    query->add_option("--kind", c.kind, "Random query kind when --query is absent");
    query->add_option("--replay", replay, "Artifact written by a failing bench run");
    CLI::App* bench = app.add_subcommand("bench", "Tradeoff sweep over q with oracle checks");
    common(bench);
    structure(bench);
    bench->add_option("--queries", c.queries, "Queries per q");
    CLI::App* lbverify = app.add_subcommand("lbverify", "Lower-bound construction checks");
    common(lbverify);
    lbverify->add_option("--n", c.lb_n, "n for the schedule audit");
    lbverify->add_option("--Q", c.lb_q, "Q for the schedule audit");
    lbverify->add_option("--delta", c.delta, "Polynomial degree");
    lbverify->add_option("--dim", c.dim, "Dimension D");
    lbverify->add_option("--samples", c.samples, "Monte Carlo samples per estimate");
    lbverify->add_option("--trials", c.trials, "Derandomization trials");
    lbverify->add_option("--csv", c.csv, "Scaling study CSV");
    CLI::App* render = app.add_subcommand("render", "SVG of the grid, boundary, slabs and regions");
    common(render);
    structure(render);
    render->add_option("--query", c.query_file, "Query JSON");
    render->add_option("--kind", c.kind, "Random query kind, or none for the grid alone");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        c.command = sub->get_name();
        if (seed) {
            c.seed = *seed;
        } else if (const char* env = std::getenv("RANGELAB_SEED")) {
            try {
                c.seed = std::stoull(env);
            } catch (const std::exception&) {
                throw UsageError("RANGELAB_SEED is not an unsigned integer");
            }
        }
        apply_overrides(c, config_file.empty() ? json::object() : read_json_file(config_file));
        if (sub == bench && bench->count("--q") == 0) c.q = {8, 16, 32};
        if (c.q.empty() || std::any_of(c.q.begin(), c.q.end(), [](int q) { return q < 2; }))
            throw UsageError("--q must be at least 2");

        if (sub == gen) return cmd_gen(c);
        if (sub == build) return cmd_build(c);
        if (sub == query) return cmd_query(c, replay);
        if (sub == bench) return cmd_bench(c);
        if (sub == lbverify) return cmd_lbverify(c);
        if (sub == render) return cmd_render(c);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == ErrorKind::Input || e.kind() == ErrorKind::Contract ? kExitUsage : kExitCheck;
    } catch (const json::exception& e) {
        std::cerr << "malformed artifact: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
