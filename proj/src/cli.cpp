#include "circlelab/cli.hpp"
#include "circlelab/acceptance.hpp"
#include "circlelab/arcs.hpp"
#include "circlelab/ergodic.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/gowers.hpp"
#include "circlelab/improving.hpp"
#include "circlelab/pet.hpp"
#include "circlelab/rng.hpp"
#include "circlelab/variation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace circlelab::cli {

using nlohmann::json;
using grid::cplx;
using grid::GridFunction;
using poly::PolynomialMap;

// ---------------------------------------------------------------- config

ExperimentConfig ExperimentConfig::from_json(const json& j)
{
    if (!j.is_object())
        throw UsageError("config must be a JSON object");
    static const std::set<std::string> known{"module", "operation", "params", "seed", "output"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key))
            throw UsageError("unknown config key '" + key + "'");
    ExperimentConfig c;
    try {
        c.module = j.at("module").get<std::string>();
        c.operation = j.at("operation").get<std::string>();
        if (j.contains("params"))
            c.params = j.at("params");
        if (!c.params.is_object())
            throw UsageError("params must be an object");
        if (j.contains("seed"))
            c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("output"))
            c.output = j.at("output").get<std::string>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("invalid config: ") + e.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("malformed JSON in '" + path + "': " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const
{
    return {{"module", module}, {"operation", operation}, {"params", params}, {"seed", seed}, {"output", output}};
}

std::string ExperimentConfig::hash() const
{
    json j = to_json();
    j.erase("output");
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

bool ResultRecord::passed() const
{
    return std::all_of(flags.begin(), flags.end(), [](const auto& kv) { return kv.second; });
}

// ---------------------------------------------------------------- params

namespace {

class Params {
public:
    Params(const json& j, std::set<std::string> allowed) : j_(j)
    {
        for (const auto& [key, value] : j.items())
            if (!allowed.count(key))
                throw UsageError("unknown parameter '" + key + "'");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <class T>
    T get(const std::string& key) const
    {
        if (!j_.contains(key))
            throw UsageError("missing parameter '" + key + "'");
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw UsageError("parameter '" + key + "' has the wrong type");
        }
    }

    template <class T>
    T get(const std::string& key, T fallback) const
    {
        return has(key) ? get<T>(key) : fallback;
    }

    // Numbers or the strings "inf"/"infinity".
    double exponent(const std::string& key, double fallback) const
    {
        if (!has(key))
            return fallback;
        return parse_exponent(j_.at(key), key);
    }

    const json& raw(const std::string& key) const
    {
        if (!j_.contains(key))
            throw UsageError("missing parameter '" + key + "'");
        return j_.at(key);
    }

    static double parse_exponent(const json& v, const std::string& key)
    {
        if (v.is_number())
            return v.get<double>();
        if (v.is_string() && (v == "inf" || v == "infinity"))
            return std::numeric_limits<double>::infinity();
        throw UsageError("parameter '" + key + "' must be a number or \"inf\"");
    }

private:
    const json& j_;
};

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read input '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("malformed JSON in '" + path + "': " + e.what());
    }
}

PolynomialMap parse_map(const std::string& text)
{
    try {
        return PolynomialMap::parse(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string exponent_text(double p)
{
    if (std::isinf(p))
        return "inf";
    std::ostringstream s;
    s << p;
    return s.str();
}

std::string iso_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

GridFunction random_function(const grid::Domain& d, Rng& rng)
{
    GridFunction f(d);
    for (auto& v : f.values())
        v = rng.unit_disc();
    return f;
}

// ------------------------------------------------------------ operations

using Op = std::function<ResultRecord(const Params&, std::uint64_t seed)>;

ResultRecord arcs_farey(const Params& p, std::uint64_t)
{
    ResultRecord r;
    r.columns = {"a", "q", "value"};
    for (const auto& f : arcs::farey_upto(p.get<std::int64_t>("n")))
        r.rows.push_back({f.a, f.q, f.value()});
    return r;
}

ResultRecord arcs_shells(const Params& p, std::uint64_t)
{
    ResultRecord r;
    r.columns = {"l", "a", "q"};
    const int l_max = p.get<int>("l");
    for (int l = 0; l <= l_max; ++l)
        for (const auto& f : arcs::shell(l))
            r.rows.push_back({l, f.a, f.q});
    r.flags["cardinality_bound"] = arcs::shells_upto(l_max).size() <= (std::size_t{1} << (2 * l_max));
    return r;
}

ResultRecord arcs_probe(const Params& p, std::uint64_t seed)
{
    const int l = p.get<int>("l");
    const int m = p.get<int>("m");
    const double ex = p.exponent("p", 2);
    const int trials = p.get<int>("trials", 20);
    const auto res = arcs::iw_opnorm_probe(arcs::shells_upto(l), m, ex, trials, seed);
    ResultRecord r;
    r.columns = {"l", "m", "p", "ncenters", "est_norm"};
    r.rows.push_back({l, m, ex, res.ncenters, res.estimate});
    r.fitted["model"] = res.model;
    if (ex == 2 && m <= -2 * l - 2)
        r.flags["l2_contraction"] = res.estimate <= 1 + 1e-9;
    return r;
}

ResultRecord expsums_scan(const Params& p, std::uint64_t seed)
{
    const auto P = poly::IntPolynomial::parse(p.get<std::string>("poly"));
    const auto N = p.get<std::int64_t>("n");
    const double delta = p.get<double>("delta", std::pow(static_cast<double>(N), -1.0 / 8));
    const double C = p.get<double>("cexp", 4);
    const auto grid_res = p.get<std::int64_t>(
        "grid", static_cast<std::int64_t>(std::ceil(4 * std::pow(static_cast<double>(N), P.degree()))));
    const auto res = expsums::minor_arc_scan(P, N, delta, C, grid_res, seed);
    ResultRecord r;
    r.columns = {"N", "delta", "sup", "argmax"};
    r.rows.push_back({N, delta, res.sup, res.argmax});
    r.fitted = {{"resolution", res.resolution}, {"jitter", res.jitter}, {"samples", res.samples},
                {"minor_samples", res.minor_samples}, {"q_max", res.q_max}, {"arc_half_width", res.arc_half_width}};
    r.flags["sup_at_most_one"] = res.sup <= 1 + 1e-12;
    return r;
}

ResultRecord expsums_approx(const Params& p, std::uint64_t seed)
{
    const auto pm = parse_map(p.get<std::string>("poly"));
    const auto N = p.get<double>("n");
    const int l = p.get<int>("shells");
    const int samples = p.get<int>("samples", 3);
    const std::size_t k = pm.k();
    std::vector<double> M(k);
    for (std::size_t i = 0; i < k; ++i)
        M[i] = p.has("windows") ? p.get<std::vector<double>>("windows").at(i) : std::pow(N, pm.degree(i)) / 8;
    const auto centers = arcs::shells_upto(l);
    ResultRecord r;
    r.columns = {"theta", "xi", "error", "shape", "ratio"};
    const double shape = expsums::approx_shape(pm, N, l, M);
    Rng rng(seed);
    double C = 0;
    std::vector<std::size_t> pos(k, 0);
    while (true) {
        std::vector<arcs::FareyFraction> theta;
        std::string tt;
        for (std::size_t i = 0; i < k; ++i) {
            theta.push_back(centers[pos[i]]);
            tt += (i ? " " : "") + std::to_string(theta.back().a) + "/" + std::to_string(theta.back().q);
        }
        for (int s = 0; s < samples; ++s) {
            std::vector<double> xi(k);
            std::string xt;
            for (std::size_t i = 0; i < k; ++i) {
                xi[i] = theta[i].value() + (s == 0 ? 0 : rng.uniform(-1, 1) / M[i]);
                std::ostringstream o;
                o << std::setprecision(17) << xi[i];
                xt += (i ? " " : "") + o.str();
            }
            const double err = expsums::approx_error(pm, N, xi, theta, M);
            C = std::max(C, err / shape);
            r.rows.push_back({tt, xt, err, shape, err / shape});
        }
        std::size_t i = 0;
        while (i < k && ++pos[i] == centers.size())
            pos[i++] = 0;
        if (i == k)
            break;
    }
    r.fitted["C"] = C;
    return r;
}

gowers::Interval parse_interval(const json& v, const std::string& key)
{
    try {
        const auto a = v.get<std::vector<std::int64_t>>();
        if (a.size() == 1)
            return {1, a[0]};
        if (a.size() == 2)
            return {a[0], a[1]};
    } catch (const json::exception&) {
    }
    if (v.is_number_integer())
        return {1, v.get<std::int64_t>()};
    throw UsageError("parameter '" + key + "' must be a length or a [lo, hi] pair");
}

ResultRecord gowers_norm_op(const Params& p, std::uint64_t)
{
    const GridFunction f = GridFunction::from_json(read_json_file(p.get<std::string>("input")));
    gowers::BoxNormSpec spec;
    spec.s = p.get<int>("s");
    spec.axis = p.get<std::size_t>("axis", 0);
    const json& H = p.raw("H");
    for (int i = 0; i < spec.s; ++i)
        spec.H.push_back(H.is_array() && !H.empty() && H[0].is_array() ? parse_interval(H.at(static_cast<std::size_t>(i)), "H")
                                                                       : parse_interval(H, "H"));
    if (p.has("I")) {
        const json& I = p.raw("I");
        if (I.is_object()) {
            spec.I_lo = I.at("lo").get<grid::Point>();
            spec.I_hi = I.at("hi").get<grid::Point>();
        } else {
            const auto iv = parse_interval(I, "I");
            spec.I_lo = {iv.lo};
            spec.I_hi = {iv.hi};
        }
    } else {
        spec.I_lo = f.domain().lo;
        spec.I_hi = f.domain().hi;
    }
    const double power = gowers::box_norm_power(f, spec);
    ResultRecord r;
    r.columns = {"s", "norm", "power"};
    r.rows.push_back({spec.s, std::pow(std::max(power, 0.0), std::ldexp(1.0, -spec.s)), power});
    r.flags["nonnegative"] = power >= -1e-10;
    return r;
}

ResultRecord gowers_gcs(const Params& p, std::uint64_t seed)
{
    const int trials = p.get<int>("trials", 200);
    ResultRecord r;
    r.columns = {"trial", "s", "inner_abs", "norm_product", "ok"};
    bool all = true;
    for (int t = 0; t < trials; ++t) {
        Rng rng(seed, static_cast<std::uint64_t>(t));
        const int s = 1 + t % 3;
        const std::int64_t len = rng.integer(2, 12);
        gowers::BoxNormSpec spec;
        spec.s = s;
        for (int i = 0; i < s; ++i)
            spec.H.push_back({1, rng.integer(1, 3)});
        spec.I_lo = {0};
        spec.I_hi = {len - 1};
        std::vector<GridFunction> fam;
        double prod = 1;
        for (unsigned w = 0; w < (1u << s); ++w) {
            fam.push_back(random_function(grid::Domain::box({0}, {len - 1}), rng));
            prod *= gowers::box_norm(fam.back(), spec);
        }
        const double lhs = std::abs(gowers::box_inner_product(fam, spec));
        const bool ok = lhs <= prod + 1e-9;
        all = all && ok;
        r.rows.push_back({t, s, lhs, prod, ok});
    }
    r.flags["gowers_cauchy_schwarz"] = all;
    return r;
}

variation::IndexedSequence read_sequence(const json& j)
{
    variation::IndexedSequence seq;
    if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_array())
                seq.values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
            else
                seq.values.emplace_back(v.get<double>(), 0.0);
        }
    } else {
        const auto re = j.at("re").get<std::vector<double>>();
        const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
        if (im.size() != re.size())
            throw UsageError("re/im length mismatch");
        for (std::size_t i = 0; i < re.size(); ++i)
            seq.values.emplace_back(re[i], im[i]);
        if (j.contains("indices"))
            seq.indices = j.at("indices").get<std::vector<double>>();
    }
    if (seq.indices.empty())
        for (std::size_t i = 0; i < seq.values.size(); ++i)
            seq.indices.push_back(static_cast<double>(i));
    return seq;
}

ResultRecord variation_vnorm(const Params& p, std::uint64_t)
{
    const double rr = p.exponent("r", 2);
    variation::IndexedSequence seq;
    try {
        seq = read_sequence(read_json_file(p.get<std::string>("input")));
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad sequence file: ") + e.what());
    }
    ResultRecord r;
    r.columns = {"r", "seminorm", "norm"};
    r.rows.push_back({exponent_text(rr), variation::variation_seminorm(seq, rr), variation::variation_norm(seq, rr)});
    return r;
}

ResultRecord variation_chain(const Params& p, std::uint64_t)
{
    const double ex = p.exponent("p", 2);
    const json in = read_json_file(p.get<std::string>("input"));
    const json& list = in.is_object() ? in.at("functions") : in;
    std::vector<GridFunction> fs;
    for (const auto& f : list)
        fs.push_back(GridFunction::from_json(f));
    const auto c = variation::entropy_chain(fs, ex);
    ResultRecord r;
    r.columns = {"m", "size", "card_bound"};
    for (const auto& lvl : c.levels)
        r.rows.push_back({lvl.m, lvl.members.size(), c.card_constant * std::pow(2.0, c.p * lvl.m)});
    r.fitted = {{"vnorm", c.vnorm}, {"card_constant", c.card_constant}, {"step_constant", c.step_constant},
                {"telescoping_residual", c.telescoping_residual}};
    if (p.get<bool>("verify", false))
        r.flags["chain_verified"] = variation::verify_chain(c, fs) <= 1e-10;
    return r;
}

ResultRecord improving_vmvt(const Params& p, std::uint64_t)
{
    const int s = p.get<int>("s");
    const int d = p.get<int>("d");
    const auto nmax = p.get<std::int64_t>("nmax");
    const double eps = p.get<double>("epsilon", 0.0);
    std::vector<std::int64_t> Ns;
    for (std::int64_t N = p.get<std::int64_t>("nmin", 1); N <= nmax; ++N)
        Ns.push_back(N);
    const auto fit = improving::vmvt_bound_check(s, d, Ns, eps);
    ResultRecord r;
    r.columns = {"N", "J", "ratio_eps", "ratio_free"};
    for (std::size_t i = 0; i < fit.N.size(); ++i)
        r.rows.push_back({fit.N[i], improving::vinogradov_count(s, d, fit.N[i]).str(), fit.ratio_eps[i],
                          fit.C_free ? json(fit.ratio_free[i]) : json("")});
    r.fitted = {{"C_eps", fit.C_eps}, {"tail_slope", fit.tail_slope}};
    if (fit.C_free)
        r.fitted["C_free"] = *fit.C_free;
    r.flags["bounded"] = fit.ok;
    return r;
}

ResultRecord improving_rwt(const Params& p, std::uint64_t seed)
{
    const auto pm = parse_map(p.get<std::string>("poly"));
    const auto res = improving::rwt_sweep(pm, p.get<std::int64_t>("n"), p.get<std::size_t>("seeds", 200), seed,
                                          p.get<int>("levels", 2));
    ResultRecord r;
    r.columns = {"family", "ratio"};
    for (std::size_t f = 0; f < res.ratios.size(); ++f)
        r.rows.push_back({f, res.ratios[f]});
    r.fitted = {{"max_ratio", res.max_ratio.str()}, {"max_ratio_value", res.max_ratio.convert_to<double>()},
                {"argmax", res.argmax_seed}, {"certificates", res.certificates}};
    r.flags["certificates_hold"] = res.certificates_hold;
    return r;
}

// --- ergodic run

ergodic::System parse_system(const json& j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "integer_shift")
        return ergodic::System::integer_shift(j.at("k").get<std::size_t>());
    if (kind == "cyclic")
        return ergodic::System::cyclic(j.at("period").get<grid::Point>(),
                                       j.contains("steps") ? j.at("steps").get<std::vector<std::int64_t>>()
                                                           : std::vector<std::int64_t>{});
    if (kind == "torus")
        return ergodic::System::torus(j.at("angles").get<std::vector<std::vector<double>>>());
    throw UsageError("unknown system kind '" + kind + "'");
}

GridFunction parse_lattice_function(const json& j, const ergodic::System& sys, Rng rng)
{
    if (j.contains("domain"))
        return GridFunction::from_json(j);
    grid::Domain d;
    if (sys.kind == ergodic::SystemKind::CyclicShift)
        d = grid::Domain::periodic(sys.period);
    else
        d = grid::Domain::box(j.at("lo").get<grid::Point>(), j.at("hi").get<grid::Point>());
    if (j.contains("constant")) {
        GridFunction f(d);
        for (auto& v : f.values())
            v = j.at("constant").get<double>();
        return f;
    }
    if (j.value("random", std::string{}) == "unit_disc")
        return random_function(d, rng);
    throw UsageError("a function needs a domain, a constant, or \"random\": \"unit_disc\"");
}

ergodic::TrigPolynomial parse_trig(const json& j)
{
    ergodic::TrigPolynomial t;
    for (const auto& term : j.at("terms"))
        t.terms.emplace_back(term.at("m").get<std::vector<std::int64_t>>(),
                             cplx{term.value("re", 1.0), term.value("im", 0.0)});
    return t;
}

ResultRecord ergodic_run(const Params& p, std::uint64_t seed)
{
    const auto pm = parse_map(p.get<std::string>("poly"));
    ergodic::System sys;
    std::vector<double> Ns, norms;
    try {
        sys = parse_system(p.raw("system"));
        Ns = p.get<std::vector<double>>("Ngrid");
        for (const auto& v : p.raw("norms"))
            norms.push_back(Params::parse_exponent(v, "norms"));
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad ergodic config: ") + e.what());
    }
    const bool truncated = p.get<bool>("truncated", false);
    const double rvar = p.exponent("r", 2);
    if (Ns.empty() || norms.empty())
        throw UsageError("Ngrid and norms must be nonempty");
    ResultRecord r;
    r.columns = {"N", "stat", "value"};
    const json& fj = p.raw("functions");
    if (sys.kind == ergodic::SystemKind::TorusRotation) {
        std::vector<ergodic::TrigPolynomial> fs;
        for (const auto& f : fj)
            fs.push_back(parse_trig(f));
        const auto points = p.has("points") ? p.get<std::vector<std::vector<double>>>("points")
                                            : std::vector<std::vector<double>>{std::vector<double>(sys.angles[0].size(), 0.0)};
        for (double N : Ns) {
            const auto vals = ergodic::torus_average(pm, N, fs, sys, points, truncated);
            for (std::size_t i = 0; i < vals.size(); ++i) {
                r.rows.push_back({N, "re:" + std::to_string(i), vals[i].real()});
                r.rows.push_back({N, "im:" + std::to_string(i), vals[i].imag()});
                r.rows.push_back({N, "abs:" + std::to_string(i), std::abs(vals[i])});
            }
        }
        return r;
    }
    std::vector<GridFunction> fs;
    try {
        for (std::size_t i = 0; i < fj.size(); ++i)
            fs.push_back(parse_lattice_function(fj[i], sys, Rng(seed, i)));
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad function spec: ") + e.what());
    }
    for (double ex : norms) {
        const auto st = ergodic::sweep_stats(pm, Ns, fs, sys, ex, rvar, truncated);
        for (std::size_t i = 0; i < Ns.size(); ++i)
            r.rows.push_back({Ns[i], "lp:" + exponent_text(ex), st.single[i]});
        r.rows.push_back({"grid", "maximal:" + exponent_text(ex), st.maximal});
        r.rows.push_back({"grid", "variation:" + exponent_text(ex) + ":r=" + exponent_text(rvar), st.variation});
        double bound = 1;
        for (const auto& f : fs)
            bound *= grid::lp_norm(f, std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < Ns.size() && std::isinf(ex); ++i)
            r.flags["sup_bound"] = r.flags.count("sup_bound") ? r.flags["sup_bound"] && st.single[i] <= bound + 1e-12
                                                              : st.single[i] <= bound + 1e-12;
    }
    return r;
}

// --- poly

ResultRecord poly_eval(const Params& p, std::uint64_t)
{
    const auto P = poly::IntPolynomial::parse(p.get<std::string>("poly"));
    const json& nv = p.raw("n");
    const poly::BigInt n(nv.is_string() ? nv.get<std::string>() : nv.dump());
    ResultRecord r;
    r.columns = {"n", "value"};
    r.rows.push_back({n.str(), poly::eval(P, n).str()});
    return r;
}

ResultRecord poly_admissible(const Params& p, std::uint64_t)
{
    const auto P = poly::IntPolynomial::parse(p.get<std::string>("poly"));
    ResultRecord r;
    r.columns = {"poly", "d", "admissible"};
    const int d = p.get<int>("d");
    r.rows.push_back({P.str(), d,
                      poly::is_admissible(P, d, p.get<double>("delta", 1.0), p.get<double>("N", 1.0),
                                          p.get<double>("A", 1.0))});
    return r;
}

ResultRecord poly_pet(const Params& p, std::uint64_t)
{
    const auto pm = parse_map(p.get<std::string>("poly"));
    const auto trace = poly::pet_trace(poly::PolyVectorFamily::from_map(pm));
    ResultRecord r;
    r.columns = {"step", "l0", "shift_var", "family"};
    for (std::size_t i = 0; i < trace.states.size(); ++i) {
        const auto& st = trace.states[i];
        json l0 = "", var = "";
        if (i > 0) {
            l0 = st.history.back().l0 + 1;
            var = st.history.back().shift_var;
        }
        r.rows.push_back({i, l0, var, json(st.strings()).dump()});
    }
    r.fitted = {{"steps", trace.steps()}, {"shift_vars", trace.shift_vars()}};
    r.flags["terminated_linear"] = trace.states.back().is_linear();
    return r;
}

struct OpEntry {
    std::set<std::string> params;
    Op op;
};

const std::map<std::string, OpEntry>& registry()
{
    static const std::map<std::string, OpEntry> ops{
        {"arcs farey", {{"n"}, arcs_farey}},
        {"arcs shells", {{"l"}, arcs_shells}},
        {"arcs probe", {{"l", "m", "p", "trials"}, arcs_probe}},
        {"expsums scan", {{"poly", "n", "delta", "cexp", "grid"}, expsums_scan}},
        {"expsums approx", {{"poly", "n", "shells", "samples", "windows"}, expsums_approx}},
        {"gowers norm", {{"s", "H", "I", "axis", "input"}, gowers_norm_op}},
        {"gowers gcs-suite", {{"trials"}, gowers_gcs}},
        {"variation vnorm", {{"r", "input"}, variation_vnorm}},
        {"variation chain", {{"p", "input", "verify"}, variation_chain}},
        {"improving vmvt", {{"s", "d", "nmin", "nmax", "epsilon"}, improving_vmvt}},
        {"improving rwt", {{"poly", "n", "seeds", "levels"}, improving_rwt}},
        {"ergodic run", {{"system", "poly", "functions", "Ngrid", "norms", "truncated", "r", "points"}, ergodic_run}},
        {"poly eval", {{"poly", "n"}, poly_eval}},
        {"poly admissible", {{"poly", "d", "delta", "N", "A"}, poly_admissible}},
        {"poly pet", {{"poly"}, poly_pet}},
    };
    return ops;
}

std::string csv_cell(const json& v)
{
    std::string s;
    if (v.is_string())
        s = v.get<std::string>();
    else if (v.is_boolean())
        s = v.get<bool>() ? "true" : "false";
    else
        s = v.dump();
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

}  // namespace

std::vector<std::string> operations()
{
    std::vector<std::string> out;
    for (const auto& [name, entry] : registry())
        out.push_back(name);
    return out;
}

std::vector<std::string> parameters(const std::string& operation)
{
    const auto it = registry().find(operation);
    if (it == registry().end())
        throw UsageError("unknown operation '" + operation + "'");
    return {it->second.params.begin(), it->second.params.end()};
}

ResultRecord run(const ExperimentConfig& config)
{
    const auto it = registry().find(config.module + " " + config.operation);
    if (it == registry().end())
        throw UsageError("unknown operation '" + config.module + " " + config.operation + "'");
    const Params params(config.params, it->second.params);
    ResultRecord r = it->second.op(params, config.seed);
    r.config_hash = config.hash();
    r.timestamp = iso_timestamp();
    return r;
}

void write_csv(const ResultRecord& r, std::ostream& out)
{
    for (std::size_t i = 0; i < r.columns.size(); ++i)
        out << (i ? "," : "") << csv_cell(r.columns[i]);
    out << "\r\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_cell(row[i]);
        out << "\r\n";
    }
}

json sidecar(const ExperimentConfig& config, const ResultRecord& r)
{
    return {{"config", config.to_json()}, {"config_hash", r.config_hash}, {"timestamp", r.timestamp},
            {"columns", r.columns},       {"row_count", r.rows.size()},   {"fitted", r.fitted},
            {"flags", r.flags},           {"passed", r.passed()}};
}

int execute(const ExperimentConfig& config, std::ostream& out, std::ostream& err)
{
    ResultRecord r;
    try {
        r = run(config);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 2;
    }
    if (config.output.empty()) {
        write_csv(r, out);
    } else {
        std::ofstream csv(config.output, std::ios::binary);
        if (!csv) {
            err << "error: cannot write '" << config.output << "'\n";
            return 1;
        }
        write_csv(r, csv);
        std::ofstream side(config.output + ".json", std::ios::binary);
        side << sidecar(config, r).dump(2) << "\n";
    }
    for (const auto& [name, ok] : r.flags)
        if (!ok)
            err << "property failed: " << name << "\n";
    return r.passed() ? 0 : 2;
}

int run_suite(const std::string& name, std::ostream& out, std::ostream& err)
{
    std::vector<acceptance::Criterion> criteria;
    try {
        criteria = acceptance::suite(name);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const auto reports = acceptance::run(criteria, out);
    const auto passed = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
    out << passed << "/" << reports.size() << " criteria passed\n";
    return acceptance::all_passed(reports) ? 0 : 2;
}

}  // namespace circlelab::cli
