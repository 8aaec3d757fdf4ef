#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "meanlab/meanlab.hpp"

using namespace meanlab;

namespace {

struct Options {
    std::uint64_t seed = 7;
    unsigned threads = 1;
    std::string format = "json";
    std::string out;
    std::string config;

    std::string system;
    std::string set;
    std::string x, y;
    std::int64_t nmax = 0;
    std::int64_t radius = 0;
    std::size_t k_trunc = 20;
    std::string asymptotic;
    std::string cylinders;
    std::int64_t fmax = 12;
    std::size_t resolution = 1;
    bool ie = false;
    std::string measure;
    bool variational = false;
    std::string windows = "16:4096";
    std::size_t k = 0;
    std::string eps = "1/20";
    std::string tuple = "1..13";
    std::size_t instances = 200;
    std::size_t points = 20;
    std::size_t sets = 50;
    std::string a = "2/5";
    std::string suite = "all";
    std::string eps_grid;
    std::string deltas;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

std::int64_t to_int(const std::string& s) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw UsageError("not an integer: " + s);
    return v;
}

std::vector<DensityParams> parse_schedule(const std::string& text) {
    std::vector<DensityParams> out;
    for (const auto& item : split(text, ',')) {
        auto parts = split(item, ':');
        if (parts.empty() || parts.size() > 2) throw UsageError("schedule entry must be nmax[:radius]: " + item);
        DensityParams p;
        p.n_max = to_int(parts[0]);
        if (parts.size() == 2) p.radius = to_int(parts[1]);
        out.push_back(p);
    }
    if (out.empty()) throw UsageError("empty window schedule");
    return out;
}

// "a..b" or "n1,n2,..."
Window parse_tuple(const std::string& text) {
    auto dots = text.find("..");
    std::vector<GroupElem> el;
    if (dots != std::string::npos) {
        auto lo = to_int(text.substr(0, dots)), hi = to_int(text.substr(dots + 2));
        if (hi < lo) throw UsageError("empty tuple range: " + text);
        for (auto i = lo; i <= hi; ++i) el.push_back(GroupElem::scalar(i));
    } else {
        for (const auto& p : split(text, ',')) el.push_back(GroupElem::scalar(to_int(p)));
    }
    return Window(el);
}

std::vector<MeasureSpec> parse_measures(const SubshiftSpec& x, const std::string& text) {
    std::vector<MeasureSpec> out;
    for (const auto& item : split(text, ';')) {
        if (item.rfind("bernoulli:", 0) == 0) {
            std::vector<Rational> p;
            for (const auto& q : split(item.substr(10), ',')) p.push_back(parse_rational(q));
            out.push_back(MeasureSpec::bernoulli(p, item));
        } else if (item == "uniform") {
            out.push_back(MeasureSpec::uniform_bernoulli(x.alphabet_size()));
        } else if (item == "parry") {
            out.push_back(parry_measure(x));
        } else if (item.rfind("orbit:", 0) == 0) {
            std::vector<Symbol> w;
            for (char c : item.substr(6)) {
                if (c < '0' || c > '9') throw UsageError("orbit word must be digits: " + item);
                w.push_back(c - '0');
            }
            out.push_back(MeasureSpec::orbit_uniform(w));
        } else {
            throw UsageError("unknown measure: " + item + " (expected bernoulli:p,q,.. | uniform | parry | orbit:word)");
        }
    }
    return out;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("missing ") + flag);
}

struct Outcome {
    Json config;
    Json body;
    bool verdict_ok = true;
    std::vector<std::vector<std::string>> csv;
};

Outcome run_density(const Options& o) {
    require(o.set, "--set");
    auto e = parse_set(o.set);
    DensityParams p;
    if (o.nmax) p.n_max = o.nmax;
    if (o.radius) p.radius = o.radius;
    Outcome r;
    r.config = {{"set", to_text(e)}, {"nMax", p.n_max}, {"radius", p.radius}, {"asymptotic", o.asymptotic}};
    r.body = {{"set", to_text(e)}, {"upper", to_json(banach_upper_density(e, p))},
              {"lower", to_json(banach_lower_density(e, p))}};
    r.csv.push_back({"n", "ratio"});
    if (!o.asymptotic.empty()) {
        std::vector<std::int64_t> ns;
        for (const auto& s : split(o.asymptotic, ',')) ns.push_back(to_int(s));
        auto a = asymptotic_density(e, CenteredBoxes{e.dim(), 1}, ns);
        r.body["asymptotic"] = to_json(a);
        for (const auto& row : a.ratios) r.csv.push_back({std::to_string(row.n), to_string(row.ratio)});
    }
    return r;
}

Outcome run_meandist(const Options& o) {
    require(o.x, "--x");
    require(o.y, "--y");
    auto x = parse_point(o.x), y = parse_point(o.y);
    MeanParams p;
    if (o.nmax) p.n_max = o.nmax;
    if (o.radius) p.radius = o.radius;
    p.k = o.k_trunc;
    Outcome r;
    r.config = {{"system", o.system}, {"x", o.x}, {"y", o.y}, {"nMax", p.n_max}, {"radius", p.radius}, {"K", p.k}};
    if (!o.system.empty()) parse_system(o.system);
    r.body = {{"banach", to_json(banach_mean_distance(x, y, p))}, {"weyl", to_json(weyl_distance(x, y, p))}};
    return r;
}

Outcome run_classify(const Options& o) {
    require(o.system, "--system");
    auto x = parse_system(o.system);
    auto p = default_classify_params(x);
    if (!o.eps_grid.empty()) {
        p.eps_grid.clear();
        for (const auto& s : split(o.eps_grid, ',')) p.eps_grid.push_back(parse_rational(s));
    }
    if (!o.deltas.empty()) {
        p.delta_exponents.clear();
        for (const auto& s : split(o.deltas, ',')) p.delta_exponents.push_back(static_cast<int>(to_int(s)));
    }
    Json eps = Json::array();
    for (const auto& e : p.eps_grid) eps.push_back(rat(e));
    Outcome r;
    r.config = {{"system", o.system}, {"epsGrid", eps}, {"deltaExponents", p.delta_exponents}};
    r.body = to_json(classify_system(x, p));
    return r;
}

Outcome run_independence(const Options& o) {
    require(o.system, "--system");
    auto x = parse_system(o.system);
    auto schedule = interval_schedule(o.fmax);
    Outcome r;
    r.config = {{"system", o.system}, {"cylinders", o.cylinders}, {"fmax", o.fmax}, {"iePair", o.ie},
                {"resolution", o.resolution}};
    if (o.ie) {
        r.body = to_json(find_ie_pair(x, ie_candidates(x), o.resolution, schedule));
        return r;
    }
    require(o.cylinders, "--cylinders");
    auto a = parse_cylinders(o.cylinders);
    auto best = phi(x, a, schedule.back());
    auto dens = independence_density(x, a, schedule);
    r.body = {{"J", to_json(best.best_j)},
              {"phi", best.phi},
              {"window", to_json(best.f)},
              {"densityLower", rat(dens.lower)},
              {"densityUpper", rat(dens.upper)},
              {"mode", dens.lower == dens.upper ? "exact" : "bounded"},
              {"certificate", dens.certificate},
              {"schedule", to_json(dens)["windows"]}};
    return r;
}

Outcome run_entropy(const Options& o) {
    require(o.system, "--system");
    auto x = parse_system(o.system);
    const std::int64_t n = o.nmax ? o.nmax : 20;
    Outcome r;
    r.config = {{"system", o.system}, {"nMax", n}, {"measure", o.measure}, {"variational", o.variational}};
    auto h = topological_entropy(x, n);
    r.body = {{"system", x.name()}, {"topological", to_json(h)}};
    r.csv.push_back({"system", "n", "value"});
    for (const auto& row : h.rows) r.csv.push_back({x.name(), std::to_string(row.n), decimal(row.value, kLogDigits)});
    if (!o.measure.empty()) {
        auto ms = parse_measures(x, o.measure);
        Json m = Json::array();
        for (const auto& mu : ms) {
            auto e = measure_entropy(x, mu, n);
            m.push_back(Json{{"measure", mu.name()}, {"entropy", to_json(e)}});
        }
        r.body["measures"] = m;
        if (o.variational) {
            auto v = check_variational(x, ms, n);
            r.body["variational"] = to_json(v);
            r.verdict_ok = v.pass;
        }
    }
    return r;
}

Outcome run_correspond(const Options& o) {
    require(o.set, "--set");
    auto e = parse_set(o.set);
    auto schedule = parse_schedule(o.windows);
    Outcome r;
    r.config = {{"set", to_text(e)}, {"windows", o.windows}, {"k", o.k}, {"eps", o.eps}, {"tuple", o.tuple}};
    Json rows = Json::array();
    r.csv.push_back({"len", "shift", "mass", "densityLower", "densityUpper", "contained"});
    for (const auto& row : correspondence_rows(e, schedule)) {
        rows.push_back({{"windowSide", row.len},
                        {"shift", to_json(row.shift)},
                        {"mass", rat(row.mass)},
                        {"density", to_json(row.density)},
                        {"contained", row.contained}});
        r.csv.push_back({std::to_string(row.len), row.shift.str(), to_string(row.mass), to_string(row.density.lower),
                         to_string(row.density.upper), row.contained ? "true" : "false"});
        r.verdict_ok = r.verdict_ok && row.contained;
    }
    r.body = {{"set", to_text(e)}, {"rows", rows}};
    if (o.k >= 2) {
        auto tuple = parse_tuple(o.tuple);
        r.body["intersection"] = to_json(multi_intersection_search(e, tuple, o.k, parse_rational(o.eps)));
        if (o.k == 2) r.body["pairSearch"] = to_json(pair_density_lemma(e, tuple));
    }
    return r;
}

Outcome run_lemma61(const Options& o) {
    const Rational a = parse_rational(o.a), eps = parse_rational(o.eps);
    const std::size_t k = o.k ? o.k : 2;
    std::mt19937_64 rng(o.seed);
    Outcome r;
    r.config = {{"instances", o.instances}, {"points", o.points}, {"sets", o.sets}, {"a", rat(a)},
                {"k", k}, {"eps", rat(eps)}};
    Json items = Json::array();
    std::size_t found = 0;
    r.csv.push_back({"instance", "found", "indices", "mass", "target"});
    for (std::size_t i = 0; i < o.instances; ++i) {
        auto w = finite_intersection_checker(random_finite_space(rng, o.points, o.sets, a), k, eps, a);
        found += w.found;
        items.push_back(to_json(w));
        std::string idx;
        for (auto t : w.indices) idx += (idx.empty() ? "" : " ") + std::to_string(t);
        r.csv.push_back({std::to_string(i), w.found ? "true" : "false", idx, to_string(w.mass), to_string(w.target)});
    }
    r.body = {{"instances", o.instances}, {"found", found}, {"witnesses", items}};
    return r;
}

Outcome run_verify(const Options& o) {
    auto rep = verify(o.suite, o.seed, o.threads);
    Outcome r;
    r.config = {{"suite", o.suite}};
    r.body = to_json(rep);
    r.verdict_ok = rep.pass();
    r.csv.push_back({"id", "suite", "pass", "name"});
    for (const auto& row : rep.rows)
        r.csv.push_back({std::to_string(row.id), row.suite, row.pass ? "pass" : "fail", row.name});
    return r;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// Flattens a body to (json pointer, value) rows when a command has no table of its own.
void flatten(const Json& j, const std::string& path, std::vector<std::vector<std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path + "/" + it.key(), rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "/" + std::to_string(i), rows);
    } else {
        rows.push_back({path, j.is_string() ? j.get<std::string>() : j.dump()});
    }
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write " + out);
    f << text;
}

// Config file keys become leading command-line tokens; explicit flags come
// later and win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config " + path);
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object() || !cfg.contains("command") || !cfg["command"].is_string())
        throw UsageError("config must be an object with a string \"command\"");
    std::vector<std::string> tokens{cfg["command"].get<std::string>()};
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (it.key() == "command") continue;
        const auto& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) tokens.push_back("--" + it.key());
        } else if (v.is_string()) {
            tokens.push_back("--" + it.key());
            tokens.push_back(v.get<std::string>());
        } else if (v.is_number_integer()) {
            tokens.push_back("--" + it.key());
            tokens.push_back(v.dump());
        } else {
            throw UsageError("config value for \"" + it.key() + "\" must be a string, integer or boolean");
        }
    }
    return tokens;
}

void error_out(const std::string& code, const std::string& what) {
    Json j = {{"error", code}, {"message", what}};
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"meanlab: densities, mean metrics, independence and entropy of subshifts"};
    app.name("meanlab");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", o.seed, "base seed");
    app.add_option("--threads", o.threads, "worker threads for verify rows");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--config", o.config, "JSON experiment config");

    auto* density = app.add_subcommand("density", "Banach densities of a set");
    density->add_option("--set", o.set, "set DSL");
    density->add_option("--nmax", o.nmax, "largest window side");
    density->add_option("--radius", o.radius, "shift search radius");
    density->add_option("--asymptotic", o.asymptotic, "centered-box scales, comma separated");

    auto* meandist = app.add_subcommand("meandist", "Banach and Weyl mean distances");
    meandist->add_option("--system", o.system, "zoo system");
    meandist->add_option("--x", o.x, "first point");
    meandist->add_option("--y", o.y, "second point");
    meandist->add_option("--nmax", o.nmax, "largest window side");
    meandist->add_option("--radius", o.radius, "shift search radius");
    meandist->add_option("--K", o.k_trunc, "metric truncation");

    auto* classify = app.add_subcommand("classify", "sensitive or almost equicontinuous");
    classify->add_option("--system", o.system, "zoo system");
    classify->add_option("--eps", o.eps_grid, "eps grid, comma separated rationals");
    classify->add_option("--deltas", o.deltas, "delta exponents j for 2^-j, comma separated");

    auto* indep = app.add_subcommand("independence", "independence sets and density");
    indep->add_option("--system", o.system, "zoo system");
    indep->add_option("--cylinders", o.cylinders, "cylinder tuple, e.g. [0=0][0=1]");
    indep->add_option("--fmax", o.fmax, "largest interval window");
    indep->add_flag("--ie-pair", o.ie, "search sample point pairs for an IE witness");
    indep->add_option("--resolution", o.resolution, "cylinder depth for IE candidates");

    auto* entropy = app.add_subcommand("entropy", "topological and measure entropy");
    entropy->add_option("--system", o.system, "zoo system");
    entropy->add_option("--nmax", o.nmax, "largest window side");
    entropy->add_option("--measure", o.measure, "bernoulli:p,q | uniform | parry | orbit:word; ';' separated");
    entropy->add_flag("--variational", o.variational, "check h_mu <= h_top");

    auto* correspond = app.add_subcommand("correspond", "empirical measures of a set");
    correspond->add_option("--set", o.set, "set DSL");
    correspond->add_option("--windows", o.windows, "schedule nmax[:radius],...");
    correspond->add_option("--k", o.k, "shifted intersection size (0 skips)");
    correspond->add_option("--eps", o.eps, "intersection slack");
    correspond->add_option("--tuple", o.tuple, "shift tuple a..b or list");

    auto* finite = app.add_subcommand("lemma61", "finite intersection witnesses on seeded spaces");
    finite->add_option("--instances", o.instances, "instance count");
    finite->add_option("--points", o.points, "points per space");
    finite->add_option("--sets", o.sets, "sets per space");
    finite->add_option("--a", o.a, "mass lower bound");
    finite->add_option("--k", o.k, "intersection size");
    finite->add_option("--eps", o.eps, "slack");

    auto* ver = app.add_subcommand("verify", "acceptance table");
    ver->add_option("--suite", o.suite, "density | meanmetric | independence | entropy | correspondence | all");

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        for (std::size_t i = 0; i + 1 < args.size(); ++i)
            if (args[i] == "--config") {
                o.config = args[i + 1];
                auto pre = config_tokens(o.config);
                args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                std::vector<std::string> merged(pre.begin(), pre.end());
                std::size_t cmd = 0;
                while (cmd < args.size() && args[cmd] != pre.front()) ++cmd;
                if (cmd < args.size()) args.erase(args.begin() + static_cast<std::ptrdiff_t>(cmd));
                // global flags precede the command
                std::vector<std::string> globals, rest;
                for (std::size_t j = 0; j < args.size(); ++j) {
                    bool global = args[j] == "--seed" || args[j] == "--threads" || args[j] == "--format" || args[j] == "--out";
                    if (global && j + 1 < args.size()) {
                        globals.push_back(args[j]);
                        globals.push_back(args[++j]);
                    } else {
                        rest.push_back(args[j]);
                    }
                }
                args = globals;
                args.insert(args.end(), merged.begin(), merged.end());
                args.insert(args.end(), rest.begin(), rest.end());
                break;
            }
    } catch (const Error& e) {
        error_out(e.code(), e.what());
        return 1;
    }
    const std::string config_path = o.config;
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_out("usage", e.what());
        return 1;
    }

    try {
        Outcome r;
        std::string command = app.get_subcommands().front()->get_name();
        if (command == "density") r = run_density(o);
        else if (command == "meandist") r = run_meandist(o);
        else if (command == "classify") r = run_classify(o);
        else if (command == "independence") r = run_independence(o);
        else if (command == "entropy") r = run_entropy(o);
        else if (command == "correspond") r = run_correspond(o);
        else if (command == "lemma61") r = run_lemma61(o);
        else r = run_verify(o);

        Json config = {{"command", command}, {"format", o.format}, {"threads", o.threads}};
        config.update(r.config);
        if (!config_path.empty()) config["configFile"] = config_path;
        Json report = make_report(config, {{"seed", o.seed}}, r.body);
        if (o.format == "json") {
            emit(report.dump(2) + "\n", o.out);
        } else {
            if (r.csv.size() <= 1) {
                r.csv = {{"path", "value"}};
                flatten(r.body, "", r.csv);
            }
            std::string text;
            for (const auto& row : r.csv) {
                for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + csv_field(row[i]);
                text += "\n";
            }
            emit(text, o.out);
        }
        return r.verdict_ok ? 0 : 2;
    } catch (const ParseError& e) {
        Json j = {{"error", e.code()}, {"message", e.what()}, {"position", e.position()}, {"expected", e.expected()}};
        std::cerr << j.dump() << "\n";
        return 1;
    } catch (const Error& e) {
        error_out(e.code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        error_out("internal", e.what());
        return 1;
    }
}
