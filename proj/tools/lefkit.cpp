#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lefkit/lefkit.hpp"

using namespace lefkit;

namespace {

enum ExitCode { kOk = 0, kFailed = 1, kUsage = 2, kBudget = 3 };

enum class Format { text, json, tsv };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a command prints goes through here and is flushed once at the end.
struct Output {
    std::ostringstream buf;
    Format format = Format::text;
    std::string path;

    void json(const Json& j) { buf << j.dump() << '\n'; }
    void json_pretty(const Json& j) { buf << j.dump(2) << '\n'; }

    int flush(int code) {
        if (path.empty() || path == "-") {
            std::cout << buf.str();
            std::cout.flush();
            return code;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << path << '\n';
            return kUsage;
        }
        f << buf.str();
        return code;
    }
};

unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LEFKIT_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) throw UsageError("LEFKIT_THREADS must be a positive integer");
        return std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string join(const std::vector<std::uint64_t>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

Json u64_array(const std::vector<std::uint64_t>& v) {
    Json a = Json::array();
    for (auto x : v) a.push_back(x);
    return a;
}

// ---- ext

struct ExtArgs {
    int n = 0;
    std::string from, to;
};

int run_ext(const ExtArgs& a, Output& out) {
    auto from = parse_multidegree(a.from);
    auto to = parse_multidegree(a.to);
    auto g = ext_graded(a.n, from, to);
    if (out.format == Format::json) {
        Json j;
        j["schema"] = kSchema;
        j["n"] = a.n;
        j["from"] = to_string(from);
        j["to"] = to_string(to);
        j["dims"] = dims_to_json(g);
        j["vanishes"] = g.is_zero();
        out.json(j);
        return kOk;
    }
    for (std::size_t d = 0; d < g.dims.size(); ++d)
        if (g.dims[d] != 0) out.buf << "degree " << d << ": " << to_string(g.dims[d]) << '\n';
    out.buf << "vanishes: " << (g.is_zero() ? "true" : "false") << '\n';
    return kOk;
}

// ---- verify

struct VerifyArgs {
    std::string builtin, collection_path;
    std::size_t k = 0;
    int n = 0;
    int margin = -1;
    std::vector<std::string> residual;
    bool dump = false;
};

LoadedCollection load_collection(const VerifyArgs& a) {
    LoadedCollection lc;
    if (!a.builtin.empty()) {
        const auto names = builtin_names();
        if (std::find(names.begin(), names.end(), a.builtin) == names.end())
            throw UsageError("unknown built-in " + a.builtin);
        std::size_t k = a.k ? a.k : 3;
        int n = a.n ? a.n : (a.builtin == "xk1" ? 1 : (a.builtin == "x3n-rectangular" ? 3 : 2));
        if (a.builtin == "x32-minimal" && ((a.k && a.k != 3) || (a.n && a.n != 2)))
            throw UsageError("x32-minimal is defined for k = 3, n = 2 only");
        if (a.builtin == "xk1" && a.n && a.n != 1) throw UsageError("xk1 is defined for n = 1 only");
        if (a.builtin == "x3n-rectangular" && a.k && a.k != 3)
            throw UsageError("x3n-rectangular is defined for k = 3 only");
        lc.collection = builtin_collection(a.builtin, k, n);
        return lc;
    }
    lc = collection_from_string(read_file(a.collection_path));
    if (a.k && a.k != lc.collection.k) throw UsageError("collection has k = " + std::to_string(lc.collection.k));
    if (a.n && a.n != lc.collection.n) throw UsageError("collection has n = " + std::to_string(lc.collection.n));
    return lc;
}

int run_verify(const VerifyArgs& a, Output& out) {
    auto lc = load_collection(a);
    const auto& c = lc.collection;
    if (a.dump) {
        out.json_pretty(collection_to_json(c));
        return kOk;
    }
    const int margin = a.margin >= 0 ? a.margin : default_margin(c.n);

    std::vector<Violation> violations = lc.issues;
    auto exc = check_exceptional(c, 32);
    violations.insert(violations.end(), exc.begin(), exc.end());
    auto nest = check_lefschetz(c);
    if (nest) violations.push_back(*nest);
    auto verdict = verify_fullness(c, margin);

    std::optional<ResidualReport> residual;
    if (!a.residual.empty()) {
        std::vector<Multidegree> reps;
        for (const auto& s : a.residual) {
            auto p = parse_multidegree(s);
            if (p.arity() != c.k) throw UsageError("residual rep " + s + " has the wrong arity");
            reps.push_back(p);
        }
        residual = residual_check(rectangular_part(c), OrbitSet::from_points(c.k, reps), margin);
    }

    const bool ok = violations.empty() && verdict.full() && (!residual || residual->ok());

    if (out.format == Format::json) {
        Json j;
        j["schema"] = kSchema;
        j["collection"] = collection_to_json(c);
        j["ranks"] = u64_array(ranks(c));
        j["rectangular"] = is_rectangular(c);
        Json vs = Json::array();
        for (const auto& v : violations) vs.push_back(violation_to_json(v));
        j["violations"] = std::move(vs);
        j["fullness"] = verdict_to_json(verdict);
        if (residual) {
            Json r;
            r["ok"] = residual->ok();
            r["battery_pairs"] = Json(residual->battery_pairs);
            Json rv = Json::array();
            for (const auto& v : residual->violations) rv.push_back(violation_to_json(v));
            r["violations"] = std::move(rv);
            r["fullness"] = verdict_to_json(residual->verdict);
            j["residual"] = std::move(r);
        }
        j["ok"] = ok;
        out.json(j);
    } else {
        out.buf << "k " << c.k << " n " << c.n << '\n';
        out.buf << "ranks " << join(ranks(c)) << " total " << c.bundle_count() << '\n';
        out.buf << "rectangular " << (is_rectangular(c) ? "yes" : "no") << '\n';
        out.buf << "exceptional " << (exc.empty() ? "ok" : "FAILED") << '\n';
        out.buf << "lefschetz " << (nest ? "FAILED" : "ok") << '\n';
        for (const auto& v : violations) out.buf << "violation " << to_string(v.kind) << ": " << v.message << '\n';
        out.buf << "fullness " << to_string(verdict.status) << " (margin " << margin << ")\n";
        for (const auto& p : verdict.missing_sample) out.buf << "missing " << to_string(p) << '\n';
        if (residual) {
            out.buf << "residual " << (residual->ok() ? "ok" : "FAILED") << " batteries " << join([&] {
                std::vector<std::uint64_t> v(residual->battery_pairs.begin(), residual->battery_pairs.end());
                return v;
            }()) << '\n';
            for (const auto& v : residual->violations)
                out.buf << "residual violation " << to_string(v.kind) << ": " << v.message << '\n';
        }
        out.buf << (ok ? "verified" : "not verified") << '\n';
    }
    return ok ? kOk : kFailed;
}

// ---- dims / bounds

struct HkArgs {
    int h = 0, k = 0;
};

int run_dims(const HkArgs& a, Output& out) {
    auto t = schur_weyl_table(a.h, a.k);
    if (out.format == Format::json) {
        Json j;
        j["schema"] = kSchema;
        j["h"] = a.h;
        j["k"] = a.k;
        Json rows = Json::array();
        for (const auto& r : t.rows) {
            Json row;
            row["lambda"] = r.lambda.to_string();
            row["dim_schur"] = r.dim_schur;
            row["dim_irrep_transpose"] = r.dim_irrep_transpose;
            row["divisible"] = r.divisible;
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        j["mass"] = count_to_json(t.mass());
        out.json(j);
        return kOk;
    }
    const char sep = out.format == Format::tsv ? '\t' : ' ';
    out.buf << "lambda" << sep << "dim_schur" << sep << "dim_irrep_transpose" << sep << "divisible\n";
    for (const auto& r : t.rows)
        out.buf << r.lambda.to_string() << sep << r.dim_schur << sep << r.dim_irrep_transpose << sep
                << (r.divisible ? "true" : "false") << '\n';
    return kOk;
}

int run_bounds(const HkArgs& a, Output& out) {
    auto lb = lef_bounds(a.h, a.k);
    auto div = divisibility_criterion(a.h, a.k);
    bool binom = binomial_predicate(a.h, a.k);
    std::optional<InvariantBound> inv;
    if (a.k <= 6) inv = invariant_bound(a.h, a.k);
    if (out.format == Format::json) {
        Json j;
        j["schema"] = kSchema;
        j["h"] = a.h;
        j["k"] = a.k;
        j["r0_min"] = lb.r0_min;
        j["rd_max"] = lb.rd_max;
        j["invariant_r0_min"] = inv ? Json(inv->r0_min) : Json(nullptr);
        j["divisible"] = div.pass;
        j["divisibility_witness"] = div.witness ? Json(div.witness->to_string()) : Json(nullptr);
        j["binomial_predicate"] = binom;
        out.json(j);
        return kOk;
    }
    const char* sep = out.format == Format::tsv ? "\t" : " ";
    out.buf << "r0_min" << sep << lb.r0_min << '\n';
    out.buf << "rd_max" << sep << lb.rd_max << '\n';
    if (inv)
        out.buf << "invariant r0_min" << sep << inv->r0_min << '\n';
    else
        out.buf << "invariant r0_min" << sep << "n/a (k > 6)\n";
    out.buf << "divisible" << sep << (div.pass ? "true" : "false");
    if (div.witness) out.buf << sep << "witness " << div.witness->to_string();
    out.buf << '\n';
    out.buf << "binomial_predicate" << sep << (binom ? "true" : "false") << '\n';
    return kOk;
}

// ---- closure

struct ClosureArgs {
    std::string seed_file;
    int n = 0;
    int margin = -1;
    std::string trace_out;
};

int run_closure(const ClosureArgs& a, Output& out) {
    Json doc;
    try {
        doc = Json::parse(read_file(a.seed_file));
    } catch (const Json::parse_error& e) {
        throw UsageError(std::string("seed file: ") + e.what());
    }
    std::size_t k = 0;
    int n = a.n;
    std::vector<Multidegree> seed;
    if (doc.contains("blocks")) {
        auto lc = collection_from_json(doc);
        if (n && n != lc.collection.n) throw UsageError("seed collection has n = " + std::to_string(lc.collection.n));
        n = lc.collection.n;
        k = lc.collection.k;
        seed = lc.collection.flattened();
    } else {
        if (!doc.contains("points") || !doc["points"].is_array())
            throw UsageError("seed file needs \"blocks\" or \"points\"");
        for (const auto& s : doc["points"]) {
            if (!s.is_string()) throw UsageError("points must be multidegree strings");
            seed.push_back(parse_multidegree(s.get<std::string>()));
        }
        if (seed.empty()) throw UsageError("empty seed");
        k = seed.front().arity();
        for (const auto& p : seed)
            if (p.arity() != k) throw UsageError("seed points have mixed arity");
    }
    if (n < 1) throw UsageError("--n is required for a point seed");
    const int margin = a.margin >= 0 ? a.margin : default_margin(n);
    const Box box = closure_box(k, n, margin, seed);
    const auto state = close(seed, n, box);
    const auto missing = state.missing_in(Box(0, n, k), 16);
    const auto status = missing.empty() ? FullnessStatus::full : FullnessStatus::inconclusive;

    if (!a.trace_out.empty()) {
        std::ofstream f(a.trace_out, std::ios::binary);
        if (!f) throw UsageError("cannot write " + a.trace_out);
        write_trace_jsonl(f, state.trace());
    }
    if (out.format == Format::json) {
        Json j;
        j["schema"] = kSchema;
        j["status"] = to_string(status);
        j["k"] = k;
        j["n"] = n;
        j["margin"] = margin;
        j["box"] = box_to_json(box);
        j["seed_size"] = seed.size();
        j["members"] = state.member_count();
        j["trace_length"] = state.trace().size();
        j["missing_sample"] = points_to_json(missing);
        out.json(j);
        if (a.trace_out.empty()) write_trace_jsonl(out.buf, state.trace());
    } else {
        out.buf << "status " << to_string(status) << '\n';
        out.buf << "box [" << box.lo << "," << box.hi << "]^" << k << " members " << state.member_count() << '\n';
        out.buf << "trace length " << state.trace().size() << '\n';
        for (const auto& p : missing) out.buf << "missing " << to_string(p) << '\n';
        if (a.trace_out.empty()) {
            for (const auto& r : state.trace()) {
                out.buf << "axis " << r.axis << " window " << r.window_start << ".." << r.window_start + n << " adds";
                for (const auto& p : r.added) out.buf << ' ' << to_string(p);
                out.buf << '\n';
            }
        }
    }
    return status == FullnessStatus::full ? kOk : kFailed;
}

// ---- search

struct SearchArgs {
    std::size_t k = 0;
    int n = 0;
    std::string target = "rectangular";
    std::uint64_t budget = 1'000'000;
    int margin = -1;
    std::optional<Coord> pool_lo, pool_hi;
    bool no_prune = false;
    std::optional<std::uint64_t> max_r0;
};

int run_search(const SearchArgs& a, Output& out) {
    SearchTarget target = a.target == "minimal" ? SearchTarget::minimal : SearchTarget::rectangular_length_h;
    auto spec = default_search_spec(a.k, a.n, target);
    spec.budget = a.budget;
    if (a.margin >= 0) spec.margin = a.margin;
    if (a.pool_lo || a.pool_hi) {
        Coord lo = a.pool_lo.value_or(spec.pool_box.lo), hi = a.pool_hi.value_or(spec.pool_box.hi);
        if (lo > hi) throw UsageError("pool-lo exceeds pool-hi");
        spec.pool_box = Box(lo, hi, a.k);
    }
    spec.prune = !a.no_prune;
    spec.max_r0 = a.max_r0;
    spec.threads = thread_cap();
    auto res = search(spec);

    for (const auto& f : res.found) {
        Json j;
        j["record"] = "collection";
        j["ranks"] = u64_array(ranks(f.collection));
        j["collection"] = collection_to_json(f.collection);
        j["verdict"] = verdict_to_json(f.verdict);
        if (out.format == Format::json) {
            out.json(j);
        } else {
            out.buf << "found ranks " << join(ranks(f.collection)) << " blocks";
            for (const auto& b : f.collection.blocks) {
                out.buf << " {";
                for (std::size_t i = 0; i < b.reps().size(); ++i) out.buf << (i ? " " : "") << to_string(b.reps()[i]);
                out.buf << "}";
            }
            out.buf << '\n';
        }
    }
    Json s;
    s["record"] = "summary";
    s["schema"] = kSchema;
    s["k"] = a.k;
    s["n"] = a.n;
    s["target"] = a.target;
    s["found"] = res.found.size();
    s["inconclusive"] = res.inconclusive.size();
    s["exhausted"] = res.exhausted;
    s["nodes_visited"] = res.nodes_visited;
    s["budget"] = a.budget;
    s["pruned_by_divisibility"] = res.pruned_by_divisibility;
    s["r0_level"] = res.r0_level ? Json(*res.r0_level) : Json(nullptr);
    if (out.format == Format::json) {
        out.json(s);
    } else {
        out.buf << "found " << res.found.size() << " inconclusive " << res.inconclusive.size() << " nodes "
                << res.nodes_visited << (res.exhausted ? " exhausted" : " budget exhausted before completion");
        if (res.pruned_by_divisibility) out.buf << " (ruled out by divisibility)";
        out.buf << '\n';
    }
    return res.exhausted ? kOk : kBudget;
}

// ---- report

int run_report(Output& out) {
    struct Line {
        std::string name;
        bool ok;
        std::string detail;
    };
    std::vector<Line> lines;
    auto check_coll = [&](const std::string& name, const LefschetzCollection& c) {
        bool exc = check_exceptional(c, 1).empty();
        bool nest = !check_lefschetz(c);
        auto v = verify_fullness(c, default_margin(c.n));
        lines.push_back({name, exc && nest && v.full(), "ranks " + join(ranks(c)) + " " + to_string(v.status)});
    };
    check_coll("x32-minimal", x32_minimal());
    for (int n : {3, 4, 6, 7}) check_coll("x3n-rectangular n=" + std::to_string(n), x3n_rectangular(n));
    for (std::size_t k = 2; k <= 7; ++k) check_coll("xk1 k=" + std::to_string(k), xk1(k));
    auto rc = residual_check(rectangular_part(x32_minimal()), x32_residual(), 3);
    lines.push_back({"x32 residual (1,-1,0)", rc.ok(), to_string(rc.verdict.status)});
    auto lb = lef_bounds(3, 3);
    auto ib = invariant_bound(3, 3);
    lines.push_back({"bounds h=3 k=3", lb.r0_min == 11 && lb.rd_max == 7 && ib.r0_min == 13,
                     "r0_min " + std::to_string(lb.r0_min) + " rd_max " + std::to_string(lb.rd_max) +
                         " invariant " + std::to_string(ib.r0_min)});

    bool all = std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.ok; });
    if (out.format == Format::json) {
        Json j;
        j["schema"] = kSchema;
        Json arr = Json::array();
        for (const auto& l : lines) {
            Json e;
            e["name"] = l.name;
            e["ok"] = l.ok;
            e["detail"] = l.detail;
            arr.push_back(std::move(e));
        }
        j["checks"] = std::move(arr);
        j["ok"] = all;
        out.json(j);
    } else {
        const char* sep = out.format == Format::tsv ? "\t" : "  ";
        for (const auto& l : lines) out.buf << (l.ok ? "ok" : "FAIL") << sep << l.name << sep << l.detail << '\n';
    }
    return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lefkit: invariant Lefschetz collections on products of projective spaces"};
    app.require_subcommand(1);
    app.fallthrough();
    Output out;
    std::string format = "text";
    const std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}, {"tsv", Format::tsv}};
    app.add_option("--format", format, "text, json or tsv")->check(CLI::IsMember({"text", "json", "tsv"}));
    app.add_option("-o,--output", out.path, "write the report here instead of stdout");

    std::function<int()> action;

    ExtArgs ext;
    auto* ext_cmd = app.add_subcommand("ext", "graded Ext between two line bundles");
    ext_cmd->add_option("--n", ext.n, "dimension of each factor")->required()->check(CLI::PositiveNumber);
    ext_cmd->add_option("--from", ext.from, "source multidegree, e.g. \"(1,0,0)\"")->required();
    ext_cmd->add_option("--to", ext.to, "target multidegree")->required();
    ext_cmd->callback([&] { action = [&] { return run_ext(ext, out); }; });

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "check exceptionality, nesting and fullness of a collection");
    auto* b_opt = ver_cmd->add_option("--builtin", ver.builtin, "x3n-rectangular, x32-minimal, xk1 or ekn");
    auto* c_opt = ver_cmd->add_option("--collection", ver.collection_path, "collection JSON file");
    b_opt->excludes(c_opt);
    ver_cmd->add_option("--k", ver.k)->check(CLI::PositiveNumber);
    ver_cmd->add_option("--n", ver.n)->check(CLI::PositiveNumber);
    ver_cmd->add_option("--margin", ver.margin, "closure box margin (default n+1)")->check(CLI::NonNegativeNumber);
    ver_cmd->add_option("--residual", ver.residual, "residual orbit reps");
    ver_cmd->add_flag("--dump", ver.dump, "print the collection JSON and exit");
    ver_cmd->callback([&] {
        if (ver.builtin.empty() && ver.collection_path.empty())
            throw CLI::ValidationError("verify", "one of --builtin or --collection is required");
        action = [&] { return run_verify(ver, out); };
    });

    HkArgs dims, bounds;
    auto* dims_cmd = app.add_subcommand("dims", "Schur-Weyl dimension table");
    dims_cmd->set_help_flag("--help");
    dims_cmd->add_option("--h", dims.h)->required()->check(CLI::Range(2, 1000));
    dims_cmd->add_option("--k", dims.k)->required()->check(CLI::Range(1, 30));
    dims_cmd->callback([&] { action = [&] { return run_dims(dims, out); }; });
    auto* bounds_cmd = app.add_subcommand("bounds", "block rank bounds and divisibility");
    bounds_cmd->set_help_flag("--help");
    bounds_cmd->add_option("--h", bounds.h)->required()->check(CLI::Range(2, 1000));
    bounds_cmd->add_option("--k", bounds.k)->required()->check(CLI::Range(1, 30));
    bounds_cmd->callback([&] { action = [&] { return run_bounds(bounds, out); }; });

    ClosureArgs clo;
    auto* clo_cmd = app.add_subcommand("closure", "saturate a seed under the window rule");
    clo_cmd->add_option("--seed-file,--seed", clo.seed_file, "collection JSON or {\"points\": [...]}")->required();
    clo_cmd->add_option("--n", clo.n)->check(CLI::PositiveNumber);
    clo_cmd->add_option("--margin", clo.margin)->check(CLI::NonNegativeNumber);
    clo_cmd->add_option("--trace-out", clo.trace_out, "write the trace as JSON lines to this file");
    clo_cmd->callback([&] { action = [&] { return run_closure(clo, out); }; });

    SearchArgs srch;
    auto* s_cmd = app.add_subcommand("search", "enumerate invariant Lefschetz collections");
    s_cmd->add_option("--k", srch.k)->required()->check(CLI::Range(1, 8));
    s_cmd->add_option("--n", srch.n)->required()->check(CLI::Range(1, 20));
    s_cmd->add_option("--target", srch.target)->check(CLI::IsMember({"rectangular", "minimal"}));
    s_cmd->add_option("--budget", srch.budget)->check(CLI::PositiveNumber);
    s_cmd->add_option("--margin", srch.margin)->check(CLI::NonNegativeNumber);
    s_cmd->add_option("--pool-lo", srch.pool_lo);
    s_cmd->add_option("--pool-hi", srch.pool_hi);
    s_cmd->add_option("--max-r0", srch.max_r0);
    s_cmd->add_flag("--no-prune", srch.no_prune, "disable rank pruning");
    s_cmd->callback([&] { action = [&] { return run_search(srch, out); }; });

    auto* r_cmd = app.add_subcommand("report", "summary of the built-in results");
    r_cmd->callback([&] { action = [&] { return run_report(out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    out.format = formats.at(format);
    try {
        return out.flush(action());
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const ArithmeticError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    } catch (const SearchBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}
