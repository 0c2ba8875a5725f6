#include "commands.hpp"

#include "problem.hpp"
#include "tree_oracle.hpp"

#include "hpt/linalg.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hpt::cli {

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void append(json& checks, const Verdict& v, const std::string& prefix)
{
    for (const auto& c : v.checks) {
        json e = {{"name", prefix + c.name}, {"ok", c.ok}};
        if (c.witness)
            e["witness"] = *c.witness;
        checks.push_back(e);
    }
}

void append(json& checks, const IdentityCheck& c, const std::string& name)
{
    Verdict v;
    v.checks.push_back(c);
    v.checks.back().name = name;
    append(checks, v, "");
}

IdentityCheck equal(const GradedMap& a, const GradedMap& b)
{
    IdentityCheck c;
    if (auto j = first_difference(a, b)) {
        c.ok = false;
        c.witness = a.source()->label(*j);
    }
    return c;
}

bool all_ok(const json& checks)
{
    for (const auto& c : checks)
        if (!c["ok"].get<bool>())
            return false;
    return true;
}

json homology_json(const GradedMap& d)
{
    json out = json::array();
    for (const auto& [deg, rank] : homology_ranks(d))
        if (rank != 0)
            out.push_back({deg, rank});
    return out;
}

json homology_json(const std::map<int, int>& ranks)
{
    json out = json::array();
    for (const auto& [deg, rank] : ranks)
        out.push_back({deg, rank});
    return out;
}

bool connected(const ModulePtr& m)
{
    bool pos = true, neg = true;
    for (const auto& b : m->basis()) {
        pos = pos && b.degree > 0;
        neg = neg && b.degree < 0;
    }
    return pos || neg;
}

// Corestrictions of D, words and targets named by labels of M.
json d_table(const ShStructure& d, const ModulePtr& m)
{
    json out = json::array();
    const SymCoalgebra& c = d.carrier();
    const GradedMap& lambda = d.lambda();
    for (int w = 0; w < c.size(); ++w) {
        json word = json::array();
        for (int l : c.word(w))
            word.push_back(m->label(l));
        for (const auto& [i, q] : lambda.column(w))
            out.push_back({{"word", word}, {"to", m->label(i)}, {"coef", format_rational(q)}});
    }
    return out;
}

GradedMap parse_d_table(const json& table, const SymCoalgebra& c, const ModulePtr& m)
{
    if (!table.is_array())
        throw InputError("report.D: expected an array");
    GradedMap lambda(c.module(), c.generators(), -1);
    for (std::size_t k = 0; k < table.size(); ++k) {
        const json& e = table[k];
        const std::string path = "report.D[" + std::to_string(k) + "]";
        if (!e.is_object() || !e.contains("word") || !e.contains("to") || !e.contains("coef") ||
            !e["word"].is_array() || !e["to"].is_string() || !e["coef"].is_string())
            throw InputError(path + ": expected {\"word\", \"to\", \"coef\"}");
        std::vector<int> letters;
        for (const auto& l : e["word"]) {
            if (!l.is_string())
                throw InputError(path + ".word: labels are strings");
            letters.push_back(m->index_of(l.get<std::string>()));
        }
        auto [sign, w] = c.normalize(letters);
        if (sign == 0)
            throw InputError(path + ": word vanishes");
        lambda.add_entry(m->index_of(e["to"].get<std::string>()), w,
                         sign * parse_rational(e["coef"].get<std::string>()));
    }
    return lambda;
}

json base_report(const std::string& command, const Problem& p)
{
    return {{"command", command}, {"problem", to_json(p)}, {"checks", json::array()}};
}

json cmd_validate(const Problem& p)
{
    json r = base_report("validate", p);
    json& checks = r["checks"];
    std::optional<Built> b;
    try {
        b.emplace(build(p, p.max_weight, p.structure_kind == "sh"));
    } catch (const SquareZeroFailure& e) {
        checks.push_back({{"name", "d^2 = 0 on " + e.module}, {"ok", false}, {"witness", e.witness}});
        return r;
    }
    for (const auto& [name, m] : b->modules)
        checks.push_back({{"name", "d^2 = 0 on " + name}, {"ok", true}});
    append(checks, b->contraction.verify(), "contraction: ");
    if (b->lie)
        append(checks, b->lie->verify(), "lie: ");
    else
        append(checks, b->sh->verify(), "sh: ");
    return r;
}

void transfer_tables(json& r, const LieTransferResult& lie, const ModulePtr& m)
{
    r["D"] = d_table(lie.D, m);
    r["tau"] = map_entries(lie.tau);
}

json cmd_transfer_strict(const Problem& p, bool full)
{
    if (p.structure_kind != "lie")
        throw InputError("--strict needs a 'lie' structure");
    const int n = p.max_weight;
    Built b = build(p, n, false);
    json r = base_report("transfer", p);
    r["mode"] = "strict";
    LieTransferResult lie = lie_transfer(b.contraction, *b.lie, n);
    const ModulePtr& m = b.contraction.small().module();
    transfer_tables(r, lie, m);
    json& checks = r["checks"];
    append(checks, verify_lie_transfer(lie, b.contraction, *b.lie), "");
    json notes = json::array();
    if (full) {
        lie_transfer_contraction(lie, b.contraction, *b.lie);
        append(checks, lie.contraction->verify(), "transfer contraction: ");
        r["homology"] = {{"source", homology_json(lie.D.total())},
                         {"target", homology_json(lie.cce.structure.total())}};
        if (connected(m) && connected(b.g)) {
            ThetaResult t = theta_recursion(lie, b.contraction, *b.lie);
            DGLie loop = t.loop->lie();
            append(checks, check_master_equation(*lie.cce.coalgebra, lie.cce.structure.total(), t.theta, loop),
                   "theta: master equation");
            append(checks, equal(compose(t.theta, lie.tau_bar), t.loop->twisting_cochain()), "theta tau_bar = t_L");
        } else {
            notes.push_back("theta recursion skipped: M or g is not connected");
        }
    }
    r["notes"] = notes;
    return r;
}

json cmd_transfer_sh(const Problem& p, bool full)
{
    const int n = p.max_weight;
    Built b = build(p, n, true);
    json r = base_report("transfer", p);
    r["mode"] = "sh";
    ShTransferResult sh = sh_transfer(b.contraction, *b.sh, n, full);
    const ModulePtr& m = b.contraction.small().module();
    transfer_tables(r, sh.lie, m);
    json& checks = r["checks"];
    append(checks, sh.loop_contraction.verify(), "g <-> L: ");
    append(checks, sh.perturbed_loop.verify(), "g <-> L perturbed: ");
    append(checks, sh.composite.verify(), "M <-> L perturbed: ");
    append(checks, verify_lie_transfer(sh.lie, sh.composite, sh.loop_lie), "");
    if (full) {
        EquivalenceReport eq = verify_sh_equivalence(sh, *b.sh);
        append(checks, eq.verdict, "equivalence: ");
        r["homology"] = {{"source", homology_json(eq.source_homology)},
                         {"target", homology_json(eq.target_homology)},
                         {"base", homology_json(eq.base_homology)}};
    }
    r["notes"] = json::array({"the homotopy of g <-> L is produced by a degreewise solver"});
    return r;
}

json cmd_verify(const json& report)
{
    if (!report.is_object() || !report.contains("problem") || !report.contains("mode") || !report.contains("D") ||
        !report.contains("tau"))
        throw InputError("report: expected a transfer report with problem, mode, D and tau");
    Problem p = problem_from_json(report["problem"]);
    const std::string mode = report["mode"].is_string() ? report["mode"].get<std::string>() : "";
    if (mode != "strict" && mode != "sh")
        throw InputError("report.mode: expected \"strict\" or \"sh\"");
    const int n = p.max_weight;
    json r = base_report("verify", p);
    r["mode"] = mode;
    json& checks = r["checks"];

    auto rerun = [&](LieTransferResult& lie, const Contraction& c, const DGLie& g) {
        const ModulePtr& m = c.small().module();
        lie.D = ShStructure(lie.source, lie.D.generators(), parse_d_table(report["D"], *lie.source, m));
        lie.tau = parse_map(report["tau"], lie.source->module(), g.module(), -1, "report.tau");
        lie.tau_bar = coalgebra_morphism(
            *lie.source, *lie.cce.coalgebra,
            compose(suspension_map(g.module(), lie.cce.coalgebra->generators()), lie.tau));
        append(checks, verify_lie_transfer(lie, c, g), "");
    };

    if (mode == "strict") {
        if (p.structure_kind != "lie")
            throw InputError("report: strict transfer of a non-Lie structure");
        Built b = build(p, n, false);
        LieTransferResult lie = lie_transfer(b.contraction, *b.lie, n);
        rerun(lie, b.contraction, *b.lie);
    } else {
        Built b = build(p, n, true);
        ShTransferResult sh = sh_transfer(b.contraction, *b.sh, n, false);
        append(checks, sh.composite.verify(), "M <-> L perturbed: ");
        rerun(sh.lie, sh.composite, sh.loop_lie);
    }
    return r;
}

json cmd_oracle(const Problem& p, int arity)
{
    if (p.structure_kind != "lie")
        throw InputError("oracle: needs a 'lie' structure");
    if (arity < 2)
        throw ArgumentError("oracle: arity must be at least 2");
    Built b = build(p, arity, false);
    LieTransferResult lie = lie_transfer(b.contraction, *b.lie, arity);
    const ModulePtr& m = b.contraction.small().module();
    oracle::TreeData data{b.g, m, b.lie->bracket(), b.contraction.nabla(), b.contraction.pi(),
                          b.contraction.h()};
    GradedMap lambda = lie.D.lambda_k(arity);
    const SymCoalgebra& src = *lie.source;

    auto vec_json = [&](const Vec& v) {
        json o = json::object();
        for (const auto& [i, q] : v)
            o[m->label(i)] = format_rational(q);
        return o;
    };

    json r = base_report("oracle", p);
    r["arity"] = arity;
    json diffs = json::array();
    int words = 0;
    for (int w = 0; w < src.size(); ++w) {
        if (src.length(w) != arity)
            continue;
        ++words;
        Vec expected = oracle::transferred_bracket(data, src.word(w));
        if (expected == lambda.column(w))
            continue;
        json word = json::array();
        for (int l : src.word(w))
            word.push_back(m->label(l));
        diffs.push_back({{"word", word}, {"oracle", vec_json(expected)}, {"transferred", vec_json(lambda.column(w))}});
    }
    r["words"] = words;
    r["diffs"] = diffs;
    IdentityCheck c;
    if (!diffs.empty()) {
        c.ok = false;
        c.witness = diffs[0]["word"].dump();
    }
    append(r["checks"], c, "transferred corestriction = tree sum, arity " + std::to_string(arity));
    return r;
}

std::pair<int, int> parse_window(const std::string& s)
{
    const auto colon = s.find(':');
    try {
        if (colon == std::string::npos)
            throw std::invalid_argument(s);
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo_text = s.substr(0, colon), hi_text = s.substr(colon + 1);
        int lo = std::stoi(lo_text, &used_lo), hi = std::stoi(hi_text, &used_hi);
        if (used_lo != lo_text.size() || used_hi != hi_text.size() || lo > hi)
            throw std::invalid_argument(s);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw InputError("--degree-window: expected lo:hi with lo <= hi, got '" + s + "'");
    }
}

int threads_from_env()
{
    const char* v = std::getenv("HPT_THREADS");
    if (!v)
        return 1;
    try {
        int n = std::stoi(v);
        if (n < 1)
            throw std::invalid_argument(v);
        return n;
    } catch (const std::logic_error&) {
        throw InputError(std::string("HPT_THREADS: expected a positive integer, got '") + v + "'");
    }
}

void summarize(const json& r, std::ostream& err)
{
    for (const auto& c : r["checks"]) {
        if (c["ok"].get<bool>())
            continue;
        err << "FAIL " << c["name"].get<std::string>();
        if (c.contains("witness"))
            err << " at " << c["witness"].get<std::string>();
        err << "\n";
        return;
    }
    err << r["command"].get<std::string>() << ": ok (" << r["checks"].size() << " checks)\n";
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Homotopy transfer of sh-Lie structures over the rationals", "hpt"};
    app.require_subcommand(1);

    std::string file, out_path, window, level = "fast";
    bool strict = false, sh = false;
    std::optional<int> max_weight;
    int arity = 3;

    auto* validate = app.add_subcommand("validate", "check d^2 = 0, the contraction and the structure");
    validate->add_option("file", file, "problem file")->required();
    validate->add_option("--out", out_path, "write the report here");

    auto* transfer = app.add_subcommand("transfer", "transfer the structure along the contraction");
    transfer->add_option("file", file, "problem file")->required();
    auto* strict_flag = transfer->add_flag("--strict", strict, "strict dg Lie input");
    auto* sh_flag = transfer->add_flag("--sh", sh, "sh-Lie input (a Lie structure is read as one)");
    strict_flag->excludes(sh_flag);
    transfer->add_option("--max-weight", max_weight, "truncation weight N");
    transfer->add_option("--degree-window", window, "lo:hi");
    transfer->add_option("--out", out_path, "write the report here");
    transfer->add_option("--check-level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

    auto* verify = app.add_subcommand("verify", "re-run the identity checks of a transfer report");
    verify->add_option("report", file, "report file")->required();
    verify->add_option("--out", out_path, "write the report here");

    auto* oracle = app.add_subcommand("oracle", "compare with the tree-sum formula");
    oracle->add_option("file", file, "problem file")->required();
    oracle->add_option("--arity", arity, "word length")->capture_default_str();
    oracle->add_option("--out", out_path, "write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, x;
        const int code = app.exit(e, o, x);
        out << o.str();
        err << x.str();
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        const int threads = threads_from_env();
        json r;
        if (validate->parsed()) {
            r = cmd_validate(parse_problem(read_file(file)));
        } else if (transfer->parsed()) {
            if (!strict && !sh)
                throw InputError("transfer: choose --strict or --sh");
            Problem p = parse_problem(read_file(file));
            if (max_weight) {
                if (*max_weight < 2)
                    throw InputError("--max-weight: must be at least 2");
                p.max_weight = *max_weight;
            }
            if (!window.empty())
                p.degree_window = parse_window(window);
            r = strict ? cmd_transfer_strict(p, level == "full") : cmd_transfer_sh(p, level == "full");
        } else if (verify->parsed()) {
            r = cmd_verify(parse_json(read_file(file)));
        } else {
            r = cmd_oracle(parse_problem(read_file(file)), arity);
        }
        const bool ok = all_ok(r["checks"]);
        r["ok"] = ok;
        const std::string text = r.dump(2) + "\n";
        if (out_path.empty()) {
            out << text;
        } else {
            std::ofstream f(out_path);
            if (!f)
                throw InputError("cannot write '" + out_path + "'");
            f << text;
        }
        summarize(r, err);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        err << "time " << dt.count() << " s, threads " << threads << "\n";
        return ok ? 0 : 1;
    } catch (const SquareZeroFailure& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const ContractViolation& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const TruncationError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NoContractionError& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace hpt::cli
