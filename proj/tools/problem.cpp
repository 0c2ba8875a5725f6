#include "problem.hpp"

#include <set>
#include <sstream>

namespace hpt::cli {

namespace {

struct Errors {
    std::vector<std::string> list;
    void add(const std::string& path, const std::string& msg) { list.push_back(path + ": " + msg); }
    void raise() const
    {
        if (list.empty())
            return;
        std::ostringstream out;
        out << "schema violations (" << list.size() << "):";
        for (const auto& e : list)
            out << "\n  " << e;
        throw InputError(out.str());
    }
};

std::optional<std::string> get_string(const json& j, const std::string& path, Errors& err)
{
    if (!j.is_string()) {
        err.add(path, "expected a string");
        return std::nullopt;
    }
    return j.get<std::string>();
}

std::optional<int> get_int(const json& j, const std::string& path, Errors& err)
{
    if (!j.is_number_integer()) {
        err.add(path, "expected an integer");
        return std::nullopt;
    }
    return j.get<int>();
}

std::optional<Rational> get_rational(const json& j, const std::string& path, Errors& err)
{
    if (!j.is_string()) {
        err.add(path, "coefficients are strings \"p/q\"");
        return std::nullopt;
    }
    try {
        return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
        err.add(path, e.what());
        return std::nullopt;
    }
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed, Errors& err)
{
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k))
            err.add(path, "unknown key '" + k + "'");
}

Entries get_entries(const json& j, const std::string& path, Errors& err)
{
    Entries out;
    if (!j.is_array()) {
        err.add(path, "expected an array of [source, target, coefficient]");
        return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 3) {
            err.add(p, "expected [source, target, coefficient]");
            continue;
        }
        auto a = get_string(j[i][0], p + "[0]", err);
        auto b = get_string(j[i][1], p + "[1]", err);
        auto c = get_rational(j[i][2], p + "[2]", err);
        if (a && b && c)
            out.emplace_back(*a, *b, *c);
    }
    return out;
}

json entries_json(const Entries& e)
{
    json out = json::array();
    for (const auto& [a, b, c] : e)
        out.push_back({a, b, format_rational(c)});
    return out;
}

ModulePtr find_module(const std::map<std::string, ModulePtr>& mods, const std::string& name)
{
    auto it = mods.find(name);
    if (it == mods.end())
        throw InputError("unknown module '" + name + "'");
    return it->second;
}

GradedMap from_entries(const Entries& e, const ModulePtr& src, const ModulePtr& tgt, int degree,
                       const std::string& where)
{
    GradedMap out(src, tgt, degree);
    Errors err;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& [a, b, c] = e[i];
        const std::string p = where + "[" + std::to_string(i) + "]";
        auto s = src->find(a);
        auto t = tgt->find(b);
        if (!s)
            err.add(p, "unknown label '" + a + "' in " + src->name());
        if (!t)
            err.add(p, "unknown label '" + b + "' in " + tgt->name());
        if (!s || !t)
            continue;
        if (tgt->degree(*t) != src->degree(*s) + degree) {
            err.add(p, "degree mismatch: " + a + " has degree " + std::to_string(src->degree(*s)) + ", " + b +
                           " has degree " + std::to_string(tgt->degree(*t)) + ", map degree " +
                           std::to_string(degree));
            continue;
        }
        out.add_entry(*t, *s, c);
    }
    err.raise();
    return out;
}

} // namespace

std::string format_rational(const Rational& q)
{
    return to_string(q);
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // the message carries line and column
        throw InputError(e.what());
    }
}

Problem problem_from_json(const json& j)
{
    Problem p;
    Errors err;
    if (!j.is_object())
        throw InputError("problem: expected a JSON object");
    check_keys(j, "problem", {"modules", "differentials", "contraction", "structure", "truncation"}, err);

    std::set<std::string> names;
    if (!j.contains("modules") || !j["modules"].is_array() || j["modules"].empty()) {
        err.add("modules", "expected a nonempty array");
    } else {
        for (std::size_t i = 0; i < j["modules"].size(); ++i) {
            const json& m = j["modules"][i];
            const std::string path = "modules[" + std::to_string(i) + "]";
            if (!m.is_object()) {
                err.add(path, "expected an object");
                continue;
            }
            check_keys(m, path, {"name", "basis"}, err);
            ModuleSpec spec;
            if (auto n = m.contains("name") ? get_string(m["name"], path + ".name", err) : std::nullopt)
                spec.name = *n;
            else if (!m.contains("name"))
                err.add(path, "missing 'name'");
            if (!spec.name.empty() && !names.insert(spec.name).second)
                err.add(path + ".name", "duplicate module '" + spec.name + "'");
            if (!m.contains("basis") || !m["basis"].is_array()) {
                err.add(path, "missing 'basis' array");
            } else {
                std::set<std::string> labels;
                for (std::size_t k = 0; k < m["basis"].size(); ++k) {
                    const json& b = m["basis"][k];
                    const std::string bp = path + ".basis[" + std::to_string(k) + "]";
                    if (!b.is_object() || !b.contains("label") || !b.contains("degree")) {
                        err.add(bp, "expected {\"label\", \"degree\"}");
                        continue;
                    }
                    check_keys(b, bp, {"label", "degree"}, err);
                    auto l = get_string(b["label"], bp + ".label", err);
                    auto d = get_int(b["degree"], bp + ".degree", err);
                    if (l && !labels.insert(*l).second)
                        err.add(bp + ".label", "duplicate label '" + *l + "'");
                    if (l && d)
                        spec.basis.push_back({*l, *d, 1});
                }
            }
            p.modules.push_back(std::move(spec));
        }
    }

    if (j.contains("differentials")) {
        if (!j["differentials"].is_object()) {
            err.add("differentials", "expected an object keyed by module name");
        } else {
            for (const auto& [name, e] : j["differentials"].items()) {
                if (!names.count(name))
                    err.add("differentials." + name, "unknown module");
                p.differentials[name] = get_entries(e, "differentials." + name, err);
            }
        }
    }

    if (j.contains("contraction")) {
        const json& c = j["contraction"];
        if (!c.is_object()) {
            err.add("contraction", "expected an object");
        } else {
            check_keys(c, "contraction", {"small", "big", "nabla", "pi", "h"}, err);
            ContractionSpec spec;
            for (const char* key : {"small", "big"}) {
                if (!c.contains(key)) {
                    err.add("contraction", std::string("missing '") + key + "'");
                    continue;
                }
                auto s = get_string(c[key], std::string("contraction.") + key, err);
                if (s && !names.count(*s))
                    err.add(std::string("contraction.") + key, "unknown module '" + *s + "'");
                (std::string(key) == "small" ? spec.small : spec.big) = s.value_or("");
            }
            spec.nabla = get_entries(c.value("nabla", json::array()), "contraction.nabla", err);
            spec.pi = get_entries(c.value("pi", json::array()), "contraction.pi", err);
            spec.h = get_entries(c.value("h", json::array()), "contraction.h", err);
            p.contraction = std::move(spec);
        }
    }

    if (!j.contains("structure") || !j["structure"].is_object()) {
        err.add("structure", "missing object with 'on' and one of 'lie', 'sh'");
    } else {
        const json& s = j["structure"];
        check_keys(s, "structure", {"on", "lie", "sh"}, err);
        if (auto on = s.contains("on") ? get_string(s["on"], "structure.on", err) : std::nullopt) {
            p.structure_on = *on;
            if (!names.count(*on))
                err.add("structure.on", "unknown module '" + *on + "'");
        } else if (!s.contains("on")) {
            err.add("structure", "missing 'on'");
        }
        if (s.contains("lie") == s.contains("sh"))
            err.add("structure", "exactly one of 'lie' and 'sh' is required");
        if (s.contains("lie")) {
            p.structure_kind = "lie";
            const json& l = s["lie"];
            if (!l.is_array())
                err.add("structure.lie", "expected an array of [x, y, z, coefficient]");
            for (std::size_t i = 0; l.is_array() && i < l.size(); ++i) {
                const std::string path = "structure.lie[" + std::to_string(i) + "]";
                if (!l[i].is_array() || l[i].size() != 4) {
                    err.add(path, "expected [x, y, z, coefficient]");
                    continue;
                }
                auto x = get_string(l[i][0], path + "[0]", err);
                auto y = get_string(l[i][1], path + "[1]", err);
                auto z = get_string(l[i][2], path + "[2]", err);
                auto c = get_rational(l[i][3], path + "[3]", err);
                if (x && y && z && c)
                    p.lie.emplace_back(*x, *y, *z, *c);
            }
        }
        if (s.contains("sh")) {
            p.structure_kind = "sh";
            const json& l = s["sh"];
            if (!l.is_array())
                err.add("structure.sh", "expected an array of {word, to, coef}");
            for (std::size_t i = 0; l.is_array() && i < l.size(); ++i) {
                const std::string path = "structure.sh[" + std::to_string(i) + "]";
                const json& e = l[i];
                if (!e.is_object() || !e.contains("word") || !e.contains("to") || !e.contains("coef") ||
                    !e["word"].is_array()) {
                    err.add(path, "expected {\"word\": [...], \"to\", \"coef\"}");
                    continue;
                }
                check_keys(e, path, {"word", "to", "coef"}, err);
                LambdaEntry entry;
                bool ok = true;
                for (std::size_t k = 0; k < e["word"].size(); ++k) {
                    auto w = get_string(e["word"][k], path + ".word[" + std::to_string(k) + "]", err);
                    ok = ok && w.has_value();
                    entry.word.push_back(w.value_or(""));
                }
                auto t = get_string(e["to"], path + ".to", err);
                auto c = get_rational(e["coef"], path + ".coef", err);
                if (ok && t && c) {
                    entry.target = *t;
                    entry.coef = *c;
                    p.sh.push_back(std::move(entry));
                }
            }
        }
    }

    if (j.contains("truncation")) {
        const json& t = j["truncation"];
        if (!t.is_object()) {
            err.add("truncation", "expected an object");
        } else {
            check_keys(t, "truncation", {"max_weight", "degree_window"}, err);
            if (t.contains("max_weight")) {
                auto n = get_int(t["max_weight"], "truncation.max_weight", err);
                if (n && *n < 2)
                    err.add("truncation.max_weight", "must be at least 2");
                p.max_weight = n.value_or(4);
            }
            if (t.contains("degree_window")) {
                const json& w = t["degree_window"];
                if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer() ||
                    w[0].get<int>() > w[1].get<int>())
                    err.add("truncation.degree_window", "expected [lo, hi] with lo <= hi");
                else
                    p.degree_window = std::pair{w[0].get<int>(), w[1].get<int>()};
            }
        }
    }
    err.raise();
    return p;
}

Problem parse_problem(const std::string& text)
{
    return problem_from_json(parse_json(text));
}

json to_json(const Problem& p)
{
    json j;
    json mods = json::array();
    for (const auto& m : p.modules) {
        json basis = json::array();
        for (const auto& b : m.basis)
            basis.push_back({{"label", b.label}, {"degree", b.degree}});
        mods.push_back({{"name", m.name}, {"basis", basis}});
    }
    j["modules"] = mods;
    if (!p.differentials.empty()) {
        json d = json::object();
        for (const auto& [name, e] : p.differentials)
            d[name] = entries_json(e);
        j["differentials"] = d;
    }
    if (p.contraction) {
        const auto& c = *p.contraction;
        j["contraction"] = {{"small", c.small},
                            {"big", c.big},
                            {"nabla", entries_json(c.nabla)},
                            {"pi", entries_json(c.pi)},
                            {"h", entries_json(c.h)}};
    }
    json s = {{"on", p.structure_on}};
    if (p.structure_kind == "lie") {
        json l = json::array();
        for (const auto& [x, y, z, c] : p.lie)
            l.push_back({x, y, z, format_rational(c)});
        s["lie"] = l;
    } else {
        json l = json::array();
        for (const auto& e : p.sh)
            l.push_back({{"word", e.word}, {"to", e.target}, {"coef", format_rational(e.coef)}});
        s["sh"] = l;
    }
    j["structure"] = s;
    json t = {{"max_weight", p.max_weight}};
    if (p.degree_window)
        t["degree_window"] = {p.degree_window->first, p.degree_window->second};
    j["truncation"] = t;
    return j;
}

json map_entries(const GradedMap& f)
{
    json out = json::array();
    for (int j = 0; j < f.source()->size(); ++j)
        for (const auto& [i, q] : f.column(j))
            out.push_back({f.source()->label(j), f.target()->label(i), format_rational(q)});
    return out;
}

GradedMap parse_map(const json& entries, const ModulePtr& source, const ModulePtr& target, int degree,
                    const std::string& where)
{
    Errors err;
    Entries e = get_entries(entries, where, err);
    err.raise();
    return from_entries(e, source, target, degree, where);
}

Built build(const Problem& p, int max_weight, bool need_sh)
{
    std::map<std::string, ModulePtr> mods;
    for (const auto& m : p.modules) {
        if (!p.degree_window) {
            mods[m.name] = make_module(m.name, m.basis);
            continue;
        }
        for (const auto& b : m.basis)
            if (b.degree < p.degree_window->first || b.degree > p.degree_window->second)
                throw InputError("modules." + m.name + ": '" + b.label + "' lies outside the degree window");
        mods[m.name] = std::make_shared<const GradedModule>(m.name, m.basis, p.degree_window->first,
                                                            p.degree_window->second);
    }
    std::map<std::string, ChainComplex> complexes;
    for (const auto& [name, mod] : mods) {
        auto it = p.differentials.find(name);
        GradedMap d = it == p.differentials.end() ? GradedMap::zero(mod, mod, -1)
                                                  : from_entries(it->second, mod, mod, -1, "differentials." + name);
        if (auto j = first_difference(compose(d, d), GradedMap::zero(mod, mod, -2)))
            throw SquareZeroFailure(name, mod->label(*j));
        complexes.emplace(name, ChainComplex(mod, std::move(d)));
    }
    ModulePtr g = find_module(mods, p.structure_on);
    const ChainComplex& gc = complexes.at(p.structure_on);

    std::optional<Contraction> c;
    if (p.contraction) {
        const auto& cs = *p.contraction;
        if (cs.big != p.structure_on)
            throw InputError("contraction.big must be the module carrying the structure ('" + p.structure_on + "')");
        ModulePtr m = find_module(mods, cs.small);
        c.emplace(complexes.at(cs.small), gc, from_entries(cs.nabla, m, g, 0, "contraction.nabla"),
                  from_entries(cs.pi, g, m, 0, "contraction.pi"), from_entries(cs.h, g, g, 1, "contraction.h"));
    } else {
        c = Contraction::identity(gc);
    }

    Built out{mods, g, gc, *c, std::nullopt, std::nullopt, nullptr};
    if (p.structure_kind == "lie") {
        StructureConstants sc;
        Errors err;
        for (std::size_t i = 0; i < p.lie.size(); ++i) {
            const auto& [x, y, z, q] = p.lie[i];
            auto a = g->find(x), b = g->find(y), r = g->find(z);
            if (!a || !b || !r) {
                err.add("structure.lie[" + std::to_string(i) + "]", "unknown label in " + g->name());
                continue;
            }
            if (g->degree(*r) != g->degree(*a) + g->degree(*b)) {
                err.add("structure.lie[" + std::to_string(i) + "]", "bracket is not of degree 0");
                continue;
            }
            sc.emplace_back(*a, *b, *r, q);
        }
        err.raise();
        out.lie.emplace(gc, structure_constants(g, sc));
        if (need_sh) {
            CCECoalgebra cce = cce_coalgebra(*out.lie, max_weight);
            out.carrier = cce.coalgebra;
            out.sh.emplace(cce.structure);
        }
    } else {
        auto sg = suspend(g);
        auto carrier = std::make_shared<const SymCoalgebra>(sg, max_weight);
        GradedMap lambda(carrier->module(), sg, -1);
        Errors err;
        for (std::size_t i = 0; i < p.sh.size(); ++i) {
            const auto& e = p.sh[i];
            const std::string path = "structure.sh[" + std::to_string(i) + "]";
            std::vector<int> letters;
            bool ok = true;
            for (const auto& l : e.word) {
                auto k = g->find(l);
                ok = ok && k.has_value();
                letters.push_back(k.value_or(0));
            }
            auto t = g->find(e.target);
            if (!ok || !t) {
                err.add(path, "unknown label in " + g->name());
                continue;
            }
            if (letters.size() < 2) {
                err.add(path, "corestrictions start at word length 2");
                continue;
            }
            std::pair<int, int> norm;
            try {
                norm = carrier->normalize(letters);
            } catch (const TruncationError&) {
                err.add(path, "word exceeds the truncation");
                continue;
            }
            if (norm.first == 0) {
                err.add(path, "word repeats an odd letter and vanishes");
                continue;
            }
            if (sg->degree(*t) != carrier->module()->degree(norm.second) - 1) {
                err.add(path, "corestriction must have degree -1");
                continue;
            }
            lambda.add_entry(*t, norm.second, norm.first * e.coef);
        }
        err.raise();
        out.carrier = carrier;
        out.sh.emplace(carrier, ChainComplex(sg, suspended_differential(gc.d(), sg)), std::move(lambda));
    }
    return out;
}

} // namespace hpt::cli
