#include "hpt/freelie.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace hpt {

namespace {

std::vector<int> degrees_of(const ModulePtr& gens, const std::vector<int>& word)
{
    std::vector<int> out;
    for (int g : word)
        out.push_back(gens->degree(g));
    return out;
}

int sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

} // namespace

TensorAlgebra::TensorAlgebra(ModulePtr generators, int max_weight)
    : gens_(std::move(generators)), max_weight_(max_weight)
{
    if (max_weight_ < 1)
        throw ArgumentError("tensor algebra: max_weight must be >= 1");
    for (const auto& b : gens_->basis())
        if (b.weight < 1)
            throw ArgumentError("tensor algebra: generator " + b.label + " has weight < 1");

    std::vector<std::pair<int, std::vector<int>>> found;  // (weight, word)
    std::vector<int> current;
    auto grow = [&](auto&& self, int weight) -> void {
        found.push_back({weight, current});
        for (int g = 0; g < gens_->size(); ++g) {
            const int w = weight + gens_->weight(g);
            if (w > max_weight_)
                continue;
            current.push_back(g);
            self(self, w);
            current.pop_back();
        }
    };
    grow(grow, 0);
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return std::make_tuple(a.first, a.second.size(), std::cref(a.second)) <
               std::make_tuple(b.first, b.second.size(), std::cref(b.second));
    });

    std::vector<BasisElement> basis;
    gen_word_.assign(gens_->size(), -1);
    for (auto& [weight, w] : found) {
        std::string label;
        for (int g : w)
            label += (label.empty() ? "" : "|") + gens_->label(g);
        if (w.empty())
            label = "1";
        const int i = static_cast<int>(words_.size());
        basis.push_back({label, sum(degrees_of(gens_, w)), weight});
        index_.emplace(w, i);
        if (w.size() == 1)
            gen_word_[w[0]] = i;
        words_.push_back(std::move(w));
    }
    module_ = make_module("T[" + gens_->name() + "]", std::move(basis));
}

std::optional<int> TensorAlgebra::find(const std::vector<int>& word) const
{
    auto it = index_.find(word);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<int> TensorAlgebra::concat(int a, int b) const
{
    if (module_->weight(a) + module_->weight(b) > max_weight_)
        return std::nullopt;
    std::vector<int> w = words_[a];
    w.insert(w.end(), words_[b].begin(), words_[b].end());
    return index_.at(w);
}

Vec TensorAlgebra::multiply(const Vec& a, const Vec& b) const
{
    Vec out;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b)
            if (auto k = concat(i, j))
                add_to(out, *k, x * y);
    return out;
}

Vec TensorAlgebra::commutator(const Vec& a, int deg_a, const Vec& b, int deg_b) const
{
    Vec out = multiply(a, b);
    axpy(out, -sign_of(deg_a * deg_b), multiply(b, a));
    return out;
}

GradedMap TensorAlgebra::derivation(const GradedMap& on_generators) const
{
    if (!same_module(on_generators.source(), gens_) || !same_module(on_generators.target(), module_))
        throw ArgumentError("derivation: map must send generators into " + module_->name());
    const int r = on_generators.degree();
    GradedMap out(module_, module_, r);
    for (int w = 0; w < size(); ++w) {
        const auto& word = words_[w];
        Vec col;
        int passed = 0;
        for (std::size_t i = 0; i < word.size(); ++i) {
            std::vector<int> pre(word.begin(), word.begin() + i);
            std::vector<int> post(word.begin() + i + 1, word.end());
            Vec mid = multiply(Vec{{index_.at(pre), 1}}, on_generators.column(word[i]));
            axpy(col, sign_of(r * passed), multiply(mid, Vec{{index_.at(post), 1}}));
            passed += gens_->degree(word[i]);
        }
        out.set_column(w, std::move(col));
    }
    return out;
}

GradedMap TensorAlgebra::algebra_morphism(const GradedMap& on_generators, const TensorAlgebra& target) const
{
    if (!same_module(on_generators.source(), gens_) || !same_module(on_generators.target(), target.module()) ||
        on_generators.degree() != 0)
        throw ArgumentError("algebra_morphism: need a degree 0 map from the generators into the target");
    GradedMap out(module_, target.module(), 0);
    for (int w = 0; w < size(); ++w) {
        Vec col{{0, 1}};
        for (int g : words_[w])
            col = target.multiply(col, on_generators.column(g));
        out.set_column(w, std::move(col));
    }
    return out;
}

Vec2 TensorAlgebra::diagonal(const Vec& v) const
{
    Vec2 out;
    for (const auto& [w, c] : v) {
        const auto& word = words_[w];
        auto degs = degrees_of(gens_, word);
        for (unsigned mask = 0; mask < (1u << word.size()); ++mask) {
            std::vector<int> left, right;
            for (std::size_t p = 0; p < word.size(); ++p)
                (mask >> p & 1u ? left : right).push_back(word[p]);
            add_to(out, index_.at(left), index_.at(right), c * unshuffle_sign(degs, mask));
        }
    }
    return out;
}

namespace {

bool is_lyndon(const std::vector<int>& w)
{
    for (std::size_t k = 1; k < w.size(); ++k)
        if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + k, w.end()))
            return false;
    return !w.empty();
}

struct Candidate {
    std::vector<int> word;
    std::string label;
    Vec vec;
    int degree;
    int weight;
};

} // namespace

FreeLie::FreeLie(std::shared_ptr<const TensorAlgebra> ambient) : ambient_(std::move(ambient))
{
    const TensorAlgebra& t = *ambient_;
    const auto& gens = t.generators();
    const auto& tm = t.module();

    // standard bracketing of Lyndon words
    std::map<std::vector<int>, std::pair<Vec, std::string>> standard;
    std::function<const std::pair<Vec, std::string>&(const std::vector<int>&)> bracketing =
        [&](const std::vector<int>& w) -> const std::pair<Vec, std::string>& {
        if (auto it = standard.find(w); it != standard.end())
            return it->second;
        std::pair<Vec, std::string> val;
        if (w.size() == 1) {
            val = {Vec{{t.generator_word(w[0]), 1}}, gens->label(w[0])};
        } else {
            std::size_t split = 1;
            for (; split < w.size(); ++split)
                if (is_lyndon(std::vector<int>(w.begin() + split, w.end())))
                    break;
            std::vector<int> u(w.begin(), w.begin() + split), v(w.begin() + split, w.end());
            const auto& pu = bracketing(u);
            const auto& pv = bracketing(v);
            const int du = sum(degrees_of(gens, u)), dv = sum(degrees_of(gens, v));
            val = {t.commutator(pu.first, du, pv.first, dv), "[" + pu.second + "," + pv.second + "]"};
        }
        return standard.emplace(w, std::move(val)).first->second;
    };

    std::vector<Candidate> candidates;
    for (int w = 1; w < t.size(); ++w) {
        const auto& word = t.word(w);
        if (!is_lyndon(word))
            continue;
        const auto& [vec, label] = bracketing(word);
        const int deg = tm->degree(w), weight = tm->weight(w);
        candidates.push_back({word, label, vec, deg, weight});
        if (parity(deg) && 2 * weight <= t.max_weight()) {
            std::vector<int> sq = word;
            sq.insert(sq.end(), word.begin(), word.end());
            candidates.push_back({sq, "[" + label + "," + label + "]", t.commutator(vec, deg, vec, deg), 2 * deg,
                                  2 * weight});
        }
    }
    // right-normed brackets span L[Y]; any that the Lyndon candidates miss
    // are added as further basis elements
    std::vector<Candidate> spanning;
    for (int w = 1; w < t.size(); ++w) {
        const auto& word = t.word(w);
        Vec vec{{t.generator_word(word.back()), 1}};
        std::string label = gens->label(word.back());
        int deg = gens->degree(word.back());
        for (int k = static_cast<int>(word.size()) - 2; k >= 0; --k) {
            const int g = word[k];
            vec = t.commutator(Vec{{t.generator_word(g), 1}}, gens->degree(g), vec, deg);
            deg += gens->degree(g);
            label = "[" + gens->label(g) + "," + label + "]";
        }
        spanning.push_back({word, label, vec, deg, tm->weight(w)});
    }

    Echelon pick;
    std::vector<Candidate> chosen;
    for (auto* list : {&candidates, &spanning})
        for (auto& c : *list)
            if (!c.vec.empty() && pick.insert(c.vec))
                chosen.push_back(std::move(c));
    for (const auto& c : spanning)
        if (!c.vec.empty() && !pick.contains(c.vec))
            throw InternalError("free Lie basis does not span " + c.label);

    std::sort(chosen.begin(), chosen.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.degree, a.weight, a.word) < std::tie(b.degree, b.weight, b.word);
    });
    std::vector<BasisElement> basis;
    gen_index_.assign(gens->size(), -1);
    for (auto& c : chosen) {
        const int i = static_cast<int>(elements_.size());
        basis.push_back({c.label, c.degree, c.weight});
        if (!echelon_.insert(c.vec))
            throw InternalError("free Lie basis is dependent at " + c.label);
        if (c.word.size() == 1)
            gen_index_[c.word[0]] = i;
        elements_.push_back(std::move(c.vec));
        lyndon_.push_back(std::move(c.word));
    }
    module_ = make_module("L[" + gens->name() + "]", std::move(basis));
}

std::optional<Vec> FreeLie::coordinates(const Vec& t) const
{
    return echelon_.express(t);
}

const Vec& FreeLie::bracket(int i, int j) const
{
    auto key = std::make_pair(i, j);
    if (auto it = cache_.find(key); it != cache_.end())
        return it->second;
    Vec val;
    if (module_->weight(i) + module_->weight(j) <= ambient_->max_weight()) {
        Vec t = ambient_->commutator(elements_[i], module_->degree(i), elements_[j], module_->degree(j));
        auto coords = coordinates(t);
        if (!coords)
            throw InternalError("bracket of " + module_->label(i) + " and " + module_->label(j) +
                                " left the free Lie algebra");
        val = std::move(*coords);
    }
    return cache_.emplace(key, std::move(val)).first->second;
}

Vec FreeLie::bracket(const Vec& a, const Vec& b) const
{
    Vec out;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b)
            axpy(out, x * y, bracket(i, j));
    return out;
}

BasisProduct FreeLie::product() const
{
    return [this](int i, int j) { return bracket(i, j); };
}

GradedMap FreeLie::inclusion() const
{
    GradedMap j(module_, ambient_->module(), 0);
    for (int i = 0; i < size(); ++i)
        j.set_column(i, elements_[i]);
    return j;
}

IdentityCheck FreeLie::closed_under(const GradedMap& on_tensor) const
{
    IdentityCheck out{"closed on L"};
    for (int i = 0; i < size(); ++i)
        if (!coordinates(on_tensor.apply(elements_[i]))) {
            out.ok = false;
            out.witness = module_->label(i);
            break;
        }
    return out;
}

GradedMap FreeLie::restrict(const GradedMap& on_tensor) const
{
    if (!same_module(on_tensor.source(), ambient_->module()) || !same_module(on_tensor.target(), ambient_->module()))
        throw ArgumentError("restrict: map must act on " + ambient_->module()->name());
    GradedMap out(module_, module_, on_tensor.degree());
    for (int i = 0; i < size(); ++i) {
        auto coords = coordinates(on_tensor.apply(elements_[i]));
        if (!coords)
            throw InternalError("image of " + module_->label(i) + " leaves the free Lie algebra");
        out.set_column(i, std::move(*coords));
    }
    return out;
}

std::map<std::pair<int, int>, int> FreeLie::dimensions() const
{
    std::map<std::pair<int, int>, int> out;
    for (const auto& b : module_->basis())
        ++out[{b.degree, b.weight}];
    return out;
}

BasisProduct structure_constants(const ModulePtr& m, const StructureConstants& constants)
{
    std::map<std::pair<int, int>, Vec> table;
    for (const auto& [i, j, k, c] : constants) {
        if (i < 0 || j < 0 || k < 0 || i >= m->size() || j >= m->size() || k >= m->size())
            throw ArgumentError("structure constant index out of range");
        if (m->degree(k) != m->degree(i) + m->degree(j))
            throw ArgumentError("bracket [" + m->label(i) + "," + m->label(j) + "] cannot contain " + m->label(k) +
                                " (degree mismatch)");
        add_to(table[{i, j}], k, c);
    }
    auto given = table;
    for (const auto& [ij, v] : given) {
        auto [i, j] = ij;
        if (!given.contains({j, i}))
            table[{j, i}] = scaled(v, -sign_of(m->degree(i) * m->degree(j)));
    }
    return [table = std::move(table)](int i, int j) {
        auto it = table.find({i, j});
        return it == table.end() ? Vec{} : it->second;
    };
}

DGLie::DGLie(ChainComplex complex, const StructureConstants& constants)
    : complex_(std::move(complex)), weight_limit_(INT_MAX)
{
    bracket_ = structure_constants(complex_.module(), constants);
    Verdict v = verify();
    if (!v.ok())
        throw ArgumentError("not a dg Lie algebra:\n" + v.summary());
}

DGLie::DGLie(ChainComplex complex, BasisProduct bracket, int weight_limit)
    : complex_(std::move(complex)), bracket_(std::move(bracket)), weight_limit_(weight_limit)
{
}

Vec DGLie::bracket(const Vec& a, const Vec& b) const
{
    Vec out;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b)
            axpy(out, x * y, bracket_(i, j));
    return out;
}

Verdict DGLie::verify() const
{
    const auto& m = module();
    const int n = m->size();
    IdentityCheck anti{"graded antisymmetry"}, jacobi{"Jacobi"}, deriv{"d is a derivation"};
    auto fail = [&](IdentityCheck& c, std::string w) {
        if (c.ok) {
            c.ok = false;
            c.witness = std::move(w);
        }
    };
    auto w = [&](int i) { return m->weight(i); };
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w(a) < w(b); });

    for (int i : order) {
        for (int j : order) {
            if (w(i) + w(j) > weight_limit_)
                break;
            const int di = m->degree(i), dj = m->degree(j);
            const std::string pair = "(" + m->label(i) + ", " + m->label(j) + ")";
            if (bracket_(i, j) != scaled(bracket_(j, i), -sign_of(di * dj)))
                fail(anti, pair);
            Vec lhs = d().apply(bracket_(i, j));
            Vec rhs = bracket(d().column(i), Vec{{j, 1}});
            axpy(rhs, sign_of(di), bracket(Vec{{i, 1}}, d().column(j)));
            if (lhs != rhs)
                fail(deriv, pair);
            for (int k : order) {
                if (w(i) + w(j) + w(k) > weight_limit_)
                    break;
                Vec left = bracket(Vec{{i, 1}}, bracket_(j, k));
                Vec right = bracket(bracket_(i, j), Vec{{k, 1}});
                axpy(right, sign_of(di * dj), bracket(Vec{{j, 1}}, bracket_(i, k)));
                if (left != right)
                    fail(jacobi, "(" + m->label(i) + ", " + m->label(j) + ", " + m->label(k) + ")");
            }
        }
    }
    return Verdict{{anti, jacobi, deriv}};
}

bool DGLie::is_abelian() const
{
    for (int i = 0; i < module()->size(); ++i)
        for (int j = 0; j < module()->size(); ++j)
            if (module()->weight(i) + module()->weight(j) <= weight_limit_ && !bracket_(i, j).empty())
                return false;
    return true;
}

DGLie free_dg_lie(std::shared_ptr<const FreeLie> lie, const GradedMap& d_on_lie)
{
    ChainComplex complex(lie->module(), d_on_lie);
    const int limit = lie->ambient().max_weight();
    return DGLie(std::move(complex), [lie](int i, int j) { return lie->bracket(i, j); }, limit);
}

CCECoalgebra cce_coalgebra(const DGLie& h, int max_weight)
{
    const auto& g = h.module();
    auto sg = suspend(g);
    auto c = std::make_shared<const SymCoalgebra>(sg, max_weight);
    GradedMap tau = compose(desuspension_map(sg, g), c->projection());
    GradedMap half = cup_bracket(*c, tau, tau, g, h.bracket());
    half *= Rational(1, 2);
    GradedMap lambda = compose(suspension_map(g, sg), half);
    ChainComplex gens(sg, suspended_differential(h.d(), sg));
    ShStructure sh(c, std::move(gens), std::move(lambda));
    return CCECoalgebra{c, std::move(sh), std::move(tau)};
}

IdentityCheck check_master_equation(const SymCoalgebra& c, const GradedMap& d_c, const GradedMap& t,
                                    const DGLie& h)
{
    return check_lie_twisting_cochain(c, d_c, t, h.d(), h.bracket());
}

GradedMap adjoint_coalgebra_morphism(const SymCoalgebra& c, const GradedMap& d_c, const GradedMap& t,
                                     const DGLie& h, const CCECoalgebra& target)
{
    IdentityCheck ok = check_master_equation(c, d_c, t, h);
    if (!ok.ok)
        throw PreconditionError("adjoint: twisting cochain fails the master equation at " + ok.witness.value_or("?"));
    GradedMap phi = compose(suspension_map(h.module(), target.coalgebra->generators()), t);
    return coalgebra_morphism(c, *target.coalgebra, phi);
}

GradedMap poincare_symmetrization(const FreeLie& lie, const SymCoalgebra& sym)
{
    if (!same_module(sym.generators(), lie.module()))
        throw ArgumentError("poincare_symmetrization: coalgebra must be generated by the free Lie algebra");
    if (sym.max_weight() > lie.ambient().max_weight())
        throw TruncationError("poincare_symmetrization: coalgebra truncated above the tensor algebra");
    const TensorAlgebra& t = lie.ambient();
    const auto& l = lie.module();
    GradedMap e(sym.module(), t.module(), 0);
    for (int w = 0; w < sym.size(); ++w) {
        const auto& word = sym.word(w);
        const int n = static_cast<int>(word.size());
        std::vector<int> degs;
        for (int x : word)
            degs.push_back(l->degree(x));
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        Vec col;
        Rational count = 0;
        do {
            // order[k] is the letter placed at position k
            std::vector<int> images(n);
            for (int k = 0; k < n; ++k)
                images[order[k]] = k + 1;
            const int s = koszul_sign(Permutation(images), degs);
            Vec prod{{0, 1}};
            for (int k = 0; k < n; ++k)
                prod = t.multiply(prod, lie.element(word[order[k]]));
            axpy(col, Rational(s), prod);
            count += 1;
        } while (std::next_permutation(order.begin(), order.end()));
        col = scaled(col, 1 / count);
        e.set_column(w, std::move(col));
    }
    return e;
}

} // namespace hpt
