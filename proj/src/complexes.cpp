#include "hpt/complexes.hpp"

#include "hpt/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace hpt {

ChainComplex::ChainComplex(ModulePtr module, GradedMap d) : module_(std::move(module)), d_(std::move(d))
{
    if (d_.degree() != -1)
        throw ArgumentError("differential of " + module_->name() + " must have degree -1");
    if (!same_module(d_.source(), module_) || !same_module(d_.target(), module_))
        throw ArgumentError("differential does not act on " + module_->name());
    GradedMap dd = compose(d_, d_);
    if (auto j = first_difference(dd, GradedMap::zero(module_, module_, -2)))
        throw ArgumentError("d^2 != 0 on " + module_->name() + " at " + module_->label(*j));
}

ChainComplex ChainComplex::zero_differential(const ModulePtr& m)
{
    return ChainComplex(m, GradedMap::zero(m, m, -1));
}

Filtration Filtration::from_module_weights(const ModulePtr& m)
{
    Filtration f;
    for (const auto& b : m->basis())
        f.weight_of.push_back(b.weight);
    return f;
}

int Filtration::max() const
{
    return weight_of.empty() ? 0 : *std::max_element(weight_of.begin(), weight_of.end());
}

std::optional<int> weight_shift(const GradedMap& f, const Filtration& src, const Filtration& tgt)
{
    std::optional<int> worst;
    for (int j = 0; j < f.source()->size(); ++j)
        for (const auto& [i, c] : f.column(j)) {
            const int s = tgt.weight_of[i] - src.weight_of[j];
            if (!worst || s > *worst)
                worst = s;
        }
    return worst;
}

bool Verdict::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.ok; });
}

std::string Verdict::summary() const
{
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.ok ? "ok   " : "FAIL ") << c.name;
        if (c.witness)
            os << " (first failure at " << *c.witness << ")";
        os << "\n";
    }
    return os.str();
}

Contraction::Contraction(ChainComplex small, ChainComplex big, GradedMap nabla, GradedMap pi, GradedMap h)
    : small_(std::move(small)), big_(std::move(big)), nabla_(std::move(nabla)), pi_(std::move(pi)),
      h_(std::move(h))
{
    const auto& m = small_.module();
    const auto& n = big_.module();
    if (!same_module(nabla_.source(), m) || !same_module(nabla_.target(), n) || nabla_.degree() != 0)
        throw ArgumentError("nabla must be a degree 0 map " + m->name() + " -> " + n->name());
    if (!same_module(pi_.source(), n) || !same_module(pi_.target(), m) || pi_.degree() != 0)
        throw ArgumentError("pi must be a degree 0 map " + n->name() + " -> " + m->name());
    if (!same_module(h_.source(), n) || !same_module(h_.target(), n) || h_.degree() != 1)
        throw ArgumentError("h must be a degree +1 self-map of " + n->name());
}

namespace {

IdentityCheck check_equal(std::string name, const GradedMap& lhs, const GradedMap& rhs)
{
    IdentityCheck c{std::move(name)};
    if (auto j = first_difference(lhs, rhs)) {
        c.ok = false;
        c.witness = lhs.source()->label(*j);
    }
    return c;
}

} // namespace

Verdict Contraction::verify() const
{
    const auto& m = small_.module();
    const auto& n = big_.module();
    Verdict v;
    v.checks.push_back(check_equal("pi nabla = Id", compose(pi_, nabla_), GradedMap::identity(m)));
    GradedMap dh = compose(big_.d(), h_) + compose(h_, big_.d());
    v.checks.push_back(
        check_equal("Dh = Id - nabla pi", dh, GradedMap::identity(n) - compose(nabla_, pi_)));
    v.checks.push_back(check_equal("pi h = 0", compose(pi_, h_), GradedMap::zero(n, m, 1)));
    v.checks.push_back(check_equal("h nabla = 0", compose(h_, nabla_), GradedMap::zero(m, n, 1)));
    v.checks.push_back(check_equal("h h = 0", compose(h_, h_), GradedMap::zero(n, n, 2)));
    v.checks.push_back(
        check_equal("pi chain map", compose(small_.d(), pi_), compose(pi_, big_.d())));
    v.checks.push_back(
        check_equal("nabla chain map", compose(big_.d(), nabla_), compose(nabla_, small_.d())));
    return v;
}

Contraction Contraction::identity(const ChainComplex& c)
{
    const auto& m = c.module();
    return Contraction(c, c, GradedMap::identity(m), GradedMap::identity(m), GradedMap::zero(m, m, 1));
}

void require_valid(const Contraction& c, const std::string& context)
{
    Verdict v = c.verify();
    if (!v.ok())
        throw InternalError(context + ": contraction identities fail\n" + v.summary());
}

Contraction repair_side_conditions(const Contraction& c)
{
    Verdict v = c.verify();
    for (std::size_t i : {0u, 1u, 5u, 6u})
        if (!v.checks[i].ok)
            throw ContractViolation("repair_side_conditions: input violates " + v.checks[i].name);
    const auto& n = c.big().module();
    GradedMap p = GradedMap::identity(n) - compose(c.nabla(), c.pi());
    GradedMap php = compose({&p, &c.h(), &p});
    GradedMap h = compose({&php, &c.big().d(), &php});
    Contraction out(c.small(), c.big(), c.nabla(), c.pi(), std::move(h));
    require_valid(out, "repair_side_conditions");
    return out;
}

PerturbedContraction basic_perturbation_lemma(const Contraction& c, const Perturbation& p)
{
    const auto& n = c.big().module();
    const auto& m = c.small().module();
    if (!same_module(p.delta.source(), n) || !same_module(p.delta.target(), n) || p.delta.degree() != -1)
        throw ArgumentError("perturbation must be a degree -1 self-map of " + n->name());
    if (static_cast<int>(p.filtration.weight_of.size()) != n->size())
        throw ArgumentError("filtration does not match " + n->name());
    if (auto s = weight_shift(p.delta, p.filtration, p.filtration); s && *s >= 0)
        throw PreconditionError("perturbation does not lower the filtration");
    if (auto s = weight_shift(c.h(), p.filtration, p.filtration); s && *s > 0)
        throw PreconditionError("homotopy raises the filtration");

    GradedMap total = c.big().d() + p.delta;
    if (!compose(total, total).is_zero())
        throw PreconditionError("(d + delta)^2 != 0");

    // A = delta - delta h delta + delta h delta h delta - ...
    GradedMap a = p.delta;
    GradedMap term = p.delta;
    const int cap = p.filtration.max() + 2;
    for (int k = 0;; ++k) {
        GradedMap ht = compose(c.h(), term);
        term = -compose(p.delta, ht);
        if (term.is_zero())
            break;
        if (k > cap)
            throw InternalError("perturbation series did not terminate");
        a += term;
    }

    GradedMap an = compose(a, c.nabla());
    GradedMap delta_m = compose(c.pi(), an);
    GradedMap nabla = c.nabla() - compose(c.h(), an);
    GradedMap ah = compose(a, c.h());
    GradedMap pi = c.pi() - compose(c.pi(), ah);
    GradedMap h = c.h() - compose(c.h(), ah);

    ChainComplex small(m, c.small().d() + delta_m);
    ChainComplex big(n, std::move(total));
    PerturbedContraction out{Contraction(std::move(small), std::move(big), std::move(nabla), std::move(pi),
                                         std::move(h)),
                             std::move(delta_m)};
    require_valid(out.contraction, "basic_perturbation_lemma");
    return out;
}

Contraction compose_contractions(const Contraction& c1, const Contraction& c2)
{
    if (!same_module(c1.big().module(), c2.small().module()) || !(c1.big().d() == c2.small().d()))
        throw ArgumentError("compose_contractions: middle complexes differ");
    GradedMap pi = compose(c1.pi(), c2.pi());
    GradedMap nabla = compose(c2.nabla(), c1.nabla());
    GradedMap h = c2.h() + compose({&c2.nabla(), &c1.h(), &c2.pi()});
    Contraction out(c1.small(), c2.big(), std::move(nabla), std::move(pi), std::move(h));
    Verdict v = out.verify();
    if (!v.ok())
        out = repair_side_conditions(out);
    return out;
}

Contraction solve_contraction(const ChainComplex& small, const ChainComplex& big, const GradedMap& pi,
                              const GradedMap& nabla)
{
    const auto& n = big.module();
    const GradedMap& d = big.d();
    GradedMap p = GradedMap::identity(n) - compose(nabla, pi);

    if (!(compose(pi, nabla) == GradedMap::identity(small.module())))
        throw PreconditionError("solve_contraction: pi nabla != Id");
    if (!(compose(small.d(), pi) == compose(pi, d)) || !(compose(d, nabla) == compose(nabla, small.d())))
        throw PreconditionError("solve_contraction: pi and nabla must be chain maps");

    struct DegreeData {
        std::vector<Vec> cycles;      // Z_n
        std::vector<Vec> complement;  // C_n
        Echelon images;               // d(C_n) inside N_{n-1}
    };
    std::map<int, DegreeData> data;
    for (int deg : n->degrees()) {
        DegreeData& dd = data[deg];
        Echelon kernel_span;
        std::vector<Vec> k;
        for (int i : n->indices_in_degree(deg)) {
            const Vec& v = p.column(i);
            if (kernel_span.insert(v))
                k.push_back(v);
        }
        Echelon img;
        std::vector<Vec> images;
        for (const Vec& v : k) {
            Vec dv = d.apply(v);
            images.push_back(dv);
            if (img.insert(dv)) {
                dd.complement.push_back(v);
                dd.images.insert(dv);
            }
        }
        for (const Vec& rel : img.relations()) {
            Vec z;
            for (const auto& [j, c] : rel)
                axpy(z, c, k[j]);
            dd.cycles.push_back(std::move(z));
        }
    }

    GradedMap h(n, n, 1);
    for (int deg : n->degrees()) {
        DegreeData& dd = data[deg];
        auto up = data.find(deg + 1);
        const int boundaries = up == data.end() ? 0 : up->second.images.rank();
        if (boundaries != static_cast<int>(dd.cycles.size()))
            throw NoContractionError("complement of im(nabla) has homology in degree " + std::to_string(deg),
                                     deg);
        if (dd.cycles.empty())
            continue;
        Echelon split;
        for (const Vec& z : dd.cycles)
            split.insert(z);
        for (const Vec& c : dd.complement)
            split.insert(c);
        const int nz = static_cast<int>(dd.cycles.size());
        for (int i : n->indices_in_degree(deg)) {
            const Vec& v = p.column(i);
            if (v.empty())
                continue;
            auto coords = split.express(v);
            if (!coords)
                throw InternalError("solve_contraction: kernel vector outside Z + C");
            Vec z;
            for (const auto& [j, c] : *coords)
                if (j < nz)
                    axpy(z, c, dd.cycles[j]);
            if (z.empty())
                continue;
            auto pre = up->second.images.express(z);
            if (!pre)
                throw NoContractionError("cycle is not a boundary in degree " + std::to_string(deg), deg);
            Vec col;
            for (const auto& [j, c] : *pre)
                axpy(col, c, up->second.complement[j]);
            h.set_column(i, std::move(col));
        }
    }
    Contraction out(small, big, nabla, pi, std::move(h));
    require_valid(out, "solve_contraction");
    return out;
}

} // namespace hpt
