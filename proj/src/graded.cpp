#include "hpt/graded.hpp"

#include <algorithm>
#include <set>

namespace hpt {

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text)
{
    auto bad = [&] { return InputError("malformed rational '" + std::string(text) + "'"); };
    if (text.empty())
        throw bad();
    auto slash = text.find('/');
    auto digits_ok = [](std::string_view s, bool allow_sign) {
        if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+'))
            s.remove_prefix(1);
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw bad();
    std::string n(num);
    if (!n.empty() && n[0] == '+')
        n.erase(0, 1);
    mpz_class a(n, 10), b(std::string(den), 10);
    if (b == 0)
        throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational q(a, b);
    q.canonicalize();
    return q;
}

void add_to(Vec& v, int index, const Rational& coef)
{
    if (is_zero(coef))
        return;
    auto [it, inserted] = v.try_emplace(index, coef);
    if (!inserted) {
        it->second += coef;
        if (is_zero(it->second))
            v.erase(it);
    }
}

void axpy(Vec& y, const Rational& a, const Vec& x)
{
    if (is_zero(a))
        return;
    for (const auto& [i, c] : x)
        add_to(y, i, a * c);
}

Vec scaled(const Vec& x, const Rational& a)
{
    Vec out;
    if (is_zero(a))
        return out;
    for (const auto& [i, c] : x)
        out.emplace_hint(out.end(), i, a * c);
    return out;
}

GradedModule::GradedModule(std::string name, std::vector<BasisElement> basis)
    : name_(std::move(name)), basis_(std::move(basis))
{
    for (int i = 0; i < size(); ++i) {
        if (!index_.emplace(basis_[i].label, i).second)
            throw ArgumentError("duplicate basis label '" + basis_[i].label + "' in module " + name_);
    }
    if (!basis_.empty()) {
        auto [mn, mx] = std::minmax_element(basis_.begin(), basis_.end(),
                                            [](const auto& a, const auto& b) { return a.degree < b.degree; });
        lo_ = mn->degree;
        hi_ = mx->degree;
    }
}

GradedModule::GradedModule(std::string name, std::vector<BasisElement> basis, int lo, int hi)
    : GradedModule(std::move(name), std::move(basis))
{
    for (const auto& b : basis_)
        if (b.degree < lo || b.degree > hi)
            throw ArgumentError("basis element '" + b.label + "' outside degree window of " + name_);
    lo_ = lo;
    hi_ = hi;
}

std::optional<int> GradedModule::find(const std::string& label) const
{
    auto it = index_.find(label);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

int GradedModule::index_of(const std::string& label) const
{
    auto i = find(label);
    if (!i)
        throw ArgumentError("unknown label '" + label + "' in module " + name_);
    return *i;
}

std::vector<int> GradedModule::indices_in_degree(int n) const
{
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (basis_[i].degree == n)
            out.push_back(i);
    return out;
}

std::vector<int> GradedModule::degrees() const
{
    std::set<int> s;
    for (const auto& b : basis_)
        s.insert(b.degree);
    return {s.begin(), s.end()};
}

int GradedModule::max_weight() const
{
    int w = 0;
    for (const auto& b : basis_)
        w = std::max(w, b.weight);
    return w;
}

bool GradedModule::same_as(const GradedModule& other) const
{
    if (this == &other)
        return true;
    if (size() != other.size())
        return false;
    for (int i = 0; i < size(); ++i)
        if (basis_[i].label != other.basis_[i].label || basis_[i].degree != other.basis_[i].degree)
            return false;
    return true;
}

ModulePtr make_module(std::string name, std::vector<BasisElement> basis)
{
    return std::make_shared<const GradedModule>(std::move(name), std::move(basis));
}

bool same_module(const ModulePtr& a, const ModulePtr& b)
{
    return a == b || (a && b && a->same_as(*b));
}

GradedMap::GradedMap(ModulePtr source, ModulePtr target, int degree)
    : src_(std::move(source)), tgt_(std::move(target)), degree_(degree), cols_(src_->size())
{
}

GradedMap GradedMap::identity(const ModulePtr& m)
{
    GradedMap id(m, m, 0);
    for (int i = 0; i < m->size(); ++i)
        id.cols_[i].emplace(i, 1);
    return id;
}

GradedMap GradedMap::zero(const ModulePtr& source, const ModulePtr& target, int degree)
{
    return GradedMap(source, target, degree);
}

void GradedMap::set_column(int j, Vec v)
{
    for (const auto& [i, c] : v) {
        if (i < 0 || i >= tgt_->size())
            throw ArgumentError("row index out of range in map into " + tgt_->name());
        if (tgt_->degree(i) != src_->degree(j) + degree_)
            throw ArgumentError("inhomogeneous entry " + tgt_->label(i) + " <- " + src_->label(j) +
                                " for a map of degree " + std::to_string(degree_));
    }
    cols_[j] = std::move(v);
}

void GradedMap::add_entry(int row, int col, const Rational& coef)
{
    if (tgt_->degree(row) != src_->degree(col) + degree_)
        throw ArgumentError("inhomogeneous entry " + tgt_->label(row) + " <- " + src_->label(col));
    add_to(cols_[col], row, coef);
}

Rational GradedMap::entry(int row, int col) const
{
    auto it = cols_[col].find(row);
    return it == cols_[col].end() ? Rational(0) : it->second;
}

Vec GradedMap::apply(const Vec& x) const
{
    Vec y;
    for (const auto& [j, c] : x)
        axpy(y, c, cols_[j]);
    return y;
}

bool GradedMap::is_zero() const
{
    return std::all_of(cols_.begin(), cols_.end(), [](const Vec& v) { return v.empty(); });
}

std::size_t GradedMap::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& c : cols_)
        n += c.size();
    return n;
}

std::vector<std::tuple<int, int, Rational>> GradedMap::block(int n) const
{
    std::vector<std::tuple<int, int, Rational>> out;
    for (int j : src_->indices_in_degree(n))
        for (const auto& [i, c] : cols_[j])
            out.emplace_back(i, j, c);
    return out;
}

void GradedMap::check_compatible(const GradedMap& o) const
{
    if (!same_module(src_, o.src_) || !same_module(tgt_, o.tgt_) || degree_ != o.degree_)
        throw ArgumentError("incompatible maps: " + src_->name() + "->" + tgt_->name() + " vs " +
                            o.src_->name() + "->" + o.tgt_->name());
}

GradedMap& GradedMap::operator+=(const GradedMap& o)
{
    check_compatible(o);
    for (std::size_t j = 0; j < cols_.size(); ++j)
        axpy(cols_[j], 1, o.cols_[j]);
    return *this;
}

GradedMap& GradedMap::operator-=(const GradedMap& o)
{
    check_compatible(o);
    for (std::size_t j = 0; j < cols_.size(); ++j)
        axpy(cols_[j], -1, o.cols_[j]);
    return *this;
}

GradedMap& GradedMap::operator*=(const Rational& a)
{
    for (auto& c : cols_)
        c = scaled(c, a);
    return *this;
}

bool operator==(const GradedMap& a, const GradedMap& b)
{
    return same_module(a.src_, b.src_) && same_module(a.tgt_, b.tgt_) && a.degree_ == b.degree_ &&
           a.cols_ == b.cols_;
}

GradedMap operator+(GradedMap a, const GradedMap& b) { return a += b; }
GradedMap operator-(GradedMap a, const GradedMap& b) { return a -= b; }
GradedMap operator*(const Rational& s, GradedMap a) { return a *= s; }
GradedMap operator-(GradedMap a) { return a *= -1; }

GradedMap compose(const GradedMap& g, const GradedMap& f)
{
    if (!same_module(f.target(), g.source()))
        throw ArgumentError("cannot compose: " + f.target()->name() + " is not " + g.source()->name());
    GradedMap out(f.source(), g.target(), f.degree() + g.degree());
    for (int j = 0; j < f.source()->size(); ++j) {
        const Vec& fj = f.column(j);
        if (!fj.empty())
            out.set_column(j, g.apply(fj));
    }
    return out;
}

GradedMap compose(std::initializer_list<const GradedMap*> chain)
{
    // chain is written left to right as in g o f o e
    std::vector<const GradedMap*> maps(chain);
    if (maps.empty())
        throw ArgumentError("empty composition");
    GradedMap acc = *maps.back();
    for (auto it = maps.rbegin() + 1; it != maps.rend(); ++it)
        acc = compose(**it, acc);
    return acc;
}

std::optional<int> first_difference(const GradedMap& a, const GradedMap& b)
{
    for (int j = 0; j < a.source()->size(); ++j)
        if (a.column(j) != b.column(j))
            return j;
    return std::nullopt;
}

Permutation::Permutation(std::vector<int> images)
{
    const int n = static_cast<int>(images.size());
    std::vector<bool> seen(n, false);
    img_.reserve(n);
    for (int v : images) {
        if (v < 1 || v > n || seen[v - 1])
            throw ArgumentError("not a permutation of 1..n");
        seen[v - 1] = true;
        img_.push_back(v - 1);
    }
}

Permutation Permutation::identity(int n)
{
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = i + 1;
    return Permutation(std::move(v));
}

Permutation Permutation::then(const Permutation& after) const
{
    if (after.size() != size())
        throw ArgumentError("permutation size mismatch");
    std::vector<int> v(size());
    for (int i = 0; i < size(); ++i)
        v[i] = after(img_[i]) + 1;
    return Permutation(std::move(v));
}

Permutation Permutation::inverse() const
{
    std::vector<int> v(size());
    for (int i = 0; i < size(); ++i)
        v[img_[i]] = i + 1;
    return Permutation(std::move(v));
}

int koszul_sign(const Permutation& p, std::span<const int> degrees)
{
    if (static_cast<int>(degrees.size()) != p.size())
        throw ArgumentError("koszul_sign: degree list length differs from permutation size");
    int exponent = 0;
    for (int i = 0; i < p.size(); ++i)
        for (int j = i + 1; j < p.size(); ++j)
            if (p(i) > p(j))
                exponent += parity(degrees[i]) * parity(degrees[j]);
    return sign_of(exponent);
}

ModulePtr tensor_module(const ModulePtr& a, const ModulePtr& b)
{
    std::vector<BasisElement> basis;
    basis.reserve(static_cast<std::size_t>(a->size()) * b->size());
    for (const auto& x : a->basis())
        for (const auto& y : b->basis())
            basis.push_back({x.label + "|" + y.label, x.degree + y.degree, x.weight + y.weight});
    return make_module(a->name() + "(x)" + b->name(), std::move(basis));
}

GradedMap tensor(const GradedMap& f, const GradedMap& g)
{
    auto src = tensor_module(f.source(), g.source());
    auto tgt = tensor_module(f.target(), g.target());
    GradedMap out(src, tgt, f.degree() + g.degree());
    const int nb = g.source()->size();
    const int nt = g.target()->size();
    for (int x = 0; x < f.source()->size(); ++x) {
        const int s = sign_of(parity(g.degree()) * parity(f.source()->degree(x)));
        for (int y = 0; y < nb; ++y) {
            Vec col;
            for (const auto& [fx, a] : f.column(x))
                for (const auto& [gy, b] : g.column(y))
                    add_to(col, fx * nt + gy, s * a * b);
            if (!col.empty())
                out.set_column(x * nb + y, std::move(col));
        }
    }
    return out;
}

GradedMap hom_differential(const GradedMap& phi, const GradedMap& d_src, const GradedMap& d_tgt)
{
    if (d_src.degree() != -1 || d_tgt.degree() != -1)
        throw ArgumentError("hom_differential: differentials must have degree -1");
    GradedMap out = compose(d_tgt, phi);
    GradedMap right = compose(phi, d_src);
    if (parity(phi.degree()))
        out += right;
    else
        out -= right;
    return out;
}

ModulePtr suspend(const ModulePtr& v)
{
    std::vector<BasisElement> basis;
    for (const auto& b : v->basis())
        basis.push_back({"s" + b.label, b.degree + 1, b.weight});
    return make_module("s" + v->name(), std::move(basis));
}

ModulePtr desuspend(const ModulePtr& v)
{
    auto strip = [](const std::string& s) { return !s.empty() && s[0] == 's' ? s.substr(1) : "S-" + s; };
    std::vector<BasisElement> basis;
    for (const auto& b : v->basis())
        basis.push_back({strip(b.label), b.degree - 1, b.weight});
    return make_module(strip(v->name()), std::move(basis));
}

GradedMap suspension_map(const ModulePtr& v, const ModulePtr& sv)
{
    GradedMap s(v, sv, 1);
    for (int i = 0; i < v->size(); ++i)
        s.add_entry(i, i, 1);
    return s;
}

GradedMap desuspension_map(const ModulePtr& sv, const ModulePtr& v)
{
    GradedMap s(sv, v, -1);
    for (int i = 0; i < v->size(); ++i)
        s.add_entry(i, i, 1);
    return s;
}

GradedMap suspended_differential(const GradedMap& d, const ModulePtr& sv)
{
    GradedMap out(sv, sv, -1);
    for (int j = 0; j < sv->size(); ++j)
        out.set_column(j, scaled(d.column(j), -1));
    return out;
}

} // namespace hpt
