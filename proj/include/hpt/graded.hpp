#pragma once

#include "hpt/errors.hpp"
#include "hpt/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hpt {

// Sparse vector over a module basis, keyed by basis index. Zero entries are
// never stored.
using Vec = std::map<int, Rational>;

void add_to(Vec& v, int index, const Rational& coef);
// y += a * x
void axpy(Vec& y, const Rational& a, const Vec& x);
Vec scaled(const Vec& x, const Rational& a);

inline int parity(int degree) { return degree & 1; }
inline int sign_of(int exponent) { return (exponent & 1) ? -1 : 1; }

struct BasisElement {
    std::string label;
    int degree = 0;
    // Truncation weight (word length, total generator weight, ...). Modules
    // without an intrinsic weight use 1.
    int weight = 1;
};

// A graded module with a finite ordered basis. Degrees outside [lo, hi] are
// zero; the window is the hull of the basis degrees unless set explicitly.
class GradedModule {
public:
    GradedModule(std::string name, std::vector<BasisElement> basis);
    GradedModule(std::string name, std::vector<BasisElement> basis, int lo, int hi);

    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(basis_.size()); }
    const BasisElement& operator[](int i) const { return basis_[i]; }
    const std::vector<BasisElement>& basis() const { return basis_; }
    int degree(int i) const { return basis_[i].degree; }
    int weight(int i) const { return basis_[i].weight; }
    const std::string& label(int i) const { return basis_[i].label; }

    std::optional<int> find(const std::string& label) const;
    int index_of(const std::string& label) const;  // throws ArgumentError

    std::vector<int> indices_in_degree(int n) const;
    std::vector<int> degrees() const;  // sorted, distinct
    int window_lo() const { return lo_; }
    int window_hi() const { return hi_; }
    int max_weight() const;

    bool same_as(const GradedModule& other) const;

private:
    std::string name_;
    std::vector<BasisElement> basis_;
    std::unordered_map<std::string, int> index_;
    int lo_ = 0;
    int hi_ = -1;
};

using ModulePtr = std::shared_ptr<const GradedModule>;

ModulePtr make_module(std::string name, std::vector<BasisElement> basis);

bool same_module(const ModulePtr& a, const ModulePtr& b);

// Degree-homogeneous linear map, stored column-sparse: column j holds the
// image of source basis element j. Absent entries are zero.
class GradedMap {
public:
    GradedMap(ModulePtr source, ModulePtr target, int degree);

    static GradedMap identity(const ModulePtr& m);
    static GradedMap zero(const ModulePtr& source, const ModulePtr& target, int degree);

    const ModulePtr& source() const { return src_; }
    const ModulePtr& target() const { return tgt_; }
    int degree() const { return degree_; }

    const Vec& column(int j) const { return cols_[j]; }
    // Replaces column j. Entries violating homogeneity throw ArgumentError.
    void set_column(int j, Vec v);
    void add_entry(int row, int col, const Rational& coef);
    Rational entry(int row, int col) const;

    Vec apply(const Vec& x) const;
    bool is_zero() const;
    std::size_t nonzeros() const;

    // Entries of the block from source degree n to target degree n + degree,
    // as (row, col, coef) in basis indices.
    std::vector<std::tuple<int, int, Rational>> block(int n) const;

    GradedMap& operator+=(const GradedMap& o);
    GradedMap& operator-=(const GradedMap& o);
    GradedMap& operator*=(const Rational& a);

    friend bool operator==(const GradedMap& a, const GradedMap& b);

private:
    void check_compatible(const GradedMap& o) const;

    ModulePtr src_;
    ModulePtr tgt_;
    int degree_;
    std::vector<Vec> cols_;
};

GradedMap operator+(GradedMap a, const GradedMap& b);
GradedMap operator-(GradedMap a, const GradedMap& b);
GradedMap operator*(const Rational& s, GradedMap a);
GradedMap operator-(GradedMap a);

// g after f.
GradedMap compose(const GradedMap& g, const GradedMap& f);
GradedMap compose(std::initializer_list<const GradedMap*> chain);

// First source basis index where the two maps differ, if any.
std::optional<int> first_difference(const GradedMap& a, const GradedMap& b);

class Permutation {
public:
    // One-based images, as in the usual one-line notation.
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);

    int size() const { return static_cast<int>(img_.size()); }
    // Zero-based image of zero-based i.
    int operator()(int i) const { return img_[i]; }
    Permutation then(const Permutation& after) const;  // after o this
    Permutation inverse() const;

private:
    std::vector<int> img_;
};

// Product over inversions (i < j, p(i) > p(j)) of (-1)^(degrees[i]*degrees[j]).
int koszul_sign(const Permutation& p, std::span<const int> degrees);

// Tensor product with basis index i * |b| + j, label "x|y".
ModulePtr tensor_module(const ModulePtr& a, const ModulePtr& b);

// (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y)
GradedMap tensor(const GradedMap& f, const GradedMap& g);

// D phi = d_tgt phi - (-1)^{|phi|} phi d_src
GradedMap hom_differential(const GradedMap& phi, const GradedMap& d_src, const GradedMap& d_tgt);

ModulePtr suspend(const ModulePtr& v);
ModulePtr desuspend(const ModulePtr& v);
// x -> s x (degree +1) and s x -> x (degree -1).
GradedMap suspension_map(const ModulePtr& v, const ModulePtr& sv);
GradedMap desuspension_map(const ModulePtr& sv, const ModulePtr& v);
// Differential on sV with d s + s d = 0: d(s x) = -s(d x).
GradedMap suspended_differential(const GradedMap& d, const ModulePtr& sv);

} // namespace hpt
