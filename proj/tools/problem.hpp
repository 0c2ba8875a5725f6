#pragma once

#include "hpt/transfer.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace hpt::cli {

using json = nlohmann::json;

// (source label, target label, coefficient): the image of source has the
// given coefficient on target.
using Entries = std::vector<std::tuple<std::string, std::string, Rational>>;

struct LambdaEntry {
    std::vector<std::string> word;  // letters are labels of g, read as s(label)
    std::string target;
    Rational coef;
};

struct ModuleSpec {
    std::string name;
    std::vector<BasisElement> basis;
};

struct ContractionSpec {
    std::string small;
    std::string big;
    Entries nabla;
    Entries pi;
    Entries h;
};

struct Problem {
    std::vector<ModuleSpec> modules;
    std::map<std::string, Entries> differentials;
    std::optional<ContractionSpec> contraction;
    std::string structure_on;
    std::string structure_kind;  // "lie" or "sh"
    std::vector<std::tuple<std::string, std::string, std::string, Rational>> lie;
    std::vector<LambdaEntry> sh;
    int max_weight = 4;
    std::optional<std::pair<int, int>> degree_window;
};

// Parses and schema-checks; InputError lists every problem found, parse
// errors with line and column.
Problem parse_problem(const std::string& text);
Problem problem_from_json(const json& j);
json to_json(const Problem& p);

json parse_json(const std::string& text);

// A declared differential with d^2 != 0.
struct SquareZeroFailure : std::runtime_error {
    SquareZeroFailure(const std::string& module, const std::string& label)
        : std::runtime_error("d^2 != 0 on " + module + " at " + label), module(module), witness(label)
    {
    }
    std::string module;
    std::string witness;
};

// The objects a problem describes, at truncation N.
struct Built {
    std::map<std::string, ModulePtr> modules;
    ModulePtr g;
    ChainComplex g_complex;
    Contraction contraction;
    std::optional<DGLie> lie;                // for "lie"; axioms unchecked
    std::optional<ShStructure> sh;           // for "sh", or the CCE structure of "lie"
    std::shared_ptr<const SymCoalgebra> carrier;
};

// Throws InputError for unknown labels, inhomogeneous entries and the like,
// SquareZeroFailure before anything else is built on a bad differential.
Built build(const Problem& p, int max_weight, bool need_sh);

// Entry list of a map, columns in basis order, rows ascending.
json map_entries(const GradedMap& f);
// Inverse of map_entries into the given modules. InputError on unknown labels.
GradedMap parse_map(const json& entries, const ModulePtr& source, const ModulePtr& target, int degree,
                    const std::string& where);

std::string format_rational(const Rational& q);

} // namespace hpt::cli
