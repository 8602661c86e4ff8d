#pragma once

// String features of statements: type constructors (`t:`), type variables
// (`v:`), constants (`c:`) and printed subterms (`s:`) under three variable
// normalizations.

#include <string>
#include <string_view>
#include <vector>

#include "hammer/logic.hpp"

namespace hammer {

enum class NormScheme { OneVar, DeBruijn, TypeOfVar };

// Fully parenthesized prefix printing, e.g. `(HD (CONS X X))`.
//   OneVar:    every term variable prints as `X`
//   DeBruijn:  a bound variable prints as `#k`, k its binder distance; a
//              free variable with first-occurrence index i seen under d
//              binders prints as `#(d+i)`
//   TypeOfVar: a variable prints as its type, type variables renamed
//              A, B, ... by first occurrence in the printed term
std::string normalize_print(const Term& t, NormScheme scheme);

// Sorted, duplicate-free.
using FeatureSet = std::vector<std::string>;

FeatureSet extract(const Term& statement);
// Features of a single normalization; extract() is the union over schemes.
FeatureSet extract(const Term& statement, NormScheme scheme);

// OpenMP over statements.
std::vector<FeatureSet> extract_all(const std::vector<Term>& statements);
// Serial reference for extract_all.
std::vector<FeatureSet> extract_all_serial(const std::vector<Term>& statements);

// `.fea` lines: fea(NAME, ['c:HD', ...]).
std::string print_fea(const std::vector<std::string>& names, const std::vector<FeatureSet>& features);
std::vector<std::pair<std::string, FeatureSet>> parse_fea(std::string_view text);

}  // namespace hammer
