#pragma once

#include <cstdint>
#include <string>

#include "obfkit/lang/ast.hpp"
#include "obfkit/obf/record.hpp"

namespace obfkit::obf {

struct ObfParams {
    NamingScheme scheme = NamingScheme::Sequential;
    double density = 0.3;
};

struct ObfResult {
    lang::Ast ast;       // checked, canonical
    std::string source;  // canonical print of `ast`
    TransformRecord record;
};

// Each transform takes a checked program, returns a checked post-image plus
// the record needed to invert it. Identical (source, seed) pairs produce
// byte-identical output.
ObfResult rename_variables(const lang::Ast& ast, NamingScheme scheme, uint64_t seed);
ObfResult insert_dead_code(const lang::Ast& ast, double density, uint64_t seed);
ObfResult encrypt_strings(const lang::Ast& ast, uint64_t seed);

ObfResult apply(Technique technique, const lang::Ast& ast, const ObfParams& params,
                uint64_t seed);

// Undo `record` on its post-image. Throws std::runtime_error when the record
// does not match the program.
lang::Ast invert(const TransformRecord& record, const lang::Ast& obfuscated);

}  // namespace obfkit::obf
