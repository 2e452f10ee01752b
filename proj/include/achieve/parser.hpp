#pragma once

#include <string>

#include "achieve/program.hpp"

namespace achieve {

// Parses program text: rules plus %@ annotation blocks. Performs rule safety
// checking and annotation validation (predicate arities, placeholder names,
// metavariable scoping). Throws ParseError with a source span.
Program parseProgram(const std::string& text, const std::string& name = "<input>");
Program parseProgramFile(const std::string& path);

// Instance files: ground facts over declared input predicates plus
// "#const name=term." placeholder bindings. Throws ParseError / InputError.
InputInstance parseInstance(const std::string& text, const InputSpec& spec,
                            const std::string& name = "<input>");
InputInstance parseInstanceFile(const std::string& path, const InputSpec& spec);

// Standalone assertion parser (no program-context validation).
Assertion parseAssertion(const std::string& text);

} // namespace achieve
