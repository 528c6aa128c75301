#pragma once

#include "qubitfield/operator_core.hpp"

#include <iosfwd>
#include <string>

namespace qubitfield {

// Text dump: a header line `dims R C`, then R lines of C tokens `re+imi`
// (row-major). Values are written with 17 significant digits so a dump reads
// back bit-exactly.

void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

std::string format_complex(Complex z);
Complex parse_complex(const std::string& token);

/// Three consecutive matrix dumps.
void write_triple(std::ostream& os, const OperatorTriple& t);
OperatorTriple read_triple(std::istream& is);

} // namespace qubitfield
