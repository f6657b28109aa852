#pragma once

#include <iosfwd>

namespace tivreg {

/// Entry point of the `tivreg` tool. Returns 0 on success, 1 when the
/// registration itself fails (too few points, empty TIV selection, ...) and 2
/// for usage or I/O errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tivreg
