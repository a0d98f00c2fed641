#pragma once

#include <iosfwd>

namespace pnf::cli {

// Exit status: 0 when every executed verdict passes, 2 when one fails, 1 on usage or
// configuration errors (one diagnostic line on err).
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pnf::cli
