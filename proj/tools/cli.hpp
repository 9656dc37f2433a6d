#pragma once

// The fairdiv command line, callable in-process for tests.
//
//   fairdiv run    --protocol P (--valuations F | --instance F) [--epsilon E] [--seed S]
//   fairdiv bench  --protocol P --param-range LO:HI[:FACTOR] --trials N [--seed S] [--csv F]
//   fairdiv verify --allocation F --valuations F --notion N --epsilon E
//   fairdiv gen    --kind K [--m M] [--k K] [--z Z] [--seed S] [--output F]
//
// Exit codes: 0 success (verify: the checker passed), 1 runtime failure
// (verify: the checker failed), 2 usage error. FAIRDIV_SEED sets the default
// seed.

#include <ostream>
#include <string>
#include <vector>

namespace fairdiv::cli {

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairdiv::cli
