#ifndef HN_ACCEPTANCE_HPP
#define HN_ACCEPTANCE_HPP

#include <ostream>

namespace hn {

/// Runs the full acceptance battery, printing one "PASS criterion-N ..." or
/// "FAIL criterion-N ..." line per criterion. Returns true iff all pass.
bool run_acceptance_battery(std::ostream& os);

}  // namespace hn

#endif  // HN_ACCEPTANCE_HPP
