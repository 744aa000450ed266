#ifndef CMDKIT_REGRESSION_SELECT_HPP
#define CMDKIT_REGRESSION_SELECT_HPP

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmdkit/change_analysis.hpp"
#include "cmdkit/trace.hpp"

namespace cmdkit {

class StaleStore : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SelectionResult {
  std::vector<std::string> rerun;     // prioritized
  std::vector<std::string> obsolete;  // changed specification, do not rerun
  std::vector<std::string> retained;  // unaffected
};

// A test is obsolete when its spec tag names a changed specification,
// rerun when its trace touches an impacted method, retained otherwise.
// Throws StaleStore when the store was captured against a different model
// version (empty ids skip the check).
SelectionResult select_tests(const TraceStore& store, const ImpactSet& impact,
                             const std::set<std::string>& changed_specs,
                             const std::string& old_model_id);

// Descending by (criticality, impacted-method overlap, trace depth), ties
// by test id. Returns a permutation of `rerun`.
std::vector<std::string> prioritize(const TraceStore& store,
                                    const std::vector<std::string>& rerun,
                                    const ImpactSet& impact);

// test_id<TAB>spec_tag<TAB>criticality<TAB>depth, one line per record.
std::string format_store_index(const TraceStore& store);

}  // namespace cmdkit

#endif
