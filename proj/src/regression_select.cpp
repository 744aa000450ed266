#include "cmdkit/regression_select.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace cmdkit {

namespace {

std::size_t overlap(const TestRecord& rec, const ImpactSet& impact) {
  std::size_t n = 0;
  for (const auto& m : rec.touched)
    if (impact.methods.count(m)) ++n;
  return n;
}

}  // namespace

SelectionResult select_tests(const TraceStore& store, const ImpactSet& impact,
                             const std::set<std::string>& changed_specs,
                             const std::string& old_model_id) {
  if (!store.model_id.empty() && !old_model_id.empty() &&
      store.model_id != old_model_id)
    throw StaleStore("trace store was captured against model '" +
                     store.model_id + "', not '" + old_model_id + "'");

  SelectionResult result;
  std::vector<std::string> rerun;
  for (const auto& [id, rec] : store.records) {
    if (!rec.spec_tag.empty() && changed_specs.count(rec.spec_tag)) {
      result.obsolete.push_back(id);
    } else if (overlap(rec, impact) > 0) {
      rerun.push_back(id);
    } else {
      result.retained.push_back(id);
    }
  }
  result.rerun = prioritize(store, rerun, impact);
  return result;
}

std::vector<std::string> prioritize(const TraceStore& store,
                                    const std::vector<std::string>& rerun,
                                    const ImpactSet& impact) {
  std::vector<std::string> out = rerun;
  std::stable_sort(out.begin(), out.end(), [&](const std::string& a,
                                               const std::string& b) {
    const TestRecord& ra = store.records.at(a);
    const TestRecord& rb = store.records.at(b);
    auto ka = std::make_tuple(-ra.criticality,
                              -static_cast<long>(overlap(ra, impact)),
                              -ra.depth, a);
    auto kb = std::make_tuple(-rb.criticality,
                              -static_cast<long>(overlap(rb, impact)),
                              -rb.depth, b);
    return ka < kb;
  });
  return out;
}

std::string format_store_index(const TraceStore& store) {
  std::ostringstream out;
  for (const auto& [id, rec] : store.records)
    out << id << "\t" << rec.spec_tag << "\t" << rec.criticality << "\t"
        << rec.depth << "\n";
  return out.str();
}

}  // namespace cmdkit
