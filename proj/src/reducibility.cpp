#include "rcxi/reducibility.hpp"

#include <algorithm>
#include <map>

#include "rcxi/error.hpp"

namespace rcxi {

ReducibilityReport symbolic_reducibility(const Trajectory& t) {
  if (t.states.size() < 10)
    throw Error(ErrorCode::invalid_input, "states", "symbolic reducibility needs at least 10 states");
  const std::size_t n = t.inputs.size();
  const std::size_t d = t.dim;

  struct Group {
    std::vector<double> sum;
    std::size_t count = 0;
  };
  std::map<std::uint64_t, Group> groups;
  std::vector<double> grand(d, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    Group& g = groups[t.inputs[k].id];
    if (g.sum.empty()) g.sum.assign(d, 0.0);
    ++g.count;
    const State& next = t.states[k + 1];
    for (std::size_t i = 0; i < d; ++i) {
      g.sum[i] += next[i];
      grand[i] += next[i];
    }
  }
  if (groups.size() < 2)
    throw Error(ErrorCode::invalid_input, "inputs", "symbolic reducibility needs at least 2 distinct input ids");
  for (double& v : grand) v /= static_cast<double>(n);
  for (auto& [id, g] : groups)
    for (double& v : g.sum) v /= static_cast<double>(g.count);

  ReducibilityReport r;
  for (std::size_t k = 0; k < n; ++k) {
    const State& next = t.states[k + 1];
    const auto& phi = groups.at(t.inputs[k].id).sum;
    for (std::size_t i = 0; i < d; ++i) {
      r.sst += (next[i] - grand[i]) * (next[i] - grand[i]);
      r.sse += (next[i] - phi[i]) * (next[i] - phi[i]);
    }
  }
  if (r.sst == 0.0)
    throw Error(ErrorCode::degenerate, "states", "zero total variance: constant states");
  r.r_squared = std::clamp(1.0 - r.sse / r.sst, 0.0, 1.0);
  r.samples = n;
  r.symbols = groups.size();
  return r;
}

}  // namespace rcxi
