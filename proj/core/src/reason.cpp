#include "petrimbn/reason.hpp"

#include "petrimbn/error.hpp"

namespace pmbn {

Mbn prior_network(const Net& net, const Prior& prior) {
  if (prior.joint) {
    if (net.place_count() > kMaxArity) throw TooLarge("joint prior over too many places");
    return joint_prior(net.places(), ProbVector(*prior.joint));
  }
  if (prior.marginals.size() != net.place_count())
    throw InvalidArity("prior lists " + std::to_string(prior.marginals.size()) + " marginals for " +
                       std::to_string(net.place_count()) + " places");
  return independent_prior(net.places(), prior.marginals);
}

Posterior run(const ObservationTrace& trace) {
  Posterior p{prior_network(trace.net, trace.prior), 0, false};
  for (const TraceStep& s : trace.steps) {
    p.mbn = attach_update(p.mbn, trace.net, s.step, s.obs);
    ++p.steps_applied;
  }
  return p;
}

namespace {

Matrix evaluate(const Mbn& b, const QueryOptions& q) {
  if (q.order) return run_elimination(b, *q.order, q.elimination, q.stats);
  return run_elimination_auto(b, q.elimination, q.stats);
}

}  // namespace

ProbVector marginal(const Posterior& p, const std::vector<std::string>& places, const QueryOptions& q) {
  const Mbn kept = terminate(p.mbn, places);
  return normalize(ProbVector(evaluate(kept, q)));
}

double mass(const Posterior& p, const QueryOptions& q) {
  const Mbn none = terminate(p.mbn, {});
  return evaluate(none, q).at(0, 0);
}

JointDist replay(const ObservationTrace& trace, std::size_t limit) {
  const std::size_t k = trace.net.place_count();
  JointDist dist = trace.prior.joint ? JointDist(k, *trace.prior.joint) : JointDist::from_marginals(trace.prior.marginals, limit);
  if (k > limit) throw TooLarge("dense engine limited to " + std::to_string(limit) + " places");
  for (const TraceStep& s : trace.steps) dist = update_raw(dist, trace.net, s.step, s.obs);
  return dist;
}

std::vector<double> replay_marginal(const ObservationTrace& trace, const std::vector<std::string>& places,
                                    std::size_t limit) {
  std::vector<std::size_t> idx;
  for (const std::string& name : places) idx.push_back(trace.net.place_index(name));
  std::vector<double> m = replay(trace, limit).marginal(idx);
  double total = 0.0;
  for (double v : m) total += v;
  if (!(total > kEvidenceTolerance)) throw InconsistentEvidence("observations have probability zero under the prior");
  for (double& v : m) v /= total;
  return m;
}

}  // namespace pmbn
