// Stage I of the Stackelberg game: the CSP's revenue-maximizing reward in
// closed form, discriminatory (per-MU vector) and uniform (single scalar),
// for symmetric and asymmetric influence and both cost models.
//
// With M = B - G (B + C - G under quadratic cost), K = M^{-1} and
// w = a - c 1 (a under quadratic cost), the first-order conditions of
// Pi(r) = mu s 1'x - mu t x'x - r'x at x = K(w + r) are
//   uniform:        r* = (mu s 1'u - 2 mu t u'v - 1'v) / (2 mu t u'u + 2 1'u),
//                   u = K 1, v = K w;
//   discriminatory: (K + K' + 2 mu t K'K) r = mu s K'1 - 2 mu t K'K w - K w,
// the latter solved as (M + M' + 2 mu t I) z = mu s 1 - 2 mu t v - M'v,
// r = M z. For symmetric G both collapse to the textbook closed forms
// r* = (2I + 2 mu t K)^{-1} (mu (s 1 - 2 t K w) - w) and the matching scalar,
// and a dedicated symmetric route exercises that specialization.
#pragma once

#include "mcs/stage2.hpp"

namespace mcs {

// Per-MU optimal reward vector. Dispatches on graph.symmetric between the
// specialized symmetric solve and the general first-order system.
RewardSchedule discriminatory_reward(const MuPopulation& pop, const SocialGraph& graph,
                                     const MarketParams& market, const Stage2Config& cfg);

// Optimal single scalar reward.
RewardSchedule uniform_reward(const MuPopulation& pop, const SocialGraph& graph,
                              const MarketParams& market, const Stage2Config& cfg);

// One-stop evaluation: stage-2 closed form under the given rewards, with
// revenue and per-MU utilities filled in.
EquilibriumOutcome evaluate_mechanism(const MuPopulation& pop, const SocialGraph& graph,
                                      const MarketParams& market, const RewardSchedule& rewards,
                                      const Stage2Config& cfg);

}  // namespace mcs
