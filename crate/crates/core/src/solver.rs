//! Exact branch-and-bound engine for the switching MIP.
//!
//! The instance is first reduced to its per-SBS decision form: each SBS
//! picks one of {stay on, off to MBS, off to HAPS}, restricted by per-SBS
//! allowed flags (QoS rows are separable, so they reduce to flags), under
//! two knapsack-style budgets (MBS and HAPS load headroom). Costs are
//! relative to the all-HAPS point, whose cost is the instance's objective
//! constant; the HAPS option therefore costs 0.
//!
//! Identical SBSs, and there are many in symmetric layouts, are grouped,
//! and the search branches on per-group counts instead of per-SBS choices.
//! Nodes are explored best-first by a Lagrangian bound that dualizes the
//! MBS budget and solves the remaining HAPS-budget relaxation exactly as
//! a continuous knapsack; the multiplier is optimized by ternary search,
//! which is valid because every evaluation of the dual is itself a lower
//! bound.
//!
//! Exactness contract: a node is pruned only when its bound exceeds the
//! incumbent by more than `BOUND_SAFETY_W`, which dwarfs accumulated
//! floating-point error, and leaves are accepted only by the instance's
//! canonical feasibility check and objective. The returned solution is
//! therefore the exact minimizer of the canonical objective over the
//! canonical feasible set, with deterministic tie-breaking.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::Error;
use crate::optimizer::{Association, MipInstance, Solution};

/// Margin a bound must clear before a subtree is pruned. Far above any
/// floating-point drift at network-power scale, far below any real power
/// difference the models can produce.
const BOUND_SAFETY_W: f64 = 1e-6;

/// Slack on budget comparisons; covers summation-order differences
/// between grouped tracking and the canonical row sums.
const BUDGET_SLACK: f64 = 1e-9;

/// One SBS's three-way decision data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ReducedItem {
    /// Cost of staying on, relative to off-to-HAPS.
    pub(crate) cost_on: f64,
    /// Cost of offloading to the MBS, relative to off-to-HAPS.
    pub(crate) cost_mbs: f64,
    /// MBS budget consumed when offloaded there.
    pub(crate) w_m: f64,
    /// HAPS budget consumed when offloaded there.
    pub(crate) w_h: f64,
    pub(crate) allow_on: bool,
    pub(crate) allow_mbs: bool,
    pub(crate) allow_haps: bool,
}

/// The per-SBS decision form of an instance.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ReducedProblem {
    pub(crate) items: Vec<ReducedItem>,
    pub(crate) budget_m: f64,
    pub(crate) budget_h: f64,
}

impl ReducedProblem {
    /// Extracts the decision form. Allowed flags encode the QoS rows,
    /// which are separable per SBS: staying on always passes, each
    /// offload target passes when its received power meets the
    /// threshold.
    pub(crate) fn from_instance(instance: &MipInstance) -> ReducedProblem {
        let n = instance.num_sbs;
        let mut items = Vec::with_capacity(n);
        for j in 0..n {
            items.push(ReducedItem {
                cost_on: instance.obj_delta[j],
                cost_mbs: instance.obj_s[j],
                w_m: instance.mbs_capacity.s_coef[j],
                w_h: -instance.haps_capacity.delta_coef[j],
                allow_on: true,
                allow_mbs: instance.qos_satisfied(j, false, true, false),
                allow_haps: instance.qos_satisfied(j, false, false, false),
            });
        }
        ReducedProblem {
            items,
            budget_m: instance.mbs_capacity.rhs,
            budget_h: 1.0 - instance.lambda_h0,
        }
    }
}

/// A group of bit-identical items; the search branches on how many of
/// its members take each option.
struct Group {
    item: ReducedItem,
    /// Member SBS indices, ascending.
    members: Vec<usize>,
}

/// Search node: counts fixed for groups `0..level`, reached via `parent`.
struct Node {
    parent: usize,
    level: usize,
    n_mbs: u32,
    n_haps: u32,
    used_m: f64,
    used_h: f64,
    /// Relative cost of the fixed groups.
    acc: f64,
}

/// Heap entry ordered so the smallest (bound, seq) pops first.
struct HeapEntry {
    bound: f64,
    seq: u64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the lowest bound.
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Item view used by the bound: multiplicity plus effective option costs
/// (infinite when disallowed; HAPS costs 0 when allowed).
struct BoundItem {
    mult: f64,
    cost_on: f64,
    cost_mbs: f64,
    w_m: f64,
    w_h: f64,
    haps_allowed: bool,
}

/// Lagrangian dual value at multiplier `mu` for the MBS budget: the inner
/// problem takes, per item, the cheaper of the MBS-adjusted alternative
/// and HAPS, subject to the HAPS budget solved exactly as a continuous
/// knapsack. Any `mu >= 0` yields a valid lower bound.
fn dual_value(items: &[BoundItem], rem_m: f64, rem_h: f64, mu: f64) -> f64 {
    let mut base = 0.0;
    let mut forced_h = 0.0;
    // (saving, weight) of optional HAPS takes; saving > 0.
    let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(items.len());
    for it in items {
        let alt = it.cost_on.min(it.cost_mbs + mu * it.w_m);
        if alt.is_infinite() {
            if !it.haps_allowed {
                return f64::INFINITY;
            }
            forced_h += it.mult * it.w_h;
        } else {
            base += it.mult * alt;
            // Swapping to the free HAPS option only helps when allowed
            // and the alternative actually costs something.
            if it.haps_allowed && alt > 0.0 {
                candidates.push((it.mult * alt, it.mult * it.w_h));
            }
        }
    }
    let mut budget = rem_h + BUDGET_SLACK - forced_h;
    if budget < 0.0 {
        return f64::INFINITY;
    }
    // Highest saving density first; zero-weight positive savings are free.
    candidates.sort_by(|a, b| {
        let da = if a.1 > 0.0 { a.0 / a.1 } else { f64::INFINITY };
        let db = if b.1 > 0.0 { b.0 / b.1 } else { f64::INFINITY };
        db.total_cmp(&da)
    });
    for (saving, weight) in candidates {
        if weight <= budget {
            base -= saving;
            budget -= weight;
        } else {
            if budget > 0.0 && weight > 0.0 {
                base -= saving * (budget / weight);
            }
            break;
        }
    }
    base - mu * (rem_m + BUDGET_SLACK)
}

/// Lower bound on the relative cost of completing groups `from..` within
/// the remaining budgets. Maximizes the concave dual by ternary search;
/// every evaluated point is valid, so early termination is safe.
fn completion_bound(groups: &[Group], from: usize, rem_m: f64, rem_h: f64) -> f64 {
    if from == groups.len() {
        return 0.0;
    }
    let inf = f64::INFINITY;
    let mut items = Vec::with_capacity(groups.len() - from);
    let mut forced_mbs_w = 0.0;
    let mut best_break = 0.0f64;
    for g in &groups[from..] {
        let it = &g.item;
        let cost_on = if it.allow_on { it.cost_on } else { inf };
        let cost_mbs = if it.allow_mbs { it.cost_mbs } else { inf };
        let mult = g.members.len() as f64;
        if cost_on.is_infinite() && !it.allow_haps && cost_mbs.is_finite() {
            forced_mbs_w += mult * it.w_m;
        }
        if cost_mbs.is_finite() && it.w_m > 0.0 {
            let alt = cost_on.min(if it.allow_haps { 0.0 } else { inf });
            if alt.is_finite() {
                best_break = best_break.max((alt - cost_mbs) / it.w_m);
            }
        }
        items.push(BoundItem {
            mult,
            cost_on,
            cost_mbs,
            w_m: it.w_m,
            w_h: it.w_h,
            haps_allowed: it.allow_haps,
        });
    }
    // Items that can only go to the MBS: if they alone overflow it, no
    // completion is feasible.
    if forced_mbs_w > rem_m + BUDGET_SLACK {
        return f64::INFINITY;
    }
    let mut best = dual_value(&items, rem_m, rem_h, 0.0);
    if best.is_infinite() || best_break <= 0.0 {
        return best;
    }
    let mut lo = 0.0;
    let mut hi = best_break + 1.0;
    best = best.max(dual_value(&items, rem_m, rem_h, hi));
    for _ in 0..48 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let g1 = dual_value(&items, rem_m, rem_h, m1);
        let g2 = dual_value(&items, rem_m, rem_h, m2);
        best = best.max(g1).max(g2);
        if g1 < g2 {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best
}

/// Groups bit-identical items (costs, weights, and flags all equal) so
/// symmetric layouts branch over counts, not permutations. Keys use bit
/// patterns, so grouping never merges items the objective could tell
/// apart. Groups are ordered by descending capacity footprint to fix
/// big movers early; ties break on the first member index.
fn group_items(problem: &ReducedProblem) -> Vec<Group> {
    type Key = (u64, u64, u64, u64, u8);
    let mut map: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    for (j, it) in problem.items.iter().enumerate() {
        let flags =
            (it.allow_on as u8) | ((it.allow_mbs as u8) << 1) | ((it.allow_haps as u8) << 2);
        let key = (
            it.cost_on.to_bits(),
            it.cost_mbs.to_bits(),
            it.w_m.to_bits(),
            it.w_h.to_bits(),
            flags,
        );
        map.entry(key).or_default().push(j);
    }
    let mut groups: Vec<Group> = map
        .into_values()
        .map(|members| Group {
            item: problem.items[members[0]],
            members,
        })
        .collect();
    groups.sort_by(|a, b| {
        let fa = a.members.len() as f64 * a.item.w_m.max(a.item.w_h);
        let fb = b.members.len() as f64 * b.item.w_m.max(b.item.w_h);
        fb.total_cmp(&fa).then_with(|| a.members[0].cmp(&b.members[0]))
    });
    groups
}

/// Materializes a leaf's per-SBS choices from per-group counts. Within a
/// group the assignment is canonical: lowest member indices stay on,
/// then MBS, then HAPS, which is also the lexicographic tie preference.
fn materialize(groups: &[Group], counts: &[(u32, u32)], num_sbs: usize) -> Vec<Association> {
    let mut choices = alloc::vec![Association::ToHaps; num_sbs];
    for (g, &(n_mbs, n_haps)) in groups.iter().zip(counts.iter()) {
        let n_on = g.members.len() - n_mbs as usize - n_haps as usize;
        for (k, &j) in g.members.iter().enumerate() {
            choices[j] = if k < n_on {
                Association::StaysOn
            } else if k < n_on + n_mbs as usize {
                Association::ToMbs
            } else {
                Association::ToHaps
            };
        }
    }
    choices
}

/// Greedy warm start: offload the biggest savers first while the budgets
/// last. Returns canonical choices; feasibility is checked by the caller.
fn greedy_choices(problem: &ReducedProblem) -> Vec<Association> {
    let n = problem.items.len();
    let mut order: Vec<usize> = (0..n).collect();
    let saving = |it: &ReducedItem| {
        let on = if it.allow_on { it.cost_on } else { f64::INFINITY };
        let off = best_off_cost(it);
        on - off
    };
    order.sort_by(|&a, &b| {
        saving(&problem.items[b])
            .total_cmp(&saving(&problem.items[a]))
            .then_with(|| a.cmp(&b))
    });
    let mut used_m = 0.0;
    let mut used_h = 0.0;
    let mut choices = alloc::vec![Association::StaysOn; n];
    for &j in &order {
        let it = &problem.items[j];
        let haps_ok = it.allow_haps && used_h + it.w_h <= problem.budget_h;
        let mbs_ok = it.allow_mbs && used_m + it.w_m <= problem.budget_m;
        let pick_haps = match (haps_ok, mbs_ok) {
            (true, true) => 0.0 <= it.cost_mbs,
            (true, false) => true,
            (false, _) => false,
        };
        if pick_haps {
            choices[j] = Association::ToHaps;
            used_h += it.w_h;
        } else if mbs_ok {
            if !it.allow_on || it.cost_mbs <= it.cost_on {
                choices[j] = Association::ToMbs;
                used_m += it.w_m;
            }
        } else if !it.allow_on {
            // Nothing fits and staying on is not allowed: greedy gives up
            // (the exact search will settle feasibility).
            choices[j] = if it.allow_haps {
                Association::ToHaps
            } else {
                Association::ToMbs
            };
        }
    }
    choices
}

fn best_off_cost(it: &ReducedItem) -> f64 {
    let haps = if it.allow_haps { 0.0 } else { f64::INFINITY };
    let mbs = if it.allow_mbs { it.cost_mbs } else { f64::INFINITY };
    haps.min(mbs)
}

/// Exact solve of the reduced problem. Returns the per-SBS choices of the
/// minimizer of the canonical objective over the canonical feasible set,
/// or [`Error::Infeasible`] when that set is empty.
pub(crate) fn solve_reduced(
    problem: &ReducedProblem,
    instance: &MipInstance,
) -> Result<Vec<Association>, Error> {
    let n = instance.num_sbs;
    debug_assert_eq!(problem.items.len(), n);
    for it in &problem.items {
        if !it.allow_on && !it.allow_mbs && !it.allow_haps {
            return Err(Error::Infeasible);
        }
    }

    let groups = group_items(problem);
    let mut incumbent: Option<(Vec<Association>, f64)> = None;
    let consider = |choices: Vec<Association>, incumbent: &mut Option<(Vec<Association>, f64)>| {
        if !instance.feasible_choices(&choices) {
            return;
        }
        let obj = instance.objective_of(&choices);
        let better = match incumbent {
            None => true,
            Some((inc_choices, inc_obj)) => {
                obj < *inc_obj || (obj == *inc_obj && Solution::prefer(&choices, inc_choices))
            }
        };
        if better {
            *incumbent = Some((choices, obj));
        }
    };

    if problem.items.iter().all(|it| it.allow_on) {
        consider(alloc::vec![Association::StaysOn; n], &mut incumbent);
    }
    consider(greedy_choices(problem), &mut incumbent);

    let rel = |obj: f64| obj - instance.obj_const_w;
    let mut inc_rel = incumbent
        .as_ref()
        .map_or(f64::INFINITY, |(_, obj)| rel(*obj));

    let mut nodes: Vec<Node> = alloc::vec![Node {
        parent: usize::MAX,
        level: 0,
        n_mbs: 0,
        n_haps: 0,
        used_m: 0.0,
        used_h: 0.0,
        acc: 0.0,
    }];
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut seq = 0u64;
    let root_bound = completion_bound(&groups, 0, problem.budget_m, problem.budget_h);
    if root_bound <= inc_rel + BOUND_SAFETY_W {
        heap.push(HeapEntry { bound: root_bound, seq, node: 0 });
    }

    while let Some(entry) = heap.pop() {
        if entry.bound > inc_rel + BOUND_SAFETY_W {
            continue;
        }
        let (level, used_m, used_h, acc) = {
            let nd = &nodes[entry.node];
            (nd.level, nd.used_m, nd.used_h, nd.acc)
        };
        if level == groups.len() {
            // Leaf: reconstruct counts along the parent chain.
            let mut counts = alloc::vec![(0u32, 0u32); groups.len()];
            let mut cur = entry.node;
            while nodes[cur].parent != usize::MAX {
                let nd = &nodes[cur];
                counts[nd.level - 1] = (nd.n_mbs, nd.n_haps);
                cur = nd.parent;
            }
            consider(materialize(&groups, &counts, n), &mut incumbent);
            if let Some((_, obj)) = &incumbent {
                inc_rel = inc_rel.min(rel(*obj));
            }
            continue;
        }
        let g = &groups[level];
        let m = g.members.len() as u32;
        let it = g.item;
        let max_mbs = if it.allow_mbs { m } else { 0 };
        for n_mbs in 0..=max_mbs {
            let child_m = used_m + n_mbs as f64 * it.w_m;
            if child_m > problem.budget_m + BUDGET_SLACK {
                break;
            }
            let max_haps = if it.allow_haps { m - n_mbs } else { 0 };
            for n_haps in 0..=max_haps {
                let n_on = m - n_mbs - n_haps;
                if n_on > 0 && !it.allow_on {
                    continue;
                }
                let child_h = used_h + n_haps as f64 * it.w_h;
                if child_h > problem.budget_h + BUDGET_SLACK {
                    break;
                }
                let child_acc =
                    acc + n_on as f64 * it.cost_on + n_mbs as f64 * it.cost_mbs;
                let bound = child_acc
                    + completion_bound(
                        &groups,
                        level + 1,
                        problem.budget_m - child_m,
                        problem.budget_h - child_h,
                    );
                if bound > inc_rel + BOUND_SAFETY_W {
                    continue;
                }
                seq += 1;
                nodes.push(Node {
                    parent: entry.node,
                    level: level + 1,
                    n_mbs,
                    n_haps,
                    used_m: child_m,
                    used_h: child_h,
                    acc: child_acc,
                });
                heap.push(HeapEntry { bound, seq, node: nodes.len() - 1 });
            }
        }
    }

    incumbent.map(|(choices, _)| choices).ok_or(Error::Infeasible)
}
