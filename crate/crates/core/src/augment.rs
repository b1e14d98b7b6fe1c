//! Greedy shortcut augmentation, the exhaustive optimum for small
//! instances, and empirical checkers for the greedy guarantees.
//!
//! Greedy adds one shortcut per step, always the candidate whose addition
//! yields the largest total benefit so far. The exhaustive oracle
//! enumerates k-subsets of candidates outright. The checkers compare the
//! two: after k steps greedy must reach at least 1/(8k) of the optimal
//! benefit, after 4k² steps at least half, and along the way every prefix
//! must either already hold half the optimum or admit a single-edge
//! extension gaining at least B(F*)/(8k²).

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::dilation::{dilation_report, dilation_sum, pair_count, shortcut_benefit_sweep};
use crate::graph::{apsp, Graph};
use crate::signatures::ShortcutSet;
use crate::{benefit, EPS_ABS};

/// Largest number of subsets the exhaustive oracle will enumerate unless
/// told otherwise.
pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AugmentError {
    #[error("enumerating C({candidates},{k}) = {subsets} subsets exceeds the cap of {cap}")]
    EnumerationCapExceeded {
        candidates: usize,
        k: usize,
        subsets: u128,
        cap: u64,
    },
    #[error(
        "key lemma violated: B(S) = {benefit_s}, B(F*) = {optimal}, \
         best single-edge extension reaches only {best_extension}"
    )]
    LemmaViolation {
        benefit_s: f64,
        optimal: f64,
        best_extension: f64,
    },
}

/// One committed greedy step.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    /// 1-based step number.
    pub index: usize,
    pub edge: (usize, usize),
    /// Cumulative benefit B(F_i) of all shortcuts committed so far.
    pub benefit: f64,
    /// Average dilation of the augmented graph after this step.
    pub average_dilation: f64,
    pub candidates_evaluated: usize,
    /// Benefit increment of this step fell below the comparison tolerance.
    pub flat: bool,
    pub elapsed: Duration,
}

/// Full record of a greedy run.
#[derive(Debug, Clone)]
pub struct GreedyTrace {
    pub steps: Vec<GreedyStep>,
    /// The committed shortcuts, in pick order.
    pub shortcuts: ShortcutSet,
    /// Candidates ran out before the requested step count.
    pub truncated: bool,
    /// Average dilation of the unaugmented graph.
    pub base_average: f64,
}

impl GreedyTrace {
    /// B(F_i); clamps past the last step, since benefit stays constant
    /// once candidates are exhausted.
    pub fn benefit_at(&self, i: usize) -> f64 {
        if i == 0 || self.steps.is_empty() {
            return 0.0;
        }
        self.steps[i.min(self.steps.len()) - 1].benefit
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyOptions {
    /// Stop after the first step whose benefit increment falls below the
    /// comparison tolerance. Off by default: zero-benefit steps still
    /// commit an edge.
    pub stop_when_flat: bool,
}

/// Runs greedy shortcut selection for at most `steps` steps.
///
/// Each step sweeps every candidate non-edge of the current graph with the
/// single-insertion distance formula against the maintained oracle, picks
/// the candidate of maximal total benefit (ties: smallest (u,v) pair), and
/// commits it. Candidate sweeps run in parallel; scores are reduced in
/// candidate order, so traces are identical for any thread count.
pub fn greedy_augment(graph: &Graph, steps: usize, options: GreedyOptions) -> GreedyTrace {
    let space = graph.space();
    let n = graph.n();
    let pairs = pair_count(n) as f64;
    let mut oracle = apsp(graph);
    let base = dilation_report(space, &oracle);
    let mut candidates = graph.non_edges();
    let mut shortcuts = ShortcutSet::new();
    let mut trace_steps = Vec::new();
    let mut truncated = false;
    let mut prev_benefit = 0.0;

    for index in 1..=steps {
        if candidates.is_empty() {
            truncated = true;
            break;
        }
        let started = Instant::now();
        let scores: Vec<f64> = candidates
            .par_iter()
            .map(|&(u, v)| {
                shortcut_benefit_sweep(space, &base.per_pair, &oracle, u, v, space.distance(u, v))
            })
            .collect();
        let mut best = 0;
        for i in 1..scores.len() {
            if scores[i] > scores[best] {
                best = i;
            }
        }
        let (u, v) = candidates[best];
        let cumulative = scores[best];
        oracle = oracle.with_shortcut(u, v, space.distance(u, v));
        shortcuts
            .push(space, u, v)
            .expect("candidates exclude self-loops and committed edges");
        candidates.remove(best);

        let flat = cumulative - prev_benefit < EPS_ABS;
        trace_steps.push(GreedyStep {
            index,
            edge: (u, v),
            benefit: cumulative,
            average_dilation: dilation_sum(space, &oracle) / pairs,
            candidates_evaluated: scores.len(),
            flat,
            elapsed: started.elapsed(),
        });
        prev_benefit = cumulative;
        if options.stop_when_flat && flat {
            break;
        }
    }

    GreedyTrace {
        steps: trace_steps,
        shortcuts,
        truncated,
        base_average: base.average,
    }
}

/// Result of exhaustive k-subset enumeration.
#[derive(Debug, Clone)]
pub struct OptimalResult {
    /// A maximizing subset, edges in lexicographic order.
    pub shortcuts: ShortcutSet,
    /// B(F*).
    pub benefit: f64,
    /// k exceeded the candidate count; all candidates were taken instead.
    pub truncated: bool,
    pub subsets_evaluated: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    result
}

/// Exhaustively finds a benefit-maximizing set of k candidate edges.
///
/// Subsets are enumerated in lexicographic order over the sorted candidate
/// list and the first maximum wins, so ties resolve to the
/// lexicographically smallest sorted edge list. Prefix distance matrices
/// are shared down the enumeration tree.
pub fn optimal_augment(graph: &Graph, k: usize, cap: u64) -> Result<OptimalResult, AugmentError> {
    let space = graph.space();
    let base = dilation_report(space, &apsp(graph));
    let oracle = apsp(graph);
    let candidates = graph.non_edges();

    if k >= candidates.len() {
        // Only one subset exists; benefit comes from chaining every edge.
        let mut running = oracle;
        let mut last = 0.0;
        for &(u, v) in &candidates {
            last =
                shortcut_benefit_sweep(space, &base.per_pair, &running, u, v, space.distance(u, v));
            running = running.with_shortcut(u, v, space.distance(u, v));
        }
        return Ok(OptimalResult {
            shortcuts: ShortcutSet::from_pairs(space, &candidates)
                .expect("non-edges are simple and distinct"),
            benefit: last,
            truncated: k > candidates.len(),
            subsets_evaluated: 1,
        });
    }
    if k == 0 {
        return Ok(OptimalResult {
            shortcuts: ShortcutSet::new(),
            benefit: 0.0,
            truncated: false,
            subsets_evaluated: 1,
        });
    }

    let subsets = binomial(candidates.len(), k);
    if subsets > cap as u128 {
        return Err(AugmentError::EnumerationCapExceeded {
            candidates: candidates.len(),
            k,
            subsets,
            cap,
        });
    }

    struct Search<'a> {
        space: &'a crate::metric::MetricSpace,
        base_dilation: &'a [f64],
        candidates: &'a [(usize, usize)],
        k: usize,
        best_benefit: f64,
        best_subset: Vec<(usize, usize)>,
        evaluated: u64,
    }

    impl Search<'_> {
        fn descend(
            &mut self,
            from: usize,
            chosen: &mut Vec<(usize, usize)>,
            oracle: &crate::graph::DistanceOracle,
        ) {
            let remaining = self.k - chosen.len();
            let last_start = self.candidates.len() - remaining + 1;
            if remaining == 1 {
                for i in from..self.candidates.len() {
                    let (u, v) = self.candidates[i];
                    let score = shortcut_benefit_sweep(
                        self.space,
                        self.base_dilation,
                        oracle,
                        u,
                        v,
                        self.space.distance(u, v),
                    );
                    self.evaluated += 1;
                    if score > self.best_benefit {
                        self.best_benefit = score;
                        self.best_subset = chosen.clone();
                        self.best_subset.push((u, v));
                    }
                }
                return;
            }
            for i in from..last_start {
                let (u, v) = self.candidates[i];
                let child = oracle.with_shortcut(u, v, self.space.distance(u, v));
                chosen.push((u, v));
                self.descend(i + 1, chosen, &child);
                chosen.pop();
            }
        }
    }

    let mut search = Search {
        space,
        base_dilation: &base.per_pair,
        candidates: &candidates,
        k,
        best_benefit: f64::NEG_INFINITY,
        best_subset: Vec::new(),
        evaluated: 0,
    };
    search.descend(0, &mut Vec::with_capacity(k), &oracle);

    Ok(OptimalResult {
        shortcuts: ShortcutSet::from_pairs(space, &search.best_subset)
            .expect("subsets of non-edges are simple and distinct"),
        benefit: search.best_benefit,
        truncated: false,
        subsets_evaluated: search.evaluated,
    })
}

/// Greedy-versus-optimal comparison for one budget.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub k: usize,
    pub greedy_benefit_at_k: f64,
    pub greedy_benefit_at_4k2: f64,
    pub optimal_benefit: f64,
    /// B(F_k) / B(F*); at most 1 up to rounding. None on trivial instances.
    pub ratio_k: Option<f64>,
    /// B(F_{4k²}) / B(F*); may exceed 1, since 4k² steps can beat the best
    /// k-subset. None on trivial instances.
    pub ratio_4k2: Option<f64>,
    pub theorem_k_satisfied: bool,
    pub theorem_4k2_satisfied: bool,
    /// B(F*) is zero (within tolerance): the bounds hold vacuously.
    pub trivial_instance: bool,
}

/// Relative tolerance on the two theorem ratios.
const EPS_REL: f64 = 1e-9;

/// Runs greedy for 4k² steps, the exhaustive oracle for budget k, and
/// checks B(F_k) ≥ B(F*)/(8k) and B(F_{4k²}) ≥ B(F*)/2.
pub fn check_theorem_bounds(
    graph: &Graph,
    k: usize,
    cap: u64,
) -> Result<BoundReport, AugmentError> {
    let optimal = optimal_augment(graph, k, cap)?;
    let trace = greedy_augment(graph, 4 * k * k, GreedyOptions::default());
    let at_k = trace.benefit_at(k);
    let at_4k2 = trace.benefit_at(4 * k * k);

    if optimal.benefit <= EPS_ABS {
        return Ok(BoundReport {
            k,
            greedy_benefit_at_k: at_k,
            greedy_benefit_at_4k2: at_4k2,
            optimal_benefit: optimal.benefit,
            ratio_k: None,
            ratio_4k2: None,
            theorem_k_satisfied: true,
            theorem_4k2_satisfied: true,
            trivial_instance: true,
        });
    }

    let ratio_k = at_k / optimal.benefit;
    let ratio_4k2 = at_4k2 / optimal.benefit;
    Ok(BoundReport {
        k,
        greedy_benefit_at_k: at_k,
        greedy_benefit_at_4k2: at_4k2,
        optimal_benefit: optimal.benefit,
        ratio_k: Some(ratio_k),
        ratio_4k2: Some(ratio_4k2),
        theorem_k_satisfied: ratio_k >= 1.0 / (8.0 * k as f64) - EPS_REL,
        theorem_4k2_satisfied: ratio_4k2 >= 0.5 - EPS_REL,
        trivial_instance: false,
    })
}

/// Outcome of one key-lemma check.
#[derive(Debug, Clone, PartialEq)]
pub enum LemmaVerdict {
    /// B(S) already reaches half the optimum.
    HalfOptimal { benefit_s: f64, optimal: f64 },
    /// A single-edge extension gains at least B(F*)/(8k²).
    ImprovingEdge {
        edge: (usize, usize),
        benefit_s: f64,
        extended: f64,
        required: f64,
        optimal: f64,
    },
}

/// Checks the per-prefix guarantee behind the greedy analysis: either
/// B(S) ≥ B(F*)/2, or some single edge e has B(S ∪ {e}) ≥ B(S) + B(F*)/(8k²).
///
/// Returns an error only when neither branch holds, which signals an
/// implementation bug rather than a property of the instance.
pub fn check_key_lemma(
    graph: &Graph,
    shortcuts: &ShortcutSet,
    k: usize,
    cap: u64,
) -> Result<LemmaVerdict, AugmentError> {
    let optimal = optimal_augment(graph, k, cap)?.benefit;
    let benefit_s = benefit(graph, shortcuts).total;
    if benefit_s >= optimal / 2.0 - EPS_ABS {
        return Ok(LemmaVerdict::HalfOptimal { benefit_s, optimal });
    }

    let space = graph.space();
    let base = dilation_report(space, &apsp(graph));
    let augmented = graph.augmented(&shortcuts.pairs());
    let oracle = apsp(&augmented);
    let candidates = augmented.non_edges();
    let scores: Vec<f64> = candidates
        .par_iter()
        .map(|&(u, v)| {
            shortcut_benefit_sweep(space, &base.per_pair, &oracle, u, v, space.distance(u, v))
        })
        .collect();
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }

    let required = benefit_s + optimal / (8.0 * (k * k) as f64);
    if !scores.is_empty() && scores[best] >= required - EPS_ABS {
        return Ok(LemmaVerdict::ImprovingEdge {
            edge: candidates[best],
            benefit_s,
            extended: scores[best],
            required,
            optimal,
        });
    }
    Err(AugmentError::LemmaViolation {
        benefit_s,
        optimal,
        best_extension: scores.get(best).copied().unwrap_or(benefit_s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricSpace;
    use std::sync::Arc;

    fn unit_square() -> Arc<MetricSpace> {
        Arc::new(
            MetricSpace::from_points(vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ])
            .unwrap(),
        )
    }

    fn square_path() -> Graph {
        Graph::new(unit_square(), &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    fn complete_square() -> Graph {
        Graph::new(
            unit_square(),
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap()
    }

    #[test]
    fn greedy_picks_the_long_diagonalless_pair() {
        let trace = greedy_augment(&square_path(), 1, GreedyOptions::default());
        assert_eq!(trace.steps.len(), 1);
        let step = &trace.steps[0];
        assert_eq!(step.edge, (0, 3));
        assert_eq!(step.benefit, 2.0);
        assert_eq!(step.candidates_evaluated, 3);
        assert!(!step.flat);
        assert!(!trace.truncated);
        let expected_avg = (4.0 + 2.0 * 2.0_f64.sqrt()) / 6.0;
        assert!((step.average_dilation - expected_avg).abs() < 1e-12);
    }

    #[test]
    fn greedy_on_complete_graph_truncates() {
        let trace = greedy_augment(&complete_square(), 1, GreedyOptions::default());
        assert!(trace.truncated);
        assert!(trace.steps.is_empty());
        assert!(trace.shortcuts.is_empty());
    }

    #[test]
    fn greedy_commits_zero_benefit_steps() {
        let space =
            Arc::new(MetricSpace::from_points(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap());
        let graph = Graph::new(space, &[(0, 1), (1, 2)]).unwrap();
        let trace = greedy_augment(&graph, 1, GreedyOptions::default());
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].edge, (0, 2));
        assert_eq!(trace.steps[0].benefit, 0.0);
        assert!(trace.steps[0].flat);
    }

    #[test]
    fn stop_when_flat_halts_after_a_flat_step() {
        let space = Arc::new(
            MetricSpace::from_points(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap(),
        );
        let graph = Graph::new(space, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let trace = greedy_augment(
            &graph,
            3,
            GreedyOptions {
                stop_when_flat: true,
            },
        );
        assert_eq!(trace.steps.len(), 1);
        assert!(trace.steps[0].flat);
    }

    #[test]
    fn greedy_benefit_is_nondecreasing() {
        let trace = greedy_augment(&square_path(), 3, GreedyOptions::default());
        assert_eq!(trace.steps.len(), 3);
        for window in trace.steps.windows(2) {
            assert!(window[1].benefit >= window[0].benefit);
            assert!(window[1].average_dilation <= window[0].average_dilation);
        }
        assert!((trace.benefit_at(3) - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn optimal_single_edge() {
        let result = optimal_augment(&square_path(), 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(result.shortcuts.pairs(), vec![(0, 3)]);
        assert_eq!(result.benefit, 2.0);
        assert!(!result.truncated);
        assert_eq!(result.subsets_evaluated, 3);
    }

    #[test]
    fn optimal_k_exceeding_candidates_takes_everything() {
        let result = optimal_augment(&square_path(), 5, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(result.truncated);
        assert_eq!(result.shortcuts.len(), 3);
        assert!((result.benefit - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn optimal_matches_greedy_chain_on_all_candidates() {
        let result = optimal_augment(&square_path(), 3, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(!result.truncated);
        assert_eq!(result.subsets_evaluated, 1);
        assert!((result.benefit - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn enumeration_cap_enforced() {
        let err = optimal_augment(&square_path(), 2, 2).unwrap_err();
        assert_eq!(
            err,
            AugmentError::EnumerationCapExceeded {
                candidates: 3,
                k: 2,
                subsets: 3,
                cap: 2,
            }
        );
    }

    #[test]
    fn theorem_bounds_on_the_square() {
        let report = check_theorem_bounds(&square_path(), 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(!report.trivial_instance);
        assert_eq!(report.ratio_k, Some(1.0));
        let ratio = report.ratio_4k2.unwrap();
        assert!((ratio - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!(report.theorem_k_satisfied);
        assert!(report.theorem_4k2_satisfied);
    }

    #[test]
    fn theorem_bounds_trivial_on_complete_graph() {
        let report = check_theorem_bounds(&complete_square(), 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(report.trivial_instance);
        assert!(report.theorem_k_satisfied);
        assert!(report.theorem_4k2_satisfied);
        assert_eq!(report.ratio_k, None);
    }

    #[test]
    fn lemma_finds_the_witness_from_the_empty_prefix() {
        let graph = square_path();
        let shortcuts = ShortcutSet::new();
        let verdict = check_key_lemma(&graph, &shortcuts, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        match verdict {
            LemmaVerdict::ImprovingEdge {
                edge,
                benefit_s,
                extended,
                required,
                ..
            } => {
                assert_eq!(edge, (0, 3));
                assert_eq!(benefit_s, 0.0);
                assert_eq!(extended, 2.0);
                assert!((required - 0.25).abs() < 1e-12);
            }
            other => panic!("expected an improving edge, got {other:?}"),
        }
    }

    #[test]
    fn lemma_branch_one_at_the_optimum() {
        let graph = square_path();
        let shortcuts = ShortcutSet::from_pairs(graph.space(), &[(0, 3)]).unwrap();
        let verdict = check_key_lemma(&graph, &shortcuts, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(matches!(verdict, LemmaVerdict::HalfOptimal { .. }));
    }

    #[test]
    fn lemma_degenerate_zero_optimum() {
        let graph = complete_square();
        let shortcuts = ShortcutSet::new();
        let verdict = check_key_lemma(&graph, &shortcuts, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(
            verdict,
            LemmaVerdict::HalfOptimal {
                benefit_s: 0.0,
                optimal: 0.0,
            }
        );
    }

    #[test]
    fn benefit_at_clamps_past_the_end() {
        let trace = greedy_augment(&square_path(), 2, GreedyOptions::default());
        assert_eq!(trace.benefit_at(0), 0.0);
        assert_eq!(trace.benefit_at(2), trace.steps[1].benefit);
        assert_eq!(trace.benefit_at(10), trace.steps[1].benefit);
    }
}
