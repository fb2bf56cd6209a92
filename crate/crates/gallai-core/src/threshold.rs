//! Per-size classification of square windows as avoidable or forced.

use crate::check::{count_avoiding_with_cap, first_avoiding_coloring, CheckError, DEFAULT_EXHAUSTION_CAP};
use crate::config::Configuration;
use crate::grid::GridColoring;
use crate::solver::{solve_avoidance, AvoidanceInstance, SolveOptions, SolveOutcome};

/// Work bounds for [`forced_threshold`].
#[derive(Clone, Debug)]
pub struct ThresholdBudget {
    /// Largest `colors^(n²)` handled by plain exhaustion.
    pub exhaustion_cap: u64,
    /// Node budget handed to the solver beyond the exhaustion cap.
    pub solver_nodes: Option<u64>,
    /// Worker count for the solver path.
    pub threads: usize,
}

impl Default for ThresholdBudget {
    fn default() -> Self {
        ThresholdBudget {
            exhaustion_cap: DEFAULT_EXHAUSTION_CAP,
            solver_nodes: Some(20_000_000),
            threads: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Solver,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    /// Some coloring avoids the target; a witness is attached.
    Avoidable(GridColoring),
    /// Every coloring contains a monochromatic copy.
    Forced,
    /// The budget ran out before either answer.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SizeVerdict {
    pub n: u32,
    pub verdict: Verdict,
    pub method: Method,
}

/// Verdicts for `[n]×[n]`, `1 ≤ n ≤ max_n`, about monochromatic homothetic
/// copies of one configuration.
#[derive(Clone, Debug)]
pub struct ThresholdReport {
    pub config: Configuration,
    pub colors: u32,
    pub verdicts: Vec<SizeVerdict>,
}

impl ThresholdReport {
    /// Least `n` classified as forced, if any.
    pub fn forced_at(&self) -> Option<u32> {
        self.verdicts
            .iter()
            .find(|v| matches!(v.verdict, Verdict::Forced))
            .map(|v| v.n)
    }
}

fn states_exceed(colors: u32, cells: u32, cap: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..cells {
        acc = acc.saturating_mul(u128::from(colors));
        if acc > u128::from(cap) {
            return true;
        }
    }
    false
}

/// Classifies each `[n]×[n]` window up to `max_n` as avoidable, forced, or
/// unknown. Small state spaces are settled by exhaustion, larger ones by the
/// backtracking solver; a budget exhaustion is recorded per size, never as a
/// failure of the whole call. Once a size is forced, every larger size is
/// forced as well (any coloring of the larger window restricts to the
/// smaller one), so the report stays monotone without extra search.
pub fn forced_threshold(
    config: &Configuration,
    colors: u32,
    max_n: u32,
    budget: &ThresholdBudget,
) -> ThresholdReport {
    let mut verdicts = Vec::with_capacity(max_n as usize);
    let mut forced_by: Option<Method> = None;

    for n in 1..=max_n {
        if let Some(method) = forced_by {
            verdicts.push(SizeVerdict { n, verdict: Verdict::Forced, method });
            continue;
        }
        let exhaustive = !states_exceed(colors, n * n, budget.exhaustion_cap);
        let (verdict, method) = if config.len() == 1 {
            // A single point is monochromatic under every coloring.
            (Verdict::Forced, Method::Exhaustive)
        } else if exhaustive {
            match first_avoiding_coloring(n, n, colors, config, budget.exhaustion_cap) {
                Ok(Some(witness)) => (Verdict::Avoidable(witness), Method::Exhaustive),
                Ok(None) => (Verdict::Forced, Method::Exhaustive),
                Err(CheckError::CapExceeded { .. }) => unreachable!("cap checked above"),
            }
        } else {
            let options = SolveOptions {
                node_budget: budget.solver_nodes,
                threads: budget.threads,
                ..SolveOptions::default()
            };
            match AvoidanceInstance::new(n, n, colors, config.clone(), options) {
                Err(_) => (Verdict::Unknown, Method::Solver),
                Ok(instance) => match solve_avoidance(&instance) {
                    SolveOutcome::Satisfiable { coloring, .. } => {
                        (Verdict::Avoidable(coloring), Method::Solver)
                    }
                    SolveOutcome::ExhaustedUnsat { .. } => (Verdict::Forced, Method::Solver),
                    SolveOutcome::BudgetExceeded { .. } => (Verdict::Unknown, Method::Solver),
                },
            }
        };
        if matches!(verdict, Verdict::Forced) {
            forced_by = Some(method);
        }
        verdicts.push(SizeVerdict { n, verdict, method });
    }

    ThresholdReport { config: config.clone(), colors, verdicts }
}

/// Avoidable/forced classification derived purely from exhaustive counting;
/// the reference that [`forced_threshold`] is tested against.
pub fn exhaustive_classification(
    config: &Configuration,
    colors: u32,
    max_n: u32,
    cap: u64,
) -> Vec<Option<bool>> {
    (1..=max_n)
        .map(|n| match count_avoiding_with_cap(n, n, colors, config, cap) {
            Ok(count) => Some(count > 0),
            Err(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::verify_avoidance;

    #[test]
    fn single_point_is_forced_everywhere() {
        let single = Configuration::new([(0, 0)]).unwrap();
        let report = forced_threshold(&single, 2, 3, &ThresholdBudget::default());
        assert!(report.verdicts.iter().all(|v| matches!(v.verdict, Verdict::Forced)));
        assert_eq!(report.forced_at(), Some(1));
    }

    #[test]
    fn domino_verdicts_follow_the_exhaustive_count() {
        let dom = Configuration::domino();
        let budget = ThresholdBudget::default();
        let report = forced_threshold(&dom, 2, 3, &budget);
        let reference = exhaustive_classification(&dom, 2, 3, budget.exhaustion_cap);
        for (v, avoidable) in report.verdicts.iter().zip(&reference) {
            match v.verdict {
                Verdict::Avoidable(ref g) => {
                    assert_eq!(avoidable, &Some(true), "n={}", v.n);
                    assert!(verify_avoidance(g, &dom));
                }
                Verdict::Forced => assert_eq!(avoidable, &Some(false), "n={}", v.n),
                Verdict::Unknown => panic!("tiny instances never exhaust the budget"),
            }
        }
        // Rows of length 3 force a monochromatic pair under 2 colors.
        assert_eq!(report.forced_at(), Some(3));
    }

    #[test]
    fn reports_are_monotone_after_the_first_forced_size() {
        let dom = Configuration::domino();
        let report = forced_threshold(&dom, 2, 5, &ThresholdBudget::default());
        let first = report.forced_at().unwrap();
        for v in &report.verdicts {
            if v.n >= first {
                assert!(matches!(v.verdict, Verdict::Forced));
            }
        }
    }

    #[test]
    fn solver_path_engages_beyond_the_exhaustion_cap() {
        let sq = Configuration::square();
        let budget = ThresholdBudget {
            exhaustion_cap: 1 << 9, // forces the solver path from n = 4 on
            ..ThresholdBudget::default()
        };
        let report = forced_threshold(&sq, 2, 4, &budget);
        assert_eq!(report.verdicts[3].method, Method::Solver);
        assert!(matches!(report.verdicts[3].verdict, Verdict::Avoidable(_)));
    }
}
