use serde::Serialize;

use super::report::ExperimentReport;
use crate::construct::permutation_metrics;
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaOutcome {
    pub report: ExperimentReport,
    pub permutations: u64,
    pub violations: u64,
    /// Largest `ℓ(σ) − σ_n − 3·inv(σ)`; the inequality needs this ≤ −1.
    pub max_gap: i64,
}

#[derive(Serialize)]
struct Params {
    n_max: usize,
}

/// Checks `ℓ(σ) < σ_n + 3·inv(σ)` on every permutation of `[n]`, `n ≤ n_max`.
pub fn verify_permutation_lemma(n_max: usize) -> Result<LemmaOutcome> {
    if !(1..=9).contains(&n_max) {
        return Err(invalid(format!("n_max must be in 1..=9, got {n_max}")));
    }
    let mut report = ExperimentReport::new(
        "verify_permutation_lemma",
        &Params { n_max },
        0,
        &["n", "permutations", "violations", "max_gap", "identity_slack"],
    )?;
    let (mut permutations, mut violations, mut max_gap) = (0u64, 0u64, i64::MIN);
    for n in 1..=n_max {
        let (mut count, mut bad, mut gap) = (0u64, 0u64, i64::MIN);
        for_each_permutation(n, |sigma| {
            let m = permutation_metrics(sigma).expect("a permutation");
            let g = -m.slack();
            count += 1;
            bad += u64::from(!m.satisfies_bound());
            gap = gap.max(g);
        });
        let identity: Vec<usize> = (1..=n).collect();
        let slack = permutation_metrics(&identity)?.slack();
        report.push_row(0, vec![n as f64, count as f64, bad as f64, gap as f64, slack as f64]);
        permutations += count;
        violations += bad;
        max_gap = max_gap.max(gap);
    }
    report.note(format!("{permutations} permutations checked, {violations} violations, max gap {max_gap}"));
    Ok(LemmaOutcome { report, permutations, violations, max_gap })
}

/// Heap's algorithm over permutations of `1..=n`.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (1..=n).collect();
    let mut c = vec![0usize; n];
    visit(&a);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn heap_enumerates_all() {
        for n in 1..=6 {
            let mut seen = HashSet::new();
            for_each_permutation(n, |s| {
                assert!(seen.insert(s.to_vec()));
            });
            assert_eq!(seen.len(), (1..=n).product::<usize>());
        }
    }

    #[test]
    fn small_and_full_runs() {
        let out = verify_permutation_lemma(3).unwrap();
        assert_eq!((out.permutations, out.violations), (9, 0));
        let out = verify_permutation_lemma(8).unwrap();
        assert_eq!((out.permutations, out.violations), (46233, 0));
        assert!(out.max_gap <= -1);
        // Identity: slack σ_n − ℓ = n − (n − 1) = 1.
        assert!(out.report.column("identity_slack").unwrap().iter().all(|&s| s == 1.0));
    }

    #[test]
    fn range_checked() {
        assert!(verify_permutation_lemma(0).is_err());
        assert!(verify_permutation_lemma(10).is_err());
    }
}
