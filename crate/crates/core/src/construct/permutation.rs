use serde::Serialize;

use crate::error::{invalid, Result};

/// Length, inversion count and last element of a permutation of `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationMetrics {
    /// `Σ |σ_{i+1} − σ_i|`.
    pub length: u64,
    pub inversions: u64,
    pub last: u64,
}

impl PermutationMetrics {
    /// `σ_n + 3·inv(σ) − ℓ(σ)`; positive exactly when `ℓ < σ_n + 3·inv`.
    pub fn slack(&self) -> i64 {
        self.last as i64 + 3 * self.inversions as i64 - self.length as i64
    }

    pub fn satisfies_bound(&self) -> bool {
        self.slack() > 0
    }
}

pub fn permutation_metrics(sigma: &[usize]) -> Result<PermutationMetrics> {
    let n = sigma.len();
    if n == 0 {
        return Err(invalid("permutation must be nonempty"));
    }
    let mut seen = vec![false; n + 1];
    for &s in sigma {
        if s == 0 || s > n || std::mem::replace(&mut seen[s], true) {
            return Err(invalid(format!("{sigma:?} is not a permutation of 1..={n}")));
        }
    }
    let length = sigma.windows(2).map(|w| w[0].abs_diff(w[1]) as u64).sum();
    let mut work = sigma.to_vec();
    let mut buf = vec![0; n];
    let inversions = count_inversions(&mut work, &mut buf);
    Ok(PermutationMetrics { length, inversions, last: sigma[n - 1] as u64 })
}

/// Merge sort counting the pairs it has to swap past each other.
fn count_inversions(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        count_inversions(left, bl) + count_inversions(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[i] <= v[j] {
            buf[k] = v[i];
            i += 1;
        } else {
            buf[k] = v[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair_count(s: &[usize]) -> u64 {
        let mut c = 0;
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                c += u64::from(s[i] > s[j]);
            }
        }
        c
    }

    #[test]
    fn identity() {
        for n in 1..20 {
            let id: Vec<usize> = (1..=n).collect();
            let m = permutation_metrics(&id).unwrap();
            assert_eq!(m.length, n as u64 - 1);
            assert_eq!(m.inversions, 0);
            assert_eq!(m.slack(), 1);
        }
    }

    #[test]
    fn small_cases() {
        let m = permutation_metrics(&[2, 1]).unwrap();
        assert_eq!((m.length, m.inversions, m.last), (1, 1, 1));
        assert!(m.satisfies_bound());
        let m = permutation_metrics(&[3, 1, 2]).unwrap();
        assert_eq!((m.length, m.inversions, m.last), (3, 2, 2));
        assert_eq!(m.slack(), 5);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(permutation_metrics(&[]).is_err());
        assert!(permutation_metrics(&[1, 1]).is_err());
        assert!(permutation_metrics(&[0, 1]).is_err());
        assert!(permutation_metrics(&[1, 3]).is_err());
    }

    proptest! {
        #[test]
        fn merge_count_matches_pairs(perm in (1usize..60).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())) {
            let m = permutation_metrics(&perm).unwrap();
            prop_assert_eq!(m.inversions, pair_count(&perm));
            prop_assert!(m.satisfies_bound());
        }
    }
}
