/// Boustrophedon order of the `m^d` cells (zero-based multi-indices, axis
/// 0 fastest). Consecutive cells differ by one step along one axis.
///
/// Digit `b` of the `k`-th cell is the base-`m` digit of `k`, reflected
/// whenever `⌊k / m^(b+1)⌋`, the number of completed sweeps along axis `b`,
/// is odd.
pub fn snake_order(m: usize, d: usize) -> Vec<Vec<usize>> {
    if m == 0 || d == 0 {
        return Vec::new();
    }
    let total = m.pow(d as u32);
    let mut digits = vec![0usize; d];
    let mut out = Vec::with_capacity(total);
    for k in 0..total {
        let mut rest = k;
        for digit in digits.iter_mut() {
            *digit = rest % m;
            rest /= m;
        }
        let mut cell = vec![0usize; d];
        let mut sweeps = k;
        for b in 0..d {
            sweeps /= m;
            cell[b] = if sweeps % 2 == 0 { digits[b] } else { m - 1 - digits[b] };
        }
        out.push(cell);
    }
    out
}

/// Whether two cells differ by exactly one unit step along exactly one
/// axis.
pub fn is_hamming_adjacent(a: &[usize], b: &[usize]) -> bool {
    let mut diffs = a.iter().zip(b).filter(|(x, y)| x != y);
    matches!((diffs.next(), diffs.next()), (Some((x, y)), None) if x.abs_diff(*y) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn two_by_two() {
        // One-based: (1,1),(2,1),(2,2),(1,2).
        assert_eq!(snake_order(2, 2), vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn line() {
        assert_eq!(snake_order(3, 1), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(snake_order(1, 3), vec![vec![0, 0, 0]]);
    }

    /// Independent checker: every cell exactly once, each step one unit on
    /// one axis.
    fn check(m: usize, d: usize) {
        let order = snake_order(m, d);
        assert_eq!(order.len(), m.pow(d as u32));
        let distinct: HashSet<_> = order.iter().cloned().collect();
        assert_eq!(distinct.len(), order.len());
        assert!(order.iter().flatten().all(|&a| a < m));
        for w in order.windows(2) {
            let changed: Vec<usize> = (0..d).filter(|&b| w[0][b] != w[1][b]).collect();
            assert_eq!(changed.len(), 1, "{:?} -> {:?}", w[0], w[1]);
            assert_eq!(w[0][changed[0]].abs_diff(w[1][changed[0]]), 1);
            assert!(is_hamming_adjacent(&w[0], &w[1]));
        }
    }

    #[test]
    fn all_small_grids() {
        for m in 1..=6 {
            for d in 1..=4 {
                check(m, d);
            }
        }
    }

    #[test]
    fn adjacency_checker() {
        assert!(is_hamming_adjacent(&[1, 2], &[1, 3]));
        assert!(!is_hamming_adjacent(&[1, 2], &[1, 2]));
        assert!(!is_hamming_adjacent(&[1, 2], &[2, 3]));
        assert!(!is_hamming_adjacent(&[1, 2], &[1, 4]));
    }
}
