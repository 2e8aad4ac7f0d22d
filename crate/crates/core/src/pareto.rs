//! Pareto filtering of value vectors.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// `a` dominates `b`: weakly better everywhere, strictly better somewhere.
pub fn dominates<K: Ord>(a: &[K], b: &[K]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strict = true;
        }
    }
    strict
}

/// Keeps every item whose key vector is not dominated by another item's.
/// Items with equal keys are all kept; output preserves input order.
///
/// Keys are deduplicated first and the frontier is built by a single sweep
/// in descending lexicographic order: a key can only be dominated by a key
/// that sorts above it, and dominance is transitive, so checking against the
/// frontier found so far is enough.
pub fn pareto_filter<T, K, F>(items: Vec<T>, key: F) -> Result<Vec<T>>
where
    K: Ord,
    F: Fn(&T) -> &[K],
{
    if items.is_empty() {
        return Err(Error::EmptyInput("pareto_filter needs at least one item"));
    }
    let distinct: BTreeSet<&[K]> = items.iter().map(&key).collect();
    let mut frontier: Vec<&[K]> = Vec::new();
    for k in distinct.into_iter().rev() {
        if !frontier.iter().any(|f| dominates(f, k)) {
            frontier.push(k);
        }
    }
    let keep: Vec<bool> = items.iter().map(|it| frontier.contains(&key(it))).collect();
    Ok(items.into_iter().zip(keep).filter_map(|(it, k)| k.then_some(it)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn filter(points: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
        pareto_filter(points, |p| p.as_slice()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(filter(vec![vec![1, 0], vec![0, 1], vec![1, 1]]), vec![vec![1, 1]]);
        assert_eq!(filter(vec![vec![1, 1], vec![1, 1]]), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(filter(vec![vec![2, 0], vec![0, 2]]), vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn empty_input_is_an_error() {
        let empty: Vec<Vec<i64>> = vec![];
        assert_eq!(
            pareto_filter(empty, |p| p.as_slice()),
            Err(Error::EmptyInput("pareto_filter needs at least one item"))
        );
    }

    #[test]
    fn dominance_relation() {
        assert!(dominates(&[1, 1], &[1, 0]));
        assert!(!dominates(&[1, 1], &[1, 1]));
        assert!(!dominates(&[2, 0], &[0, 2]));
    }

    proptest! {
        #[test]
        fn agrees_with_pairwise_check(points in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..40)) {
            let expected: Vec<Vec<i64>> = points
                .iter()
                .filter(|p| !points.iter().any(|q| q.iter().zip(p.iter()).all(|(a, b)| a >= b) && q != *p))
                .cloned()
                .collect();
            prop_assert_eq!(filter(points), expected);
        }
    }
}
