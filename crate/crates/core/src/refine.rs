//! Moore-style partition refinement over complete transition tables.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Coarsest partition of `0..n` that refines the partition induced by
/// `labels` and is stable under `trans` (row-major, `k` letters per state,
/// every entry `< n`). Class ids are dense and assigned in order of first
/// appearance of their smallest member.
pub(crate) fn coarsest_partition<T: Ord + Clone>(
    n: usize,
    k: usize,
    trans: &[usize],
    labels: &[T],
) -> Vec<usize> {
    debug_assert_eq!(trans.len(), n * k);
    debug_assert_eq!(labels.len(), n);
    let mut class = dense_ids(labels.iter().cloned());
    let mut count = class.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let signatures = (0..n).map(|q| {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[q]);
            sig.extend(trans[q * k..(q + 1) * k].iter().map(|&t| class[t]));
            sig
        });
        let next = dense_ids(signatures);
        let next_count = next.iter().copied().max().map_or(0, |m| m + 1);
        class = next;
        if next_count == count {
            return class;
        }
        count = next_count;
    }
}

fn dense_ids<T: Ord, I: Iterator<Item = T>>(items: I) -> Vec<usize> {
    let mut ids = BTreeMap::new();
    items
        .map(|item| {
            let next = ids.len();
            *ids.entry(item).or_insert(next)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn splits_by_successor_labels() {
        // 0 -> 1 -> 2 -> 2, only 2 labelled true
        let trans = vec![1, 2, 2];
        let labels = vec![false, false, true];
        assert_eq!(coarsest_partition(3, 1, &trans, &labels), vec![0, 1, 2]);
    }

    #[test]
    fn merges_equivalent() {
        // two identical loops
        let trans = vec![1, 0, 3, 2];
        let labels = vec![0, 1, 0, 1];
        assert_eq!(coarsest_partition(4, 1, &trans, &labels), vec![0, 1, 0, 1]);
    }
}
