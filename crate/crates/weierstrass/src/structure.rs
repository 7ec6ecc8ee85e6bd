//! Branch-point structures allowed by Riemann-Hurwitz.
//!
//! Over a branch point the `s` sheets split into copies; a copy of order `b`
//! pins `b + 1` sheets. Summed over copies this must give `s`, and the orders
//! summed over all branch points must give the total order `W`. All branch
//! points are assumed to share one local structure, as they do when a single
//! symmetry orbit carries them.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Aggregated structure: `counts[b]` copies of order `b` over all branch points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStructure {
    pub counts: Vec<usize>,
    /// Number of branch points.
    pub points: usize,
    /// Copy sizes `b + 1` over one branch point, descending.
    pub local: Vec<usize>,
}

impl fmt::Display for BranchStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .map(|(b, n)| format!("{{{b},{n}}}"))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

pub fn feasible_branch_structures(sheets: usize, total_order: usize) -> Vec<BranchStructure> {
    if sheets == 0 {
        return Vec::new();
    }
    if total_order == 0 {
        return vec![BranchStructure {
            counts: vec![0; sheets],
            points: 0,
            local: vec![1; sheets],
        }];
    }
    let mut locals = Vec::new();
    partitions(sheets, sheets, &mut Vec::new(), &mut locals);
    let mut out = Vec::new();
    for local in locals {
        let order: usize = local.iter().map(|p| p - 1).sum();
        if order == 0 || !total_order.is_multiple_of(order) {
            continue;
        }
        let points = total_order / order;
        let mut counts = vec![0; sheets];
        for p in &local {
            counts[p - 1] += points;
        }
        out.push(BranchStructure {
            counts,
            points,
            local,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_four() {
        let mut out = Vec::new();
        partitions(4, 4, &mut Vec::new(), &mut out);
        assert_eq!(out.len(), 5);
    }
}
