//! Conditioning partitions of one input column.

use crate::error::{argument, Result};

/// How a column is cut into conditioning classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartitionMode {
    /// Classes hold (nearly) the same number of points.
    #[default]
    EqualCount,
    /// Classes span equal widths of the observed range.
    EqualWidth,
}

/// Row indices of each class, ordered by increasing `x`.
///
/// Points tied with a class boundary are assigned to the lower class.
pub fn partition(x: &[f64], parts: usize, mode: PartitionMode) -> Result<Vec<Vec<usize>>> {
    if parts < 2 {
        return Err(argument(format!("need at least 2 classes, got {parts}")));
    }
    if x.len() < parts {
        return Err(argument(format!(
            "{} points cannot fill {parts} classes",
            x.len()
        )));
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let n = x.len();
    let mut cuts = Vec::with_capacity(parts + 1);
    cuts.push(0usize);
    match mode {
        PartitionMode::EqualCount => {
            for j in 1..parts {
                let mut c = ((j * n) as f64 / parts as f64).round() as usize;
                c = c.max(*cuts.last().unwrap());
                while c > 0 && c < n && x[order[c]] == x[order[c - 1]] {
                    c += 1;
                }
                cuts.push(c);
            }
        }
        PartitionMode::EqualWidth => {
            let lo = x[order[0]];
            let hi = x[order[n - 1]];
            let width = (hi - lo) / parts as f64;
            for j in 1..parts {
                let edge = lo + width * j as f64;
                cuts.push(order.partition_point(|&i| x[i] <= edge));
            }
        }
    }
    cuts.push(n);
    Ok(cuts
        .windows(2)
        .map(|w| order[w[0]..w[1]].to_vec())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_count_splits_evenly() {
        let x: Vec<f64> = (0..100).rev().map(|i| i as f64).collect();
        let p = partition(&x, 10, PartitionMode::EqualCount).unwrap();
        assert!(p.iter().all(|c| c.len() == 10));
        // first class holds the smallest values
        assert!(p[0].iter().all(|&i| x[i] < 10.0));
    }

    #[test]
    fn ties_at_boundary_go_to_lower_class() {
        let x = [1.0, 2.0, 2.0, 2.0, 3.0, 4.0];
        let p = partition(&x, 2, PartitionMode::EqualCount).unwrap();
        assert_eq!(p[0].len(), 4);
        assert_eq!(p[1].len(), 2);
    }

    #[test]
    fn equal_width_uses_range() {
        let x = [0.0, 0.1, 0.2, 0.3, 10.0];
        let p = partition(&x, 2, PartitionMode::EqualWidth).unwrap();
        assert_eq!(p[0].len(), 4);
        assert_eq!(p[1].len(), 1);
    }

    #[test]
    fn rejects_bad_counts() {
        assert!(partition(&[1.0, 2.0], 1, PartitionMode::EqualCount).is_err());
        assert!(partition(&[1.0, 2.0], 3, PartitionMode::EqualCount).is_err());
    }
}
