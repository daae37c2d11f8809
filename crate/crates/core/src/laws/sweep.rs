//! Exhaustive checks of the bounded-on-members closure laws over a small
//! value grid.
//!
//! Membership in either class depends on a metric only through its infinite
//! entries, so class vectors are cached by infinite pattern. Every pair of
//! grid metrics is checked against every eligible family.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::metric::WeakPseudoMetric;
use crate::points::{PointSet, Relation, MAX_POINTS};
use crate::structure::{in_l1, in_l2, SubsetFamily};
use crate::value::{ExtValue, Mode};

use super::{run_law, ClosureBits, ClosureCase, Instance, LawId};

/// `{0, 1, 2, inf}`.
pub fn value_grid() -> Vec<ExtValue> {
    vec![
        ExtValue::zero(),
        ExtValue::int(1),
        ExtValue::int(2),
        ExtValue::Infinite,
    ]
}

/// Every weak pseudo-metric on `n` points with entries in `grid`.
pub fn grid_metrics(n: usize, grid: &[ExtValue]) -> Result<Vec<WeakPseudoMetric>> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let total = (grid.len() as u128)
        .checked_pow(cells.len() as u32)
        .unwrap_or(u128::MAX);
    if total > 1 << 24 {
        return Err(Error::TooLarge(format!("{total} grid matrices")));
    }
    let mode = if grid.iter().any(ExtValue::is_infinite) {
        Mode::Extended
    } else {
        Mode::Strict
    };
    let mut out = Vec::new();
    let mut digits = vec![0usize; cells.len()];
    for _ in 0..total {
        let mut rows = vec![vec![ExtValue::zero(); n]; n];
        for (&(i, j), &k) in cells.iter().zip(&digits) {
            rows[i][j] = grid[k].clone();
            rows[j][i] = grid[k].clone();
        }
        if let Ok(d) = WeakPseudoMetric::new(rows, mode) {
            out.push(d);
        }
        for digit in digits.iter_mut() {
            *digit += 1;
            if *digit < grid.len() {
                break;
            }
            *digit = 0;
        }
    }
    Ok(out)
}

/// Every nonempty family of subsets of an `n`-point carrier, in order of
/// the bitmask over subsets.
pub fn all_families(n: usize) -> Result<Vec<SubsetFamily>> {
    if n > 3 || n > MAX_POINTS {
        return Err(Error::TooLarge(format!("families over {n} points")));
    }
    let subsets = 1usize << n;
    (1u64..1 << subsets)
        .map(|mask| {
            let members = (0..subsets)
                .filter(|s| mask >> s & 1 == 1)
                .map(|s| PointSet(s as u64))
                .collect();
            SubsetFamily::new(n, members)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub law: LawId,
    pub metrics: usize,
    pub families: usize,
    /// `(d1, d2, family)` triples inspected.
    pub checked: u64,
    /// First failing triple in sweep order, with its clause.
    pub counterexample: Option<(Instance, String)>,
}

/// Sweeps `law` over every pair of grid metrics and every eligible family:
/// intersection-closed ones for `LAW-L1-CLOSED`, the others for
/// `HYP-L1-NEEDS-INTERSECTIONS`, all of them otherwise. `d3` is `d2`, so
/// downward closure is exercised whenever `d2 <= d1`.
pub fn grid_sweep(law: LawId, n: usize, grid: &[ExtValue]) -> Result<SweepReport> {
    let universal = match law {
        LawId::L2Closed => true,
        LawId::L1Closed | LawId::L2Exist | LawId::HypL1NeedsIntersections => false,
        other => return Err(Error::InvalidInput(format!("{other} has no grid sweep"))),
    };
    let metrics = grid_metrics(n, grid)?;
    let families: Vec<SubsetFamily> = all_families(n)?
        .into_iter()
        .filter(|f| match law {
            LawId::L1Closed => f.is_intersection_closed(),
            LawId::HypL1NeedsIntersections => !f.is_intersection_closed(),
            _ => true,
        })
        .collect();
    let mut cache: HashMap<Relation, Vec<bool>> = HashMap::new();
    let mut classes = |d: &WeakPseudoMetric| -> Vec<bool> {
        cache
            .entry(d.infinite_relation())
            .or_insert_with(|| {
                families
                    .iter()
                    .map(|f| {
                        let v = if universal { in_l2(d, f) } else { in_l1(d, f) };
                        v.expect("carriers agree").holds
                    })
                    .collect()
            })
            .clone()
    };
    let mut checked = 0u64;
    for d1 in &metrics {
        let c1 = classes(d1);
        for d2 in &metrics {
            let case = ClosureCase::new(d1, d2, d2)?;
            let c2 = classes(d2);
            let scaled: Vec<Vec<bool>> = case.scaled.iter().map(&mut classes).collect();
            let below = case.below.as_ref().map(&mut classes);
            let sum = case.sum.as_ref().map(&mut classes);
            let sup = case.sup.as_ref().map(&mut classes);
            for (k, family) in families.iter().enumerate() {
                checked += 1;
                let bits = ClosureBits {
                    d1: c1[k],
                    d2: c2[k],
                    scaled: scaled.iter().map(|c| c[k]).collect(),
                    below: below.as_ref().map(|c| c[k]),
                    sum: sum.as_ref().map(|c| c[k]),
                    sup: sup.as_ref().map(|c| c[k]),
                };
                let violation = if law == LawId::HypL1NeedsIntersections {
                    bits.sum_violation()
                } else {
                    bits.violation()
                };
                if let Some(clause) = violation {
                    let inst = Instance::Family {
                        family: family.clone(),
                        d1: d1.clone(),
                        d2: d2.clone(),
                        d3: d2.clone(),
                    };
                    assert!(
                        !run_law(law, &inst)?.passed(),
                        "sweep and law disagree on {inst:?}"
                    );
                    return Ok(SweepReport {
                        law,
                        metrics: metrics.len(),
                        families: families.len(),
                        checked,
                        counterexample: Some((inst, clause.to_string())),
                    });
                }
            }
        }
    }
    Ok(SweepReport {
        law,
        metrics: metrics.len(),
        families: families.len(),
        checked,
        counterexample: None,
    })
}
