//! Bit-vector point sets and binary relations on carriers of at most 64 points.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 64;

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "carrier must have at least one point".into(),
        ));
    }
    if n > MAX_POINTS {
        return Err(Error::TooLarge(format!(
            "carrier of {n} points exceeds {MAX_POINTS}"
        )));
    }
    Ok(())
}

/// A set of point indices stored as a 64-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(PointSet::EMPTY, |s, i| s.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        PointSet(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> Self {
        PointSet(self.0 & !(1u64 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && (self.0 >> i) & 1 == 1
    }

    pub fn union(self, o: PointSet) -> Self {
        PointSet(self.0 | o.0)
    }

    pub fn intersection(self, o: PointSet) -> Self {
        PointSet(self.0 & o.0)
    }

    pub fn is_subset(self, o: PointSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Keeps only the points of `keep`, renumbering them consecutively.
    pub fn compress(self, keep: PointSet) -> PointSet {
        PointSet::from_indices(
            keep.iter()
                .enumerate()
                .filter(|&(_, p)| self.contains(p))
                .map(|(i, _)| i),
        )
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// A binary relation on `0..n`, one row mask per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<PointSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            rows: vec![PointSet::EMPTY; n],
        }
    }

    pub fn full(n: usize) -> Self {
        Relation {
            n,
            rows: vec![PointSet::full(n); n],
        }
    }

    pub fn diagonal(n: usize) -> Self {
        Relation {
            n,
            rows: (0..n).map(PointSet::singleton).collect(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Self {
        let mut r = Relation::empty(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let rows = (0..n)
            .map(|i| PointSet::from_indices((0..n).filter(|&j| f(i, j))))
            .collect();
        Relation { n, rows }
    }

    pub fn len_points(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> PointSet {
        self.rows[i]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.rows[i] = self.rows[i].with(j);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.n == other.n
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset(*b))
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        Relation {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.intersection(*b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.union(*b))
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(i, j)| self.contains(j, i))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.n).all(|i| {
            let ri = self.rows[i];
            ri.iter().all(|j| self.rows[j].is_subset(ri))
        })
    }

    /// Points `i` with `(i, i)` in the relation.
    pub fn reflexive_points(&self) -> PointSet {
        PointSet::from_indices((0..self.n).filter(|&i| self.contains(i, i)))
    }

    pub fn meets_diagonal(&self) -> bool {
        !self.reflexive_points().is_empty()
    }

    /// Reflexive-transitive closure (Warshall over bit rows).
    pub fn preorder_closure(&self) -> Relation {
        let mut rows = self.rows.clone();
        for (i, r) in rows.iter_mut().enumerate() {
            *r = r.with(i);
        }
        for k in 0..self.n {
            for i in 0..self.n {
                if rows[i].contains(k) {
                    rows[i] = rows[i].union(rows[k]);
                }
            }
        }
        Relation { n: self.n, rows }
    }

    /// Product relation on the row-major product carrier `self.n * other.n`:
    /// `((a, b), (c, d))` is related iff `(a, c) ∈ self` and `(b, d) ∈ other`.
    pub fn product(&self, other: &Relation) -> Relation {
        let m = other.n;
        Relation::from_fn(self.n * m, |p, q| {
            self.contains(p / m, q / m) && other.contains(p % m, q % m)
        })
    }

    /// Restriction to the points of `keep`, renumbered consecutively.
    pub fn restrict(&self, keep: PointSet) -> Relation {
        let rows = keep.iter().map(|i| self.rows[i].compress(keep)).collect();
        Relation {
            n: keep.len(),
            rows,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, j)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "({i},{j})")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_basics() {
        let s = PointSet::from_indices([0, 2]);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "{0,2}");
        assert_eq!(PointSet::full(3), PointSet(0b111));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(
            PointSet::from_indices([1, 3]).compress(PointSet::from_indices([1, 2, 3])),
            PointSet::from_indices([0, 2])
        );
    }

    #[test]
    fn closure_is_reflexive_and_transitive() {
        let r = Relation::from_pairs(4, [(0, 1), (1, 2)]);
        let c = r.preorder_closure();
        assert!(c.is_reflexive() && c.is_transitive());
        assert!(c.contains(0, 2));
        assert!(!c.contains(2, 0));
    }

    #[test]
    fn product_relation_pairs_componentwise() {
        let a = Relation::from_pairs(2, [(0, 1)]);
        let b = Relation::diagonal(3);
        let p = a.product(&b);
        assert_eq!(p.pair_count(), 3);
        assert!(p.contains(2, 3 + 2));
    }
}
