//! Finite topologies stored as minimal neighborhoods.
//!
//! Every topology on a finite set is Alexandrov: `N(x)`, the intersection of
//! all opens containing `x`, is itself open, and `U` is open iff `N(x) ⊆ U`
//! for each `x ∈ U`. Equivalently a topology is a preorder with
//! `x <= y ⟺ x ∈ N(y)`, whose down-sets are the opens.

use std::fmt;

use crate::error::{same_carrier, Error, Result};
use crate::maps::PointMap;
use crate::metric::{ball_family, WeakPseudoMetric};
use crate::points::{check_size, PointSet, Relation};
use crate::structure::StructureBase;

/// Largest carrier whose opens are listed explicitly.
pub const OPEN_LISTING_LIMIT: usize = 16;
/// Largest carrier [`enumerate_topologies`] accepts.
pub const ENUMERATION_MAX: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTopology {
    n: usize,
    nbhd: Vec<PointSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyIssue {
    MissingEmpty,
    MissingCarrier,
    UnionMissing(PointSet, PointSet),
    IntersectionMissing(PointSet, PointSet),
    OutOfRange(PointSet),
}

impl fmt::Display for TopologyIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyIssue::MissingEmpty => f.write_str("the empty set is not listed"),
            TopologyIssue::MissingCarrier => f.write_str("the whole carrier is not listed"),
            TopologyIssue::UnionMissing(a, b) => write!(f, "union of {a} and {b} is not open"),
            TopologyIssue::IntersectionMissing(a, b) => {
                write!(f, "intersection of {a} and {b} is not open")
            }
            TopologyIssue::OutOfRange(a) => write!(f, "{a} contains points outside the carrier"),
        }
    }
}

/// Checks that `opens` is literally a topology: contains `∅` and `X` and is
/// closed under pairwise union and intersection.
pub fn validate_topology(n: usize, opens: &[PointSet]) -> Vec<TopologyIssue> {
    let full = PointSet::full(n);
    let mut issues = Vec::new();
    if let Some(&bad) = opens.iter().find(|a| !a.is_subset(full)) {
        issues.push(TopologyIssue::OutOfRange(bad));
        return issues;
    }
    if !opens.contains(&PointSet::EMPTY) {
        issues.push(TopologyIssue::MissingEmpty);
    }
    if !opens.contains(&full) {
        issues.push(TopologyIssue::MissingCarrier);
    }
    for (k, &a) in opens.iter().enumerate() {
        for &b in &opens[k + 1..] {
            if !opens.contains(&a.union(b)) {
                issues.push(TopologyIssue::UnionMissing(a, b));
            }
            if !opens.contains(&a.intersection(b)) {
                issues.push(TopologyIssue::IntersectionMissing(a, b));
            }
        }
    }
    issues
}

impl FiniteTopology {
    /// Builds from minimal neighborhoods; `nbhd` must describe a preorder.
    fn from_nbhd(n: usize, nbhd: Vec<PointSet>) -> Self {
        debug_assert!((0..n).all(|x| nbhd[x].contains(x)));
        debug_assert!((0..n).all(|x| nbhd[x].iter().all(|y| nbhd[y].is_subset(nbhd[x]))));
        FiniteTopology { n, nbhd }
    }

    pub fn indiscrete(n: usize) -> Self {
        FiniteTopology::from_nbhd(n, vec![PointSet::full(n); n])
    }

    pub fn discrete(n: usize) -> Self {
        FiniteTopology::from_nbhd(n, (0..n).map(PointSet::singleton).collect())
    }

    /// From a list of opens; `∅` and `X` are implied. The list must already
    /// be closed under union and intersection.
    pub fn from_opens(n: usize, opens: &[PointSet]) -> Result<Self> {
        check_size(n)?;
        let mut all = opens.to_vec();
        all.push(PointSet::EMPTY);
        all.push(PointSet::full(n));
        all.sort();
        all.dedup();
        if let Some(issue) = validate_topology(n, &all).first() {
            return Err(Error::Validation {
                object: "topology".into(),
                clause: issue.to_string(),
            });
        }
        let nbhd = (0..n)
            .map(|x| {
                all.iter()
                    .filter(|u| u.contains(x))
                    .fold(PointSet::full(n), |acc, u| acc.intersection(*u))
            })
            .collect();
        Ok(FiniteTopology::from_nbhd(n, nbhd))
    }

    /// Smallest topology containing every set of `sets`. Finite intersections
    /// of subbasis sets form a base, so `N(x)` is the intersection of the
    /// subbasis sets containing `x`.
    pub fn from_subbasis(n: usize, sets: &[PointSet]) -> Result<Self> {
        check_size(n)?;
        let full = PointSet::full(n);
        if let Some(bad) = sets.iter().find(|a| !a.is_subset(full)) {
            return Err(Error::InvalidInput(format!(
                "{bad} is not inside a {n}-point carrier"
            )));
        }
        let nbhd = (0..n)
            .map(|x| {
                sets.iter()
                    .filter(|s| s.contains(x))
                    .fold(full, |acc, s| acc.intersection(*s))
            })
            .collect();
        Ok(FiniteTopology::from_nbhd(n, nbhd))
    }

    /// Opens are the down-sets of `le`, where `le.contains(x, y)` means `x <= y`.
    pub fn from_preorder(le: &Relation) -> Result<Self> {
        let n = le.len_points();
        check_size(n)?;
        if !le.is_reflexive() || !le.is_transitive() {
            return Err(Error::InvalidInput("relation is not a preorder".into()));
        }
        let nbhd = (0..n)
            .map(|y| PointSet::from_indices((0..n).filter(|&x| le.contains(x, y))))
            .collect();
        Ok(FiniteTopology::from_nbhd(n, nbhd))
    }

    /// `x <= y ⟺ x ∈ N(y)`.
    pub fn to_preorder(&self) -> Relation {
        Relation::from_fn(self.n, |x, y| self.nbhd[y].contains(x))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn min_neighborhood(&self, x: usize) -> PointSet {
        self.nbhd[x]
    }

    pub fn neighborhoods(&self) -> &[PointSet] {
        &self.nbhd
    }

    pub fn is_open(&self, u: PointSet) -> bool {
        u.is_subset(PointSet::full(self.n)) && u.iter().all(|x| self.nbhd[x].is_subset(u))
    }

    /// All opens in ascending bitmask order.
    pub fn opens(&self) -> Result<Vec<PointSet>> {
        if self.n > OPEN_LISTING_LIMIT {
            return Err(Error::TooLarge(format!(
                "listing opens of a {}-point topology (limit {OPEN_LISTING_LIMIT})",
                self.n
            )));
        }
        Ok((0..1u64 << self.n)
            .map(PointSet)
            .filter(|&u| self.is_open(u))
            .collect())
    }

    /// Every open of `self` is open in `other`.
    pub fn is_coarser_or_equal(&self, other: &FiniteTopology) -> bool {
        self.n == other.n && (0..self.n).all(|x| other.nbhd[x].is_subset(self.nbhd[x]))
    }
}

impl fmt::Display for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.opens() {
            Ok(opens) => {
                f.write_str("{")?;
                for (k, u) in opens.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{u}")?;
                }
                f.write_str("}")
            }
            Err(_) => write!(f, "preorder {}", self.to_preorder()),
        }
    }
}

/// Topology generated by every legal ball of every metric in `family`.
pub fn topology_from_family(n: usize, family: &[WeakPseudoMetric]) -> Result<FiniteTopology> {
    let mut sets = Vec::new();
    for d in family {
        same_carrier(n, d.len())?;
        for x in 0..n {
            sets.extend(ball_family(d, x).into_iter().map(|b| b.set));
        }
    }
    FiniteTopology::from_subbasis(n, &sets)
}

/// The topology of all balls of all members of `L(B)`:
/// `N(x) = {x} ∪ {xi : s(xi, x) = 0}`.
pub fn topology_from_structure(b: &StructureBase) -> FiniteTopology {
    let z = b.zero_relation();
    let nbhd = (0..b.len()).map(|x| z.row(x).with(x)).collect();
    FiniteTopology::from_nbhd(b.len(), nbhd)
}

pub fn min_neighborhood(tau: &FiniteTopology, x: usize) -> PointSet {
    tau.min_neighborhood(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Continuity {
    Continuous,
    /// `open` is open in the target but its preimage is not; `point` lies in
    /// the preimage without its minimal neighborhood.
    Discontinuous {
        point: usize,
        open: PointSet,
    },
}

impl Continuity {
    pub fn holds(self) -> bool {
        self == Continuity::Continuous
    }
}

fn check_map(f: &PointMap, tx: &FiniteTopology, ty: &FiniteTopology) -> Result<()> {
    same_carrier(f.source_len(), tx.len())?;
    same_carrier(f.target_len(), ty.len())
}

/// Pointwise test `f(N(x)) ⊆ N(f(x))`.
pub fn is_continuous(f: &PointMap, tx: &FiniteTopology, ty: &FiniteTopology) -> Result<Continuity> {
    check_map(f, tx, ty)?;
    for x in 0..tx.len() {
        let target = ty.min_neighborhood(f.apply(x));
        if !f.image(tx.min_neighborhood(x)).is_subset(target) {
            return Ok(Continuity::Discontinuous {
                point: x,
                open: target,
            });
        }
    }
    Ok(Continuity::Continuous)
}

/// Definition-level test: the preimage of every open is open.
pub fn is_continuous_by_opens(
    f: &PointMap,
    tx: &FiniteTopology,
    ty: &FiniteTopology,
) -> Result<Continuity> {
    check_map(f, tx, ty)?;
    for v in ty.opens()? {
        let pre = f.preimage(v);
        if let Some(point) = pre.iter().find(|&x| !tx.min_neighborhood(x).is_subset(pre)) {
            return Ok(Continuity::Discontinuous { point, open: v });
        }
    }
    Ok(Continuity::Continuous)
}

/// Restartable stream of all labeled topologies on `n` points.
///
/// Candidates are indexed by the off-diagonal entries of the preorder
/// matrix read row-major, the first entry being the most significant bit, so
/// ascending index order is lexicographic order of the relation matrix.
#[derive(Debug, Clone)]
pub struct TopologyStream {
    n: usize,
    cells: Vec<(usize, usize)>,
    next: u64,
}

impl TopologyStream {
    /// Number of candidate matrices; valid start positions are below this.
    pub fn candidates(&self) -> u64 {
        1u64 << self.cells.len()
    }

    /// Resumes the stream at candidate index `start`.
    pub fn from_index(mut self, start: u64) -> Self {
        self.next = start;
        self
    }

    fn relation(&self, code: u64) -> Relation {
        let m = self.cells.len();
        let mut r = Relation::diagonal(self.n);
        for (t, &(i, j)) in self.cells.iter().enumerate() {
            if (code >> (m - 1 - t)) & 1 == 1 {
                r.insert(i, j);
            }
        }
        r
    }
}

impl Iterator for TopologyStream {
    /// Candidate index and the topology it encodes.
    type Item = (u64, FiniteTopology);

    fn next(&mut self) -> Option<Self::Item> {
        while self.next < self.candidates() {
            let code = self.next;
            self.next += 1;
            let r = self.relation(code);
            if r.is_transitive() {
                let tau = FiniteTopology::from_preorder(&r).expect("transitive and reflexive");
                return Some((code, tau));
            }
        }
        None
    }
}

pub fn enumerate_topologies(n: usize) -> Result<TopologyStream> {
    if n > ENUMERATION_MAX {
        return Err(Error::EnumerationLimit {
            n,
            max: ENUMERATION_MAX,
        });
    }
    check_size(n)?;
    let cells = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    Ok(TopologyStream { n, cells, next: 0 })
}
