//! Structures generated by a finite base of weak pseudo-metrics.
//!
//! On a finite carrier the generated structure is the down-closed family
//! `{d : d <= alpha * s}` where `s` is the pointwise maximum (envelope) of the
//! generators. Because `alpha` is unconstrained, domination reduces to two
//! relational conditions: `d` must vanish wherever `s` does, and `d` may only
//! be infinite where `s` is. Every query below is answered from those
//! relations; the ratio `alpha` is reported as a certificate.

use std::fmt;

use num::{One, Zero};

use crate::error::{same_carrier, Error, Result};
use crate::metric::{sum_metric, sup_metric, PreMetricForm, WeakPseudoMetric};
use crate::points::{PointSet, Relation};
use crate::topology::FiniteTopology;
use crate::value::{ExtValue, Mode, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Every generator vanishes on the whole diagonal.
    Pseudo,
    Weak,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Pseudo => "pseudo",
            Kind::Weak => "weak",
        })
    }
}

/// Why `d <= alpha * s` fails at a pair for every `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominationFailure {
    /// `s = 0 < d`.
    Zero(usize, usize),
    /// `s` finite, `d = inf`.
    Infinite(usize, usize),
}

impl DominationFailure {
    pub fn pair(self) -> (usize, usize) {
        match self {
            DominationFailure::Zero(i, j) | DominationFailure::Infinite(i, j) => (i, j),
        }
    }
}

impl fmt::Display for DominationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DominationFailure::Zero(i, j) => write!(
                f,
                "dominating form is 0 at ({i},{j}) but the candidate is positive"
            ),
            DominationFailure::Infinite(i, j) => write!(
                f,
                "candidate is inf at ({i},{j}) where the dominating form is finite"
            ),
        }
    }
}

/// Smallest `alpha > 0` with `d <= alpha * s` on `pairs` (all pairs when
/// `None`). When every ratio is zero any `alpha` works and `1` is returned.
pub fn domination_ratio(
    d: &PreMetricForm,
    s: &PreMetricForm,
    pairs: Option<&Relation>,
) -> Result<Rational, DominationFailure> {
    let n = d.len();
    debug_assert_eq!(n, s.len());
    let mut alpha = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            if let Some(p) = pairs {
                if !p.contains(i, j) {
                    continue;
                }
            }
            match (d.get(i, j), s.get(i, j)) {
                (_, ExtValue::Infinite) => {}
                (ExtValue::Infinite, _) => return Err(DominationFailure::Infinite(i, j)),
                (ExtValue::Finite(dv), ExtValue::Finite(sv)) => {
                    if sv.is_zero() {
                        if !dv.is_zero() {
                            return Err(DominationFailure::Zero(i, j));
                        }
                    } else {
                        let r = dv / sv;
                        if r > alpha {
                            alpha = r;
                        }
                    }
                }
            }
        }
    }
    if alpha.is_zero() {
        alpha = Rational::one();
    }
    Ok(alpha)
}

/// `d <= alpha * s` checked entry by entry.
pub fn dominated_by(d: &PreMetricForm, alpha: &Rational, s: &PreMetricForm) -> bool {
    let n = d.len();
    n == s.len() && (0..n).all(|i| (0..n).all(|j| *d.get(i, j) <= s.get(i, j).scale(alpha)))
}

/// A finite base together with its cached envelope and zero relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureBase {
    generators: Vec<WeakPseudoMetric>,
    kind: Kind,
    envelope: PreMetricForm,
    zero: Relation,
    infinite: Relation,
}

impl StructureBase {
    pub fn new(generators: Vec<WeakPseudoMetric>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidInput("a base needs at least one generator".into()))?;
        let n = first.len();
        let mut envelope = first.form().clone();
        for g in &generators[1..] {
            same_carrier(n, g.len())?;
            envelope = sup_metric(&envelope, g)?;
        }
        let kind = if generators.iter().all(WeakPseudoMetric::is_pseudo) {
            Kind::Pseudo
        } else {
            Kind::Weak
        };
        let zero = envelope.zero_relation();
        let infinite = envelope.infinite_relation();
        Ok(StructureBase {
            generators,
            kind,
            envelope,
            zero,
            infinite,
        })
    }

    pub fn single(d: WeakPseudoMetric) -> Self {
        StructureBase::new(vec![d]).expect("one generator always forms a base")
    }

    pub fn len(&self) -> usize {
        self.envelope.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envelope.is_empty()
    }

    pub fn generators(&self) -> &[WeakPseudoMetric] {
        &self.generators
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn mode(&self) -> Mode {
        self.envelope.mode()
    }

    /// Pointwise maximum of all generators.
    pub fn envelope(&self) -> &PreMetricForm {
        &self.envelope
    }

    /// The envelope as a weak pseudo-metric, when the base is proper.
    pub fn envelope_metric(&self) -> Option<WeakPseudoMetric> {
        self.is_proper()
            .then(|| WeakPseudoMetric::from_form_unchecked(self.envelope.clone()))
    }

    /// `Z(s)`, the intersection of the generators' zero relations.
    pub fn zero_relation(&self) -> &Relation {
        &self.zero
    }

    /// Pairs where the envelope is infinite.
    pub fn infinite_relation(&self) -> &Relation {
        &self.infinite
    }

    /// The envelope vanishes at some diagonal point. A partial equivalence
    /// relation with no reflexive pair is empty, so this is `Z(s) != ∅`.
    pub fn is_proper(&self) -> bool {
        self.zero.meets_diagonal()
    }
}

/// The envelope of a base, flagged improper when it vanishes nowhere on the diagonal.
pub fn envelope(b: &StructureBase) -> (&PreMetricForm, bool) {
    (b.envelope(), b.is_proper())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonMemberReason {
    ZeroViolated,
    InfiniteViolated,
}

/// Outcome of a membership query, checkable without trusting the decider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipCertificate {
    /// `d <= alpha * s` pointwise with the least such `alpha`.
    Member { alpha: Rational },
    NonMember {
        pair: (usize, usize),
        reason: NonMemberReason,
    },
}

impl MembershipCertificate {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipCertificate::Member { .. })
    }

    pub fn alpha(&self) -> Option<&Rational> {
        match self {
            MembershipCertificate::Member { alpha } => Some(alpha),
            MembershipCertificate::NonMember { .. } => None,
        }
    }
}

/// Decides `d ∈ L(B)`.
pub fn is_member(d: &WeakPseudoMetric, b: &StructureBase) -> Result<MembershipCertificate> {
    same_carrier(b.len(), d.len())?;
    if b.kind() == Kind::Pseudo && !d.is_pseudo() {
        return Err(Error::KindMismatch(
            "weak candidate tested against a pseudo-metric base".into(),
        ));
    }
    Ok(match domination_ratio(d, b.envelope(), None) {
        Ok(alpha) => {
            assert!(
                dominated_by(d, &alpha, b.envelope()),
                "membership certificate must re-validate"
            );
            MembershipCertificate::Member { alpha }
        }
        Err(DominationFailure::Zero(i, j)) => MembershipCertificate::NonMember {
            pair: (i, j),
            reason: NonMemberReason::ZeroViolated,
        },
        Err(DominationFailure::Infinite(i, j)) => MembershipCertificate::NonMember {
            pair: (i, j),
            reason: NonMemberReason::InfiniteViolated,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDominator {
    pub pair: (usize, usize),
    pub dominator: usize,
    pub alpha: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseCriterion {
    /// For every pair `(i, j)`, `b_i ∨ b_j <= alpha * b_dominator`.
    Base { dominators: Vec<PairDominator> },
    /// No member of the family dominates `b_i ∨ b_j`.
    NotBase { pair: (usize, usize) },
}

impl BaseCriterion {
    pub fn holds(&self) -> bool {
        matches!(self, BaseCriterion::Base { .. })
    }
}

/// Decides whether `family` is a base for some structure, i.e. whether the
/// sup of every pair is dominated by a scaled member of the family.
pub fn is_base_for_structure(family: &[WeakPseudoMetric]) -> Result<BaseCriterion> {
    let n = family
        .first()
        .ok_or_else(|| Error::InvalidInput("empty family".into()))?
        .len();
    for d in family {
        same_carrier(n, d.len())?;
    }
    let mut dominators = Vec::new();
    for i in 0..family.len() {
        for j in i..family.len() {
            let sup = sup_metric(&family[i], &family[j])?;
            let found = family
                .iter()
                .enumerate()
                .find_map(|(k, b)| domination_ratio(&sup, b, None).ok().map(|alpha| (k, alpha)));
            match found {
                Some((dominator, alpha)) => dominators.push(PairDominator {
                    pair: (i, j),
                    dominator,
                    alpha,
                }),
                None => return Ok(BaseCriterion::NotBase { pair: (i, j) }),
            }
        }
    }
    Ok(BaseCriterion::Base { dominators })
}

pub const DEFAULT_SUBSET_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupEntry {
    /// Indices into the family, ascending.
    pub subset: Vec<usize>,
    pub form: PreMetricForm,
    /// The sup vanishes at a diagonal point.
    pub valid: bool,
}

/// Sups of all non-empty subsets of size at most `cap`.
pub fn sup_closure(family: &[WeakPseudoMetric], cap: usize, limit: u64) -> Result<Vec<SupEntry>> {
    let k = family.len();
    if k >= 64 || (1u64 << k) > limit {
        return Err(Error::SubsetExplosion { k, limit });
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << k) {
        if mask.count_ones() as usize > cap {
            continue;
        }
        let subset: Vec<usize> = PointSet(mask).iter().collect();
        let mut form = family[subset[0]].form().clone();
        for &i in &subset[1..] {
            form = sup_metric(&form, &family[i])?;
        }
        let valid = form.has_diagonal_zero();
        out.push(SupEntry {
            subset,
            form,
            valid,
        });
    }
    out.sort_by(|a, b| {
        a.subset
            .len()
            .cmp(&b.subset.len())
            .then_with(|| a.subset.cmp(&b.subset))
    });
    Ok(out)
}

/// Decides `L(B1) = L(B2)`: equal zero relations and equal infinity patterns.
pub fn structures_equal(b1: &StructureBase, b2: &StructureBase) -> Result<bool> {
    same_carrier(b1.len(), b2.len())?;
    if b1.kind() != b2.kind() {
        return Err(Error::KindMismatch(format!(
            "comparing a {} base with a {} base",
            b1.kind(),
            b2.kind()
        )));
    }
    Ok(
        b1.zero_relation() == b2.zero_relation()
            && b1.infinite_relation() == b2.infinite_relation(),
    )
}

/// The metric that is `0` on `A x A` and `1` elsewhere. `A` must be non-empty.
pub fn characteristic_metric(n: usize, a: PointSet) -> WeakPseudoMetric {
    assert!(
        !a.is_empty(),
        "the empty set has no characteristic weak pseudo-metric"
    );
    let form = PreMetricForm::from_fn_unchecked(n, Mode::Strict, |i, j| {
        if a.contains(i) && a.contains(j) {
            ExtValue::zero()
        } else {
            ExtValue::int(1)
        }
    });
    WeakPseudoMetric::from_form_unchecked(form)
}

/// Explains why `ptau_base` has no generator for the empty open set.
pub const PTAU_EMPTY_NOTE: &str =
    "the empty open set is skipped: its characteristic metric is 1 everywhere and vanishes nowhere on the diagonal";

/// One characteristic metric per non-empty open set, in ascending mask order.
pub fn ptau_base(tau: &FiniteTopology) -> Result<StructureBase> {
    let n = tau.len();
    let gens = tau
        .opens()?
        .into_iter()
        .filter(|a| !a.is_empty())
        .map(|a| characteristic_metric(n, a))
        .collect();
    StructureBase::new(gens)
}

/// A non-empty list of subsets of a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    n: usize,
    members: Vec<PointSet>,
    intersection_closed: bool,
}

impl SubsetFamily {
    pub fn new(n: usize, members: Vec<PointSet>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput(
                "a subset family must be non-empty".into(),
            ));
        }
        let full = PointSet::full(n);
        if let Some(bad) = members.iter().find(|m| !m.is_subset(full)) {
            return Err(Error::InvalidInput(format!(
                "set {bad} is not inside a {n}-point carrier"
            )));
        }
        let intersection_closed = members.iter().all(|a| {
            members
                .iter()
                .all(|b| members.contains(&a.intersection(*b)))
        });
        Ok(SubsetFamily {
            n,
            members,
            intersection_closed,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn is_intersection_closed(&self) -> bool {
        self.intersection_closed
    }

    /// Closes the family under pairwise intersection.
    pub fn intersection_closure(&self) -> SubsetFamily {
        let mut members = self.members.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for a in 0..members.len() {
                for b in 0..members.len() {
                    let c = members[a].intersection(members[b]);
                    if !members.contains(&c) {
                        members.push(c);
                        changed = true;
                    }
                }
            }
        }
        SubsetFamily::new(self.n, members).expect("closure of a valid family")
    }
}

/// Every entry of `d` on `A x A` is finite.
pub fn bounded_on(d: &PreMetricForm, a: PointSet) -> bool {
    a.iter().all(|i| a.iter().all(|j| d.get(i, j).is_finite()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundednessVerdict {
    pub holds: bool,
    /// Strict-mode metric: every entry is finite, so the answer carries no information.
    pub vacuous: bool,
    /// For a positive existential answer, a set where `d` is bounded; for a
    /// negative universal answer, a set where it is not.
    pub witness: Option<PointSet>,
}

/// `d` is bounded on `A x A` for some member `A`.
pub fn in_l1(d: &WeakPseudoMetric, family: &SubsetFamily) -> Result<BoundednessVerdict> {
    same_carrier(family.len(), d.len())?;
    let witness = family.members().iter().copied().find(|&a| bounded_on(d, a));
    Ok(BoundednessVerdict {
        holds: witness.is_some(),
        vacuous: d.mode() == Mode::Strict,
        witness,
    })
}

/// `d` is bounded on `A x A` for every member `A`.
pub fn in_l2(d: &WeakPseudoMetric, family: &SubsetFamily) -> Result<BoundednessVerdict> {
    same_carrier(family.len(), d.len())?;
    let witness = family
        .members()
        .iter()
        .copied()
        .find(|&a| !bounded_on(d, a));
    Ok(BoundednessVerdict {
        holds: witness.is_none(),
        vacuous: d.mode() == Mode::Strict,
        witness,
    })
}

/// Row-major mixed-radix indexing of a finite product of carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCarrier {
    sizes: Vec<usize>,
}

impl ProductCarrier {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
        match total {
            Some(t) if t <= crate::points::MAX_POINTS => Ok(ProductCarrier { sizes }),
            _ => Err(Error::TooLarge(format!("product of sizes {sizes:?}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&x, &s)| acc * s + x)
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &s) in out.iter_mut().zip(&self.sizes).rev() {
            *slot = idx % s;
            idx /= s;
        }
        out
    }
}

/// `((x_i), (xi_i)) -> sum_i d_i(x_i, xi_i)` on the row-major product carrier.
pub fn product_form(factors: &[&PreMetricForm]) -> Result<PreMetricForm> {
    let carrier = ProductCarrier::new(factors.iter().map(|d| d.len()).collect())?;
    let mode = factors.iter().fold(Mode::Strict, |m, d| m.join(d.mode()));
    let tuples: Vec<Vec<usize>> = (0..carrier.len()).map(|p| carrier.tuple(p)).collect();
    Ok(PreMetricForm::from_fn_unchecked(
        carrier.len(),
        mode,
        |p, q| {
            factors
                .iter()
                .enumerate()
                .fold(ExtValue::zero(), |acc, (k, d)| {
                    &acc + d.get(tuples[p][k], tuples[q][k])
                })
        },
    ))
}

/// Product metric of weak pseudo-metrics. It vanishes at `((z_i), (z_i))`
/// whenever every `d_i(z_i, z_i) = 0`, so it is again a weak pseudo-metric.
pub fn product_metric(factors: &[&WeakPseudoMetric]) -> Result<WeakPseudoMetric> {
    let forms: Vec<&PreMetricForm> = factors.iter().map(|d| d.form()).collect();
    product_form(&forms)?.into_weak()
}

/// Base for the product structure. For proper factors this is the single
/// generator `sum_i s_i`; otherwise that sum vanishes nowhere on the diagonal
/// and the base lists every sum of one generator per factor instead, whose
/// envelope is again `sum_i s_i`.
pub fn product_base(bases: &[&StructureBase]) -> Result<StructureBase> {
    if bases.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    if bases.iter().all(|b| b.is_proper()) {
        let envs: Vec<&PreMetricForm> = bases.iter().map(|b| b.envelope()).collect();
        let g = product_form(&envs)?.into_weak()?;
        return StructureBase::new(vec![g]);
    }
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for b in bases {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                (0..b.generators().len()).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    let gens = combos
        .iter()
        .map(|c| {
            let fs: Vec<&WeakPseudoMetric> = c
                .iter()
                .zip(bases)
                .map(|(&k, b)| &b.generators()[k])
                .collect();
            product_metric(&fs)
        })
        .collect::<Result<Vec<_>>>()?;
    let base = StructureBase::new(gens)?;
    debug_assert_eq!(
        base.envelope(),
        &product_form(&bases.iter().map(|b| b.envelope()).collect::<Vec<_>>())?
    );
    Ok(base)
}

/// Sum of two metrics as a weak pseudo-metric, when it still vanishes on the diagonal.
pub fn checked_sum(d1: &PreMetricForm, d2: &PreMetricForm) -> Result<Option<WeakPseudoMetric>> {
    Ok(sum_metric(d1, d2)?.into_weak().ok())
}
