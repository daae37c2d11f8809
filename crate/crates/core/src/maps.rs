//! Point maps between finite carriers and their classification.
//!
//! A map is weak Lipschitz when every member of the target structure pulls
//! back below some member of the source structure. With a proper source
//! base, checking the target generators is enough and `alpha * s_X` is the
//! dominating member. With an improper source the sup of members can fall
//! out of the structure, so the decider also asks that every target member
//! pulls back to a form vanishing somewhere on the diagonal; members of an
//! improper target base may vanish at any single diagonal point, which turns
//! that clause into surjectivity.

use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{same_carrier, Error, Result};
use crate::metric::{pullback_metric, PreMetricForm, WeakPseudoMetric};
use crate::points::{check_size, PointSet, Relation};
use crate::structure::{
    dominated_by, domination_ratio, is_member, DominationFailure, Kind, StructureBase,
};
use crate::topology::{is_continuous, topology_from_structure, Continuity};
use crate::uniformity::{is_uc_map, uniformity_from_structure, UcVerdict};
use crate::value::{ExtValue, Mode, Rational};

/// A total map `0..source -> 0..target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointMap {
    target: usize,
    table: Vec<usize>,
}

impl PointMap {
    pub fn new(source: usize, target: usize, table: Vec<usize>) -> Result<Self> {
        check_size(source)?;
        check_size(target)?;
        same_carrier(source, table.len())?;
        if let Some((i, &t)) = table.iter().enumerate().find(|(_, &t)| t >= target) {
            return Err(Error::InvalidInput(format!(
                "point {i} maps to {t}, outside a {target}-point target"
            )));
        }
        Ok(PointMap { target, table })
    }

    pub fn identity(n: usize) -> Self {
        PointMap {
            target: n,
            table: (0..n).collect(),
        }
    }

    pub fn constant(source: usize, target: usize, value: usize) -> Result<Self> {
        PointMap::new(source, target, vec![value; source])
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn source_len(&self) -> usize {
        self.table.len()
    }

    pub fn target_len(&self) -> usize {
        self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn image(&self, a: PointSet) -> PointSet {
        PointSet::from_indices(a.iter().map(|i| self.table[i]))
    }

    pub fn preimage(&self, b: PointSet) -> PointSet {
        PointSet::from_indices((0..self.table.len()).filter(|&i| b.contains(self.table[i])))
    }

    pub fn is_surjective(&self) -> bool {
        self.image(PointSet::full(self.source_len())) == PointSet::full(self.target)
    }
}

impl fmt::Display for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.table.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A rational-valued function on a carrier, i.e. a map into the reals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMap {
    values: Vec<Rational>,
}

impl ScalarMap {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        check_size(values.len())?;
        Ok(ScalarMap { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn compose(&self, f: &PointMap) -> Result<ScalarMap> {
        same_carrier(self.len(), f.target_len())?;
        Ok(ScalarMap {
            values: f.table().iter().map(|&y| self.values[y].clone()).collect(),
        })
    }

    /// Least `alpha` with `|phi(u) - phi(v)| <= alpha * s(u, v)` for every
    /// pair, or `None` when `phi` separates a pair where `s` vanishes.
    ///
    /// The reals carry the structure generated by `|t - t'|`, which vanishes
    /// on the whole diagonal, so this is exactly the weak Lipschitz condition.
    pub fn lipschitz_constant(&self, b: &StructureBase) -> Option<Rational> {
        assert_eq!(self.len(), b.len());
        let n = self.len();
        let gap = PreMetricForm::from_fn_unchecked(n, Mode::Strict, |i, j| {
            ExtValue::Finite((&self.values[i] - &self.values[j]).abs())
        });
        domination_ratio(&gap, b.envelope(), None).ok()
    }

    pub fn is_weak_lipschitz(&self, b: &StructureBase) -> bool {
        self.lipschitz_constant(b).is_some()
    }
}

fn check_carriers(f: &PointMap, bx: &StructureBase, by: &StructureBase) -> Result<()> {
    same_carrier(bx.len(), f.source_len())?;
    same_carrier(by.len(), f.target_len())
}

/// Pairs on which every member of `L(B)` vanishes. For a proper base this is
/// `Z(s)`. An improper base on two or more points has, for each `y`, a
/// member vanishing only at `(y, y)`, so the common zero set is empty.
pub fn forced_zero(b: &StructureBase) -> Relation {
    if b.is_proper() {
        b.zero_relation().clone()
    } else if b.len() == 1 {
        Relation::full(1)
    } else {
        Relation::empty(b.len())
    }
}

/// The member of `L(B)` that is `0` at `(z, z)`, `inf` where the envelope
/// is infinite, and `m` elsewhere. Its zero relation `{(z, z)}` is a partial
/// equivalence, so the triangle inequality holds; for an improper base it
/// contains `Z(s) = ∅`.
pub fn point_member(b: &StructureBase, z: usize, m: &Rational) -> WeakPseudoMetric {
    assert!(!b.is_proper() && m.is_positive());
    let s = b.envelope();
    let form = PreMetricForm::from_fn_unchecked(b.len(), s.mode(), |u, v| {
        if u == z && v == z {
            ExtValue::zero()
        } else if s.get(u, v).is_infinite() {
            ExtValue::Infinite
        } else {
            ExtValue::Finite(m.clone())
        }
    });
    WeakPseudoMetric::from_form_unchecked(form)
}

/// `pullback(f, b) <= alpha * dominating` on the checked pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCertificate {
    pub generator: usize,
    pub dominating: WeakPseudoMetric,
    pub alpha: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WlWitness {
    /// `s_X = 0` at `pair` but the pulled-back generator is positive there.
    Zero {
        generator: usize,
        pair: (usize, usize),
    },
    /// The pulled-back generator is `inf` at `pair` where `s_X` is finite.
    Infinite {
        generator: usize,
        pair: (usize, usize),
    },
    /// Improper source: this target member pulls back to a form that is
    /// positive on every checked diagonal pair, so no source member, which
    /// must vanish at some diagonal point, can dominate it.
    NoDiagonalZero { member: WeakPseudoMetric },
}

impl fmt::Display for WlWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WlWitness::Zero {
                generator,
                pair: (a, b),
            } => {
                write!(
                    f,
                    "generator {generator} pulls back positive at ({a},{b}) where s_X = 0"
                )
            }
            WlWitness::Infinite {
                generator,
                pair: (a, b),
            } => {
                write!(
                    f,
                    "generator {generator} pulls back to inf at ({a},{b}) where s_X is finite"
                )
            }
            WlWitness::NoDiagonalZero { member } => {
                write!(
                    f,
                    "target member {member} pulls back without a diagonal zero"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WlVerdict {
    Holds(Vec<GeneratorCertificate>),
    Fails(WlWitness),
}

impl WlVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, WlVerdict::Holds(_))
    }
}

/// Decides domination of every target member on `pairs` (a set of source pairs).
fn dominate_on(
    f: &PointMap,
    bx: &StructureBase,
    by: &StructureBase,
    pairs: &Relation,
) -> WlVerdict {
    let s_x = bx.envelope();
    let pulled: Vec<PreMetricForm> = by
        .generators()
        .iter()
        .map(|b| pullback_metric(f, b).expect("carriers checked"))
        .collect();
    let mut alphas = Vec::with_capacity(pulled.len());
    for (g, pb) in pulled.iter().enumerate() {
        match domination_ratio(pb, s_x, Some(pairs)) {
            Ok(a) => alphas.push(a),
            Err(DominationFailure::Zero(i, j)) => {
                return WlVerdict::Fails(WlWitness::Zero {
                    generator: g,
                    pair: (i, j),
                })
            }
            Err(DominationFailure::Infinite(i, j)) => {
                return WlVerdict::Fails(WlWitness::Infinite {
                    generator: g,
                    pair: (i, j),
                })
            }
        }
    }
    if let Some(s) = bx.envelope_metric() {
        return WlVerdict::Holds(
            alphas
                .into_iter()
                .enumerate()
                .map(|(generator, alpha)| GeneratorCertificate {
                    generator,
                    dominating: s.clone(),
                    alpha,
                })
                .collect(),
        );
    }

    let n = bx.len();
    let free = (0..n).find(|&z| !pairs.contains(z, z));
    if free.is_none() {
        let image = f.image(PointSet::full(n));
        if let Some(s_y) = by.envelope_metric() {
            if image
                .intersection(by.zero_relation().reflexive_points())
                .is_empty()
            {
                return WlVerdict::Fails(WlWitness::NoDiagonalZero { member: s_y });
            }
        } else if let Some(y) = (0..by.len()).find(|&y| !image.contains(y)) {
            return WlVerdict::Fails(WlWitness::NoDiagonalZero {
                member: point_member(by, y, &Rational::one()),
            });
        }
    }
    let certs = pulled
        .iter()
        .enumerate()
        .map(|(generator, pb)| {
            let z = free
                .or_else(|| (0..n).find(|&z| pb.get(z, z).is_zero()))
                .expect("a diagonal zero survives the pullback");
            let m = pairs
                .pairs()
                .filter(|&(u, v)| s_x.get(u, v).is_finite())
                .filter_map(|(u, v)| pb.get(u, v).finite().cloned())
                .max()
                .filter(|m| m.is_positive())
                .unwrap_or_else(Rational::one);
            GeneratorCertificate {
                generator,
                dominating: point_member(bx, z, &m),
                alpha: Rational::one(),
            }
        })
        .collect();
    WlVerdict::Holds(certs)
}

/// Re-checks a certificate without trusting the decider.
pub fn certificate_holds(
    f: &PointMap,
    bx: &StructureBase,
    by: &StructureBase,
    pairs: &Relation,
    cert: &GeneratorCertificate,
) -> bool {
    let Some(b) = by.generators().get(cert.generator) else {
        return false;
    };
    let member = is_member(&cert.dominating, bx).is_ok_and(|c| c.is_member());
    let pb = pullback_metric(f, b).expect("carriers checked");
    member
        && pairs
            .pairs()
            .all(|(u, v)| *pb.get(u, v) <= cert.dominating.get(u, v).scale(&cert.alpha))
}

pub fn is_weak_lipschitz(
    f: &PointMap,
    bx: &StructureBase,
    by: &StructureBase,
) -> Result<WlVerdict> {
    check_carriers(f, bx, by)?;
    Ok(dominate_on(f, bx, by, &Relation::full(bx.len())))
}

/// The weak Lipschitz test restricted to pseudo-metric structures.
pub fn is_lipschitz(f: &PointMap, bx: &StructureBase, by: &StructureBase) -> Result<WlVerdict> {
    if bx.kind() != Kind::Pseudo || by.kind() != Kind::Pseudo {
        return Err(Error::KindMismatch(
            "Lipschitz maps need pseudo-metric bases on both sides".into(),
        ));
    }
    is_weak_lipschitz(f, bx, by)
}

/// A member of `L(BX)` with the least scale dominating the pullback of `b`.
pub fn lipschitz_witness(
    f: &PointMap,
    bx: &StructureBase,
    b: &WeakPseudoMetric,
) -> Result<(WeakPseudoMetric, Rational)> {
    same_carrier(bx.len(), f.source_len())?;
    let pb = pullback_metric(f, b)?;
    let s_x = bx.envelope();
    let alpha = domination_ratio(&pb, s_x, None).map_err(|e| {
        let (i, j) = e.pair();
        Error::NotDominated(i, j)
    })?;
    if let Some(s) = bx.envelope_metric() {
        debug_assert!(dominated_by(&pb, &alpha, &s));
        return Ok((s, alpha));
    }
    let z = (0..bx.len())
        .find(|&z| pb.get(z, z).is_zero())
        .ok_or(Error::NotDominated(0, 0))?;
    let m = (0..bx.len())
        .flat_map(|u| (0..bx.len()).map(move |v| (u, v)))
        .filter(|&(u, v)| s_x.get(u, v).is_finite())
        .filter_map(|(u, v)| pb.get(u, v).finite().cloned())
        .max()
        .filter(|m| m.is_positive())
        .unwrap_or_else(Rational::one);
    let d = point_member(bx, z, &m);
    debug_assert!(dominated_by(&pb, &Rational::one(), &d));
    Ok((d, Rational::one()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalVerdict {
    /// Certificates per point, valid on `N(x) x N(x)`.
    Holds(Vec<(usize, Vec<GeneratorCertificate>)>),
    Fails {
        point: usize,
        witness: WlWitness,
    },
}

impl LocalVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LocalVerdict::Holds(_))
    }
}

fn square(a: PointSet, n: usize) -> Relation {
    Relation::from_fn(n, |u, v| a.contains(u) && a.contains(v))
}

/// Domination on `N(x) x N(x)` for every `x`, with `N(x)` the minimal
/// neighborhood in the topology of the source structure. Any neighborhood
/// contains `N(x)` and fewer pairs only weaken the requirement, so the
/// minimal one decides.
pub fn is_locally_weak_lipschitz(
    f: &PointMap,
    bx: &StructureBase,
    by: &StructureBase,
) -> Result<LocalVerdict> {
    check_carriers(f, bx, by)?;
    let tau = topology_from_structure(bx);
    let mut certs = Vec::new();
    for x in 0..bx.len() {
        match dominate_on(f, bx, by, &square(tau.min_neighborhood(x), bx.len())) {
            WlVerdict::Holds(c) => certs.push((x, c)),
            WlVerdict::Fails(witness) => return Ok(LocalVerdict::Fails { point: x, witness }),
        }
    }
    Ok(LocalVerdict::Holds(certs))
}

/// Cross-check for [`is_locally_weak_lipschitz`]: tries every open
/// neighborhood of every point instead of the minimal one.
pub fn locally_weak_lipschitz_by_neighborhoods(
    f: &PointMap,
    bx: &StructureBase,
    by: &StructureBase,
) -> Result<bool> {
    check_carriers(f, bx, by)?;
    let n = bx.len();
    let opens = topology_from_structure(bx).opens()?;
    Ok((0..n).all(|x| {
        opens
            .iter()
            .filter(|u| u.contains(x))
            .any(|&u| dominate_on(f, bx, by, &square(u, n)).holds())
    }))
}

/// Strict: `d_Y(f x, f xi) < d_X(x, xi)` inside the ball, as written.
/// Relaxed: the same with `<=`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RemarkMode {
    Strict,
    Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemarkFailure {
    /// Every member vanishes at `(x, x)`, so `d_X(x, x) = 0` and the strict
    /// comparison at `xi = x` reads `d_Y(fx, fx) < 0`.
    ZeroDiagonal,
    /// `xi` is at distance 0 from `x` in every member, so it lies in every
    /// ball, but some target member separates `f x` from `f xi`.
    ClassNotCollapsed { xi: usize },
    /// Some target member is infinite at `(f x, f x)`, so no radius exceeds it.
    InfiniteAtImage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemarkVerdict {
    Holds,
    Fails { point: usize, reason: RemarkFailure },
}

impl RemarkVerdict {
    pub fn holds(self) -> bool {
        self == RemarkVerdict::Holds
    }
}

/// Decides the ball formulation of local Lipschitz continuity for all target members.
pub fn locally_lipschitz_remark_check(
    f: &PointMap,
    bx: &StructureBase,
    by: &StructureBase,
    mode: RemarkMode,
) -> Result<RemarkVerdict> {
    check_carriers(f, bx, by)?;
    let forced_x = forced_zero(bx);
    let forced_y = forced_zero(by);
    let s_y = by.envelope();
    for x in 0..bx.len() {
        let fx = f.apply(x);
        let fail = |reason| Ok(RemarkVerdict::Fails { point: x, reason });
        if forced_x.contains(x, x) {
            if mode == RemarkMode::Strict {
                return fail(RemarkFailure::ZeroDiagonal);
            }
            if let Some(xi) = forced_x
                .row(x)
                .iter()
                .find(|&xi| !forced_y.contains(fx, f.apply(xi)))
            {
                return fail(RemarkFailure::ClassNotCollapsed { xi });
            }
        } else if s_y.get(fx, fx).is_infinite() {
            return fail(RemarkFailure::InfiniteAtImage);
        }
    }
    Ok(RemarkVerdict::Holds)
}

/// For one target member `d_y` and point `x`, a source member `d_X` and a
/// radius `r > d_X(x, x)` satisfying the ball condition, when one exists.
pub fn remark_certificate(
    f: &PointMap,
    bx: &StructureBase,
    d_y: &PreMetricForm,
    x: usize,
    mode: RemarkMode,
) -> Option<(WeakPseudoMetric, Rational)> {
    let n = bx.len();
    let forced = forced_zero(bx);
    let fx = f.apply(x);
    let metric = |g: &dyn Fn(usize, usize) -> ExtValue| {
        WeakPseudoMetric::from_form_unchecked(PreMetricForm::from_fn_unchecked(n, Mode::Strict, g))
    };
    if forced.contains(x, x) {
        if mode == RemarkMode::Strict {
            return None;
        }
        // 0 inside the class of x and inside its complement, 1 across
        let class = forced.row(x);
        if !class.iter().all(|xi| d_y.get(fx, f.apply(xi)).is_zero()) {
            return None;
        }
        let d = metric(&|u, v| ExtValue::int(u64::from(class.contains(u) != class.contains(v))));
        return Some((d, Rational::one()));
    }
    let here = d_y.get(fx, fx).finite()?.clone();
    let a = match mode {
        RemarkMode::Relaxed => here,
        RemarkMode::Strict => here + Rational::one(),
    };
    // `a` at (x, x), `a + 2` between x and the rest, 0 elsewhere: the ball
    // of radius `a + 1` around x is {x}
    let k = &a + Rational::from_integer(2.into());
    let d = metric(&|u, v| match (u == x, v == x) {
        (true, true) => ExtValue::Finite(a.clone()),
        (false, false) => ExtValue::zero(),
        _ => ExtValue::Finite(k.clone()),
    });
    if !d.has_diagonal_zero() {
        return None;
    }
    Some((d, a + Rational::one()))
}

/// Checks a certificate from [`remark_certificate`] against the definition.
pub fn remark_certificate_holds(
    f: &PointMap,
    bx: &StructureBase,
    d_x: &WeakPseudoMetric,
    r: &Rational,
    d_y: &PreMetricForm,
    x: usize,
    mode: RemarkMode,
) -> bool {
    let r = ExtValue::Finite(r.clone());
    if !is_member(d_x, bx).is_ok_and(|c| c.is_member()) || r <= *d_x.get(x, x) {
        return false;
    }
    (0..bx.len()).filter(|&xi| *d_x.get(x, xi) < r).all(|xi| {
        let lhs = d_y.get(f.apply(x), f.apply(xi));
        let rhs = d_x.get(x, xi);
        match mode {
            RemarkMode::Strict => lhs < rhs,
            RemarkMode::Relaxed => lhs <= rhs,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarVerdict {
    Holds,
    /// `s_X` vanishes at `pair` but its image is neither a single point nor
    /// a zero pair of `s_Y`; the witness `phi` separates the two images.
    Fails {
        pair: (usize, usize),
    },
}

impl ScalarVerdict {
    pub fn holds(self) -> bool {
        self == ScalarVerdict::Holds
    }
}

/// A real-valued `phi` on the target is weak Lipschitz iff it is constant on
/// `Z(s_Y)`-related pairs, so `phi ∘ f` is weak Lipschitz for all of them
/// iff `f` sends `Z(s_X)` pairs to equal or `Z(s_Y)`-related points.
pub fn is_scalar_weak_lipschitz(
    f: &PointMap,
    bx: &StructureBase,
    by: &StructureBase,
) -> Result<ScalarVerdict> {
    check_carriers(f, bx, by)?;
    let zy = by.zero_relation();
    let bad = bx.zero_relation().pairs().find(|&(a, b)| {
        let (fa, fb) = (f.apply(a), f.apply(b));
        fa != fb && !zy.contains(fa, fb)
    });
    Ok(match bad {
        Some(pair) => ScalarVerdict::Fails { pair },
        None => ScalarVerdict::Holds,
    })
}

/// Blocks on which weak Lipschitz scalar maps must be constant: the
/// `Z(s)`-classes and the singletons of non-reflexive points.
fn scalar_blocks(b: &StructureBase) -> Vec<PointSet> {
    let z = b.zero_relation();
    let mut blocks: Vec<PointSet> = Vec::new();
    for y in 0..b.len() {
        let block = if z.contains(y, y) {
            z.row(y)
        } else {
            PointSet::singleton(y)
        };
        if !blocks.contains(&block) {
            blocks.push(block);
        }
    }
    blocks
}

pub const SCALAR_BLOCK_LIMIT: usize = 16;

/// Every `{0, 1}`-valued weak Lipschitz function on the target.
pub fn scalar_test_functions(b: &StructureBase) -> Result<Vec<ScalarMap>> {
    let blocks = scalar_blocks(b);
    if blocks.len() > SCALAR_BLOCK_LIMIT {
        return Err(Error::TooLarge(format!(
            "{} blocks give too many test functions",
            blocks.len()
        )));
    }
    Ok((0..1u64 << blocks.len())
        .map(|mask| {
            let mut values = vec![Rational::zero(); b.len()];
            for (k, block) in blocks.iter().enumerate() {
                if (mask >> k) & 1 == 1 {
                    for y in block.iter() {
                        values[y] = Rational::one();
                    }
                }
            }
            ScalarMap { values }
        })
        .collect())
}

/// A member `d` of `L(B)` and `eps = 1` with `x ∈ U(d, eps, x) ∌ xi`, or
/// `None` when `s(xi, x) = 0` (then every member has `d(xi, x) = 0`) or `xi = x`.
pub fn separating_witness(
    b: &StructureBase,
    x: usize,
    xi: usize,
) -> Option<(WeakPseudoMetric, Rational)> {
    let z = b.zero_relation();
    if x == xi || z.contains(xi, x) {
        return None;
    }
    let marked = if z.contains(xi, xi) {
        z.row(xi)
    } else {
        PointSet::singleton(xi)
    };
    let c = |u: usize| u64::from(marked.contains(u));
    let form = PreMetricForm::from_fn_unchecked(b.len(), Mode::Strict, |u, v| {
        if z.contains(u, v) {
            ExtValue::zero()
        } else {
            ExtValue::int(c(u) + c(v))
        }
    });
    let d = WeakPseudoMetric::from_form_unchecked(form);
    let eps = Rational::one();
    assert!(
        is_member(&d, b).is_ok_and(|m| m.is_member()),
        "separating metric must be a member"
    );
    let ball = crate::metric::ball(&d, x, &eps).expect("d(x, x) = 0");
    assert!(ball.contains(x) && !ball.contains(xi));
    Some((d, eps))
}

/// Every classification of one map between two structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    /// `None` unless both bases consist of pseudo-metrics.
    pub lipschitz: Option<bool>,
    pub weak_lipschitz: WlVerdict,
    pub locally_weak_lipschitz: LocalVerdict,
    pub scalar_weak_lipschitz: ScalarVerdict,
    pub continuous_induced: Continuity,
    /// `None` when either base is improper and has no uniformity.
    pub uniformly_continuous: Option<UcVerdict>,
    pub remark_strict: RemarkVerdict,
    pub remark_relaxed: RemarkVerdict,
}

pub fn classify(
    f: &PointMap,
    bx: &StructureBase,
    by: &StructureBase,
) -> Result<ClassificationReport> {
    check_carriers(f, bx, by)?;
    let weak_lipschitz = is_weak_lipschitz(f, bx, by)?;
    let lipschitz =
        (bx.kind() == Kind::Pseudo && by.kind() == Kind::Pseudo).then(|| weak_lipschitz.holds());
    let uniformly_continuous = match (uniformity_from_structure(bx), uniformity_from_structure(by))
    {
        (Ok(ux), Ok(uy)) => Some(is_uc_map(f, &ux, &uy)?),
        _ => None,
    };
    Ok(ClassificationReport {
        lipschitz,
        weak_lipschitz,
        locally_weak_lipschitz: is_locally_weak_lipschitz(f, bx, by)?,
        scalar_weak_lipschitz: is_scalar_weak_lipschitz(f, bx, by)?,
        continuous_induced: is_continuous(
            f,
            &topology_from_structure(bx),
            &topology_from_structure(by),
        )?,
        uniformly_continuous,
        remark_strict: locally_lipschitz_remark_check(f, bx, by, RemarkMode::Strict)?,
        remark_relaxed: locally_lipschitz_remark_check(f, bx, by, RemarkMode::Relaxed)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::characteristic_metric;
    use crate::value::rational;

    fn m1() -> WeakPseudoMetric {
        WeakPseudoMetric::from_ints(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 2]]).unwrap()
    }

    fn disc() -> WeakPseudoMetric {
        WeakPseudoMetric::from_ints(&[&[0, 1], &[1, 0]]).unwrap()
    }

    fn mw() -> WeakPseudoMetric {
        WeakPseudoMetric::from_ints(&[&[1, 1], &[1, 0]]).unwrap()
    }

    fn map(target: usize, table: &[usize]) -> PointMap {
        PointMap::new(table.len(), target, table.to_vec()).unwrap()
    }

    fn full(n: usize) -> Relation {
        Relation::full(n)
    }

    #[test]
    fn point_map_validation() {
        assert!(PointMap::new(2, 2, vec![0, 2]).is_err());
        assert!(PointMap::new(2, 2, vec![0]).is_err());
        let f = map(2, &[0, 0, 1]);
        assert_eq!(
            f.preimage(PointSet::singleton(0)),
            PointSet::from_indices([0, 1])
        );
        assert!(f.is_surjective());
    }

    #[test]
    fn pullback_examples() {
        let f = map(2, &[0, 0, 1]);
        let pb = pullback_metric(&f, &disc()).unwrap();
        assert_eq!(
            pb,
            WeakPseudoMetric::from_ints(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]])
                .unwrap()
                .into_form()
        );
        let c = PointMap::constant(3, 2, 0).unwrap();
        let pb = pullback_metric(&c, &mw()).unwrap();
        assert!(!pb.has_diagonal_zero());
        assert_eq!(
            pullback_metric(&PointMap::identity(3), &m1()).unwrap(),
            m1().into_form()
        );
    }

    #[test]
    fn weak_lipschitz_examples() {
        let bx = StructureBase::single(m1());
        let by = StructureBase::single(disc());
        let f = map(2, &[0, 0, 1]);
        match is_weak_lipschitz(&f, &bx, &by).unwrap() {
            WlVerdict::Holds(certs) => {
                assert_eq!(certs[0].alpha, rational(1, 1));
                assert_eq!(&certs[0].dominating, &m1());
                assert!(certificate_holds(&f, &bx, &by, &full(3), &certs[0]));
            }
            other => panic!("{other:?}"),
        }
        let g = map(2, &[0, 1, 1]);
        assert_eq!(
            is_weak_lipschitz(&g, &bx, &by).unwrap(),
            WlVerdict::Fails(WlWitness::Zero {
                generator: 0,
                pair: (0, 1)
            })
        );
        assert!(is_weak_lipschitz(&PointMap::identity(3), &bx, &bx)
            .unwrap()
            .holds());
        assert!(matches!(
            is_lipschitz(&f, &bx, &by),
            Err(Error::KindMismatch(_))
        ));
    }

    #[test]
    fn lipschitz_witness_examples() {
        let bx = StructureBase::single(m1());
        let f = map(2, &[0, 0, 1]);
        let (d, a) = lipschitz_witness(&f, &bx, &disc()).unwrap();
        assert_eq!((d, a), (m1(), rational(1, 1)));
        let c = PointMap::constant(3, 2, 1).unwrap();
        let (d, a) = lipschitz_witness(&c, &bx, &mw()).unwrap();
        assert_eq!((d, a), (m1(), rational(1, 1)));
        let g = map(2, &[0, 1, 1]);
        assert_eq!(
            lipschitz_witness(&g, &bx, &disc()).unwrap_err(),
            Error::NotDominated(0, 1)
        );
    }

    #[test]
    fn improper_source_needs_a_vanishing_pullback() {
        let bx = StructureBase::new(vec![
            characteristic_metric(2, PointSet::singleton(0)),
            characteristic_metric(2, PointSet::singleton(1)),
        ])
        .unwrap();
        assert!(!bx.is_proper());
        let by = StructureBase::single(mw());
        // the pullback of mW along the constant map to 0 is 1 everywhere
        let c0 = PointMap::constant(2, 2, 0).unwrap();
        assert!(matches!(
            is_weak_lipschitz(&c0, &bx, &by).unwrap(),
            WlVerdict::Fails(WlWitness::NoDiagonalZero { .. })
        ));
        let c1 = PointMap::constant(2, 2, 1).unwrap();
        match is_weak_lipschitz(&c1, &bx, &by).unwrap() {
            WlVerdict::Holds(certs) => {
                assert!(certs
                    .iter()
                    .all(|c| certificate_holds(&c1, &bx, &by, &full(2), c)))
            }
            other => panic!("{other:?}"),
        }
        // improper target: only surjective maps pull every member back to a vanishing form
        let id = PointMap::identity(2);
        assert!(is_weak_lipschitz(&id, &bx, &bx).unwrap().holds());
        assert!(!is_weak_lipschitz(&c0, &bx, &bx).unwrap().holds());
    }

    #[test]
    fn local_examples() {
        let bx = StructureBase::single(m1());
        let by = StructureBase::single(disc());
        assert!(is_locally_weak_lipschitz(&map(2, &[0, 0, 1]), &bx, &by)
            .unwrap()
            .holds());
        let g = map(2, &[0, 1, 1]);
        assert!(matches!(
            is_locally_weak_lipschitz(&g, &bx, &by).unwrap(),
            LocalVerdict::Fails { point: 0, .. }
        ));
        assert!(!locally_weak_lipschitz_by_neighborhoods(&g, &bx, &by).unwrap());
        // isolated zeros only: every N(x) is a singleton
        let iso = StructureBase::single(
            WeakPseudoMetric::from_ints(&[&[0, 1, 1], &[1, 2, 1], &[1, 1, 2]]).unwrap(),
        );
        let h = map(2, &[1, 0, 1]);
        assert!(is_locally_weak_lipschitz(&h, &iso, &by).unwrap().holds());
    }

    #[test]
    fn remark_examples() {
        let b = StructureBase::single(m1());
        let id = PointMap::identity(3);
        assert_eq!(
            locally_lipschitz_remark_check(&id, &b, &b, RemarkMode::Strict).unwrap(),
            RemarkVerdict::Fails {
                point: 0,
                reason: RemarkFailure::ZeroDiagonal
            }
        );
        assert!(
            locally_lipschitz_remark_check(&id, &b, &b, RemarkMode::Relaxed)
                .unwrap()
                .holds()
        );
        for x in 0..3 {
            let (d, r) = remark_certificate(&id, &b, &m1(), x, RemarkMode::Relaxed).unwrap();
            assert!(remark_certificate_holds(
                &id,
                &b,
                &d,
                &r,
                &m1(),
                x,
                RemarkMode::Relaxed
            ));
        }
        let by = StructureBase::single(disc());
        let into_class = PointMap::constant(3, 2, 1).unwrap();
        assert!(
            locally_lipschitz_remark_check(&into_class, &b, &by, RemarkMode::Relaxed)
                .unwrap()
                .holds()
        );
    }

    #[test]
    fn scalar_examples() {
        let bx = StructureBase::single(WeakPseudoMetric::zero(2));
        let by = StructureBase::single(mw());
        let c = PointMap::constant(2, 2, 0).unwrap();
        assert!(is_scalar_weak_lipschitz(&c, &bx, &by).unwrap().holds());
        assert!(!is_weak_lipschitz(&c, &bx, &by).unwrap().holds());
        assert!(is_scalar_weak_lipschitz(&PointMap::identity(2), &by, &by)
            .unwrap()
            .holds());
    }

    #[test]
    fn scalar_test_function_counts() {
        assert_eq!(
            scalar_test_functions(&StructureBase::single(mw()))
                .unwrap()
                .len(),
            4
        );
        let three = StructureBase::single(m1());
        let fs = scalar_test_functions(&three).unwrap();
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|phi| phi.is_weak_lipschitz(&three)));
        assert_eq!(
            scalar_test_functions(&StructureBase::single(WeakPseudoMetric::zero(3)))
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn separating_witness_examples() {
        let b = StructureBase::single(m1());
        let (d, eps) = separating_witness(&b, 0, 2).unwrap();
        assert_eq!(d, m1());
        assert_eq!(
            crate::metric::ball(&d, 0, &eps).unwrap(),
            PointSet::from_indices([0, 1])
        );
        let (d, _) = separating_witness(&b, 2, 0).unwrap();
        assert_eq!(
            d,
            WeakPseudoMetric::from_ints(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]).unwrap()
        );
        assert!(separating_witness(&b, 0, 1).is_none());
    }

    #[test]
    fn classification_of_the_distinguishing_instance() {
        let bx = StructureBase::single(WeakPseudoMetric::zero(2));
        let by = StructureBase::single(mw());
        let r = classify(&PointMap::constant(2, 2, 0).unwrap(), &bx, &by).unwrap();
        assert_eq!(r.lipschitz, None);
        assert!(!r.weak_lipschitz.holds());
        assert!(r.scalar_weak_lipschitz.holds());
        assert!(r.continuous_induced.holds());
        assert!(!r.uniformly_continuous.unwrap().holds());
    }
}
