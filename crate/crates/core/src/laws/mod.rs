//! A catalog of checkable statements, random instance search and shrinking.
//!
//! Laws marked [`Expectation::PassAlways`] are theorems: a search should find
//! nothing. Laws marked [`Expectation::FindExpected`] are tempting but false
//! claims: a search should refute them quickly.

pub mod gen;
mod instance;
pub mod sweep;

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::{
    certificate_holds, is_lipschitz, is_scalar_weak_lipschitz, is_weak_lipschitz, WlVerdict,
};
use crate::metric::{scale_metric, sup_metric, WeakPseudoMetric};
use crate::points::Relation;
use crate::structure::{
    checked_sum, domination_ratio, in_l1, in_l2, is_base_for_structure, is_member, product_base,
    product_metric, ptau_base, BaseCriterion, Kind, StructureBase, SubsetFamily,
};
use crate::topology::{is_continuous, topology_from_family, topology_from_structure};
use crate::uniformity::{is_uc_map, is_uc_metric, product_uniformity, uniformity_from_structure};
use crate::value::{rational, Mode, Rational};

pub use gen::rng_for;
pub use instance::{Instance, Shape};

use gen::{
    gen_base, gen_below, gen_block_metric, gen_family, gen_map, gen_member, gen_proper_base,
    gen_topology, gen_weak_pm, MetricShape, MAX_ATTEMPTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expectation {
    PassAlways,
    FindExpected,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::PassAlways => "PASS-ALWAYS",
            Expectation::FindExpected => "FIND-EXPECTED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LawId {
    TopDef,
    ContWl,
    WlCont,
    LipUc,
    WlUc,
    MemberUc,
    L1Closed,
    L2Closed,
    L2Exist,
    ProdPm,
    BaseCrit,
    AxiomEquiv,
    DistScalarWl,
    DistFamilyVsStructureTopology,
    HypL1NeedsIntersections,
}

impl LawId {
    pub const ALL: [LawId; 15] = [
        LawId::TopDef,
        LawId::ContWl,
        LawId::WlCont,
        LawId::LipUc,
        LawId::WlUc,
        LawId::MemberUc,
        LawId::L1Closed,
        LawId::L2Closed,
        LawId::L2Exist,
        LawId::ProdPm,
        LawId::BaseCrit,
        LawId::AxiomEquiv,
        LawId::DistScalarWl,
        LawId::DistFamilyVsStructureTopology,
        LawId::HypL1NeedsIntersections,
    ];

    pub fn code(self) -> &'static str {
        match self {
            LawId::TopDef => "LAW-TOPDEF",
            LawId::ContWl => "LAW-CONT-WL",
            LawId::WlCont => "LAW-WL-CONT",
            LawId::LipUc => "LAW-LIP-UC",
            LawId::WlUc => "LAW-WL-UC",
            LawId::MemberUc => "LAW-MEMBER-UC",
            LawId::L1Closed => "LAW-L1-CLOSED",
            LawId::L2Closed => "LAW-L2-CLOSED",
            LawId::L2Exist => "LAW-L2-EXIST",
            LawId::ProdPm => "LAW-PROD-PM",
            LawId::BaseCrit => "LAW-BASE-CRIT",
            LawId::AxiomEquiv => "LAW-AXIOM-EQUIV",
            LawId::DistScalarWl => "DIST-SCALAR-WL",
            LawId::DistFamilyVsStructureTopology => "DIST-FAMILY-VS-STRUCTURE-TOPOLOGY",
            LawId::HypL1NeedsIntersections => "HYP-L1-NEEDS-INTERSECTIONS",
        }
    }

    pub fn from_code(code: &str) -> Option<LawId> {
        LawId::ALL
            .into_iter()
            .find(|l| l.code().eq_ignore_ascii_case(code))
    }

    /// What a search is expected to report. `LAW-L2-EXIST` reads "bounded on
    /// some member" without assuming intersection closure, which makes it
    /// the same statement as `HYP-L1-NEEDS-INTERSECTIONS` negated; it is
    /// refutable on three points.
    pub fn expectation(self) -> Expectation {
        match self {
            LawId::L2Exist
            | LawId::DistScalarWl
            | LawId::DistFamilyVsStructureTopology
            | LawId::HypL1NeedsIntersections => Expectation::FindExpected,
            _ => Expectation::PassAlways,
        }
    }

    pub fn shape(self) -> Shape {
        match self {
            LawId::TopDef => Shape::Topology,
            LawId::ContWl => Shape::TopologyMap,
            LawId::WlCont | LawId::LipUc | LawId::WlUc | LawId::DistScalarWl => Shape::BaseMap,
            LawId::MemberUc | LawId::BaseCrit => Shape::BaseMember,
            LawId::L1Closed
            | LawId::L2Closed
            | LawId::L2Exist
            | LawId::AxiomEquiv
            | LawId::HypL1NeedsIntersections => Shape::Family,
            LawId::ProdPm => Shape::Factors,
            LawId::DistFamilyVsStructureTopology => Shape::Base,
        }
    }

    /// The claim under test. For find-expected laws this is the false claim
    /// a counterexample refutes.
    pub fn statement(self) -> &'static str {
        match self {
            LawId::TopDef => {
                "the balls of the characteristic metrics d_A, A a nonempty open set, generate the original topology"
            }
            LawId::ContWl => {
                "a continuous map is weak Lipschitz between the characteristic-metric structures when both are proper"
            }
            LawId::WlCont => "a weak Lipschitz map is continuous for the induced topologies",
            LawId::LipUc => "a Lipschitz map between pseudo-metric structures is uniformly continuous",
            LawId::WlUc => "a weak Lipschitz map between proper structures is uniformly continuous",
            LawId::MemberUc => "every member of a proper structure is uniformly continuous for its uniformity",
            LawId::L1Closed => {
                "for an intersection-closed family, metrics bounded on some member are closed under sums, sups, \
                 positive scaling and passing to smaller metrics"
            }
            LawId::L2Closed => {
                "metrics bounded on every member of a family are closed under sums, sups, positive scaling and \
                 passing to smaller metrics"
            }
            LawId::L2Exist => {
                "for any family, metrics bounded on some member are closed under sums, sups, positive scaling and \
                 passing to smaller metrics"
            }
            LawId::ProdPm => {
                "the sum of two factor metrics is a weak pseudo-metric on the product, pseudo when both factors are, \
                 with zero set the product of the factor zero sets"
            }
            LawId::BaseCrit => {
                "if every pairwise sup of generators is below a multiple of a generator, every member is below a \
                 multiple of a single generator"
            }
            LawId::AxiomEquiv => {
                "for bounded-on-members predicates, downward closure with sums gives scaling and sups, and \
                 downward closure with scaling and sups gives sums"
            }
            LawId::DistScalarWl => "every scalar weak Lipschitz map is weak Lipschitz",
            LawId::DistFamilyVsStructureTopology => {
                "a generating family and the structure it generates induce the same topology"
            }
            LawId::HypL1NeedsIntersections => {
                "without intersection closure, metrics bounded on some member are still closed under sums"
            }
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `vacuous`: the instance misses the law's hypothesis.
    Pass { vacuous: bool },
    /// A counterexample, or for find-expected laws the sought distinction.
    Fail { clause: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self, Verdict::Pass { vacuous: true })
    }
}

const PASS: Verdict = Verdict::Pass { vacuous: false };
const VACUOUS: Verdict = Verdict::Pass { vacuous: true };

fn fail(clause: impl Into<String>) -> Verdict {
    Verdict::Fail {
        clause: clause.into(),
    }
}

/// Scales tried by the closure laws.
pub fn closure_scales() -> [Rational; 2] {
    [rational(1, 2), rational(3, 1)]
}

/// Derived metrics a closure law inspects.
pub struct ClosureCase {
    pub sum: Option<WeakPseudoMetric>,
    pub sup: Option<WeakPseudoMetric>,
    pub scaled: Vec<WeakPseudoMetric>,
    /// `d3`, when it lies below `d1`.
    pub below: Option<WeakPseudoMetric>,
}

impl ClosureCase {
    pub fn new(
        d1: &WeakPseudoMetric,
        d2: &WeakPseudoMetric,
        d3: &WeakPseudoMetric,
    ) -> Result<Self> {
        Ok(ClosureCase {
            sum: checked_sum(d1, d2)?,
            sup: sup_metric(d1, d2)?.into_weak().ok(),
            scaled: closure_scales()
                .iter()
                .map(|a| scale_metric(a, d1).and_then(|f| f.into_weak()))
                .collect::<Result<_>>()?,
            below: d3.le(d1).then(|| d3.clone()),
        })
    }
}

/// Class membership of `d1`, `d2` and the metrics derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureBits {
    pub d1: bool,
    pub d2: bool,
    pub scaled: Vec<bool>,
    pub below: Option<bool>,
    pub sum: Option<bool>,
    pub sup: Option<bool>,
}

impl ClosureBits {
    pub fn evaluate(
        pred: &mut dyn FnMut(&WeakPseudoMetric) -> bool,
        d1: &WeakPseudoMetric,
        d2: &WeakPseudoMetric,
        case: &ClosureCase,
    ) -> Self {
        ClosureBits {
            d1: pred(d1),
            d2: pred(d2),
            scaled: case.scaled.iter().map(&mut *pred).collect(),
            below: case.below.as_ref().map(&mut *pred),
            sum: case.sum.as_ref().map(&mut *pred),
            sup: case.sup.as_ref().map(&mut *pred),
        }
    }

    /// First closure property violated. Sums and sups that lose their
    /// diagonal zero are not weak pseudo-metrics and are skipped.
    pub fn violation(&self) -> Option<&'static str> {
        if self.d1 {
            if self.scaled.contains(&false) {
                return Some("a positive multiple of d1 leaves the class");
            }
            if self.below == Some(false) {
                return Some("d3 <= d1 but d3 is not in the class");
            }
        }
        if self.d1 && self.d2 {
            if self.sum == Some(false) {
                return Some("d1 + d2 is not in the class");
            }
            if self.sup == Some(false) {
                return Some("d1 v d2 is not in the class");
            }
        }
        None
    }

    /// The sum clause alone.
    pub fn sum_violation(&self) -> Option<&'static str> {
        (self.d1 && self.d2 && self.sum == Some(false))
            .then_some("d1, d2 bounded on some member but d1 + d2 is not")
    }

    /// `(downward, scaling, sups, sums)` on this sample.
    pub fn axioms(&self) -> (bool, bool, bool, bool) {
        let both = self.d1 && self.d2;
        (
            !self.d1 || self.below != Some(false),
            !self.d1 || !self.scaled.contains(&false),
            !both || self.sup != Some(false),
            !both || self.sum != Some(false),
        )
    }
}

fn l1(family: &SubsetFamily) -> impl FnMut(&WeakPseudoMetric) -> bool + '_ {
    move |d| in_l1(d, family).expect("carriers agree").holds
}

fn l2(family: &SubsetFamily) -> impl FnMut(&WeakPseudoMetric) -> bool + '_ {
    move |d| in_l2(d, family).expect("carriers agree").holds
}

fn closure_verdict(violation: Option<&str>) -> Verdict {
    violation.map_or(PASS, fail)
}

fn wl_certificates_hold(
    f: &crate::maps::PointMap,
    bx: &StructureBase,
    by: &StructureBase,
    wl: &WlVerdict,
) -> bool {
    match wl {
        WlVerdict::Holds(certs) => {
            let all = Relation::full(bx.len());
            certs.iter().all(|c| certificate_holds(f, bx, by, &all, c))
        }
        WlVerdict::Fails(_) => true,
    }
}

fn shape_mismatch(law: LawId, inst: &Instance) -> Error {
    Error::ShapeMismatch(format!(
        "{law} expects {}, got a {:?} instance",
        law.shape().describe(),
        inst.shape()
    ))
}

type Predicate<'a> = Box<dyn FnMut(&WeakPseudoMetric) -> bool + 'a>;

/// Checks one law on one instance.
pub fn run_law(law: LawId, inst: &Instance) -> Result<Verdict> {
    if law.shape() != inst.shape() {
        return Err(shape_mismatch(law, inst));
    }
    match (law, inst) {
        (LawId::TopDef, Instance::Topology { tau }) => {
            let p = ptau_base(tau)?;
            let induced = topology_from_family(tau.len(), p.generators())?;
            Ok(if &induced == tau {
                PASS
            } else {
                fail(format!(
                    "characteristic metrics generate {induced}, expected {tau}"
                ))
            })
        }
        (LawId::ContWl, Instance::TopologyMap { tx, ty, f }) => {
            let (px, py) = (ptau_base(tx)?, ptau_base(ty)?);
            if !px.is_proper() || !py.is_proper() || !is_continuous(f, tx, ty)?.holds() {
                return Ok(VACUOUS);
            }
            Ok(match is_weak_lipschitz(f, &px, &py)? {
                WlVerdict::Holds(_) => PASS,
                WlVerdict::Fails(w) => fail(format!("continuous map is not weak Lipschitz: {w}")),
            })
        }
        (LawId::WlCont, Instance::BaseMap { bx, by, f }) => {
            let wl = is_weak_lipschitz(f, bx, by)?;
            if !wl.holds() {
                return Ok(VACUOUS);
            }
            if !wl_certificates_hold(f, bx, by, &wl) {
                return Ok(fail("weak Lipschitz certificate does not check"));
            }
            Ok(
                match is_continuous(
                    f,
                    &topology_from_structure(bx),
                    &topology_from_structure(by),
                )? {
                    c if c.holds() => PASS,
                    c => fail(format!(
                        "weak Lipschitz map is not continuous: {}",
                        crate::report::describe_continuity(c)
                    )),
                },
            )
        }
        (LawId::LipUc | LawId::WlUc, Instance::BaseMap { bx, by, f }) => {
            let hypothesis = if law == LawId::LipUc {
                bx.kind() == Kind::Pseudo && by.kind() == Kind::Pseudo
            } else {
                bx.is_proper() && by.is_proper()
            };
            if !hypothesis {
                return Ok(VACUOUS);
            }
            let wl = if law == LawId::LipUc {
                is_lipschitz(f, bx, by)?
            } else {
                is_weak_lipschitz(f, bx, by)?
            };
            if !wl.holds() {
                return Ok(VACUOUS);
            }
            if !wl_certificates_hold(f, bx, by, &wl) {
                return Ok(fail("Lipschitz certificate does not check"));
            }
            let (ux, uy) = (
                uniformity_from_structure(bx)?,
                uniformity_from_structure(by)?,
            );
            Ok(match is_uc_map(f, &ux, &uy)? {
                v if v.holds() => PASS,
                v => fail(format!(
                    "map is not uniformly continuous: {}",
                    crate::report::describe_uc(v)
                )),
            })
        }
        (LawId::DistScalarWl, Instance::BaseMap { bx, by, f }) => {
            let scalar = is_scalar_weak_lipschitz(f, bx, by)?;
            Ok(match (scalar.holds(), is_weak_lipschitz(f, bx, by)?) {
                (true, WlVerdict::Fails(w)) => {
                    fail(format!("scalar weak Lipschitz but not weak Lipschitz: {w}"))
                }
                _ => PASS,
            })
        }
        (LawId::MemberUc, Instance::BaseMember { base, candidate }) => {
            if !base.is_proper() || !member(candidate, base)? {
                return Ok(VACUOUS);
            }
            let u = uniformity_from_structure(base)?;
            Ok(if is_uc_metric(candidate, &u)? {
                PASS
            } else {
                fail("member is not uniformly continuous")
            })
        }
        (LawId::BaseCrit, Instance::BaseMember { base, candidate }) => {
            let gens = base.generators();
            let BaseCriterion::Base { dominators } = is_base_for_structure(gens)? else {
                return Ok(VACUOUS);
            };
            for d in &dominators {
                let (i, j) = d.pair;
                let sup = sup_metric(&gens[i], &gens[j])?;
                if !crate::structure::dominated_by(&sup, &d.alpha, &gens[d.dominator]) {
                    return Ok(fail(format!(
                        "dominator certificate for ({i},{j}) does not check"
                    )));
                }
            }
            if !member(candidate, base)? {
                return Ok(PASS);
            }
            let single = gens
                .iter()
                .any(|g| domination_ratio(candidate, g, None).is_ok());
            Ok(if single {
                PASS
            } else {
                fail("member is not below a multiple of any single generator")
            })
        }
        (
            LawId::L1Closed | LawId::L2Closed | LawId::L2Exist,
            Instance::Family { family, d1, d2, d3 },
        ) => {
            if law == LawId::L1Closed && !family.is_intersection_closed() {
                return Ok(VACUOUS);
            }
            let case = ClosureCase::new(d1, d2, d3)?;
            let bits = if law == LawId::L2Closed {
                ClosureBits::evaluate(&mut l2(family), d1, d2, &case)
            } else {
                ClosureBits::evaluate(&mut l1(family), d1, d2, &case)
            };
            Ok(closure_verdict(bits.violation()))
        }
        (LawId::HypL1NeedsIntersections, Instance::Family { family, d1, d2, d3 }) => {
            if family.is_intersection_closed() {
                return Ok(VACUOUS);
            }
            let case = ClosureCase::new(d1, d2, d3)?;
            Ok(closure_verdict(
                ClosureBits::evaluate(&mut l1(family), d1, d2, &case).sum_violation(),
            ))
        }
        (LawId::AxiomEquiv, Instance::Family { family, d1, d2, d3 }) => {
            let case = ClosureCase::new(d1, d2, d3)?;
            let mut preds: Vec<(&str, Predicate<'_>)> =
                vec![("bounded on every member", Box::new(l2(family)))];
            if family.is_intersection_closed() {
                preds.push(("bounded on some member", Box::new(l1(family))));
            }
            for (name, mut p) in preds {
                let (a1, a2, a3, a4) = ClosureBits::evaluate(&mut *p, d1, d2, &case).axioms();
                if a1 && a4 && !(a2 && a3) {
                    return Ok(fail(format!(
                        "{name}: downward closure and sums hold but scaling or sups fail"
                    )));
                }
                if a1 && a2 && a3 && !a4 {
                    return Ok(fail(format!(
                        "{name}: downward closure, scaling and sups hold but sums fail"
                    )));
                }
            }
            Ok(PASS)
        }
        (LawId::ProdPm, Instance::Factors { d1, d2 }) => {
            let p = match product_metric(&[d1, d2]) {
                Ok(p) => p,
                Err(e) => return Ok(fail(format!("product is not a weak pseudo-metric: {e}"))),
            };
            if !crate::metric::validate_weak_pm(&p.rows(), p.mode())?.is_valid() {
                return Ok(fail("product fails validation"));
            }
            if d1.is_pseudo() && d2.is_pseudo() && !p.is_pseudo() {
                return Ok(fail("product of pseudo-metrics is not a pseudo-metric"));
            }
            let expected = d1.zero_relation().product(&d2.zero_relation());
            Ok(if p.zero_relation() == expected {
                PASS
            } else {
                fail("zero set of the product is not the product of zero sets")
            })
        }
        (LawId::DistFamilyVsStructureTopology, Instance::Base { base }) => {
            let fam = topology_from_family(base.len(), base.generators())?;
            let st = topology_from_structure(base);
            Ok(if !fam.is_coarser_or_equal(&st) {
                fail(format!(
                    "family topology {fam} is not coarser than structure topology {st}"
                ))
            } else if fam != st {
                fail(format!(
                    "family topology {fam} is strictly coarser than structure topology {st}"
                ))
            } else {
                PASS
            })
        }
        _ => Err(shape_mismatch(law, inst)),
    }
}

/// Membership, treating a non-pseudo candidate against a pseudo base as outside.
fn member(d: &WeakPseudoMetric, b: &StructureBase) -> Result<bool> {
    match is_member(d, b) {
        Ok(c) => Ok(c.is_member()),
        Err(Error::KindMismatch(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Does the kernel of the product structure's uniformity equal the product
/// of the factor kernels? Both bases must be proper.
pub fn product_kernel_agrees(b1: &StructureBase, b2: &StructureBase) -> Result<bool> {
    let p = product_base(&[b1, b2])?;
    let lhs = uniformity_from_structure(&p)?;
    let rhs = product_uniformity(
        &uniformity_from_structure(b1)?,
        &uniformity_from_structure(b2)?,
    );
    Ok(lhs == rhs)
}

/// Does uniform continuity coincide with membership for this candidate?
/// This holds for strict-mode structures; in extended mode an infinite
/// entry outside `Inf(s)` separates the two.
pub fn uc_matches_membership(base: &StructureBase, d: &WeakPseudoMetric) -> Result<bool> {
    let u = uniformity_from_structure(base)?;
    Ok(is_uc_metric(d, &u)? == member(d, base)?)
}

fn random_mode(rng: &mut ChaCha8Rng) -> Mode {
    if rng.gen_bool(0.5) {
        Mode::Strict
    } else {
        Mode::Extended
    }
}

/// Adds `g + pullback(s_Y)` to `bx` when that is a weak pseudo-metric, which
/// makes `f` weak Lipschitz with constant 1.
fn force_lipschitz(
    bx: StructureBase,
    by: &StructureBase,
    f: &crate::maps::PointMap,
) -> StructureBase {
    let pb = crate::metric::pullback_metric(f, by.envelope()).expect("carriers agree");
    let g = &bx.generators()[0];
    match checked_sum(g, &pb) {
        Ok(Some(extra)) => {
            let mut gens = bx.generators().to_vec();
            gens.push(extra);
            StructureBase::new(gens).unwrap_or(bx)
        }
        _ => bx,
    }
}

fn gen_base_map(rng: &mut ChaCha8Rng, n: usize, law: LawId) -> Result<Instance> {
    let (nx, ny) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
    let mode = random_mode(rng);
    let shape = if law == LawId::LipUc {
        MetricShape::pseudo(mode)
    } else {
        MetricShape::weak(mode)
    };
    let (bx, by) = if law == LawId::WlUc {
        (
            gen_proper_base(rng, nx, &shape, 3)?,
            gen_proper_base(rng, ny, &shape, 3)?,
        )
    } else {
        (gen_base(rng, nx, &shape, 3)?, gen_base(rng, ny, &shape, 3)?)
    };
    let f = gen_map(rng, nx, ny);
    let bx = if law != LawId::DistScalarWl && rng.gen_bool(0.5) {
        force_lipschitz(bx, &by, &f)
    } else {
        bx
    };
    Ok(Instance::BaseMap { bx, by, f })
}

fn gen_family_instance(rng: &mut ChaCha8Rng, n: usize, law: LawId) -> Result<Instance> {
    let mut attempt = || {
        let n = rng.gen_range(1..=n);
        let family = gen_family(rng, n);
        (n, family)
    };
    let (n, family) = match law {
        LawId::L1Closed => {
            let (n, f) = attempt();
            (n, f.intersection_closure())
        }
        // The hypothesis needs a family that is not intersection-closed.
        LawId::HypL1NeedsIntersections => (0..MAX_ATTEMPTS)
            .map(|_| attempt())
            .find(|(_, f)| !f.is_intersection_closed())
            .ok_or(Error::GenExhausted(MAX_ATTEMPTS))?,
        _ => attempt(),
    };
    let d1 = gen_block_metric(rng, n);
    let d2 = gen_block_metric(rng, n);
    let d3 = gen_below(rng, &d1);
    Ok(Instance::Family { family, d1, d2, d3 })
}

/// Instance number `index` of a search for `law` on at most `n` points,
/// drawn from seed `seed + index` on the law's own stream.
pub fn instance_at(law: LawId, n: usize, seed: u64, index: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "instances need at least one point".into(),
        ));
    }
    let rng = &mut rng_for(seed.wrapping_add(index), law as u64);
    Ok(match law {
        LawId::TopDef => {
            let k = rng.gen_range(1..=n);
            Instance::Topology {
                tau: gen_topology(rng, k),
            }
        }
        LawId::ContWl => {
            let mut found = None;
            for _ in 0..MAX_ATTEMPTS {
                let (nx, ny) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
                let (tx, ty) = (gen_topology(rng, nx), gen_topology(rng, ny));
                let f = gen_map(rng, nx, ny);
                if ptau_base(&tx)?.is_proper()
                    && ptau_base(&ty)?.is_proper()
                    && is_continuous(&f, &tx, &ty)?.holds()
                {
                    found = Some(Instance::TopologyMap { tx, ty, f });
                    break;
                }
            }
            found.ok_or(Error::GenExhausted(MAX_ATTEMPTS))?
        }
        LawId::WlCont | LawId::LipUc | LawId::WlUc | LawId::DistScalarWl => {
            gen_base_map(rng, n, law)?
        }
        LawId::MemberUc | LawId::BaseCrit => {
            let nx = rng.gen_range(1..=n);
            let shape = MetricShape::weak(random_mode(rng));
            let base = if law == LawId::MemberUc {
                gen_proper_base(rng, nx, &shape, 3)?
            } else {
                let b = gen_base(rng, nx, &shape, 3)?;
                let gens = b.generators();
                match (rng.gen_bool(0.5), gens.len() > 1) {
                    (true, true) => {
                        let sum = gens[1..].iter().try_fold(gens[0].clone(), |acc, g| {
                            checked_sum(&acc, g).ok().flatten()
                        });
                        match sum {
                            Some(s) => {
                                StructureBase::new([gens.to_vec(), vec![s]].concat()).unwrap_or(b)
                            }
                            None => b,
                        }
                    }
                    _ => b,
                }
            };
            let candidate = if law == LawId::BaseCrit || rng.gen_bool(0.5) {
                gen_member(rng, &base)?
            } else {
                gen_weak_pm(rng, nx, &shape)?
            };
            Instance::BaseMember { base, candidate }
        }
        LawId::L1Closed
        | LawId::L2Closed
        | LawId::L2Exist
        | LawId::AxiomEquiv
        | LawId::HypL1NeedsIntersections => gen_family_instance(rng, n, law)?,
        LawId::ProdPm => {
            let mode = random_mode(rng);
            let factor = |rng: &mut ChaCha8Rng| {
                let shape = if rng.gen_bool(0.5) {
                    MetricShape::pseudo(mode)
                } else {
                    MetricShape::weak(mode)
                };
                let k = rng.gen_range(1..=n);
                gen_weak_pm(rng, k, &shape)
            };
            let d1 = factor(rng)?;
            let d2 = factor(rng)?;
            Instance::Factors { d1, d2 }
        }
        LawId::DistFamilyVsStructureTopology => {
            let shape = MetricShape::weak(random_mode(rng));
            let k = rng.gen_range(1..=n);
            Instance::Base {
                base: gen_base(rng, k, &shape, 3)?,
            }
        }
    })
}

/// Greedy shrink: keep taking the first one-step-smaller instance that
/// still fails until none does.
pub fn shrink(law: LawId, inst: Instance) -> Result<Instance> {
    let mut current = inst;
    'outer: loop {
        for cand in current.shrink_candidates() {
            if !run_law(law, &cand)?.passed() {
                current = cand;
                continue 'outer;
            }
        }
        return Ok(current);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub seed: u64,
    pub trials: u64,
    pub workers: usize,
    pub shrink: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n: 4,
            seed: 0,
            trials: 1000,
            workers: 1,
            shrink: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub index: u64,
    pub clause: String,
    pub original: Instance,
    /// Equal to `original` when shrinking is off.
    pub shrunk: Instance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub law: LawId,
    pub config: SearchConfig,
    /// Instances evaluated, up to and including a counterexample.
    pub evaluated: u64,
    /// Evaluated instances that missed the law's hypothesis.
    pub vacuous: u64,
    pub counterexample: Option<Counterexample>,
}

impl SearchOutcome {
    /// Whether the outcome is what the catalog predicts.
    pub fn as_expected(&self) -> bool {
        match self.law.expectation() {
            Expectation::PassAlways => self.counterexample.is_none(),
            Expectation::FindExpected => self.counterexample.is_some(),
        }
    }
}

const CHUNK: u64 = 1024;

/// Evaluates instances `0..trials` and reports the lowest failing index.
/// The result does not depend on the worker count.
pub fn search(law: LawId, config: &SearchConfig) -> Result<SearchOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let eval =
        |i: u64| -> Result<Verdict> { run_law(law, &instance_at(law, config.n, config.seed, i)?) };
    let mut vacuous = 0;
    let mut start = 0;
    while start < config.trials {
        let end = (start + CHUNK).min(config.trials);
        let verdicts: Vec<Verdict> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(eval)
                .collect::<Result<_>>()
        })?;
        if let Some(k) = verdicts.iter().position(|v| !v.passed()) {
            vacuous += verdicts[..k].iter().filter(|v| v.is_vacuous()).count() as u64;
            let index = start + k as u64;
            let Verdict::Fail { clause } = verdicts[k].clone() else {
                unreachable!()
            };
            let original = instance_at(law, config.n, config.seed, index)?;
            let shrunk = if config.shrink {
                shrink(law, original.clone())?
            } else {
                original.clone()
            };
            return Ok(SearchOutcome {
                law,
                config: config.clone(),
                evaluated: index + 1,
                vacuous,
                counterexample: Some(Counterexample {
                    index,
                    clause,
                    original,
                    shrunk,
                }),
            });
        }
        vacuous += verdicts.iter().filter(|v| v.is_vacuous()).count() as u64;
        start = end;
    }
    Ok(SearchOutcome {
        law,
        config: config.clone(),
        evaluated: config.trials,
        vacuous,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::PointMap;
    use crate::model::{parse_model, render_model};
    use crate::points::PointSet;
    use crate::topology::FiniteTopology;

    #[test]
    fn catalog_round_trips_codes() {
        for law in LawId::ALL {
            assert_eq!(LawId::from_code(law.code()), Some(law));
            assert!(!law.statement().is_empty());
        }
        assert_eq!(LawId::from_code("LAW-NOPE"), None);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let inst = Instance::Topology {
            tau: FiniteTopology::discrete(2),
        };
        assert_eq!(
            run_law(LawId::WlCont, &inst).unwrap_err().code(),
            "SHAPE_MISMATCH"
        );
    }

    #[test]
    fn continuous_map_missing_an_open_set() {
        // The pullback of d_{0} along the constant map to 1 is identically 1.
        let tx = FiniteTopology::indiscrete(1);
        let ty = FiniteTopology::from_opens(2, &[PointSet::singleton(0)]).unwrap();
        let f = PointMap::constant(1, 2, 1).unwrap();
        let v = run_law(LawId::ContWl, &Instance::TopologyMap { tx, ty, f }).unwrap();
        assert!(!v.passed(), "{v:?}");
    }

    #[test]
    fn every_law_generates_instances_that_round_trip() {
        for law in LawId::ALL {
            for i in 0..20 {
                let inst = instance_at(law, 4, 11, i).unwrap();
                assert_eq!(inst.shape(), law.shape());
                let model = inst.to_model().unwrap();
                let back =
                    Instance::from_model(law.shape(), &parse_model(&render_model(&model)).unwrap())
                        .unwrap();
                assert_eq!(back, inst, "{law} #{i}");
                run_law(law, &inst).unwrap();
            }
        }
    }

    #[test]
    fn searches_are_deterministic_across_workers() {
        for law in [LawId::DistScalarWl, LawId::WlCont] {
            let one = search(
                law,
                &SearchConfig {
                    n: 3,
                    seed: 5,
                    trials: 300,
                    workers: 1,
                    shrink: true,
                },
            )
            .unwrap();
            let many = search(
                law,
                &SearchConfig {
                    n: 3,
                    seed: 5,
                    trials: 300,
                    workers: 4,
                    shrink: true,
                },
            )
            .unwrap();
            assert_eq!(one.counterexample, many.counterexample);
            assert_eq!(one.evaluated, many.evaluated);
        }
    }

    #[test]
    fn shrinking_keeps_failure_and_size_bounds() {
        let out = search(
            LawId::DistFamilyVsStructureTopology,
            &SearchConfig {
                n: 4,
                seed: 1,
                trials: 200,
                ..Default::default()
            },
        )
        .unwrap();
        let cx = out.counterexample.expect("distinction found");
        assert!(cx.shrunk.size() <= cx.original.size());
        assert!(!run_law(LawId::DistFamilyVsStructureTopology, &cx.shrunk)
            .unwrap()
            .passed());
    }
}
