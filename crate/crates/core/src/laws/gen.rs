//! Seeded random generators for law instances.
//!
//! Every generator draws from a `ChaCha8Rng` so that a `(seed, index)` pair
//! reproduces the same instance on any platform and worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::maps::PointMap;
use crate::metric::{validate_weak_pm, PreMetricForm, WeakPseudoMetric};
use crate::points::{PointSet, Relation};
use crate::structure::{is_member, Kind, StructureBase, SubsetFamily};
use crate::topology::FiniteTopology;
use crate::value::{ExtValue, Mode};

/// Attempts before a constrained generator reports `GEN_EXHAUSTED`.
pub const MAX_ATTEMPTS: usize = 1000;

/// Deterministic stream `salt` of `seed`.
pub fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(salt);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricShape {
    pub mode: Mode,
    /// Zero the whole diagonal.
    pub pseudo: bool,
    /// Entries are drawn from `{1/2, 1, ..., max}` before closure.
    pub max: u64,
    pub p_zero: f64,
    /// Only used in extended mode.
    pub p_inf: f64,
}

impl MetricShape {
    pub fn weak(mode: Mode) -> Self {
        MetricShape {
            mode,
            pseudo: false,
            max: 4,
            p_zero: 0.3,
            p_inf: 0.2,
        }
    }

    pub fn pseudo(mode: Mode) -> Self {
        MetricShape {
            pseudo: true,
            ..MetricShape::weak(mode)
        }
    }
}

fn raw_value(rng: &mut ChaCha8Rng, shape: &MetricShape) -> ExtValue {
    let roll: f64 = rng.gen();
    if roll < shape.p_zero {
        ExtValue::zero()
    } else if shape.mode == Mode::Extended && roll < shape.p_zero + shape.p_inf {
        ExtValue::Infinite
    } else if rng.gen_bool(0.2) {
        ExtValue::ratio(rng.gen_range(1..=2 * shape.max), 2)
    } else {
        ExtValue::int(rng.gen_range(1..=shape.max))
    }
}

/// Least walk weights: `d(i, j)` is the cheapest walk of length one or more
/// from `i` to `j`. The result is symmetric and satisfies the triangle
/// inequality for any symmetric nonnegative input.
pub fn walk_closure(w: &[Vec<ExtValue>]) -> Vec<Vec<ExtValue>> {
    let n = w.len();
    let mut d = w.to_vec();
    for k in 0..n {
        for i in 0..n {
            if d[i][k].is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Turns a closed matrix into a weak pseudo-metric by zeroing the smallest
/// diagonal entry (or the whole diagonal for `pseudo`). Lowering a diagonal
/// entry never breaks the triangle inequality.
fn finish(mut d: Vec<Vec<ExtValue>>, shape: &MetricShape) -> WeakPseudoMetric {
    let n = d.len();
    if shape.pseudo {
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = ExtValue::zero();
        }
    } else if !(0..n).any(|i| d[i][i].is_zero()) {
        let z = (0..n)
            .min_by(|&a, &b| d[a][a].cmp(&d[b][b]))
            .expect("n >= 1");
        d[z][z] = ExtValue::zero();
    }
    let mode = shape.mode;
    WeakPseudoMetric::from_form_unchecked(PreMetricForm::from_fn_unchecked(n, mode, |i, j| {
        d[i][j].clone()
    }))
}

fn symmetric(n: usize, mut cell: impl FnMut(usize, usize) -> ExtValue) -> Vec<Vec<ExtValue>> {
    let mut w = vec![vec![ExtValue::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = cell(i, j);
            w[j][i] = v.clone();
            w[i][j] = v;
        }
    }
    w
}

/// The two metric samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    /// Zero exactly on a random partial equivalence `Z`, and
    /// `c(u) + c(v) + offset` elsewhere with weights constant on classes.
    Per,
    /// Random symmetric weights, walk closure, then a zeroed diagonal entry.
    Repair,
}

fn positive_value(rng: &mut ChaCha8Rng, shape: &MetricShape) -> ExtValue {
    loop {
        let v = raw_value(rng, shape);
        if !v.is_zero() {
            return v;
        }
    }
}

fn per_sample(rng: &mut ChaCha8Rng, n: usize, shape: &MetricShape) -> Vec<Vec<ExtValue>> {
    let per = gen_per(rng, n);
    // One weight per class, indexed by the class's least point.
    let weight: Vec<ExtValue> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                ExtValue::zero()
            } else {
                positive_value(rng, shape)
            }
        })
        .collect();
    let class_weight = |u: usize| {
        let rep = per
            .row(u)
            .iter()
            .next()
            .filter(|_| per.contains(u, u))
            .unwrap_or(u);
        weight[rep].clone()
    };
    let offset = positive_value(
        rng,
        &MetricShape {
            mode: Mode::Strict,
            ..*shape
        },
    );
    symmetric(n, |u, v| {
        if per.contains(u, v) {
            ExtValue::zero()
        } else {
            &(&class_weight(u) + &class_weight(v)) + &offset
        }
    })
}

/// A weak pseudo-metric on `n` points from the sampler `mode`. Samples that
/// fail validation are drawn again, up to [`MAX_ATTEMPTS`] times.
pub fn gen_weak_pm_with(
    rng: &mut ChaCha8Rng,
    n: usize,
    shape: &MetricShape,
    mode: GenMode,
) -> Result<WeakPseudoMetric> {
    for _ in 0..MAX_ATTEMPTS {
        let rows = match mode {
            GenMode::Per => per_sample(rng, n, shape),
            GenMode::Repair => walk_closure(&symmetric(n, |_, _| raw_value(rng, shape))),
        };
        let d = finish(rows, shape);
        if validate_weak_pm(&d.rows(), shape.mode)?.is_valid() {
            return Ok(d);
        }
    }
    Err(Error::GenExhausted(MAX_ATTEMPTS))
}

/// Either sampler, chosen at random.
pub fn gen_weak_pm(
    rng: &mut ChaCha8Rng,
    n: usize,
    shape: &MetricShape,
) -> Result<WeakPseudoMetric> {
    let mode = if rng.gen_bool(0.5) {
        GenMode::Per
    } else {
        GenMode::Repair
    };
    gen_weak_pm_with(rng, n, shape, mode)
}

/// Stream numbers for the seeded entry points below.
const METRIC_STREAM: u64 = 1 << 56;
const TOPOLOGY_STREAM: u64 = 2 << 56;
const MAP_STREAM: u64 = 3 << 56;

/// A weak pseudo-metric determined by `(n, seed, mode)`.
pub fn weak_pm_from_seed(n: usize, seed: u64, mode: GenMode) -> Result<WeakPseudoMetric> {
    gen_weak_pm_with(
        &mut rng_for(seed, METRIC_STREAM),
        n,
        &MetricShape::weak(Mode::Strict),
        mode,
    )
}

pub fn topology_from_seed(n: usize, seed: u64) -> FiniteTopology {
    gen_topology(&mut rng_for(seed, TOPOLOGY_STREAM), n)
}

pub fn map_from_seed(source: usize, target: usize, seed: u64) -> PointMap {
    gen_map(&mut rng_for(seed, MAP_STREAM), source, target)
}

/// An extended metric that is infinite between the blocks of a random
/// partition and finite inside each block.
pub fn gen_block_metric(rng: &mut ChaCha8Rng, n: usize) -> WeakPseudoMetric {
    let shape = MetricShape {
        p_inf: 0.0,
        ..MetricShape::weak(Mode::Extended)
    };
    let block: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n.max(1))).collect();
    let w = symmetric(n, |i, j| {
        if i == j && rng.gen_bool(0.5) {
            ExtValue::zero()
        } else if block[i] == block[j] {
            raw_value(rng, &shape)
        } else {
            ExtValue::Infinite
        }
    });
    finish(walk_closure(&w), &shape)
}

/// A random partial equivalence relation with nonempty domain.
pub fn gen_per(rng: &mut ChaCha8Rng, n: usize) -> Relation {
    let mut class: Vec<Option<usize>> = (0..n)
        .map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(0..n)))
        .collect();
    if class.iter().all(Option::is_none) {
        class[rng.gen_range(0..n)] = Some(0);
    }
    Relation::from_fn(n, |i, j| class[i].is_some() && class[i] == class[j])
}

pub fn gen_base(
    rng: &mut ChaCha8Rng,
    n: usize,
    shape: &MetricShape,
    max_generators: usize,
) -> Result<StructureBase> {
    let k = rng.gen_range(1..=max_generators.max(1));
    let gens = (0..k)
        .map(|_| gen_weak_pm(rng, n, shape))
        .collect::<Result<_>>()?;
    StructureBase::new(gens)
}

pub fn gen_proper_base(
    rng: &mut ChaCha8Rng,
    n: usize,
    shape: &MetricShape,
    max_generators: usize,
) -> Result<StructureBase> {
    for _ in 0..MAX_ATTEMPTS {
        let b = gen_base(rng, n, shape, max_generators)?;
        if b.is_proper() {
            return Ok(b);
        }
    }
    Err(Error::GenExhausted(MAX_ATTEMPTS))
}

/// A preorder topology from the closure of a random relation.
pub fn gen_topology(rng: &mut ChaCha8Rng, n: usize) -> FiniteTopology {
    let density: f64 = rng.gen_range(0.0..0.6);
    let r = Relation::from_fn(n, |i, j| i != j && rng.gen_bool(density));
    FiniteTopology::from_preorder(&r.preorder_closure()).expect("closure is a preorder")
}

pub fn gen_map(rng: &mut ChaCha8Rng, source: usize, target: usize) -> PointMap {
    let table = (0..source).map(|_| rng.gen_range(0..target)).collect();
    PointMap::new(source, target, table).expect("entries in range")
}

pub fn gen_subset(rng: &mut ChaCha8Rng, n: usize) -> PointSet {
    PointSet::from_indices((0..n).filter(|_| rng.gen_bool(0.5)))
}

/// One to four random subsets, biased towards larger ones; the empty set
/// appears now and then.
pub fn gen_family(rng: &mut ChaCha8Rng, n: usize) -> SubsetFamily {
    let k = rng.gen_range(1..=4);
    let members = (0..k)
        .map(|_| PointSet::from_indices((0..n).filter(|_| rng.gen_bool(0.7))))
        .collect();
    SubsetFamily::new(n, members).expect("subsets of the carrier")
}

/// A metric pointwise below `d`: the walk closure of `min(d, w)` for random `w`.
pub fn gen_below(rng: &mut ChaCha8Rng, d: &WeakPseudoMetric) -> WeakPseudoMetric {
    let shape = MetricShape::weak(d.mode());
    let w = symmetric(d.len(), |i, j| {
        let v = raw_value(rng, &shape);
        ExtValue::min_of(&v, d.get(i, j))
    });
    let below = finish(walk_closure(&w), &shape);
    debug_assert!(below.le(d));
    below
}

/// A random member of `L(B)`.
///
/// The zero set is a partial equivalence containing `Z(s)` (for an improper
/// base, a single diagonal point); other weights are positive, and infinite
/// only where `s` is. After walk closure the result vanishes on `Z(s)` and
/// is infinite only inside `Inf(s)`. Members of a pseudo base vanish on
/// the whole diagonal.
pub fn gen_member(rng: &mut ChaCha8Rng, b: &StructureBase) -> Result<WeakPseudoMetric> {
    let n = b.len();
    let s = b.envelope();
    let mut class: Vec<Option<usize>> = (0..n)
        .map(|i| {
            b.zero_relation()
                .row(i)
                .iter()
                .next()
                .filter(|_| b.zero_relation().contains(i, i))
        })
        .collect();
    if class.iter().all(Option::is_none) {
        class[rng.gen_range(0..n)] = Some(n);
    }
    for _ in 0..rng.gen_range(0..=2) {
        let (a, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        match (class[a], class[c]) {
            (Some(ka), Some(kc)) => {
                for k in class.iter_mut() {
                    if *k == Some(kc) {
                        *k = Some(ka);
                    }
                }
            }
            (Some(ka), None) => class[c] = Some(ka),
            (None, _) => class[a] = Some(n + 1 + a),
        }
    }
    let mode = b.mode();
    let pseudo = b.kind() == Kind::Pseudo;
    let shape = MetricShape {
        p_zero: 0.0,
        pseudo,
        ..MetricShape::weak(mode)
    };
    let w = symmetric(n, |i, j| {
        if class[i].is_some() && class[i] == class[j] {
            ExtValue::zero()
        } else if s.get(i, j).is_infinite() && rng.gen_bool(0.5) {
            ExtValue::Infinite
        } else {
            ExtValue::int(rng.gen_range(1..=shape.max))
        }
    });
    let d = finish(walk_closure(&w), &shape);
    assert!(
        is_member(&d, b)?.is_member(),
        "sampled member must lie in L(B)"
    );
    Ok(d)
}
