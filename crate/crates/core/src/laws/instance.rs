//! Law instances, their model-file form and one-step shrinks.

use crate::error::{Error, Result};
use crate::maps::PointMap;
use crate::metric::{Carrier, WeakPseudoMetric};
use crate::model::Model;
use crate::points::PointSet;
use crate::structure::{StructureBase, SubsetFamily};
use crate::topology::FiniteTopology;

/// The object tuple a law is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Topology,
    TopologyMap,
    BaseMap,
    BaseMember,
    Family,
    Factors,
    Base,
}

impl Shape {
    pub fn describe(self) -> &'static str {
        match self {
            Shape::Topology => "topology T on space X",
            Shape::TopologyMap => "topologies TX on X and TY on Y, map f : X -> Y",
            Shape::BaseMap => "bases BX on X and BY on Y, map f : X -> Y",
            Shape::BaseMember => "base B on X, metric d on X",
            Shape::Family => "family A on X, metrics d1 d2 d3 on X",
            Shape::Factors => "metric d1 on X1, metric d2 on X2",
            Shape::Base => "base B on X",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Topology {
        tau: FiniteTopology,
    },
    TopologyMap {
        tx: FiniteTopology,
        ty: FiniteTopology,
        f: PointMap,
    },
    BaseMap {
        bx: StructureBase,
        by: StructureBase,
        f: PointMap,
    },
    BaseMember {
        base: StructureBase,
        candidate: WeakPseudoMetric,
    },
    /// `d3` is meant to lie below `d1`; laws only use it when it does.
    Family {
        family: SubsetFamily,
        d1: WeakPseudoMetric,
        d2: WeakPseudoMetric,
        d3: WeakPseudoMetric,
    },
    Factors {
        d1: WeakPseudoMetric,
        d2: WeakPseudoMetric,
    },
    Base {
        base: StructureBase,
    },
}

fn add_base(m: &mut Model, name: &str, space: &str, prefix: &str, b: &StructureBase) -> Result<()> {
    let names: Vec<String> = (0..b.generators().len())
        .map(|i| format!("{prefix}{i}"))
        .collect();
    for (name, g) in names.iter().zip(b.generators()) {
        m.add_metric(name, space, g.clone())?;
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    m.add_base(name, space, &refs)
}

fn space(m: &mut Model, name: &str, n: usize) -> Result<()> {
    m.add_space(name, Carrier::new(n)?)
}

fn map_between(m: &Model, name: &str, source: &str, target: &str) -> Result<PointMap> {
    let decl = m.map(name)?;
    if decl.source != source || decl.target != target {
        return Err(Error::ShapeMismatch(format!(
            "map '{name}' must go from '{source}' to '{target}'"
        )));
    }
    Ok(decl.map.clone())
}

fn on_space<'m>(m: &'m Model, base: &str, space: &str) -> Result<&'m StructureBase> {
    let decl = m.base_decl(base)?;
    if decl.space != space {
        return Err(Error::ShapeMismatch(format!(
            "base '{base}' must live on '{space}'"
        )));
    }
    Ok(&decl.base)
}

fn topology_on(m: &Model, name: &str) -> Result<(FiniteTopology, String)> {
    let decl = m
        .topologies
        .iter()
        .find(|t| t.name == name)
        .ok_or_else(|| Error::ShapeMismatch(format!("missing topology '{name}'")))?;
    Ok((decl.value.topology.clone(), decl.value.space.clone()))
}

fn metric_on(m: &Model, metric: &str, space: &str) -> Result<WeakPseudoMetric> {
    let decl = m
        .metrics
        .iter()
        .find(|d| d.name == metric)
        .ok_or_else(|| Error::ShapeMismatch(format!("missing metric '{metric}'")))?;
    if decl.value.space != space {
        return Err(Error::ShapeMismatch(format!(
            "metric '{metric}' must live on '{space}'"
        )));
    }
    Ok(decl.value.metric.clone())
}

fn shape_err(shape: Shape) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::ShapeMismatch(_) => e,
        other => Error::ShapeMismatch(format!("expected {}: {other}", shape.describe())),
    }
}

fn restrict_metric(d: &WeakPseudoMetric, keep: PointSet) -> Option<WeakPseudoMetric> {
    d.restrict(keep)?.into_weak().ok()
}

fn restrict_base(b: &StructureBase, keep: PointSet) -> Option<StructureBase> {
    let gens = b
        .generators()
        .iter()
        .map(|g| restrict_metric(g, keep))
        .collect::<Option<Vec<_>>>()?;
    StructureBase::new(gens).ok()
}

fn drop_generator(b: &StructureBase, k: usize) -> Option<StructureBase> {
    if b.generators().len() < 2 {
        return None;
    }
    let mut gens = b.generators().to_vec();
    gens.remove(k);
    StructureBase::new(gens).ok()
}

fn subspace(tau: &FiniteTopology, keep: PointSet) -> FiniteTopology {
    FiniteTopology::from_preorder(&tau.to_preorder().restrict(keep)).expect("restricted preorder")
}

fn without(n: usize, p: usize) -> PointSet {
    PointSet::full(n).without(p)
}

/// `f` with source point `x` removed.
fn drop_source(f: &PointMap, x: usize) -> PointMap {
    let table = f
        .table()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != x)
        .map(|(_, &y)| y)
        .collect();
    PointMap::new(f.source_len() - 1, f.target_len(), table).expect("restricted map")
}

/// `f` with unused target point `y` removed.
fn drop_target(f: &PointMap, y: usize) -> PointMap {
    let table = f
        .table()
        .iter()
        .map(|&t| if t > y { t - 1 } else { t })
        .collect();
    PointMap::new(f.source_len(), f.target_len() - 1, table).expect("restricted map")
}

fn unused_targets(f: &PointMap) -> Vec<usize> {
    let image = f.image(PointSet::full(f.source_len()));
    (0..f.target_len())
        .filter(|&y| !image.contains(y))
        .collect()
}

impl Instance {
    pub fn shape(&self) -> Shape {
        match self {
            Instance::Topology { .. } => Shape::Topology,
            Instance::TopologyMap { .. } => Shape::TopologyMap,
            Instance::BaseMap { .. } => Shape::BaseMap,
            Instance::BaseMember { .. } => Shape::BaseMember,
            Instance::Family { .. } => Shape::Family,
            Instance::Factors { .. } => Shape::Factors,
            Instance::Base { .. } => Shape::Base,
        }
    }

    /// Total number of carrier points, a rough size for shrinking.
    pub fn size(&self) -> usize {
        match self {
            Instance::Topology { tau } => tau.len(),
            Instance::TopologyMap { f, .. } | Instance::BaseMap { f, .. } => {
                f.source_len() + f.target_len()
            }
            Instance::BaseMember { base, .. } | Instance::Base { base } => base.len(),
            Instance::Family { family, .. } => family.len(),
            Instance::Factors { d1, d2 } => d1.len() + d2.len(),
        }
    }

    pub fn to_model(&self) -> Result<Model> {
        let mut m = Model::new();
        match self {
            Instance::Topology { tau } => {
                space(&mut m, "X", tau.len())?;
                m.add_topology("T", "X", tau.clone())?;
            }
            Instance::TopologyMap { tx, ty, f } => {
                space(&mut m, "X", tx.len())?;
                space(&mut m, "Y", ty.len())?;
                m.add_topology("TX", "X", tx.clone())?;
                m.add_topology("TY", "Y", ty.clone())?;
                m.add_map("f", "X", "Y", f.clone())?;
            }
            Instance::BaseMap { bx, by, f } => {
                space(&mut m, "X", bx.len())?;
                space(&mut m, "Y", by.len())?;
                add_base(&mut m, "BX", "X", "bx", bx)?;
                add_base(&mut m, "BY", "Y", "by", by)?;
                m.add_map("f", "X", "Y", f.clone())?;
            }
            Instance::BaseMember { base, candidate } => {
                space(&mut m, "X", base.len())?;
                add_base(&mut m, "B", "X", "b", base)?;
                m.add_metric("d", "X", candidate.clone())?;
            }
            Instance::Family { family, d1, d2, d3 } => {
                space(&mut m, "X", family.len())?;
                m.add_metric("d1", "X", d1.clone())?;
                m.add_metric("d2", "X", d2.clone())?;
                m.add_metric("d3", "X", d3.clone())?;
                m.add_family("A", "X", family.clone())?;
            }
            Instance::Factors { d1, d2 } => {
                space(&mut m, "X1", d1.len())?;
                space(&mut m, "X2", d2.len())?;
                m.add_metric("d1", "X1", d1.clone())?;
                m.add_metric("d2", "X2", d2.clone())?;
            }
            Instance::Base { base } => {
                space(&mut m, "X", base.len())?;
                add_base(&mut m, "B", "X", "b", base)?;
            }
        }
        Ok(m)
    }

    /// Reads the objects a law of `shape` needs, by their conventional names.
    pub fn from_model(shape: Shape, m: &Model) -> Result<Instance> {
        let build = || -> Result<Instance> {
            Ok(match shape {
                Shape::Topology => Instance::Topology {
                    tau: m.topology("T")?.clone(),
                },
                Shape::TopologyMap => {
                    let (tx, sx) = topology_on(m, "TX")?;
                    let (ty, sy) = topology_on(m, "TY")?;
                    Instance::TopologyMap {
                        tx,
                        ty,
                        f: map_between(m, "f", &sx, &sy)?,
                    }
                }
                Shape::BaseMap => {
                    let sx = m.base_decl("BX")?.space.clone();
                    let sy = m.base_decl("BY")?.space.clone();
                    Instance::BaseMap {
                        bx: on_space(m, "BX", &sx)?.clone(),
                        by: on_space(m, "BY", &sy)?.clone(),
                        f: map_between(m, "f", &sx, &sy)?,
                    }
                }
                Shape::BaseMember => {
                    let sx = m.base_decl("B")?.space.clone();
                    Instance::BaseMember {
                        base: m.base("B")?.clone(),
                        candidate: metric_on(m, "d", &sx)?,
                    }
                }
                Shape::Family => {
                    let decl = m
                        .families
                        .iter()
                        .find(|f| f.name == "A")
                        .ok_or_else(|| Error::ShapeMismatch("missing family 'A'".into()))?;
                    let sx = decl.value.space.clone();
                    Instance::Family {
                        family: decl.value.family.clone(),
                        d1: metric_on(m, "d1", &sx)?,
                        d2: metric_on(m, "d2", &sx)?,
                        d3: metric_on(m, "d3", &sx)?,
                    }
                }
                Shape::Factors => Instance::Factors {
                    d1: m.metric("d1")?.clone(),
                    d2: m.metric("d2")?.clone(),
                },
                Shape::Base => Instance::Base {
                    base: m.base("B")?.clone(),
                },
            })
        };
        build().map_err(shape_err(shape))
    }

    /// Instances one step smaller: a point or a generator or a set removed.
    pub fn shrink_candidates(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        match self {
            Instance::Topology { tau } => {
                if tau.len() > 1 {
                    for p in 0..tau.len() {
                        out.push(Instance::Topology {
                            tau: subspace(tau, without(tau.len(), p)),
                        });
                    }
                }
            }
            Instance::TopologyMap { tx, ty, f } => {
                if tx.len() > 1 {
                    for x in 0..tx.len() {
                        out.push(Instance::TopologyMap {
                            tx: subspace(tx, without(tx.len(), x)),
                            ty: ty.clone(),
                            f: drop_source(f, x),
                        });
                    }
                }
                for y in unused_targets(f) {
                    out.push(Instance::TopologyMap {
                        tx: tx.clone(),
                        ty: subspace(ty, without(ty.len(), y)),
                        f: drop_target(f, y),
                    });
                }
            }
            Instance::BaseMap { bx, by, f } => {
                if bx.len() > 1 {
                    for x in 0..bx.len() {
                        if let Some(bx) = restrict_base(bx, without(bx.len(), x)) {
                            out.push(Instance::BaseMap {
                                bx,
                                by: by.clone(),
                                f: drop_source(f, x),
                            });
                        }
                    }
                }
                for y in unused_targets(f) {
                    if let Some(by) = restrict_base(by, without(by.len(), y)) {
                        out.push(Instance::BaseMap {
                            bx: bx.clone(),
                            by,
                            f: drop_target(f, y),
                        });
                    }
                }
                for k in 0..bx.generators().len() {
                    if let Some(bx) = drop_generator(bx, k) {
                        out.push(Instance::BaseMap {
                            bx,
                            by: by.clone(),
                            f: f.clone(),
                        });
                    }
                }
                for k in 0..by.generators().len() {
                    if let Some(by) = drop_generator(by, k) {
                        out.push(Instance::BaseMap {
                            bx: bx.clone(),
                            by,
                            f: f.clone(),
                        });
                    }
                }
            }
            Instance::BaseMember { base, candidate } => {
                if base.len() > 1 {
                    for p in 0..base.len() {
                        let keep = without(base.len(), p);
                        if let (Some(base), Some(candidate)) =
                            (restrict_base(base, keep), restrict_metric(candidate, keep))
                        {
                            out.push(Instance::BaseMember { base, candidate });
                        }
                    }
                }
                for k in 0..base.generators().len() {
                    if let Some(base) = drop_generator(base, k) {
                        out.push(Instance::BaseMember {
                            base,
                            candidate: candidate.clone(),
                        });
                    }
                }
            }
            Instance::Family { family, d1, d2, d3 } => {
                let n = family.len();
                if n > 1 {
                    for p in 0..n {
                        let keep = without(n, p);
                        let members = family.members().iter().map(|a| a.compress(keep)).collect();
                        let restricted = (
                            SubsetFamily::new(n - 1, members).ok(),
                            restrict_metric(d1, keep),
                            restrict_metric(d2, keep),
                            restrict_metric(d3, keep),
                        );
                        if let (Some(family), Some(d1), Some(d2), Some(d3)) = restricted {
                            out.push(Instance::Family { family, d1, d2, d3 });
                        }
                    }
                }
                if family.members().len() > 1 {
                    for k in 0..family.members().len() {
                        let mut members = family.members().to_vec();
                        members.remove(k);
                        let family = SubsetFamily::new(n, members).expect("nonempty");
                        out.push(Instance::Family {
                            family,
                            d1: d1.clone(),
                            d2: d2.clone(),
                            d3: d3.clone(),
                        });
                    }
                }
            }
            Instance::Factors { d1, d2 } => {
                for p in 0..d1.len() {
                    if let Some(d1) = restrict_metric(d1, without(d1.len(), p)) {
                        out.push(Instance::Factors { d1, d2: d2.clone() });
                    }
                }
                for p in 0..d2.len() {
                    if let Some(d2) = restrict_metric(d2, without(d2.len(), p)) {
                        out.push(Instance::Factors { d1: d1.clone(), d2 });
                    }
                }
            }
            Instance::Base { base } => {
                if base.len() > 1 {
                    for p in 0..base.len() {
                        if let Some(base) = restrict_base(base, without(base.len(), p)) {
                            out.push(Instance::Base { base });
                        }
                    }
                }
                for k in 0..base.generators().len() {
                    if let Some(base) = drop_generator(base, k) {
                        out.push(Instance::Base { base });
                    }
                }
            }
        }
        out
    }
}
