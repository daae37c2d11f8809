//! The line-oriented model file format.
//!
//! ```text
//! # comments run to end of line
//! space X
//! points 3
//! labels a b c
//! metric m1 of X
//! 0 0 1
//! 0 0 1
//! 1 1 2
//! base B of X = m1
//! topology T of X
//! open 0 1
//! family A of X
//! set 0 1
//! set 1 2
//! map f : X -> X
//! 0 0 2
//! ```
//!
//! Metric rows may also share one line separated by `/`. Entries are `p`,
//! `p/q` or `inf` (the last only after `extended`). Point lists accept
//! indices or labels. In a topology `∅` and `X` are implied; an empty
//! `open` line is the empty set. `pseudo` after a base name asserts that
//! every generator vanishes on the whole diagonal.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::maps::PointMap;
use crate::metric::{Carrier, WeakPseudoMetric};
use crate::points::PointSet;
use crate::structure::{Kind, StructureBase, SubsetFamily};
use crate::topology::FiniteTopology;
use crate::value::{ExtValue, Mode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricDecl {
    pub space: String,
    pub metric: WeakPseudoMetric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseDecl {
    pub space: String,
    pub metrics: Vec<String>,
    pub base: StructureBase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyDecl {
    pub space: String,
    pub topology: FiniteTopology,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDecl {
    pub space: String,
    pub family: SubsetFamily,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDecl {
    pub source: String,
    pub target: String,
    pub map: PointMap,
}

/// Named objects of every kind, each list in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    pub spaces: Vec<Named<Carrier>>,
    pub metrics: Vec<Named<MetricDecl>>,
    pub bases: Vec<Named<BaseDecl>>,
    pub topologies: Vec<Named<TopologyDecl>>,
    pub families: Vec<Named<FamilyDecl>>,
    pub maps: Vec<Named<MapDecl>>,
}

fn invalid(object: &str, clause: impl Into<String>) -> Error {
    Error::Validation {
        object: object.to_string(),
        clause: clause.into(),
    }
}

fn find<'a, T>(items: &'a [Named<T>], name: &str, kind: &str) -> Result<&'a T> {
    items
        .iter()
        .find(|n| n.name == name)
        .map(|n| &n.value)
        .ok_or_else(|| invalid(name, format!("unknown {kind}")))
}

fn fresh<T>(items: &[Named<T>], name: &str, kind: &str) -> Result<()> {
    if items.iter().any(|n| n.name == name) {
        Err(invalid(name, format!("duplicate {kind} name")))
    } else if !is_name(name) {
        Err(invalid(
            name,
            format!("{kind} names use letters, digits, '_', '-' and '.'"),
        ))
    } else {
        Ok(())
    }
}

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
        && !s.starts_with(|c: char| c.is_ascii_digit())
}

impl Model {
    pub fn new() -> Self {
        Model::default()
    }

    pub fn space(&self, name: &str) -> Result<&Carrier> {
        find(&self.spaces, name, "space")
    }

    pub fn metric(&self, name: &str) -> Result<&WeakPseudoMetric> {
        find(&self.metrics, name, "metric").map(|m| &m.metric)
    }

    pub fn base(&self, name: &str) -> Result<&StructureBase> {
        find(&self.bases, name, "base").map(|b| &b.base)
    }

    pub fn base_decl(&self, name: &str) -> Result<&BaseDecl> {
        find(&self.bases, name, "base")
    }

    pub fn topology(&self, name: &str) -> Result<&FiniteTopology> {
        find(&self.topologies, name, "topology").map(|t| &t.topology)
    }

    pub fn family(&self, name: &str) -> Result<&SubsetFamily> {
        find(&self.families, name, "family").map(|f| &f.family)
    }

    pub fn map(&self, name: &str) -> Result<&MapDecl> {
        find(&self.maps, name, "map")
    }

    /// Largest carrier in the model.
    pub fn max_points(&self) -> usize {
        self.spaces
            .iter()
            .map(|s| s.value.size())
            .max()
            .unwrap_or(0)
    }

    fn space_size(&self, space: &str) -> Result<usize> {
        Ok(self.space(space)?.size())
    }

    fn fits(&self, object: &str, space: &str, n: usize) -> Result<()> {
        let expected = self.space_size(space)?;
        if expected == n {
            Ok(())
        } else {
            Err(invalid(
                object,
                format!("has {n} points but space '{space}' has {expected}"),
            ))
        }
    }

    pub fn add_space(&mut self, name: &str, carrier: Carrier) -> Result<()> {
        fresh(&self.spaces, name, "space")?;
        self.spaces.push(Named {
            name: name.into(),
            value: carrier,
        });
        Ok(())
    }

    pub fn add_metric(&mut self, name: &str, space: &str, metric: WeakPseudoMetric) -> Result<()> {
        fresh(&self.metrics, name, "metric")?;
        self.fits(name, space, metric.len())?;
        self.metrics.push(Named {
            name: name.into(),
            value: MetricDecl {
                space: space.into(),
                metric,
            },
        });
        Ok(())
    }

    /// Adds a base over already declared metrics of `space`.
    pub fn add_base(&mut self, name: &str, space: &str, metrics: &[&str]) -> Result<()> {
        fresh(&self.bases, name, "base")?;
        self.space(space)?;
        if metrics.is_empty() {
            return Err(invalid(name, "a base needs at least one metric"));
        }
        let mut gens = Vec::with_capacity(metrics.len());
        for m in metrics {
            let decl = find(&self.metrics, m, "metric")?;
            if decl.space != space {
                return Err(invalid(
                    name,
                    format!("metric '{m}' lives on '{}', not '{space}'", decl.space),
                ));
            }
            gens.push(decl.metric.clone());
        }
        let base = StructureBase::new(gens)?;
        self.bases.push(Named {
            name: name.into(),
            value: BaseDecl {
                space: space.into(),
                metrics: metrics.iter().map(|s| s.to_string()).collect(),
                base,
            },
        });
        Ok(())
    }

    pub fn add_topology(
        &mut self,
        name: &str,
        space: &str,
        topology: FiniteTopology,
    ) -> Result<()> {
        fresh(&self.topologies, name, "topology")?;
        self.fits(name, space, topology.len())?;
        self.topologies.push(Named {
            name: name.into(),
            value: TopologyDecl {
                space: space.into(),
                topology,
            },
        });
        Ok(())
    }

    pub fn add_family(&mut self, name: &str, space: &str, family: SubsetFamily) -> Result<()> {
        fresh(&self.families, name, "family")?;
        self.fits(name, space, family.len())?;
        self.families.push(Named {
            name: name.into(),
            value: FamilyDecl {
                space: space.into(),
                family,
            },
        });
        Ok(())
    }

    pub fn add_map(&mut self, name: &str, source: &str, target: &str, map: PointMap) -> Result<()> {
        fresh(&self.maps, name, "map")?;
        self.fits(name, source, map.source_len())?;
        self.fits(name, target, map.target_len())?;
        self.maps.push(Named {
            name: name.into(),
            value: MapDecl {
                source: source.into(),
                target: target.into(),
                map,
            },
        });
        Ok(())
    }
}

fn write_points(out: &mut String, keyword: &str, set: PointSet) {
    out.push_str(keyword);
    for i in set.iter() {
        let _ = write!(out, " {i}");
    }
    out.push('\n');
}

/// Renders a model in canonical form; [`parse_model`] reads it back unchanged.
pub fn render_model(m: &Model) -> String {
    let mut out = String::new();
    for s in &m.spaces {
        let _ = writeln!(out, "space {}\npoints {}", s.name, s.value.size());
        if let Some(labels) = s.value.labels() {
            let _ = writeln!(out, "labels {}", labels.join(" "));
        }
    }
    for d in &m.metrics {
        let ext = if d.value.metric.mode() == Mode::Extended {
            " extended"
        } else {
            ""
        };
        let _ = writeln!(out, "metric {} of {}{ext}", d.name, d.value.space);
        for row in d.value.metric.rows() {
            let cells: Vec<String> = row.iter().map(ExtValue::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    for b in &m.bases {
        let pseudo = if b.value.base.kind() == Kind::Pseudo {
            " pseudo"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "base {} of {}{pseudo} = {}",
            b.name,
            b.value.space,
            b.value.metrics.join(" ")
        );
    }
    for t in &m.topologies {
        let _ = writeln!(out, "topology {} of {}", t.name, t.value.space);
        let tau = &t.value.topology;
        let full = PointSet::full(tau.len());
        let listed = tau.opens().unwrap_or_else(|_| tau.neighborhoods().to_vec());
        for u in listed.into_iter().filter(|&u| !u.is_empty() && u != full) {
            write_points(&mut out, "open", u);
        }
    }
    for f in &m.families {
        let _ = writeln!(out, "family {} of {}", f.name, f.value.space);
        for &a in f.value.family.members() {
            write_points(&mut out, "set", a);
        }
    }
    for f in &m.maps {
        let _ = writeln!(
            out,
            "map {} : {} -> {}\n{}",
            f.name, f.value.source, f.value.target, f.value.map
        );
    }
    out
}

/// A whitespace token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    col: usize,
    text: &'a str,
}

#[derive(Debug)]
struct Line<'a> {
    no: usize,
    toks: Vec<Tok<'a>>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut toks = Vec::new();
            let mut start = None;
            for (k, ch) in body
                .char_indices()
                .chain(std::iter::once((body.len(), ' ')))
            {
                if ch.is_whitespace() {
                    if let Some(s) = start.take() {
                        toks.push(Tok {
                            col: body[..s].chars().count() + 1,
                            text: &body[s..k],
                        });
                    }
                } else if start.is_none() {
                    start = Some(k);
                }
            }
            (!toks.is_empty()).then_some(Line { no: i + 1, toks })
        })
        .collect()
}

struct Parser<'a, 'b> {
    lines: &'b [Line<'a>],
    pos: usize,
    model: Model,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

impl<'a, 'b> Parser<'a, 'b> {
    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn keyword_at(&self, kw: &str) -> bool {
        self.peek().is_some_and(|l| l.toks[0].text == kw)
    }

    fn expect(line: &Line<'a>, k: usize, what: &str) -> Result<Tok<'a>> {
        line.toks.get(k).copied().ok_or_else(|| {
            let col = line.toks.last().map_or(1, |t| t.col + t.text.len());
            perr(line.no, col, format!("expected {what}"))
        })
    }

    fn no_more(line: &Line<'a>, k: usize) -> Result<()> {
        match line.toks.get(k) {
            Some(t) => Err(perr(
                line.no,
                t.col,
                format!("unexpected token '{}'", t.text),
            )),
            None => Ok(()),
        }
    }

    fn name(line: &Line<'a>, k: usize, what: &str) -> Result<&'a str> {
        let t = Self::expect(line, k, what)?;
        if is_name(t.text) {
            Ok(t.text)
        } else {
            Err(perr(
                line.no,
                t.col,
                format!("'{}' is not a valid {what}", t.text),
            ))
        }
    }

    fn literal(line: &Line<'a>, k: usize, word: &str) -> Result<()> {
        let t = Self::expect(line, k, &format!("'{word}'"))?;
        if t.text == word {
            Ok(())
        } else {
            Err(perr(
                line.no,
                t.col,
                format!("expected '{word}', found '{}'", t.text),
            ))
        }
    }

    /// Resolves `space NAME` references, reporting the token position.
    fn space_ref(&self, line: &Line<'a>, k: usize) -> Result<(&'a str, usize)> {
        let t = Self::expect(line, k, "space name")?;
        match self.model.space(t.text) {
            Ok(c) => Ok((t.text, c.size())),
            Err(_) => Err(perr(line.no, t.col, format!("unknown space '{}'", t.text))),
        }
    }

    fn point(&self, space: &str, line: &Line<'a>, t: Tok<'a>) -> Result<usize> {
        let carrier = self.model.space(space).expect("resolved");
        let idx = match t.text.parse::<usize>() {
            Ok(i) => Some(i),
            Err(_) => carrier
                .labels()
                .and_then(|ls| ls.iter().position(|l| l == t.text)),
        };
        match idx {
            Some(i) if i < carrier.size() => Ok(i),
            _ => Err(perr(
                line.no,
                t.col,
                format!("'{}' is not a point of '{space}'", t.text),
            )),
        }
    }

    fn point_set(&self, space: &str, line: &Line<'a>) -> Result<PointSet> {
        let mut s = PointSet::EMPTY;
        for &t in &line.toks[1..] {
            s = s.with(self.point(space, line, t)?);
        }
        Ok(s)
    }

    fn run(mut self) -> Result<Model> {
        let lines = self.lines;
        while let Some(line) = lines.get(self.pos) {
            let head = line.toks[0];
            self.pos += 1;
            match head.text {
                "space" => self.space(line)?,
                "metric" => self.metric(line)?,
                "base" => self.base(line)?,
                "topology" => self.topology(line)?,
                "family" => self.family(line)?,
                "map" => self.map(line)?,
                other => {
                    return Err(perr(
                        line.no,
                        head.col,
                        format!("unknown declaration '{other}'"),
                    ))
                }
            }
        }
        Ok(self.model)
    }

    fn take_line(&mut self, after: &Line<'a>, what: &str) -> Result<usize> {
        if self.pos < self.lines.len() {
            self.pos += 1;
            Ok(self.pos - 1)
        } else {
            Err(perr(after.no + 1, 1, format!("expected {what}")))
        }
    }

    fn space(&mut self, line: &Line<'a>) -> Result<()> {
        let name = Self::name(line, 1, "space name")?;
        Self::no_more(line, 2)?;
        let pl = self.take_line(line, "'points N'")?;
        let pline = &self.lines[pl];
        Self::literal(pline, 0, "points")?;
        let nt = Self::expect(pline, 1, "point count")?;
        let n: usize = nt.text.parse().map_err(|_| {
            perr(
                pline.no,
                nt.col,
                format!("'{}' is not a point count", nt.text),
            )
        })?;
        Self::no_more(pline, 2)?;
        let carrier = if self.keyword_at("labels") {
            let ll = self.pos;
            self.pos += 1;
            let labels: Vec<String> = self.lines[ll].toks[1..]
                .iter()
                .map(|t| t.text.to_string())
                .collect();
            Carrier::with_labels(n, labels)
        } else {
            Carrier::new(n)
        };
        let carrier = carrier.map_err(|e| invalid(name, e.to_string()))?;
        self.model.add_space(name, carrier)
    }

    fn metric(&mut self, line: &Line<'a>) -> Result<()> {
        let name = Self::name(line, 1, "metric name")?;
        Self::literal(line, 2, "of")?;
        let (space, n) = self.space_ref(line, 3)?;
        let mode = match line.toks.get(4) {
            None => Mode::Strict,
            Some(t) if t.text == "extended" => {
                Self::no_more(line, 5)?;
                Mode::Extended
            }
            Some(t) => {
                return Err(perr(
                    line.no,
                    t.col,
                    format!("expected 'extended', found '{}'", t.text),
                ))
            }
        };
        let mut rows: Vec<Vec<ExtValue>> = Vec::with_capacity(n);
        while rows.len() < n {
            let k = self.take_line(line, "metric row")?;
            let lines = self.lines;
            let row_line = &lines[k];
            let mut current = Vec::new();
            let mut chunks = Vec::new();
            for &t in &row_line.toks {
                if t.text == "/" {
                    chunks.push(std::mem::take(&mut current));
                } else {
                    current.push(t);
                }
            }
            chunks.push(current);
            for chunk in chunks.into_iter().filter(|c| !c.is_empty()) {
                if rows.len() == n {
                    return Err(perr(
                        row_line.no,
                        chunk[0].col,
                        format!("metric '{name}' has more than {n} rows"),
                    ));
                }
                if chunk.len() != n {
                    return Err(perr(
                        row_line.no,
                        chunk[0].col,
                        format!("row has {} entries, expected {n}", chunk.len()),
                    ));
                }
                let row = chunk
                    .iter()
                    .map(|t| {
                        t.text.parse::<ExtValue>().map_err(|_| {
                            perr(
                                row_line.no,
                                t.col,
                                format!("'{}' is not p, p/q or inf", t.text),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
        }
        let metric = WeakPseudoMetric::new(rows, mode).map_err(|e| invalid(name, e.to_string()))?;
        self.model.add_metric(name, space, metric)
    }

    fn base(&mut self, line: &Line<'a>) -> Result<()> {
        let name = Self::name(line, 1, "base name")?;
        Self::literal(line, 2, "of")?;
        let (space, _) = self.space_ref(line, 3)?;
        let mut k = 4;
        let pseudo = line.toks.get(k).is_some_and(|t| t.text == "pseudo");
        if pseudo {
            k += 1;
        }
        Self::literal(line, k, "=")?;
        let refs: Vec<Tok<'a>> = line.toks[k + 1..].to_vec();
        if refs.is_empty() {
            return Err(Self::expect(line, k + 1, "metric name").unwrap_err());
        }
        for t in &refs {
            if self.model.metric(t.text).is_err() {
                return Err(perr(line.no, t.col, format!("unknown metric '{}'", t.text)));
            }
        }
        let names: Vec<&str> = refs.iter().map(|t| t.text).collect();
        self.model.add_base(name, space, &names)?;
        if pseudo && self.model.base(name)?.kind() != Kind::Pseudo {
            return Err(invalid(
                name,
                "declared pseudo but a generator is nonzero on the diagonal",
            ));
        }
        Ok(())
    }

    fn topology(&mut self, line: &Line<'a>) -> Result<()> {
        let name = Self::name(line, 1, "topology name")?;
        Self::literal(line, 2, "of")?;
        let (space, n) = self.space_ref(line, 3)?;
        Self::no_more(line, 4)?;
        let mut opens = Vec::new();
        while self.keyword_at("open") {
            let k = self.pos;
            self.pos += 1;
            opens.push(self.point_set(space, &self.lines[k])?);
        }
        let tau = FiniteTopology::from_opens(n, &opens).map_err(|e| match e {
            Error::Validation { clause, .. } => invalid(name, clause),
            other => invalid(name, other.to_string()),
        })?;
        self.model.add_topology(name, space, tau)
    }

    fn family(&mut self, line: &Line<'a>) -> Result<()> {
        let name = Self::name(line, 1, "family name")?;
        Self::literal(line, 2, "of")?;
        let (space, n) = self.space_ref(line, 3)?;
        Self::no_more(line, 4)?;
        let mut sets = Vec::new();
        while self.keyword_at("set") {
            let k = self.pos;
            self.pos += 1;
            sets.push(self.point_set(space, &self.lines[k])?);
        }
        let family = SubsetFamily::new(n, sets).map_err(|e| invalid(name, e.to_string()))?;
        self.model.add_family(name, space, family)
    }

    fn map(&mut self, line: &Line<'a>) -> Result<()> {
        let name = Self::name(line, 1, "map name")?;
        Self::literal(line, 2, ":")?;
        let (source, n) = self.space_ref(line, 3)?;
        Self::literal(line, 4, "->")?;
        let (target, m) = self.space_ref(line, 5)?;
        Self::no_more(line, 6)?;
        let k = self.take_line(line, "map targets")?;
        let lines = self.lines;
        let tl = &lines[k];
        if tl.toks.len() != n {
            return Err(perr(
                tl.no,
                tl.toks[0].col,
                format!("map has {} targets, expected {n}", tl.toks.len()),
            ));
        }
        let table = tl
            .toks
            .iter()
            .map(|&t| self.point(target, tl, t))
            .collect::<Result<Vec<_>>>()?;
        let map = PointMap::new(n, m, table).map_err(|e| invalid(name, e.to_string()))?;
        self.model.add_map(name, source, target, map)
    }
}

pub fn parse_model(text: &str) -> Result<Model> {
    let lines = tokenize(text);
    Parser {
        lines: &lines,
        pos: 0,
        model: Model::new(),
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;

    const M1: &str = "space X\npoints 3\nmetric m1 of X\n0 0 1 / 0 0 1 / 1 1 2\n";

    #[test]
    fn minimal_file() {
        let m = parse_model("space X\npoints 1\nmetric z of X\n0").unwrap();
        assert_eq!(m.spaces.len(), 1);
        assert_eq!(m.metric("z").unwrap(), &WeakPseudoMetric::zero(1));
    }

    #[test]
    fn slash_rows_and_round_trip() {
        let m = parse_model(M1).unwrap();
        let text = render_model(&m);
        assert_eq!(
            text,
            "space X\npoints 3\nmetric m1 of X\n0 0 1\n0 0 1\n1 1 2\n"
        );
        assert_eq!(parse_model(&text).unwrap(), m);
    }

    #[test]
    fn asymmetric_matrix_is_a_validation_error() {
        let err = parse_model("space X\npoints 2\nmetric d of X\n0 1\n2 0\n").unwrap_err();
        match err {
            Error::Validation { object, clause } => {
                assert_eq!(object, "d");
                assert!(
                    clause.contains("(0,1)") || clause.contains("(0, 1)"),
                    "{clause}"
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn full_model_round_trips() {
        let text = "\
# everything
space X
points 3
labels a b c
space Y
points 2
metric m1 of X
0 0 1
0 0 1
1 1 2
metric d of Y extended
0 inf
inf 0
metric h of Y
0 1/2
1/2 0
base B of X = m1
base C of Y pseudo = d h
topology T of X
open a b
open 2
family A of X
set 0 1
set
map f : X -> Y
0 0 1
";
        let m = parse_model(text).unwrap();
        assert_eq!(m.topology("T").unwrap().opens().unwrap().len(), 4);
        assert_eq!(m.family("A").unwrap().members()[1], PointSet::EMPTY);
        let once = render_model(&m);
        let again = parse_model(&once).unwrap();
        assert_eq!(again, m);
        assert_eq!(render_model(&again), once);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_model("space X\npoints 2\nmetric d of X\n0 x\n1 0\n").unwrap_err(),
            Error::Parse {
                line: 4,
                col: 3,
                msg: "'x' is not p, p/q or inf".into()
            }
        );
        assert!(matches!(
            parse_model("spaces X\n"),
            Err(Error::Parse {
                line: 1,
                col: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_model("space X\npoints 2\nmap f : X -> Z\n0 0"),
            Err(Error::Parse {
                line: 3,
                col: 14,
                ..
            })
        ));
        assert!(matches!(
            parse_model("space X\npoints 2\nmetric d of X\n0 inf\ninf 0\n"),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            parse_model("space X\npoints 3\ntopology T of X\nopen 0\nopen 1\n"),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            parse_model("space X\npoints 2\nmetric w of X\n1 1\n1 0\nbase B of X pseudo = w\n"),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            parse_model("space X\npoints 1\nspace X\npoints 1\n"),
            Err(Error::Validation { .. })
        ));
    }
}
