//! Reports: ordered key/value records rendered as `key=value` lines or as
//! one JSON document with the same keys.

use serde_json::{Map, Value as Json};

use crate::laws::{Counterexample, LawId, SearchOutcome, Verdict};
use crate::maps::{
    ClassificationReport, LocalVerdict, RemarkFailure, RemarkVerdict, ScalarVerdict, WlVerdict,
};
use crate::model::render_model;
use crate::topology::Continuity;
use crate::uniformity::UcVerdict;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Text(String),
    List(Vec<String>),
    /// Multi-line text, rendered heredoc-style in text mode.
    Block(String),
    Section(Report),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

/// Terminator line of a text-mode block.
pub const BLOCK_END: &str = "END";

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.entries.push((key.into(), value));
        self
    }

    pub fn bool(&mut self, key: &str, v: bool) -> &mut Self {
        self.push(key, Value::Bool(v))
    }

    pub fn int(&mut self, key: &str, v: impl TryInto<i64>) -> &mut Self {
        let v = v.try_into().unwrap_or(i64::MAX);
        self.push(key, Value::Int(v))
    }

    pub fn text(&mut self, key: &str, v: impl Into<String>) -> &mut Self {
        self.push(key, Value::Text(v.into()))
    }

    pub fn list(&mut self, key: &str, items: impl IntoIterator<Item = String>) -> &mut Self {
        self.push(key, Value::List(items.into_iter().collect()))
    }

    pub fn block(&mut self, key: &str, v: impl Into<String>) -> &mut Self {
        self.push(key, Value::Block(v.into()))
    }

    pub fn null(&mut self, key: &str) -> &mut Self {
        self.push(key, Value::Null)
    }

    pub fn section(&mut self, key: &str, r: Report) -> &mut Self {
        self.push(key, Value::Section(r))
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.entries
    }

    fn write_text(&self, prefix: &str, out: &mut String) {
        for (k, v) in &self.entries {
            let key = format!("{prefix}{k}");
            match v {
                Value::Null => out.push_str(&format!("{key}=n/a\n")),
                Value::Bool(b) => out.push_str(&format!("{key}={b}\n")),
                Value::Int(i) => out.push_str(&format!("{key}={i}\n")),
                Value::Text(t) => out.push_str(&format!("{key}={t}\n")),
                Value::List(items) => out.push_str(&format!("{key}={}\n", items.join(" "))),
                Value::Block(b) => {
                    out.push_str(&format!("{key}<<{BLOCK_END}\n{b}"));
                    if !b.ends_with('\n') {
                        out.push('\n');
                    }
                    out.push_str(BLOCK_END);
                    out.push('\n');
                }
                Value::Section(r) => r.write_text(&format!("{key}."), out),
            }
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.write_text("", &mut out);
        out
    }

    pub fn to_json(&self) -> Json {
        let mut map = Map::new();
        for (k, v) in &self.entries {
            let j = match v {
                Value::Null => Json::Null,
                Value::Bool(b) => Json::Bool(*b),
                Value::Int(i) => Json::from(*i),
                Value::Text(t) | Value::Block(t) => Json::String(t.clone()),
                Value::List(items) => {
                    Json::Array(items.iter().cloned().map(Json::String).collect())
                }
                Value::Section(r) => r.to_json(),
            };
            map.insert(k.clone(), j);
        }
        Json::Object(map)
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("plain JSON values");
        s.push('\n');
        s
    }
}

pub fn render_report(r: &Report, json: bool) -> String {
    if json {
        r.render_json()
    } else {
        r.render_text()
    }
}

/// Reads a `key<<END ... END` block back out of text-mode output.
pub fn extract_block(text: &str, key: &str) -> Option<String> {
    let header = format!("{key}<<{BLOCK_END}");
    let mut lines = text.lines();
    lines.find(|l| *l == header)?;
    let mut out = String::new();
    for line in lines {
        if line == BLOCK_END {
            return Some(out);
        }
        out.push_str(line);
        out.push('\n');
    }
    None
}

pub fn describe_continuity(c: Continuity) -> String {
    match c {
        Continuity::Continuous => "continuous".into(),
        Continuity::Discontinuous { point, open } => {
            format!("preimage of open set {open} is not a neighborhood of point {point}")
        }
    }
}

pub fn describe_uc(v: UcVerdict) -> String {
    match v {
        UcVerdict::Holds => "uniformly continuous".into(),
        UcVerdict::Fails {
            pair: (a, b),
            image: (c, d),
        } => {
            format!("kernel pair ({a},{b}) maps to ({c},{d}) outside the target kernel")
        }
    }
}

fn describe_remark(v: RemarkVerdict) -> Option<String> {
    match v {
        RemarkVerdict::Holds => None,
        RemarkVerdict::Fails { point, reason } => Some(match reason {
            RemarkFailure::ZeroDiagonal => format!("every member vanishes at ({point},{point})"),
            RemarkFailure::ClassNotCollapsed { xi } => {
                format!("points {point} and {xi} are inseparable but their images are separated")
            }
            RemarkFailure::InfiniteAtImage => {
                format!("a target member is infinite on the diagonal at f({point})")
            }
        }),
    }
}

/// Every verdict of [`crate::maps::classify`], with witnesses for failures.
pub fn classification_report(c: &ClassificationReport, strict_remark: bool) -> Report {
    let mut r = Report::new();
    match c.lipschitz {
        Some(b) => r.bool("lipschitz", b),
        None => r.null("lipschitz"),
    };
    r.bool("weak_lipschitz", c.weak_lipschitz.holds());
    if let WlVerdict::Fails(w) = &c.weak_lipschitz {
        r.text("weak_lipschitz_witness", w.to_string());
    }
    r.bool("locally_weak_lipschitz", c.locally_weak_lipschitz.holds());
    if let LocalVerdict::Fails { point, witness } = &c.locally_weak_lipschitz {
        r.text(
            "locally_weak_lipschitz_witness",
            format!("at point {point}: {witness}"),
        );
    }
    r.bool("scalar_weak_lipschitz", c.scalar_weak_lipschitz.holds());
    if let ScalarVerdict::Fails { pair: (a, b) } = c.scalar_weak_lipschitz {
        r.text(
            "scalar_weak_lipschitz_witness",
            format!("zero pair ({a},{b}) has separated images"),
        );
    }
    r.bool("continuous_induced", c.continuous_induced.holds());
    if !c.continuous_induced.holds() {
        r.text(
            "continuous_induced_witness",
            describe_continuity(c.continuous_induced),
        );
    }
    match c.uniformly_continuous {
        Some(v) => {
            r.bool("uniformly_continuous", v.holds());
            if !v.holds() {
                r.text("uniformly_continuous_witness", describe_uc(v));
            }
        }
        None => {
            r.null("uniformly_continuous");
            r.text(
                "uniformly_continuous_note",
                "an improper base has no uniformity",
            );
        }
    }
    let (headline, mode) = if strict_remark {
        (c.remark_strict, "strict")
    } else {
        (c.remark_relaxed, "relaxed")
    };
    r.text("locally_lipschitz_remark_mode", mode);
    r.bool("locally_lipschitz_remark", headline.holds());
    if let Some(w) = describe_remark(headline) {
        r.text("locally_lipschitz_remark_witness", w);
    }
    r.bool("remark_strict", c.remark_strict.holds());
    r.bool("remark_relaxed", c.remark_relaxed.holds());
    r
}

pub fn catalog_report() -> Report {
    let mut r = Report::new();
    for law in LawId::ALL {
        let mut entry = Report::new();
        entry.text("expectation", law.expectation().to_string());
        entry.text("shape", law.shape().describe());
        entry.text("statement", law.statement());
        r.section(law.code(), entry);
    }
    r
}

fn counterexample_block(r: &mut Report, key: &str, inst: &crate::laws::Instance) {
    match inst.to_model() {
        Ok(m) => r.block(key, render_model(&m)),
        Err(e) => r.text(key, format!("unrenderable: {e}")),
    };
}

pub fn verdict_report(law: LawId, verdict: &Verdict) -> Report {
    let mut r = Report::new();
    r.text("law", law.code());
    r.text("expectation", law.expectation().to_string());
    match verdict {
        Verdict::Pass { vacuous } => {
            r.text("verdict", "pass");
            r.bool("vacuous", *vacuous);
        }
        Verdict::Fail { clause } => {
            r.text("verdict", "fail");
            r.text("clause", clause.clone());
        }
    }
    r
}

pub fn search_report(o: &SearchOutcome) -> Report {
    let mut r = Report::new();
    r.text("law", o.law.code());
    r.text("expectation", o.law.expectation().to_string());
    r.int("n", o.config.n as i64);
    r.text("seed", o.config.seed.to_string());
    r.int("trials", o.config.trials as i64);
    r.int("workers", o.config.workers as i64);
    r.int("evaluated", o.evaluated as i64);
    r.int("vacuous", o.vacuous as i64);
    match &o.counterexample {
        None => {
            r.text("result", "none-found");
        }
        Some(Counterexample {
            index,
            clause,
            original,
            shrunk,
        }) => {
            r.text("result", "counterexample-found");
            r.int("counterexample_index", *index as i64);
            r.text(
                "counterexample_seed",
                o.config.seed.wrapping_add(*index).to_string(),
            );
            r.text("clause", clause.clone());
            counterexample_block(&mut r, "counterexample", original);
            counterexample_block(&mut r, "shrunk", shrunk);
        }
    }
    r.bool("as_expected", o.as_expected());
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{search, Instance, SearchConfig};
    use crate::maps::{classify, PointMap};
    use crate::metric::WeakPseudoMetric;
    use crate::model::parse_model;
    use crate::structure::StructureBase;

    #[test]
    fn text_and_json_share_keys() {
        let mut r = Report::new();
        r.bool("a", true)
            .int("b", 3)
            .text("c", "x y")
            .list("d", vec!["{0}".into(), "{1}".into()])
            .null("e");
        assert_eq!(r.render_text(), "a=true\nb=3\nc=x y\nd={0} {1}\ne=n/a\n");
        let j: Json = serde_json::from_str(&r.render_json()).unwrap();
        let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["a", "b", "c", "d", "e"]);
    }

    #[test]
    fn classification_lines() {
        let m1 = WeakPseudoMetric::from_ints(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 2]]).unwrap();
        let disc = WeakPseudoMetric::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        let f = PointMap::new(3, 2, vec![0, 0, 1]).unwrap();
        let c = classify(&f, &StructureBase::single(m1), &StructureBase::single(disc)).unwrap();
        let text = classification_report(&c, false).render_text();
        assert!(text.lines().any(|l| l == "weak_lipschitz=true"), "{text}");
        assert!(text.lines().any(|l| l == "lipschitz=n/a"), "{text}");
    }

    #[test]
    fn counterexample_block_reparses() {
        let o = search(
            LawId::DistScalarWl,
            &SearchConfig {
                n: 2,
                seed: 0,
                trials: 100,
                workers: 1,
                shrink: true,
            },
        )
        .unwrap();
        let text = search_report(&o).render_text();
        let block = extract_block(&text, "counterexample").expect("block present");
        let model = parse_model(&block).unwrap();
        let inst = Instance::from_model(LawId::DistScalarWl.shape(), &model).unwrap();
        assert_eq!(&inst, &o.counterexample.unwrap().original);
    }
}
