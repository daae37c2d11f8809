//! Metric matrices on finite carriers: validation, pointwise algebra, zero
//! relations, and balls.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use num::{One, Signed};

use crate::error::{same_carrier, Error, Result};
use crate::maps::PointMap;
use crate::points::{check_size, PointSet, Relation};
use crate::value::{ExtValue, Mode, Rational};

/// Reports keep at most this many violations.
pub const REPORT_LIMIT: usize = 10;

/// A finite set `{0, .., size-1}` with optional distinct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier {
    size: usize,
    labels: Option<Vec<String>>,
}

impl Carrier {
    pub fn new(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(Carrier { size, labels: None })
    }

    pub fn with_labels(size: usize, labels: Vec<String>) -> Result<Self> {
        check_size(size)?;
        if labels.len() != size {
            return Err(Error::InvalidInput(format!(
                "{} labels for {size} points",
                labels.len()
            )));
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidInput("point labels must be distinct".into()));
        }
        // Points are written as indices or labels, so a label must not read as an index.
        if let Some(bad) = labels.iter().find(|l| {
            l.is_empty()
                || l.parse::<usize>().is_ok()
                || l.contains(char::is_whitespace)
                || l.as_str() == "/"
        }) {
            return Err(Error::InvalidInput(format!(
                "'{bad}' cannot be a point label"
            )));
        }
        Ok(Carrier {
            size,
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// One violated clause of the metric axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `v(i, j) != v(j, i)`.
    Asymmetry {
        i: usize,
        j: usize,
    },
    /// `v(i, k) > v(i, j) + v(j, k)`.
    Triangle {
        i: usize,
        j: usize,
        k: usize,
    },
    NoDiagonalZero,
    NonzeroDiagonal {
        i: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Asymmetry { i, j } => write!(f, "asymmetry at ({i},{j})"),
            Violation::Triangle { i, j, k } => write!(f, "triangle violated at ({i},{j},{k})"),
            Violation::NoDiagonalZero => f.write_str("no diagonal zero"),
            Violation::NonzeroDiagonal { i } => write!(f, "diagonal entry v({i},{i}) != 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    /// The first [`REPORT_LIMIT`] violations found.
    pub violations: Vec<Violation>,
    /// Total number of violations, including those not kept.
    pub total: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.total == 0
    }

    fn push(&mut self, v: Violation) {
        if self.violations.len() < REPORT_LIMIT {
            self.violations.push(v);
        }
        self.total += 1;
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))?;
        if self.total > self.violations.len() {
            write!(f, " (+{} more)", self.total - self.violations.len())?;
        }
        Ok(())
    }
}

fn square(rows: &[Vec<ExtValue>], mode: Mode) -> Result<usize> {
    let n = rows.len();
    check_size(n)?;
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::InvalidInput(format!(
                "row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        if mode == Mode::Strict {
            if let Some(j) = r.iter().position(ExtValue::is_infinite) {
                return Err(Error::ExtValueInStrictMode { row: i, col: j });
            }
        }
    }
    Ok(n)
}

fn check_form(rows: &[Vec<ExtValue>], report: &mut ValidationReport) {
    let n = rows.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if rows[i][j] != rows[j][i] {
                report.push(Violation::Asymmetry { i, j });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if rows[i][k] > &rows[i][j] + &rows[j][k] {
                    report.push(Violation::Triangle { i, j, k });
                }
            }
        }
    }
}

/// Checks symmetry and the triangle inequality only.
pub fn validate_form(rows: &[Vec<ExtValue>], mode: Mode) -> Result<ValidationReport> {
    square(rows, mode)?;
    let mut report = ValidationReport::default();
    check_form(rows, &mut report);
    Ok(report)
}

/// Checks the weak pseudo-metric axioms: symmetry, triangle inequality over
/// all triples, and at least one vanishing diagonal entry.
pub fn validate_weak_pm(rows: &[Vec<ExtValue>], mode: Mode) -> Result<ValidationReport> {
    let n = square(rows, mode)?;
    let mut report = ValidationReport::default();
    check_form(rows, &mut report);
    if !(0..n).any(|i| rows[i][i].is_zero()) {
        report.push(Violation::NoDiagonalZero);
    }
    Ok(report)
}

/// As [`validate_weak_pm`], additionally requiring the whole diagonal to vanish.
pub fn validate_pseudo_metric(rows: &[Vec<ExtValue>], mode: Mode) -> Result<ValidationReport> {
    let n = square(rows, mode)?;
    let mut report = ValidationReport::default();
    check_form(rows, &mut report);
    let mut any_zero = false;
    for i in 0..n {
        if rows[i][i].is_zero() {
            any_zero = true;
        } else {
            report.push(Violation::NonzeroDiagonal { i });
        }
    }
    if !any_zero {
        report.push(Violation::NoDiagonalZero);
    }
    Ok(report)
}

/// A symmetric matrix satisfying the triangle inequality. Pullbacks and
/// pointwise combinations land here because they may lose diagonal vanishing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreMetricForm {
    n: usize,
    mode: Mode,
    values: Vec<ExtValue>,
}

impl PreMetricForm {
    pub fn new(rows: Vec<Vec<ExtValue>>, mode: Mode) -> Result<Self> {
        let report = validate_form(&rows, mode)?;
        if !report.is_valid() {
            return Err(Error::InvalidMetric(report));
        }
        Ok(Self::from_rows_unchecked(rows, mode))
    }

    fn from_rows_unchecked(rows: Vec<Vec<ExtValue>>, mode: Mode) -> Self {
        let n = rows.len();
        PreMetricForm {
            n,
            mode,
            values: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds `v(i, j) = f(i, j)`; the caller guarantees the form axioms.
    pub(crate) fn from_fn_unchecked(
        n: usize,
        mode: Mode,
        mut f: impl FnMut(usize, usize) -> ExtValue,
    ) -> Self {
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        let form = PreMetricForm { n, mode, values };
        debug_assert!(validate_form(&form.rows(), mode)
            .map(|r| r.is_valid())
            .unwrap_or(false));
        form
    }

    /// The zero form on `n` points.
    pub fn zero(n: usize) -> Self {
        PreMetricForm::from_fn_unchecked(n, Mode::Strict, |_, _| ExtValue::zero())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtValue {
        &self.values[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<ExtValue>> {
        self.values.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn has_diagonal_zero(&self) -> bool {
        (0..self.n).any(|i| self.get(i, i).is_zero())
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_zero())
    }

    pub fn has_infinite(&self) -> bool {
        self.values.iter().any(ExtValue::is_infinite)
    }

    /// Re-tags the form; fails when infinite entries are present in strict mode.
    pub fn with_mode(mut self, mode: Mode) -> Result<Self> {
        if mode == Mode::Strict {
            if let Some(p) = self.values.iter().position(ExtValue::is_infinite) {
                return Err(Error::ExtValueInStrictMode {
                    row: p / self.n,
                    col: p % self.n,
                });
            }
        }
        self.mode = mode;
        Ok(self)
    }

    pub fn is_weak_pm(&self) -> bool {
        self.has_diagonal_zero()
    }

    pub fn into_weak(self) -> Result<WeakPseudoMetric> {
        if self.has_diagonal_zero() {
            Ok(WeakPseudoMetric(self))
        } else {
            Err(Error::InvalidMetric(ValidationReport {
                violations: vec![Violation::NoDiagonalZero],
                total: 1,
            }))
        }
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &PreMetricForm) -> bool {
        self.n == other.n && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// `{(i, j) : v(i, j) = 0}`.
    pub fn zero_relation(&self) -> Relation {
        Relation::from_fn(self.n, |i, j| self.get(i, j).is_zero())
    }

    /// `{(i, j) : v(i, j) = inf}`.
    pub fn infinite_relation(&self) -> Relation {
        Relation::from_fn(self.n, |i, j| self.get(i, j).is_infinite())
    }

    /// Submatrix on the points of `keep`; `None` if `keep` is empty.
    pub fn restrict(&self, keep: PointSet) -> Option<PreMetricForm> {
        let idx: Vec<usize> = keep.iter().collect();
        if idx.is_empty() {
            return None;
        }
        Some(PreMetricForm::from_fn_unchecked(
            idx.len(),
            self.mode,
            |a, b| self.get(idx[a], idx[b]).clone(),
        ))
    }
}

impl fmt::Display for PreMetricForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.values.chunks(self.n).enumerate() {
            if i > 0 {
                f.write_str(" / ")?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            f.write_str(&cells.join(" "))?;
        }
        Ok(())
    }
}

/// A form that vanishes at one or more diagonal points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakPseudoMetric(PreMetricForm);

impl WeakPseudoMetric {
    pub fn new(rows: Vec<Vec<ExtValue>>, mode: Mode) -> Result<Self> {
        let report = validate_weak_pm(&rows, mode)?;
        if !report.is_valid() {
            return Err(Error::InvalidMetric(report));
        }
        Ok(WeakPseudoMetric(PreMetricForm::from_rows_unchecked(
            rows, mode,
        )))
    }

    /// Convenience constructor for strict-mode integer matrices.
    pub fn from_ints(rows: &[&[u64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| ExtValue::int(v)).collect())
            .collect();
        WeakPseudoMetric::new(rows, Mode::Strict)
    }

    pub fn zero(n: usize) -> Self {
        WeakPseudoMetric(PreMetricForm::zero(n))
    }

    pub fn form(&self) -> &PreMetricForm {
        &self.0
    }

    pub fn into_form(self) -> PreMetricForm {
        self.0
    }

    pub fn is_pseudo(&self) -> bool {
        self.0.has_zero_diagonal()
    }

    pub fn into_pseudo(self) -> Result<PseudoMetric> {
        let report = validate_pseudo_metric(&self.0.rows(), self.0.mode)?;
        if report.is_valid() {
            Ok(PseudoMetric(self))
        } else {
            Err(Error::InvalidMetric(report))
        }
    }

    pub(crate) fn from_form_unchecked(form: PreMetricForm) -> Self {
        debug_assert!(form.has_diagonal_zero());
        WeakPseudoMetric(form)
    }
}

impl Deref for WeakPseudoMetric {
    type Target = PreMetricForm;

    fn deref(&self) -> &PreMetricForm {
        &self.0
    }
}

impl fmt::Display for WeakPseudoMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A weak pseudo-metric vanishing on the whole diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PseudoMetric(WeakPseudoMetric);

impl PseudoMetric {
    pub fn new(rows: Vec<Vec<ExtValue>>, mode: Mode) -> Result<Self> {
        let report = validate_pseudo_metric(&rows, mode)?;
        if !report.is_valid() {
            return Err(Error::InvalidMetric(report));
        }
        Ok(PseudoMetric(WeakPseudoMetric(
            PreMetricForm::from_rows_unchecked(rows, mode),
        )))
    }

    pub fn weak(&self) -> &WeakPseudoMetric {
        &self.0
    }

    pub fn into_weak(self) -> WeakPseudoMetric {
        self.0
    }
}

impl Deref for PseudoMetric {
    type Target = WeakPseudoMetric;

    fn deref(&self) -> &WeakPseudoMetric {
        &self.0
    }
}

fn zip_with(
    a: &PreMetricForm,
    b: &PreMetricForm,
    f: impl Fn(&ExtValue, &ExtValue) -> ExtValue,
) -> Result<PreMetricForm> {
    same_carrier(a.n, b.n)?;
    Ok(PreMetricForm {
        n: a.n,
        mode: a.mode.join(b.mode),
        values: a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| f(x, y))
            .collect(),
    })
}

/// Pointwise maximum. The result always satisfies symmetry and the triangle
/// inequality but may vanish nowhere on the diagonal.
pub fn sup_metric(d1: &PreMetricForm, d2: &PreMetricForm) -> Result<PreMetricForm> {
    zip_with(d1, d2, ExtValue::max_of)
}

/// Pointwise sum; like [`sup_metric`] it can lose diagonal vanishing.
pub fn sum_metric(d1: &PreMetricForm, d2: &PreMetricForm) -> Result<PreMetricForm> {
    zip_with(d1, d2, |x, y| x + y)
}

pub fn scale_metric(alpha: &Rational, d: &PreMetricForm) -> Result<PreMetricForm> {
    if !alpha.is_positive() {
        return Err(Error::NonpositiveScale);
    }
    Ok(PreMetricForm {
        n: d.n,
        mode: d.mode,
        values: d.values.iter().map(|v| v.scale(alpha)).collect(),
    })
}

/// `(x1, x2) -> d_y(f(x1), f(x2))`.
pub fn pullback_metric(f: &PointMap, d_y: &PreMetricForm) -> Result<PreMetricForm> {
    same_carrier(f.target_len(), d_y.n)?;
    let n = f.source_len();
    Ok(PreMetricForm::from_fn_unchecked(n, d_y.mode, |i, j| {
        d_y.get(f.apply(i), f.apply(j)).clone()
    }))
}

/// Pairs where the form vanishes. Symmetric and transitive for every valid
/// form, hence a partial equivalence relation.
pub fn zero_relation(d: &PreMetricForm) -> Relation {
    d.zero_relation()
}

/// `{xi : d(xi, x) < eps}`, defined when `eps > d(x, x)`.
pub fn ball(d: &PreMetricForm, x: usize, eps: &Rational) -> Result<PointSet> {
    let eps_v = ExtValue::Finite(eps.clone());
    let diag = d.get(x, x);
    if !eps.is_positive() || eps_v <= *diag {
        return Err(Error::EpsilonTooSmall {
            epsilon: eps_v.to_string(),
            diagonal: diag.to_string(),
        });
    }
    Ok(PointSet::from_indices(
        (0..d.n).filter(|&xi| *d.get(xi, x) < eps_v),
    ))
}

/// One distinct ball at a fixed center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallEntry {
    /// Largest row value inside the ball; the set is `{xi : d(xi, x) <= threshold}`.
    pub threshold: Rational,
    /// A representative radius producing this ball.
    pub epsilon: Rational,
    pub set: PointSet,
}

/// All distinct legal balls centred at `x`. Balls only change at row values,
/// so one entry is emitted per finite row value `w >= d(x, x)`.
pub fn ball_family(d: &PreMetricForm, x: usize) -> Vec<BallEntry> {
    let diag = d.get(x, x);
    let mut values: Vec<&Rational> = (0..d.n)
        .map(|xi| d.get(xi, x))
        .filter(|v| *v >= diag)
        .filter_map(ExtValue::finite)
        .collect();
    values.sort();
    values.dedup();
    let mut out = Vec::with_capacity(values.len());
    for (k, w) in values.iter().enumerate() {
        let epsilon = match values.get(k + 1) {
            Some(next) => (*w + *next) / Rational::from_integer(2.into()),
            None => *w + Rational::one(),
        };
        let w_ext = ExtValue::Finite((*w).clone());
        let set = PointSet::from_indices((0..d.n).filter(|&xi| *d.get(xi, x) <= w_ext));
        out.push(BallEntry {
            threshold: (*w).clone(),
            epsilon,
            set,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rational;

    fn m1() -> WeakPseudoMetric {
        WeakPseudoMetric::from_ints(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 2]]).unwrap()
    }

    #[test]
    fn labels_cannot_look_like_indices() {
        assert!(Carrier::with_labels(2, vec!["a".into(), "b".into()]).is_ok());
        assert!(Carrier::with_labels(2, vec!["a".into(), "a".into()]).is_err());
        assert!(Carrier::with_labels(2, vec!["a".into(), "1".into()]).is_err());
        assert!(Carrier::with_labels(1, vec!["/".into()]).is_err());
    }

    fn ints(rows: &[&[u64]]) -> Vec<Vec<ExtValue>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| ExtValue::int(v)).collect())
            .collect()
    }

    /// Characteristic function of the complement of `A x A`.
    fn d_a(n: usize, a: &[usize]) -> WeakPseudoMetric {
        let a = PointSet::from_indices(a.iter().copied());
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ExtValue::int(u64::from(!(a.contains(i) && a.contains(j)))))
                    .collect()
            })
            .collect();
        WeakPseudoMetric::new(rows, Mode::Strict).unwrap()
    }

    #[test]
    fn weak_validation_examples() {
        assert!(
            validate_weak_pm(&ints(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 2]]), Mode::Strict)
                .unwrap()
                .is_valid()
        );
        assert!(validate_weak_pm(&ints(&[&[0, 1], &[1, 1]]), Mode::Strict)
            .unwrap()
            .is_valid());
        let r = validate_weak_pm(&ints(&[&[1, 1], &[1, 1]]), Mode::Strict).unwrap();
        assert_eq!(r.violations, vec![Violation::NoDiagonalZero]);
    }

    #[test]
    fn pseudo_validation_examples() {
        assert!(
            validate_pseudo_metric(&ints(&[&[0, 1], &[1, 0]]), Mode::Strict)
                .unwrap()
                .is_valid()
        );
        let r = validate_pseudo_metric(&m1().rows(), Mode::Strict).unwrap();
        assert_eq!(r.violations, vec![Violation::NonzeroDiagonal { i: 2 }]);
        assert!(
            validate_pseudo_metric(&ints(&[&[0, 0], &[0, 0]]), Mode::Strict)
                .unwrap()
                .is_valid()
        );
    }

    #[test]
    fn infinite_entries_need_extended_mode() {
        let rows = vec![
            vec![ExtValue::zero(), ExtValue::Infinite],
            vec![ExtValue::Infinite, ExtValue::zero()],
        ];
        assert_eq!(
            validate_weak_pm(&rows, Mode::Strict).unwrap_err(),
            Error::ExtValueInStrictMode { row: 0, col: 1 }
        );
        assert!(validate_weak_pm(&rows, Mode::Extended).unwrap().is_valid());
    }

    #[test]
    fn asymmetry_and_triangle_are_reported() {
        let r =
            validate_weak_pm(&ints(&[&[0, 1, 5], &[1, 0, 1], &[5, 1, 0]]), Mode::Strict).unwrap();
        assert!(r
            .violations
            .contains(&Violation::Triangle { i: 0, j: 1, k: 2 }));
        let r = validate_weak_pm(&ints(&[&[0, 1], &[2, 0]]), Mode::Strict).unwrap();
        assert!(r.violations.contains(&Violation::Asymmetry { i: 0, j: 1 }));
    }

    #[test]
    fn reports_are_capped() {
        // Every off-diagonal triangle through the zero point 0 fails.
        let n = 8;
        let rows: Vec<Vec<ExtValue>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i, j) {
                        _ if i == j => ExtValue::zero(),
                        (0, _) | (_, 0) => ExtValue::zero(),
                        _ => ExtValue::int(1),
                    })
                    .collect()
            })
            .collect();
        let r = validate_weak_pm(&rows, Mode::Strict).unwrap();
        assert_eq!(r.violations.len(), REPORT_LIMIT);
        assert!(r.total > REPORT_LIMIT);
    }

    #[test]
    fn sup_examples() {
        let s = sup_metric(&m1(), &d_a(3, &[0])).unwrap();
        assert_eq!(s.rows(), ints(&[&[0, 1, 1], &[1, 1, 1], &[1, 1, 2]]));
        assert_eq!(sup_metric(&m1(), &m1()).unwrap(), *m1().form());
        let s = sup_metric(&d_a(3, &[0]), &d_a(3, &[2])).unwrap();
        assert!(!s.has_diagonal_zero());
    }

    #[test]
    fn sum_and_scale_examples() {
        let s = scale_metric(&rational(3, 1), &m1()).unwrap();
        assert_eq!(s.rows(), ints(&[&[0, 0, 3], &[0, 0, 3], &[3, 3, 6]]));
        assert_eq!(
            sum_metric(&PreMetricForm::zero(3), &m1()).unwrap(),
            *m1().form()
        );
        let s = sum_metric(&d_a(3, &[0]), &d_a(3, &[2])).unwrap();
        assert!(!s.has_diagonal_zero());
        assert_eq!(
            scale_metric(&rational(0, 1), &m1()).unwrap_err(),
            Error::NonpositiveScale
        );
        assert!(matches!(
            sum_metric(&m1(), &PreMetricForm::zero(2)),
            Err(Error::CarrierMismatch { .. })
        ));
    }

    #[test]
    fn pullback_examples() {
        let mw = WeakPseudoMetric::from_ints(&[&[1, 1], &[1, 0]]).unwrap();
        let f = PointMap::new(2, 2, vec![0, 0]).unwrap();
        let p = pullback_metric(&f, &mw).unwrap();
        assert_eq!(p.rows(), ints(&[&[1, 1], &[1, 1]]));
        assert!(!p.is_weak_pm());

        let id = PointMap::identity(3);
        assert_eq!(pullback_metric(&id, &m1()).unwrap(), *m1().form());

        let disc = WeakPseudoMetric::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        let f = PointMap::new(3, 2, vec![0, 0, 1]).unwrap();
        let p = pullback_metric(&f, &disc).unwrap();
        assert_eq!(p.rows(), ints(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]));
    }

    #[test]
    fn zero_relation_examples() {
        assert_eq!(
            zero_relation(&m1()),
            Relation::from_pairs(3, [(0, 0), (0, 1), (1, 0), (1, 1)])
        );
        assert_eq!(zero_relation(&PreMetricForm::zero(4)), Relation::full(4));
        let mw = WeakPseudoMetric::from_ints(&[&[1, 1], &[1, 0]]).unwrap();
        assert_eq!(zero_relation(&mw), Relation::from_pairs(2, [(1, 1)]));
    }

    #[test]
    fn ball_examples() {
        let a = d_a(3, &[0, 1]);
        assert_eq!(
            ball(&a, 0, &rational(1, 1)).unwrap(),
            PointSet::from_indices([0, 1])
        );
        assert_eq!(
            ball(&a, 0, &rational(1, 2)).unwrap(),
            PointSet::from_indices([0, 1])
        );
        assert_eq!(ball(&a, 0, &rational(3, 2)).unwrap(), PointSet::full(3));
        assert_eq!(
            ball(&m1(), 0, &rational(1, 1)).unwrap(),
            PointSet::from_indices([0, 1])
        );
        assert!(matches!(
            ball(&m1(), 2, &rational(2, 1)),
            Err(Error::EpsilonTooSmall { .. })
        ));
    }

    #[test]
    fn ball_family_examples() {
        let fam = ball_family(&m1(), 0);
        let sets: Vec<(Rational, PointSet)> =
            fam.iter().map(|e| (e.threshold.clone(), e.set)).collect();
        assert_eq!(
            sets,
            vec![
                (rational(0, 1), PointSet::from_indices([0, 1])),
                (rational(1, 1), PointSet::full(3))
            ]
        );
        assert_eq!(fam[0].epsilon, rational(1, 2));
        let fam = ball_family(&m1(), 2);
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].set, PointSet::full(3));
        let fam = ball_family(&PreMetricForm::zero(3), 1);
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].set, PointSet::full(3));
    }

    #[test]
    fn ball_family_skips_infinite_rows() {
        let rows = vec![
            vec![ExtValue::zero(), ExtValue::Infinite],
            vec![ExtValue::Infinite, ExtValue::zero()],
        ];
        let d = WeakPseudoMetric::new(rows, Mode::Extended).unwrap();
        let fam = ball_family(&d, 0);
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].set, PointSet::singleton(0));
    }
}
