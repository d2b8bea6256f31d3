//! Confusion matrices and the classification metric suite.
//!
//! Matrices are oriented with rows = predicted class and columns = actual
//! class. Every metric is computed as an exact rational; rounding happens
//! only when a value is rendered.

use std::fmt;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::gsaa::SymmetryClass;

pub type Exact = BigRational;

fn normalize(label: &str) -> String {
    label
        .trim()
        .chars()
        .map(|c| if c == '-' || c == ' ' { '_' } else { c.to_ascii_lowercase() })
        .collect()
}

/// Ordered, distinct class names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSet {
    labels: Vec<String>,
}

impl Default for ClassSet {
    /// `asymmetric, half_symmetric, symmetric`.
    fn default() -> Self {
        Self { labels: SymmetryClass::ALL.iter().map(|c| c.as_str().to_string()).collect() }
    }
}

impl ClassSet {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidConfig("class set must not be empty".into()));
        }
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().trim().to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::InvalidConfig("empty class name".into()));
            }
            if labels[..i].iter().any(|o| normalize(o) == normalize(l)) {
                return Err(Error::InvalidConfig(format!("duplicate class `{l}`")));
            }
        }
        Ok(Self { labels })
    }

    /// The default three classes when every label names one of them,
    /// otherwise the sorted distinct labels.
    pub fn infer<S: AsRef<str>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut seen: Vec<String> = Vec::new();
        for l in labels {
            let l = l.as_ref().trim();
            if !seen.iter().any(|s| normalize(s) == normalize(l)) {
                seen.push(l.to_string());
            }
        }
        if !seen.is_empty() && seen.iter().all(|l| l.parse::<SymmetryClass>().is_ok()) {
            return Ok(Self::default());
        }
        seen.sort();
        Self::new(&seen)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn name(&self, index: usize) -> &str {
        &self.labels[index]
    }

    /// Case-insensitive lookup; `-` and spaces match `_`.
    pub fn index_of(&self, label: &str) -> Result<usize> {
        let want = normalize(label);
        self.labels
            .iter()
            .position(|l| normalize(l) == want)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

/// `cells[i][j]` counts items predicted as class `i` whose actual class is `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: ClassSet,
    cells: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_cells(classes: ClassSet, cells: Vec<Vec<u64>>) -> Result<Self> {
        let k = classes.len();
        if cells.len() != k || cells.iter().any(|r| r.len() != k) {
            return Err(Error::MalformedMatrix(format!("expected a {k}x{k} matrix")));
        }
        Ok(Self { classes, cells })
    }

    /// Parses `K` lines of `K` comma-separated counts. Without explicit
    /// classes a 3x3 matrix uses the default classes and any other size gets
    /// `class_0 .. class_{K-1}`.
    pub fn from_csv(text: &str, classes: Option<ClassSet>) -> Result<Self> {
        let mut cells = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::MalformedMatrix(format!("line {}: `{}` is not a count", lineno + 1, v.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            cells.push(row);
        }
        let classes = match classes {
            Some(c) => c,
            None if cells.len() == 3 => ClassSet::default(),
            None if cells.is_empty() => return Err(Error::MalformedMatrix("no rows".into())),
            None => ClassSet::new(&(0..cells.len()).map(|i| format!("class_{i}")).collect::<Vec<_>>())?,
        };
        Self::from_cells(classes, cells)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.cells {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn classes(&self) -> &ClassSet {
        &self.classes
    }

    pub fn cells(&self) -> &[Vec<u64>] {
        &self.cells
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn n(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.k()).map(|i| self.cells[i][i]).sum()
    }

    /// Number of items predicted as class `i`.
    pub fn row_sum(&self, i: usize) -> u64 {
        self.cells[i].iter().sum()
    }

    /// Number of items whose actual class is `j` (its support).
    pub fn col_sum(&self, j: usize) -> u64 {
        self.cells.iter().map(|r| r[j]).sum()
    }

    /// Reorders classes; `order[new] = old`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let labels: Vec<&str> = order.iter().map(|&o| self.classes.name(o)).collect();
        let cells = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.cells[i][j]).collect())
            .collect();
        Self::from_cells(ClassSet::new(&labels)?, cells)
    }

    fn nonempty(&self) -> Result<u64> {
        match self.n() {
            0 => Err(Error::EmptyMatrix),
            n => Ok(n),
        }
    }
}

/// Tallies `(predicted, actual)` pairs.
pub fn confusion_matrix<S: AsRef<str>>(pred: &[S], actual: &[S], classes: &ClassSet) -> Result<ConfusionMatrix> {
    if pred.len() != actual.len() || pred.is_empty() {
        return Err(Error::LengthMismatch { left: pred.len(), right: actual.len() });
    }
    let k = classes.len();
    let mut cells = vec![vec![0u64; k]; k];
    for (p, a) in pred.iter().zip(actual) {
        let i = classes.index_of(p.as_ref())?;
        let j = classes.index_of(a.as_ref())?;
        cells[i][j] += 1;
    }
    ConfusionMatrix::from_cells(classes.clone(), cells)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricWarning {
    /// A metric of `class` was 0/0 and has been set to 0.
    DegenerateClass { class: String, metric: &'static str },
    /// Chance agreement is 1, so kappa is undefined.
    DegenerateChance,
}

impl fmt::Display for MetricWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricWarning::DegenerateClass { class, metric } => write!(f, "degenerate_class:{class}:{metric}"),
            MetricWarning::DegenerateChance => f.write_str("degenerate_chance"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPrf {
    pub precision: Exact,
    pub recall: Exact,
    pub f1: Exact,
}

fn ratio(num: u64, den: u64) -> Option<Exact> {
    (den != 0).then(|| BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Precision, recall and F1 for every class.
pub fn per_class_prf(cm: &ConfusionMatrix) -> Result<(Vec<ClassPrf>, Vec<MetricWarning>)> {
    cm.nonempty()?;
    let mut warnings = Vec::new();
    let mut degenerate = |class: &str, metric: &'static str| {
        warnings.push(MetricWarning::DegenerateClass { class: class.to_string(), metric });
        Exact::zero()
    };
    let out = (0..cm.k())
        .map(|k| {
            let name = cm.classes.name(k);
            let tp = cm.cells[k][k];
            let predicted = cm.row_sum(k);
            let actual = cm.col_sum(k);
            let precision = ratio(tp, predicted).unwrap_or_else(|| degenerate(name, "precision"));
            let recall = ratio(tp, actual).unwrap_or_else(|| degenerate(name, "recall"));
            // 2TP / (2TP + FP + FN) == 2TP / (predicted + actual)
            let f1 = ratio(2 * tp, predicted + actual).unwrap_or_else(|| degenerate(name, "f1"));
            ClassPrf { precision, recall, f1 }
        })
        .collect();
    Ok((out, warnings))
}

pub fn macro_f1(cm: &ConfusionMatrix) -> Result<Exact> {
    let (prf, _) = per_class_prf(cm)?;
    let sum: Exact = prf.iter().map(|p| p.f1.clone()).sum();
    Ok(sum / BigInt::from(cm.k()))
}

/// Support-weighted mean F1, support being the actual-class count.
pub fn weighted_f1(cm: &ConfusionMatrix) -> Result<Exact> {
    let n = cm.nonempty()?;
    let (prf, _) = per_class_prf(cm)?;
    let sum: Exact = prf
        .iter()
        .enumerate()
        .map(|(k, p)| p.f1.clone() * BigInt::from(cm.col_sum(k)))
        .sum();
    Ok(sum / BigInt::from(n))
}

/// Cohen's kappa `(P_o - P_e) / (1 - P_e)`.
///
/// When `P_e == 1` the value is 1 for perfect agreement and 0 otherwise, and
/// a [`MetricWarning::DegenerateChance`] is returned alongside.
pub fn kappa(cm: &ConfusionMatrix) -> Result<(Exact, Option<MetricWarning>)> {
    let n = BigInt::from(cm.nonempty()?);
    let trace = BigInt::from(cm.trace());
    let chance: BigInt = (0..cm.k())
        .map(|k| BigInt::from(cm.row_sum(k)) * BigInt::from(cm.col_sum(k)))
        .sum();
    let n2 = &n * &n;
    // Scaled by n^2: (n*trace - chance) / (n^2 - chance)
    let den = &n2 - &chance;
    if den.is_zero() {
        let value = if trace == n { Exact::one() } else { Exact::zero() };
        return Ok((value, Some(MetricWarning::DegenerateChance)));
    }
    Ok((BigRational::new(&n * &trace - chance, den), None))
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<Exact> {
    let n = cm.nonempty()?;
    Ok(ratio(cm.trace(), n).expect("n > 0"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub class: String,
    pub precision: Exact,
    pub recall: Exact,
    pub f1: Exact,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsReport {
    pub n: u64,
    pub cm: ConfusionMatrix,
    pub per_class: Vec<ClassReport>,
    pub macro_f1: Exact,
    pub weighted_f1: Exact,
    pub kappa: Exact,
    pub accuracy: Exact,
    pub warnings: Vec<MetricWarning>,
}

pub fn full_report(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let n = cm.nonempty()?;
    let (prf, mut warnings) = per_class_prf(cm)?;
    let (kappa_value, kappa_warning) = kappa(cm)?;
    warnings.extend(kappa_warning);
    let per_class = prf
        .into_iter()
        .enumerate()
        .map(|(k, p)| ClassReport {
            class: cm.classes.name(k).to_string(),
            precision: p.precision,
            recall: p.recall,
            f1: p.f1,
            support: cm.col_sum(k),
        })
        .collect();
    Ok(MetricsReport {
        n,
        cm: cm.clone(),
        per_class,
        macro_f1: macro_f1(cm)?,
        weighted_f1: weighted_f1(cm)?,
        kappa: kappa_value,
        accuracy: accuracy(cm)?,
        warnings,
    })
}

/// Decimal rendering rounded half up at `places` digits.
pub fn render(value: &Exact, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = value * BigRational::from_integer(scale.clone()) + BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = scaled.floor().to_integer();
    let negative = rounded.is_negative();
    let (int, frac) = rounded.abs().div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>width$}", width = places as usize)
    }
}

/// Rounds to `places` decimal digits (half up) and converts to `f64`.
pub fn round_to(value: &Exact, places: u32) -> f64 {
    render(value, places).parse().expect("rendered decimal parses")
}

pub fn to_f64(value: &Exact) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// A JSON number emitted verbatim, e.g. `0.990000`.
struct Fixed(String);

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawValue::from_string(self.0.clone())
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}

#[derive(serde::Serialize)]
struct ClassJson {
    precision: Fixed,
    recall: Fixed,
    f1: Fixed,
    support: u64,
}

#[derive(serde::Serialize)]
struct ReportJson<'a> {
    n: u64,
    cm: &'a [Vec<u64>],
    classes: &'a [String],
    per_class: IndexMap<&'a str, ClassJson>,
    macro_f1: Fixed,
    weighted_f1: Fixed,
    kappa: Fixed,
    accuracy: Fixed,
    warnings: Vec<String>,
}

impl MetricsReport {
    /// Pretty JSON with every metric printed to `places` decimals.
    pub fn to_json(&self, places: u32) -> String {
        let fixed = |v: &Exact| Fixed(render(v, places));
        let doc = ReportJson {
            n: self.n,
            cm: self.cm.cells(),
            classes: self.cm.classes().labels(),
            per_class: self
                .per_class
                .iter()
                .map(|c| {
                    (
                        c.class.as_str(),
                        ClassJson {
                            precision: fixed(&c.precision),
                            recall: fixed(&c.recall),
                            f1: fixed(&c.f1),
                            support: c.support,
                        },
                    )
                })
                .collect(),
            macro_f1: fixed(&self.macro_f1),
            weighted_f1: fixed(&self.weighted_f1),
            kappa: fixed(&self.kappa),
            accuracy: fixed(&self.accuracy),
            warnings: self.warnings.iter().map(ToString::to_string).collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.push('\n');
        out
    }
}
