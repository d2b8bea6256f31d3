//! Linear SVMs trained with Pegasos-style SGD, combined one-vs-one into a
//! multiclass classifier over externally extracted feature vectors.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::metrics::{ClassSet, ConfusionMatrix};
use crate::rng::SeededRng;

/// Columns with a standard deviation at or below this are treated as constant.
pub const STD_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRecord {
    pub id: String,
    pub label: Option<String>,
    pub features: Vec<f64>,
}

/// Records sharing one feature dimension, with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    records: Vec<FeatureRecord>,
    dim: usize,
}

impl FeatureSet {
    pub fn new(records: Vec<FeatureRecord>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::HeaderMismatch("feature dimension must be positive".into()));
        }
        let mut ids = HashSet::new();
        for (i, r) in records.iter().enumerate() {
            if r.features.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.features.len() });
            }
            if let Some(v) = r.features.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFiniteValue { line: i + 2, value: v.to_string() });
            }
            if !ids.insert(r.id.as_str()) {
                return Err(Error::DuplicateId(r.id.clone()));
            }
        }
        Ok(Self { records, dim })
    }

    pub fn records(&self) -> &[FeatureRecord] {
        &self.records
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Classes present among the labeled records, symmetry classes in their
    /// canonical order and anything else sorted.
    pub fn classes(&self) -> Result<ClassSet> {
        let labels = || self.records.iter().filter_map(|r| r.label.as_deref());
        let all = ClassSet::infer(labels())?;
        let present: Vec<&str> = all
            .labels()
            .iter()
            .filter(|c| labels().any(|l| all.index_of(l).is_ok_and(|i| all.name(i) == c.as_str())))
            .map(String::as_str)
            .collect();
        ClassSet::new(&present)
    }

    /// The records whose ids are listed, in the listed order.
    pub fn select<S: AsRef<str>>(&self, ids: &[S]) -> Result<FeatureSet> {
        let index: std::collections::HashMap<&str, &FeatureRecord> =
            self.records.iter().map(|r| (r.id.as_str(), r)).collect();
        let records = ids
            .iter()
            .map(|id| {
                index
                    .get(id.as_ref())
                    .map(|r| (*r).clone())
                    .ok_or_else(|| Error::IdMismatch(format!("no feature row for `{}`", id.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        FeatureSet::new(records, self.dim)
    }
}

/// Parses `id,label,f0,...,f{d-1}` CSV. An empty label marks a predict-only row.
pub fn load_features(text: &str) -> Result<FeatureSet> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let dim = header.len().saturating_sub(2);
    let expected_ok = header.len() > 2
        && &header[0] == "id"
        && &header[1] == "label"
        && (0..dim).all(|i| header[i + 2] == format!("f{i}"));
    if !expected_ok {
        return Err(Error::HeaderMismatch(format!(
            "expected `id,label,f0,...`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = i + 2;
        if row.len() != header.len() {
            return Err(Error::RaggedRow { line, expected: header.len(), found: row.len() });
        }
        let id = row[0].to_string();
        if !ids.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        let label = Some(row[1].trim()).filter(|l| !l.is_empty()).map(str::to_string);
        let features = row
            .iter()
            .skip(2)
            .map(|cell| match cell.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::NonFiniteValue { line, value: cell.to_string() }),
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(FeatureRecord { id, label, features });
    }
    FeatureSet::new(records, dim)
}

/// Writes the CSV form read by [`load_features`]; values use the shortest
/// decimal that parses back to the same `f64`.
pub fn save_features(set: &FeatureSet) -> String {
    let mut out = String::from("id,label");
    for i in 0..set.dim {
        write!(out, ",f{i}").unwrap();
    }
    out.push('\n');
    for r in &set.records {
        out.push_str(&r.id);
        out.push(',');
        out.push_str(r.label.as_deref().unwrap_or(""));
        for v in &r.features {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Per-feature z-scoring fitted on a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    #[serde(rename = "std")]
    pub stddev: Vec<f64>,
}

impl Standardizer {
    /// Population mean and standard deviation of every column.
    pub fn fit(train: &FeatureSet) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = train.len() as f64;
        let d = train.dim;
        let mut mean = vec![0.0; d];
        for r in &train.records {
            for (m, v) in mean.iter_mut().zip(&r.features) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for r in &train.records {
            for ((s, v), m) in var.iter_mut().zip(&r.features).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let stddev = var.into_iter().map(|s| (s / n).sqrt().max(STD_FLOOR)).collect();
        Ok(Self { mean, stddev })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Constant columns (std at the floor) map to 0.
    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(x.iter()
            .zip(self.mean.iter().zip(&self.stddev))
            .map(|(v, (m, s))| if *s <= STD_FLOOR { 0.0 } else { (v - m) / s })
            .collect())
    }

    pub fn apply(&self, set: &FeatureSet) -> Result<FeatureSet> {
        let records = set
            .records
            .iter()
            .map(|r| {
                Ok(FeatureRecord { id: r.id.clone(), label: r.label.clone(), features: self.transform(&r.features)? })
            })
            .collect::<Result<Vec<_>>>()?;
        FeatureSet::new(records, set.dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmHyper {
    /// L2 regularization strength.
    pub lambda: f64,
    pub epochs: usize,
}

impl Default for SvmHyper {
    fn default() -> Self {
        Self { lambda: 1e-4, epochs: 20 }
    }
}

impl SvmHyper {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) || self.epochs == 0 {
            return Err(Error::InvalidConfig(format!("need lambda > 0 and epochs >= 1, got {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub pos_class: String,
    pub neg_class: String,
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    /// The class on the decision side of `x`; ties (`0.0`) go positive.
    pub fn predict(&self, x: &[f64]) -> &str {
        if self.decision(x) >= 0.0 {
            &self.pos_class
        } else {
            &self.neg_class
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Two-class training data; `positive[i]` says whether `xs[i]` belongs to
/// `pos_class`.
#[derive(Debug, Clone)]
pub struct BinaryData<'a> {
    pub pos_class: String,
    pub neg_class: String,
    pub xs: Vec<&'a [f64]>,
    pub positive: Vec<bool>,
}

/// `lambda / 2 * (|w|^2 + b^2) + mean hinge loss`.
pub fn objective(model: &LinearModel, data: &BinaryData<'_>, lambda: f64) -> f64 {
    let hinge: f64 = data
        .xs
        .iter()
        .zip(&data.positive)
        .map(|(x, &pos)| {
            let y = if pos { 1.0 } else { -1.0 };
            (1.0 - y * model.decision(x)).max(0.0)
        })
        .sum();
    0.5 * lambda * (dot(&model.weights, &model.weights) + model.bias * model.bias) + hinge / data.xs.len() as f64
}

/// Trains one binary SVM. Equal inputs and seed give bit-identical models.
pub fn train_binary_sgd(data: &BinaryData<'_>, hyper: &SvmHyper, seed: u64) -> Result<LinearModel> {
    pegasos(data, hyper, &mut SeededRng::new(seed), None)
}

/// Like [`train_binary_sgd`], also returning one training objective per epoch:
/// the objective of the average of all iterates so far.
pub fn train_binary_sgd_traced(data: &BinaryData<'_>, hyper: &SvmHyper, seed: u64) -> Result<(LinearModel, Vec<f64>)> {
    let mut trace = Vec::with_capacity(hyper.epochs);
    let model = pegasos(data, hyper, &mut SeededRng::new(seed), Some(&mut trace))?;
    Ok((model, trace))
}

fn pegasos(
    data: &BinaryData<'_>,
    hyper: &SvmHyper,
    rng: &mut SeededRng,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<LinearModel> {
    hyper.validate()?;
    let has_pos = data.positive.iter().any(|&p| p);
    let has_neg = data.positive.iter().any(|&p| !p);
    if !has_pos || !has_neg || data.xs.len() != data.positive.len() {
        return Err(Error::SingleClassData(data.pos_class.clone(), data.neg_class.clone()));
    }
    let dim = data.xs[0].len();
    let mut model = LinearModel {
        pos_class: data.pos_class.clone(),
        neg_class: data.neg_class.clone(),
        weights: vec![0.0; dim],
        bias: 0.0,
    };
    let mut order: Vec<usize> = (0..data.xs.len()).collect();
    let mut t = 0u64;
    let mut running = LinearModel { weights: vec![0.0; dim], ..model.clone() };
    for _ in 0..hyper.epochs {
        rng.shuffle(&mut order);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (hyper.lambda * t as f64);
            let x = data.xs[i];
            let y = if data.positive[i] { 1.0 } else { -1.0 };
            let margin = y * model.decision(x);
            let shrink = 1.0 - eta * hyper.lambda;
            // The bias is the weight of a constant 1 feature and shrinks with the rest.
            model.weights.iter_mut().for_each(|w| *w *= shrink);
            model.bias *= shrink;
            if margin < 1.0 {
                for (w, v) in model.weights.iter_mut().zip(x) {
                    *w += eta * y * v;
                }
                model.bias += eta * y;
            }
            if trace.is_some() {
                running.weights.iter_mut().zip(&model.weights).for_each(|(s, w)| *s += w);
                running.bias += model.bias;
            }
        }
        if let Some(trace) = trace.as_deref_mut() {
            let scale = 1.0 / t as f64;
            let average = LinearModel {
                weights: running.weights.iter().map(|w| w * scale).collect(),
                bias: running.bias * scale,
                ..model.clone()
            };
            trace.push(objective(&average, data, hyper.lambda));
        }
    }
    Ok(model)
}

/// One linear model per unordered class pair plus the feature scaling fitted
/// on the training set.
#[derive(Debug, Clone, PartialEq)]
pub struct OvoEnsemble {
    pub classes: ClassSet,
    pub standardizer: Option<Standardizer>,
    /// Pairs `(i, j)` with `i < j` in class order; `i` is the positive class.
    pub models: Vec<LinearModel>,
    pub hyper: SvmHyper,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: String,
    /// Indexed like the ensemble's classes.
    pub votes: Vec<u32>,
    /// Sum over pair models of the signed decision value from each class's side.
    pub margins: Vec<f64>,
}

/// Trains the `K(K-1)/2` pair models. Pair `p` draws its shuffles from stream
/// `p` of `seed`, so pairs train independently (and in parallel).
pub fn train_ovo(train: &FeatureSet, hyper: &SvmHyper, seed: u64, standardize: bool) -> Result<OvoEnsemble> {
    hyper.validate()?;
    if let Some(r) = train.records.iter().find(|r| r.label.is_none()) {
        return Err(Error::UnlabeledData(r.id.clone()));
    }
    let classes = if train.is_empty() { return Err(Error::TooFewClasses(0)) } else { train.classes()? };
    if classes.len() < 2 {
        return Err(Error::TooFewClasses(classes.len()));
    }
    let standardizer = if standardize { Some(Standardizer::fit(train)?) } else { None };
    let scaled = match &standardizer {
        Some(s) => s.apply(train)?,
        None => train.clone(),
    };
    let mut by_class: Vec<Vec<&[f64]>> = vec![Vec::new(); classes.len()];
    for r in &scaled.records {
        let k = classes.index_of(r.label.as_deref().expect("checked above"))?;
        by_class[k].push(&r.features);
    }
    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .flat_map(|i| (i + 1..classes.len()).map(move |j| (i, j)))
        .collect();
    let models = pairs
        .par_iter()
        .enumerate()
        .map(|(p, &(i, j))| {
            let xs: Vec<&[f64]> = by_class[i].iter().chain(&by_class[j]).copied().collect();
            let positive = (0..xs.len()).map(|n| n < by_class[i].len()).collect();
            let data = BinaryData {
                pos_class: classes.name(i).to_string(),
                neg_class: classes.name(j).to_string(),
                xs,
                positive,
            };
            pegasos(&data, hyper, &mut SeededRng::with_stream(seed, p as u64), None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OvoEnsemble { classes, standardizer, models, hyper: *hyper, seed })
}

impl OvoEnsemble {
    pub fn dim(&self) -> usize {
        self.models.first().map_or(0, |m| m.weights.len())
    }

    /// Majority vote; ties go to the larger margin sum, then to the earlier class.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let scaled;
        let x = match &self.standardizer {
            Some(s) => {
                scaled = s.transform(x)?;
                &scaled[..]
            }
            None => x,
        };
        let k = self.classes.len();
        let mut votes = vec![0u32; k];
        let mut margins = vec![0.0; k];
        for m in &self.models {
            let i = self.classes.index_of(&m.pos_class)?;
            let j = self.classes.index_of(&m.neg_class)?;
            let d = m.decision(x);
            if d >= 0.0 {
                votes[i] += 1;
            } else {
                votes[j] += 1;
            }
            margins[i] += d;
            margins[j] -= d;
        }
        let mut best = 0;
        for c in 1..k {
            let better = votes[c] > votes[best] || (votes[c] == votes[best] && margins[c] > margins[best]);
            if better {
                best = c;
            }
        }
        Ok(Prediction { label: self.classes.name(best).to_string(), votes, margins })
    }

    /// Confusion matrix (rows = predicted) over a fully labeled set.
    pub fn evaluate(&self, test: &FeatureSet) -> Result<ConfusionMatrix> {
        let k = self.classes.len();
        let mut cells = vec![vec![0u64; k]; k];
        for r in &test.records {
            let actual = r.label.as_deref().ok_or_else(|| Error::UnlabeledData(r.id.clone()))?;
            let j = self.classes.index_of(actual)?;
            let p = self.predict(&r.features)?;
            let i = self.classes.index_of(&p.label)?;
            cells[i][j] += 1;
        }
        ConfusionMatrix::from_cells(self.classes.clone(), cells)
    }

    /// JSON document with every float printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            classes: self.classes.labels().to_vec(),
            standardizer: self.standardizer.as_ref().map(|s| StandardizerDoc {
                mean: s.mean.clone(),
                std: s.stddev.clone(),
            }),
            models: self
                .models
                .iter()
                .map(|m| PairDoc {
                    pos: m.pos_class.clone(),
                    neg: m.neg_class.clone(),
                    bias: m.bias,
                    weights: m.weights.clone(),
                })
                .collect(),
            hyper: HyperDoc { lambda: self.hyper.lambda, epochs: self.hyper.epochs },
            seed: self.seed,
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("model serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text)?;
        let classes = ClassSet::new(&doc.classes)?;
        let k = classes.len();
        if doc.models.len() != k * (k.saturating_sub(1)) / 2 {
            return Err(Error::Json(format!("{} pair models for {k} classes", doc.models.len())));
        }
        let dim = doc.models.first().map_or(0, |m| m.weights.len());
        let mut models = Vec::with_capacity(doc.models.len());
        for m in doc.models {
            classes.index_of(&m.pos)?;
            classes.index_of(&m.neg)?;
            if m.weights.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.weights.len() });
            }
            models.push(LinearModel { pos_class: m.pos, neg_class: m.neg, weights: m.weights, bias: m.bias });
        }
        let standardizer = match doc.standardizer {
            Some(s) if s.mean.len() != dim || s.std.len() != dim => {
                return Err(Error::DimensionMismatch { expected: dim, found: s.mean.len() });
            }
            Some(s) => Some(Standardizer { mean: s.mean, stddev: s.std }),
            None => None,
        };
        let hyper = SvmHyper { lambda: doc.hyper.lambda, epochs: doc.hyper.epochs };
        Ok(Self { classes, standardizer, models, hyper, seed: doc.seed })
    }
}

fn sig17<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom)?.serialize(s)
}

fn sig17_vec<S: Serializer>(vs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        seq.serialize_element(&RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom)?)?;
    }
    seq.end()
}

#[derive(Serialize, Deserialize)]
struct StandardizerDoc {
    #[serde(serialize_with = "sig17_vec")]
    mean: Vec<f64>,
    #[serde(serialize_with = "sig17_vec")]
    std: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PairDoc {
    pos: String,
    neg: String,
    #[serde(serialize_with = "sig17")]
    bias: f64,
    #[serde(serialize_with = "sig17_vec")]
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct HyperDoc {
    #[serde(serialize_with = "sig17")]
    lambda: f64,
    epochs: usize,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    classes: Vec<String>,
    standardizer: Option<StandardizerDoc>,
    models: Vec<PairDoc>,
    hyper: HyperDoc,
    seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, label: &str, f: &[f64]) -> FeatureRecord {
        FeatureRecord {
            id: id.into(),
            label: (!label.is_empty()).then(|| label.to_string()),
            features: f.to_vec(),
        }
    }

    #[test]
    fn parses_features() {
        let set = load_features("id,label,f0,f1\nx,a,1,2\ny,b,3.5,-4e-2\nz,c,0,0\n").unwrap();
        assert_eq!(set.dim(), 2);
        assert_eq!(set.len(), 3);
        assert_eq!(set.classes().unwrap().labels(), &["a", "b", "c"]);
        assert_eq!(set.records()[1].features, vec![3.5, -0.04]);
    }

    #[test]
    fn unlabeled_rows_are_accepted() {
        let set = load_features("id,label,f0\nx,,1\ny,a,2\n").unwrap();
        assert_eq!(set.records()[0].label, None);
        assert_eq!(set.classes().unwrap().labels(), &["a"]);
    }

    #[test]
    fn feature_errors() {
        assert_eq!(load_features("id,lab,f0\nx,a,1\n").unwrap_err().kind(), "HeaderMismatch");
        assert_eq!(load_features("id,label,f1\nx,a,1\n").unwrap_err().kind(), "HeaderMismatch");
        assert_eq!(load_features("id,label\nx,a\n").unwrap_err().kind(), "HeaderMismatch");
        assert_eq!(load_features("id,label,f0,f1\nx,a,1\n").unwrap_err().kind(), "RaggedRow");
        assert_eq!(load_features("id,label,f0\nx,a,NaN\n").unwrap_err().kind(), "NonFiniteValue");
        assert_eq!(load_features("id,label,f0\nx,a,inf\n").unwrap_err().kind(), "NonFiniteValue");
        assert_eq!(load_features("id,label,f0\nx,a,abc\n").unwrap_err().kind(), "NonFiniteValue");
        assert_eq!(load_features("id,label,f0\nx,a,1\nx,b,2\n").unwrap_err().kind(), "DuplicateId");
    }

    #[test]
    fn two_point_standardizer() {
        let set = FeatureSet::new(vec![rec("a", "x", &[0.0]), rec("b", "y", &[2.0])], 1).unwrap();
        let s = Standardizer::fit(&set).unwrap();
        assert_eq!((s.mean[0], s.stddev[0]), (1.0, 1.0));
        let out = s.apply(&set).unwrap();
        assert_eq!(out.records()[0].features, vec![-1.0]);
        assert_eq!(out.records()[1].features, vec![1.0]);
    }

    #[test]
    fn constant_column_maps_to_zero() {
        let set = FeatureSet::new(
            vec![rec("a", "", &[0.1, 1.0]), rec("b", "", &[0.1, 2.0]), rec("c", "", &[0.1, 4.0])],
            2,
        )
        .unwrap();
        let s = Standardizer::fit(&set).unwrap();
        assert_eq!(s.stddev[0], STD_FLOOR);
        let out = s.apply(&set).unwrap();
        assert!(out.records().iter().all(|r| r.features[0] == 0.0));
        assert_eq!(s.transform(&[7.0, 1.0]).unwrap()[0], 0.0);
    }

    #[test]
    fn empty_standardizer_rejected() {
        let set = FeatureSet::new(vec![], 3).unwrap();
        assert_eq!(Standardizer::fit(&set).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn separable_pair() {
        let xs: Vec<&[f64]> = vec![&[-1.0], &[1.0]];
        let data = BinaryData { pos_class: "p".into(), neg_class: "n".into(), xs, positive: vec![false, true] };
        let m = train_binary_sgd(&data, &SvmHyper::default(), 5).unwrap();
        assert_eq!(m.predict(&[1.0]), "p");
        assert_eq!(m.predict(&[-1.0]), "n");
        let again = train_binary_sgd(&data, &SvmHyper::default(), 5).unwrap();
        assert_eq!(m.weights[0].to_bits(), again.weights[0].to_bits());
        assert_eq!(m.bias.to_bits(), again.bias.to_bits());
    }

    #[test]
    fn single_class_rejected() {
        let xs: Vec<&[f64]> = vec![&[1.0], &[2.0]];
        let data = BinaryData { pos_class: "p".into(), neg_class: "n".into(), xs, positive: vec![true, true] };
        assert_eq!(train_binary_sgd(&data, &SvmHyper::default(), 0).unwrap_err().kind(), "SingleClassData");
    }

    #[test]
    fn bad_hyper_rejected() {
        let xs: Vec<&[f64]> = vec![&[-1.0], &[1.0]];
        let data = BinaryData { pos_class: "p".into(), neg_class: "n".into(), xs, positive: vec![false, true] };
        let bad = SvmHyper { lambda: 0.0, epochs: 1 };
        assert_eq!(train_binary_sgd(&data, &bad, 0).unwrap_err().kind(), "InvalidConfig");
    }

    #[test]
    fn too_few_classes() {
        let set = FeatureSet::new(vec![rec("a", "x", &[0.0]), rec("b", "x", &[2.0])], 1).unwrap();
        assert_eq!(train_ovo(&set, &SvmHyper::default(), 0, true).unwrap_err(), Error::TooFewClasses(1));
        let unl = FeatureSet::new(vec![rec("a", "x", &[0.0]), rec("b", "", &[2.0])], 1).unwrap();
        assert_eq!(train_ovo(&unl, &SvmHyper::default(), 0, true).unwrap_err().kind(), "UnlabeledData");
    }

    #[test]
    fn hand_set_three_cycle_tie() {
        // Each pair model votes once for each class: a beats b, b beats c, c beats a.
        let classes = ClassSet::new(&["a", "b", "c"]).unwrap();
        let model = |pos: &str, neg: &str, bias: f64| LinearModel {
            pos_class: pos.into(),
            neg_class: neg.into(),
            weights: vec![0.0],
            bias,
        };
        let ens = OvoEnsemble {
            classes,
            standardizer: None,
            models: vec![model("a", "b", 1.0), model("a", "c", -3.0), model("b", "c", 0.5)],
            hyper: SvmHyper::default(),
            seed: 0,
        };
        let p = ens.predict(&[0.0]).unwrap();
        assert_eq!(p.votes, vec![1, 1, 1]);
        // margins: a = 1 - 3 = -2, b = -1 + 0.5 = -0.5, c = 3 - 0.5 = 2.5
        assert_eq!(p.margins, vec![-2.0, -0.5, 2.5]);
        assert_eq!(p.label, "c");
        for _ in 0..5 {
            assert_eq!(ens.predict(&[0.0]).unwrap(), p);
        }
        // Fully symmetric tie falls back to class order.
        let flat = OvoEnsemble {
            models: vec![model("a", "b", 1.0), model("a", "c", -1.0), model("b", "c", 1.0)],
            ..ens
        };
        let p = flat.predict(&[0.0]).unwrap();
        assert_eq!(p.votes, vec![1, 1, 1]);
        assert_eq!(p.label, "a");
        assert_eq!(flat.predict(&[0.0, 1.0]).unwrap_err().kind(), "DimensionMismatch");
    }

    #[test]
    fn evaluate_requires_labels() {
        let train = FeatureSet::new(vec![rec("a", "x", &[-1.0]), rec("b", "y", &[1.0])], 1).unwrap();
        let ens = train_ovo(&train, &SvmHyper::default(), 1, true).unwrap();
        let unl = FeatureSet::new(vec![rec("q", "", &[0.5])], 1).unwrap();
        assert_eq!(ens.evaluate(&unl).unwrap_err().kind(), "UnlabeledData");
        let other = FeatureSet::new(vec![rec("q", "z", &[0.5])], 1).unwrap();
        assert_eq!(ens.evaluate(&other).unwrap_err().kind(), "UnknownLabel");
    }

    #[test]
    fn model_json_round_trip() {
        let train = FeatureSet::new(
            vec![rec("a", "x", &[-1.0, 0.3]), rec("b", "y", &[1.0, 0.1]), rec("c", "z", &[0.2, 5.0])],
            2,
        )
        .unwrap();
        let ens = train_ovo(&train, &SvmHyper::default(), 11, true).unwrap();
        let json = ens.to_json();
        let back = OvoEnsemble::from_json(&json).unwrap();
        assert_eq!(back, ens);
        assert_eq!(back.to_json(), json);
        assert!(json.contains("\"lambda\": 1.0000000000000000e-4"));
    }
}
