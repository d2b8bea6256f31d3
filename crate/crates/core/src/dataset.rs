//! Ground-truth label tables, mirror augmentation and seeded dataset splits.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gsaa::SymmetryClass;
use crate::mask::{Axis, BinaryMask};
use crate::rng::SeededRng;

/// `image_id -> label`, iterated in id order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelTable {
    entries: BTreeMap<String, SymmetryClass>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, label: SymmetryClass) -> Result<()> {
        let id = id.into();
        if self.entries.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        self.entries.insert(id, label);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<SymmetryClass> {
        self.entries.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, SymmetryClass)> + '_ {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn ids(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    /// Counts in `SymmetryClass::ALL` order (asymmetric, half, symmetric).
    pub fn class_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for label in self.entries.values() {
            counts[*label as usize] += 1;
        }
        counts
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("image_id,label\n");
        for (id, label) in &self.entries {
            out.push_str(id);
            out.push(',');
            out.push_str(label.as_str());
            out.push('\n');
        }
        out
    }
}

/// Reads an `image_id,label` CSV.
pub fn ingest_labels(text: &str) -> Result<LabelTable> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.len() != 2 || &header[0] != "image_id" || &header[1] != "label" {
        return Err(Error::HeaderMismatch(format!(
            "expected `image_id,label`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut table = LabelTable::new();
    for row in reader.records() {
        let row = row?;
        table.insert(&row[0], row[1].parse()?)?;
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedItem {
    pub id: String,
    pub mask: BinaryMask,
    pub label: SymmetryClass,
}

/// For every labeled id emits the original, its horizontal mirror (`<id>_h`)
/// and its vertical mirror (`<id>_v`), all carrying the original label.
pub fn augment_mirror(masks: &HashMap<String, BinaryMask>, labels: &LabelTable) -> Result<Vec<AugmentedItem>> {
    if let Some(id) = masks.keys().find(|id| labels.get(id).is_none()) {
        return Err(Error::MissingLabel(id.clone()));
    }
    let mut out = Vec::with_capacity(3 * labels.len());
    for (id, label) in labels.iter() {
        let mask = masks.get(id).ok_or_else(|| Error::MissingMask(id.to_string()))?;
        out.push(AugmentedItem { id: id.to_string(), mask: mask.clone(), label });
        out.push(AugmentedItem { id: format!("{id}_h"), mask: mask.mirror(Axis::Horizontal), label });
        out.push(AugmentedItem { id: format!("{id}_v"), mask: mask.mirror(Axis::Vertical), label });
    }
    Ok(out)
}

/// Extends a label table with the `_h` / `_v` ids produced by [`augment_mirror`].
pub fn augmented_labels(items: &[AugmentedItem]) -> Result<LabelTable> {
    let mut table = LabelTable::new();
    for item in items {
        table.insert(&item.id, item.label)?;
    }
    Ok(table)
}

/// Fractions of the data going to train, validation and test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitFractions {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitFractions {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self> {
        let f = Self { train, val, test };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let parts = [self.train, self.val, self.test];
        if parts.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::BadFractions(format!("fractions must be positive, got {parts:?}")));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::BadFractions(format!("fractions sum to {sum}, not 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub fractions: SplitFractions,
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

impl SplitManifest {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("manifest serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: SplitManifest = serde_json::from_str(text)?;
        m.fractions.validate()?;
        Ok(m)
    }
}

/// `floor(x + 1/2)`, with a small allowance so that products which are
/// mathematically `k + 1/2` but land just below in binary still round up.
fn round_half_up(x: f64) -> usize {
    (x + 0.5 + 1e-9).floor() as usize
}

/// Seeded random split.
///
/// Ids are sorted, deduplicated and shuffled (Fisher-Yates, ChaCha8 keyed by
/// `seed`). The first `round_half_up(n * test)` go to test (or exactly
/// `test_count` when given), the next `round_half_up(n * val)` to validation
/// and the rest to train. Each list is returned sorted.
pub fn split<S: AsRef<str>>(
    ids: &[S],
    fractions: SplitFractions,
    seed: u64,
    test_count: Option<usize>,
) -> Result<SplitManifest> {
    fractions.validate()?;
    let mut ids: Vec<String> = ids.iter().map(|s| s.as_ref().to_string()).collect();
    ids.sort();
    ids.dedup();
    let n = ids.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let n_test = test_count.unwrap_or_else(|| round_half_up(n as f64 * fractions.test));
    let n_val = round_half_up(n as f64 * fractions.val);
    if n_test + n_val > n {
        return Err(Error::BadFractions(format!("test ({n_test}) + validation ({n_val}) exceed {n} ids")));
    }
    SeededRng::new(seed).shuffle(&mut ids);
    let mut train = ids.split_off(n_test + n_val);
    let mut val = ids.split_off(n_test);
    let mut test = ids;
    train.sort();
    val.sort();
    test.sort();
    Ok(SplitManifest { seed, fractions, train, val, test })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ingest_counts() {
        let t = ingest_labels("image_id,label\na,asymmetric\nb,Half-Symmetric\nc,SYMMETRIC\n").unwrap();
        assert_eq!(t.class_counts(), [1, 1, 1]);
        assert_eq!(t.get("b"), Some(SymmetryClass::HalfSymmetric));
    }

    #[test]
    fn ingest_errors() {
        assert_eq!(ingest_labels("image_id,label\na,round\n").unwrap_err().kind(), "UnknownLabel");
        assert_eq!(ingest_labels("image_id,label\na,symmetric\na,asymmetric\n").unwrap_err().kind(), "DuplicateId");
        assert_eq!(ingest_labels("id,label\na,symmetric\n").unwrap_err().kind(), "HeaderMismatch");
    }

    #[test]
    fn label_csv_round_trip() {
        let t = ingest_labels("image_id,label\nz,symmetric\na,asymmetric\n").unwrap();
        assert_eq!(ingest_labels(&t.to_csv()).unwrap(), t);
    }

    #[test]
    fn one_mask_triples() {
        let m = BinaryMask::from_rows(&["##.", "#.."]).unwrap();
        let masks = HashMap::from([("x".to_string(), m.clone())]);
        let mut labels = LabelTable::new();
        labels.insert("x", SymmetryClass::Asymmetric).unwrap();
        let out = augment_mirror(&masks, &labels).unwrap();
        let ids: Vec<&str> = out.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(ids, ["x", "x_h", "x_v"]);
        assert!(out.iter().all(|i| i.label == SymmetryClass::Asymmetric));
        assert_eq!(out[1].mask, BinaryMask::from_rows(&[".##", "..#"]).unwrap());
        assert_eq!(out[2].mask, BinaryMask::from_rows(&["#..", "##."]).unwrap());
    }

    #[test]
    fn augment_errors() {
        let mut labels = LabelTable::new();
        labels.insert("x", SymmetryClass::Symmetric).unwrap();
        assert_eq!(augment_mirror(&HashMap::new(), &labels).unwrap_err(), Error::MissingMask("x".into()));
        let masks = HashMap::from([
            ("x".to_string(), BinaryMask::new(2, 2).unwrap()),
            ("y".to_string(), BinaryMask::new(2, 2).unwrap()),
        ]);
        assert_eq!(augment_mirror(&masks, &labels).unwrap_err(), Error::MissingLabel("y".into()));
    }

    #[test]
    fn split_sizes() {
        let ids: Vec<String> = (0..1279).map(|i| format!("img{i:04}")).collect();
        let f = SplitFractions::new(0.75, 0.20, 0.05).unwrap();
        let m = split(&ids, f, 3, None).unwrap();
        // 63.95 -> 64 and 255.8 -> 256
        assert_eq!((m.train.len(), m.val.len(), m.test.len()), (959, 256, 64));
        let m = split(&ids, f, 3, Some(63)).unwrap();
        assert_eq!(m.test.len(), 63);
        assert_eq!(m.train.len() + m.val.len() + m.test.len(), 1279);

        let six: Vec<String> = (0..600).map(|i| format!("a{i}")).collect();
        assert_eq!(split(&six, f, 0, None).unwrap().test.len(), 30);
        assert_eq!(split(&six, f, 0, Some(31)).unwrap().test.len(), 31);
    }

    #[test]
    fn split_half_rounds_up() {
        let ids: Vec<String> = (0..10).map(|i| i.to_string()).collect();
        let m = split(&ids, SplitFractions::new(0.5, 0.25, 0.25).unwrap(), 1, None).unwrap();
        assert_eq!((m.train.len(), m.val.len(), m.test.len()), (4, 3, 3));
    }

    #[test]
    fn split_is_deterministic_and_order_free() {
        let ids: Vec<String> = (0..20).map(|i| format!("id{i}")).collect();
        let mut rev = ids.clone();
        rev.reverse();
        let f = SplitFractions::new(0.5, 0.25, 0.25).unwrap();
        let a = split(&ids, f, 1, None).unwrap();
        assert_eq!(a, split(&ids, f, 1, None).unwrap());
        assert_eq!(a, split(&rev, f, 1, None).unwrap());
        assert_ne!(a, split(&ids, f, 2, None).unwrap());
        assert_eq!(a.to_json(), split(&rev, f, 1, None).unwrap().to_json());
        assert_eq!(SplitManifest::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn split_errors() {
        let f = SplitFractions { train: 0.5, val: 0.25, test: 0.25 };
        assert_eq!(split::<&str>(&[], f, 0, None).unwrap_err(), Error::EmptyInput);
        assert!(SplitFractions::new(0.5, 0.5, 0.5).is_err());
        assert!(SplitFractions::new(1.0, 0.0, 0.0).is_err());
        assert!(SplitFractions::new(1.2, -0.1, -0.1).is_err());
        assert_eq!(split(&["a", "b"], f, 0, Some(3)).unwrap_err().kind(), "BadFractions");
    }
}
