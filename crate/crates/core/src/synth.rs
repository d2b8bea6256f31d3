//! Synthetic masks of known shape class, an independent reference classifier
//! to check them against, and synthetic feature vectors for SVM fixtures.
//!
//! Every generator re-checks its output with [`oracle_classify`] before
//! returning, so a returned mask is guaranteed to carry the class it was built
//! for. Generated masks are also generic: no pixel row or column coincides
//! with the centroid.

use std::collections::HashSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gsaa::{
    GsaaConfig, GsaaResult, GsaaWarning, IndicatorMode, PairSet, Quadrant, QuadrantCounts, SymmetryClass,
};
use crate::mask::BinaryMask;
use crate::rng::SeededRng;
use crate::svm::{FeatureRecord, FeatureSet};

/// Attempts a generator makes before giving up.
pub const RETRY_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    /// Centered disk; symmetric.
    Disk,
    /// Centered ellipse, width `size`, height two thirds of it; symmetric.
    Ellipse,
    /// Random quadrant reflected into all four; symmetric.
    MirroredBlob,
    /// Mirror-symmetric about one axis only; half-symmetric.
    OneAxisBlob,
    /// Irregular union of disks; asymmetric.
    FreeBlob,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 5] =
        [ShapeKind::Disk, ShapeKind::Ellipse, ShapeKind::MirroredBlob, ShapeKind::OneAxisBlob, ShapeKind::FreeBlob];

    pub fn as_str(self) -> &'static str {
        match self {
            ShapeKind::Disk => "disk",
            ShapeKind::Ellipse => "ellipse",
            ShapeKind::MirroredBlob => "mirrored_blob",
            ShapeKind::OneAxisBlob => "one_axis_blob",
            ShapeKind::FreeBlob => "free_blob",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown shape kind `{s}`")))
    }

    /// The class a mask of this kind is built to have.
    pub fn target_class(self) -> SymmetryClass {
        match self {
            ShapeKind::Disk | ShapeKind::Ellipse | ShapeKind::MirroredBlob => SymmetryClass::Symmetric,
            ShapeKind::OneAxisBlob => SymmetryClass::HalfSymmetric,
            ShapeKind::FreeBlob => SymmetryClass::Asymmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    /// Canvas side in pixels (rounded up to even).
    pub size: usize,
    pub seed: u64,
}

impl ShapeSpec {
    pub fn new(kind: ShapeKind, size: usize, seed: u64) -> Result<Self> {
        if size < 8 {
            return Err(Error::InvalidConfig(format!("shape size must be at least 8, got {size}")));
        }
        Ok(Self { kind, size, seed })
    }

    fn side(&self) -> usize {
        self.size + self.size % 2
    }
}

/// Mirror line a half-symmetric mask is built around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryAxis {
    /// Left half mirrors the right half.
    Vertical,
    /// Top half mirrors the bottom half.
    Horizontal,
}

/// Builds the mask class that `spec.kind` targets.
pub fn generate(spec: &ShapeSpec) -> Result<BinaryMask> {
    match spec.kind {
        ShapeKind::Disk | ShapeKind::Ellipse | ShapeKind::MirroredBlob => gen_symmetric(spec),
        ShapeKind::OneAxisBlob => {
            let axis = if spec.seed.is_multiple_of(2) { SymmetryAxis::Vertical } else { SymmetryAxis::Horizontal };
            gen_half_symmetric(spec, axis)
        }
        ShapeKind::FreeBlob => gen_asymmetric(spec),
    }
}

/// Fills the disk centred at doubled coordinates `(cr2, cc2)` (pixel `(r, c)`
/// has doubled centre `(2r + 1, 2c + 1)`), radius `radius` pixels.
fn fill_disk(mask: &mut BinaryMask, cr2: i64, cc2: i64, radius: i64) {
    let (h, w) = (mask.height() as i64, mask.width() as i64);
    let r2 = 4 * radius * radius;
    let r0 = ((cr2 - 1) / 2 - radius - 1).max(0);
    let r1 = ((cr2 - 1) / 2 + radius + 1).min(h - 1);
    let c0 = ((cc2 - 1) / 2 - radius - 1).max(0);
    let c1 = ((cc2 - 1) / 2 + radius + 1).min(w - 1);
    for r in r0..=r1 {
        for c in c0..=c1 {
            let (dr, dc) = (2 * r + 1 - cr2, 2 * c + 1 - cc2);
            if dr * dr + dc * dc <= r2 {
                mask.set(r as usize, c as usize, true);
            }
        }
    }
}

/// Centred disk of even diameter on a `side x side` canvas (`side` even).
pub fn centered_disk(side: usize, diameter: usize) -> BinaryMask {
    let mut m = BinaryMask::new(side, side).expect("positive side");
    fill_disk(&mut m, side as i64, side as i64, (diameter / 2) as i64);
    m
}

/// Solid ellipse inscribed (with a one-pixel margin) in a `width x height` canvas.
pub fn centered_ellipse(width: usize, height: usize) -> BinaryMask {
    let (w, h) = (width as i64, height as i64);
    let (a, b) = ((w - 2).max(1), (h - 2).max(1));
    BinaryMask::from_fn(width, height, |r, c| {
        let (dc, dr) = (2 * c as i64 + 1 - w, 2 * r as i64 + 1 - h);
        // (dc/a)^2 + (dr/b)^2 <= 1 in doubled units
        dc * dc * b * b + dr * dr * a * a <= a * a * b * b
    })
    .expect("positive dimensions")
}

fn random_disks(rng: &mut SeededRng, mask: &mut BinaryMask, rows: (i64, i64), cols: (i64, i64), count: usize, max_r: i64) {
    for _ in 0..count {
        let r = rng.range_inclusive(rows.0, rows.1);
        let c = rng.range_inclusive(cols.0, cols.1);
        let radius = rng.range_inclusive(1, max_r.max(1));
        fill_disk(mask, 2 * r + 1, 2 * c + 1, radius);
    }
}

fn default_and_literal() -> [GsaaConfig; 2] {
    [GsaaConfig::default(), GsaaConfig::new(PairSet::AlgorithmPairs, IndicatorMode::Literal)]
}

fn is_generic(mask: &BinaryMask) -> bool {
    let (mut n, mut sr, mut sc) = (0u64, 0u64, 0u64);
    for p in mask.lesion_pixels() {
        n += 1;
        sr += p.row as u64;
        sc += p.col as u64;
    }
    n > 0 && sr % n != 0 && sc % n != 0
}

/// Two-axis mirror-symmetric mask: all four quadrant counts are equal.
///
/// `Disk` and `Ellipse` give the solid centred shapes; every other kind gives a
/// random quadrant reflected into the other three.
pub fn gen_symmetric(spec: &ShapeSpec) -> Result<BinaryMask> {
    let s = spec.side();
    let mut rng = SeededRng::new(spec.seed);
    for _ in 0..RETRY_BUDGET {
        let mask = match spec.kind {
            ShapeKind::Disk => {
                let lo = (s / 4).max(2) as i64;
                let hi = ((s - 2) / 2) as i64;
                centered_disk(s, 2 * rng.range_inclusive(lo / 2, hi) as usize)
            }
            ShapeKind::Ellipse => {
                let h = (2 * s / 3 + 1) & !1;
                centered_ellipse(s, h.max(4))
            }
            _ => {
                let half = s / 2;
                let mut quarter = BinaryMask::new(half, half)?;
                let n = rng.range_inclusive(1, 4) as usize;
                random_disks(&mut rng, &mut quarter, (0, half as i64 - 1), (0, half as i64 - 1), n, half as i64 / 2);
                if quarter.count() == 0 {
                    continue;
                }
                BinaryMask::from_fn(s, s, |r, c| {
                    let rr = if r < half { r } else { s - 1 - r };
                    let cc = if c < half { c } else { s - 1 - c };
                    quarter.get(rr, cc)
                })?
            }
        };
        if mask.count() == 0 || !is_generic(&mask) {
            continue;
        }
        if GsaaConfig::all_variants()
            .iter()
            .all(|cfg| oracle_classify(&mask, cfg).map(|r| r.ones_count == 4).unwrap_or(false))
        {
            return Ok(mask.with_source_id(format!("{}_{}", spec.kind.as_str(), spec.seed)));
        }
    }
    Err(Error::ConstructionFailed("symmetric"))
}

/// Mask mirror-symmetric about `axis` and lopsided across the other one.
///
/// Checked with the default pair set in both indicator modes (the table pair
/// set cannot see top/bottom symmetry, so it is not required to agree).
pub fn gen_half_symmetric(spec: &ShapeSpec, axis: SymmetryAxis) -> Result<BinaryMask> {
    let s = spec.side();
    let mut rng = SeededRng::new(spec.seed ^ 0x4841_4c46);
    for _ in 0..RETRY_BUDGET {
        // Build symmetric about the vertical line, heavy at the bottom.
        let mut m = BinaryMask::new(s, s)?;
        let si = s as i64;
        let big = rng.range_inclusive(si / 5, si / 3);
        let small = rng.range_inclusive(1, (big * 3 / 5).max(1));
        let big_row = rng.range_inclusive(si / 2, si - 1 - big);
        let small_row = rng.range_inclusive(small, (big_row - big).max(small));
        fill_disk(&mut m, 2 * big_row + 1, si, big);
        fill_disk(&mut m, 2 * small_row + 1, si, small);
        let extra = rng.range_inclusive(0, 3) as usize;
        random_disks(&mut rng, &mut m, (0, si - 1), (0, si / 2 - 1), extra, si / 8);
        let mask = BinaryMask::from_fn(s, s, |r, c| m.get(r, c) || m.get(r, s - 1 - c))?;
        let mask = match axis {
            SymmetryAxis::Vertical => mask,
            SymmetryAxis::Horizontal => BinaryMask::from_fn(s, s, |r, c| mask.get(c, r))?,
        };
        if !is_generic(&mask) {
            continue;
        }
        let ok = default_and_literal().iter().all(|cfg| {
            oracle_classify(&mask, cfg).map(|r| (1..=2).contains(&r.ones_count)).unwrap_or(false)
        });
        if ok {
            return Ok(mask.with_source_id(format!("one_axis_blob_{}", spec.seed)));
        }
    }
    Err(Error::ConstructionFailed("half-symmetric"))
}

/// Irregular mask with all indicators clear under both pair sets and both modes.
pub fn gen_asymmetric(spec: &ShapeSpec) -> Result<BinaryMask> {
    let s = spec.side();
    let mut rng = SeededRng::new(spec.seed ^ 0x4153_594d);
    for _ in 0..RETRY_BUDGET {
        let mask = random_blob(&mut rng, s, s);
        if mask.count() == 0 || !is_generic(&mask) {
            continue;
        }
        let ok = GsaaConfig::all_variants()
            .iter()
            .all(|cfg| oracle_classify(&mask, cfg).map(|r| r.ones_count == 0).unwrap_or(false));
        if ok {
            return Ok(mask.with_source_id(format!("free_blob_{}", spec.seed)));
        }
    }
    Err(Error::ConstructionFailed("asymmetric"))
}

/// Union of two to five random disks with widely varying radii.
pub fn random_blob(rng: &mut SeededRng, width: usize, height: usize) -> BinaryMask {
    let mut m = BinaryMask::new(width, height).expect("positive dimensions");
    let (w, h) = (width as i64, height as i64);
    let n = rng.range_inclusive(2, 5) as usize;
    let max_r = (w.min(h) / 3).max(1);
    random_disks(rng, &mut m, (0, h - 1), (0, w - 1), n, max_r);
    m
}

/// Independent pixel-noise mask; each pixel is lesion with probability `density`.
pub fn random_noise(rng: &mut SeededRng, width: usize, height: usize, density: f64) -> BinaryMask {
    BinaryMask::from_fn(width, height, |_, _| rng.unit() < density).expect("positive dimensions")
}

/// Reference classifier used to cross-check the production path.
///
/// Scans every pixel position, keeps all sums as arbitrary-precision integers
/// and compares by cross-multiplication.
pub fn oracle_classify(mask: &BinaryMask, config: &GsaaConfig) -> Result<GsaaResult> {
    let zero = || BigInt::from(0);
    let (mut n, mut sr, mut sc) = (zero(), zero(), zero());
    for r in 0..mask.height() {
        for c in 0..mask.width() {
            if mask.get(r, c) {
                n += 1;
                sr += r;
                sc += c;
            }
        }
    }
    if n == zero() {
        return Err(Error::EmptyMask);
    }
    let mut tally = [0u64; 4]; // A, B, C, D
    for r in 0..mask.height() {
        for c in 0..mask.width() {
            if !mask.get(r, c) {
                continue;
            }
            let is_right = BigInt::from(c) * &n >= sc;
            let is_bottom = BigInt::from(r) * &n >= sr;
            let slot = match (is_right, is_bottom) {
                (true, true) => 0,
                (false, true) => 1,
                (false, false) => 2,
                (true, false) => 3,
            };
            tally[slot] += 1;
        }
    }
    let counts = QuadrantCounts { a_p: tally[0], b_p: tally[1], c_p: tally[2], d_p: tally[3] };
    let lookup = |q: Quadrant| BigInt::from(tally[q as usize]);
    let big = |v: u64| BigInt::from(v);
    let (ln, ld) = (big(*config.lower.numer()), big(*config.lower.denom()));
    let (un, ud) = (big(*config.upper.numer()), big(*config.upper.denom()));

    let mut indicators = [false; 4];
    let mut warnings = Vec::new();
    for (slot, (nq, dq)) in config.pair_set.pairs().into_iter().enumerate() {
        let (x, y) = (lookup(nq), lookup(dq));
        let in_band = match config.mode {
            IndicatorMode::Symmetric if x == zero() && y == zero() => None,
            IndicatorMode::Symmetric => {
                let (lo, hi) = if x <= y { (&x, &y) } else { (&y, &x) };
                Some(lo * &ld >= hi * &ln)
            }
            IndicatorMode::Literal if y == zero() => None,
            IndicatorMode::Literal => Some(&x * &ld >= &y * &ln && &x * &ud <= &y * &un),
        };
        match in_band {
            Some(bit) => indicators[slot] = bit,
            None => warnings.push(GsaaWarning::EmptyQuadrantPair { num: nq, den: dq }),
        }
    }
    if n < big(config.min_pixels_warning) {
        warnings.push(GsaaWarning::TinyMask { pixels: counts.total() });
    }
    let ones = indicators.iter().filter(|&&b| b).count() as u8;
    let label = if ones == 0 {
        SymmetryClass::Asymmetric
    } else if ones <= 2 {
        SymmetryClass::HalfSymmetric
    } else {
        SymmetryClass::Symmetric
    };
    Ok(GsaaResult { label, counts, indicators, ones_count: ones, warnings })
}

/// Isotropic Gaussian clusters, `per_class` points around each mean.
///
/// Ids are `<class>_<index>`; labels are the class names.
pub fn gaussian_blobs(classes: &[(&str, Vec<f64>)], per_class: usize, stddev: f64, seed: u64) -> Result<FeatureSet> {
    let dim = classes.first().map_or(0, |(_, m)| m.len());
    let mut rng = SeededRng::new(seed);
    let mut records = Vec::with_capacity(classes.len() * per_class);
    for (name, mean) in classes {
        for i in 0..per_class {
            let features = mean.iter().map(|m| m + stddev * rng.normal()).collect();
            records.push(FeatureRecord { id: format!("{name}_{i:04}"), label: Some(name.to_string()), features });
        }
    }
    FeatureSet::new(records, dim)
}

/// Stand-in for externally extracted features: a `dim`-vector per id whose
/// mean depends on the label (class `k` is offset by `separation` along axis
/// `k mod dim`), plus unit Gaussian noise. Output is sorted by id.
pub fn synthetic_features(
    labeled: &[(String, Option<SymmetryClass>)],
    dim: usize,
    separation: f64,
    seed: u64,
) -> Result<FeatureSet> {
    let mut items: Vec<&(String, Option<SymmetryClass>)> = labeled.iter().collect();
    items.sort_by(|a, b| a.0.cmp(&b.0));
    let mut seen = HashSet::new();
    let mut rng = SeededRng::new(seed);
    let mut records = Vec::with_capacity(items.len());
    for (id, label) in items {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateId(id.clone()));
        }
        let mut features: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
        if let Some(l) = label {
            features[*l as usize % dim] += separation;
        }
        records.push(FeatureRecord { id: id.clone(), label: label.map(|l| l.as_str().to_string()), features });
    }
    FeatureSet::new(records, dim)
}
