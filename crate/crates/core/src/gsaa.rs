//! Geometry shape-based asymmetry analysis.
//!
//! A mask is cut into four quadrants by a vertical and a horizontal line
//! through the lesion centroid:
//!
//! ```text
//!        left | right
//!   up     C  |  D
//!   -------+--+-------
//!   bottom B  |  A
//! ```
//!
//! The lesion pixels of each quadrant are counted, four count ratios are turned
//! into 0/1 indicators by a ratio band around 1, and the number of set
//! indicators picks the label. All arithmetic is on integers: the centroid is
//! kept as exact sums and every comparison is cross-multiplied, so results do
//! not depend on floating point.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

/// Three-way shape label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    Asymmetric,
    HalfSymmetric,
    Symmetric,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 3] =
        [SymmetryClass::Asymmetric, SymmetryClass::HalfSymmetric, SymmetryClass::Symmetric];

    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryClass::Asymmetric => "asymmetric",
            SymmetryClass::HalfSymmetric => "half_symmetric",
            SymmetryClass::Symmetric => "symmetric",
        }
    }

    /// Decision rule: no set indicator is asymmetric, one or two is
    /// half-symmetric, three or four is symmetric.
    pub fn from_ones_count(ones: u8) -> Self {
        match ones {
            0 => SymmetryClass::Asymmetric,
            1 | 2 => SymmetryClass::HalfSymmetric,
            _ => SymmetryClass::Symmetric,
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryClass {
    type Err = Error;

    /// Case-insensitive; `-` and spaces are accepted in place of `_`.
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .map(|c| if c == '-' || c == ' ' { '_' } else { c.to_ascii_lowercase() })
            .collect();
        match norm.as_str() {
            "asymmetric" => Ok(SymmetryClass::Asymmetric),
            "half_symmetric" | "halfsymmetric" => Ok(SymmetryClass::HalfSymmetric),
            "symmetric" => Ok(SymmetryClass::Symmetric),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Exact centroid: `(sum_rows / count, sum_cols / count)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Centroid {
    pub sum_rows: u64,
    pub sum_cols: u64,
    pub count: u64,
}

impl Centroid {
    pub fn row(&self) -> Ratio<u64> {
        Ratio::new(self.sum_rows, self.count)
    }

    pub fn col(&self) -> Ratio<u64> {
        Ratio::new(self.sum_cols, self.count)
    }

    /// True when no pixel row or column can coincide with the centroid, so no
    /// pixel is placed by the tie rule.
    pub fn is_generic(&self) -> bool {
        !self.sum_rows.is_multiple_of(self.count) && !self.sum_cols.is_multiple_of(self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    /// Right, bottom.
    A,
    /// Left, bottom.
    B,
    /// Left, up.
    C,
    /// Right, up.
    D,
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quadrant::A => "A",
            Quadrant::B => "B",
            Quadrant::C => "C",
            Quadrant::D => "D",
        };
        f.write_str(s)
    }
}

/// Lesion pixel totals per quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuadrantCounts {
    pub a_p: u64,
    pub b_p: u64,
    pub c_p: u64,
    pub d_p: u64,
}

impl QuadrantCounts {
    pub fn new(a_p: u64, b_p: u64, c_p: u64, d_p: u64) -> Self {
        Self { a_p, b_p, c_p, d_p }
    }

    pub fn get(&self, q: Quadrant) -> u64 {
        match q {
            Quadrant::A => self.a_p,
            Quadrant::B => self.b_p,
            Quadrant::C => self.c_p,
            Quadrant::D => self.d_p,
        }
    }

    pub fn total(&self) -> u64 {
        self.a_p + self.b_p + self.c_p + self.d_p
    }
}

/// Which four quadrant ratios are tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairSet {
    /// A/B, A/D, B/C, C/D.
    #[default]
    AlgorithmPairs,
    /// A/C, B/D, A/B, C/D: diagonal pairs first, then the two bottom/top neighbours.
    TablePairs,
}

impl PairSet {
    pub fn pairs(self) -> [(Quadrant, Quadrant); 4] {
        use Quadrant::*;
        match self {
            PairSet::AlgorithmPairs => [(A, B), (A, D), (B, C), (C, D)],
            PairSet::TablePairs => [(A, C), (B, D), (A, B), (C, D)],
        }
    }
}

/// How a ratio is compared against the band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndicatorMode {
    /// `min / max >= lower`; independent of which count is the numerator.
    #[default]
    Symmetric,
    /// `lower <= num / den <= upper`, exactly as written.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsaaConfig {
    pub pair_set: PairSet,
    pub mode: IndicatorMode,
    pub lower: Ratio<u64>,
    pub upper: Ratio<u64>,
    /// Masks with fewer lesion pixels get a [`GsaaWarning::TinyMask`].
    pub min_pixels_warning: u64,
}

impl Default for GsaaConfig {
    fn default() -> Self {
        Self {
            pair_set: PairSet::AlgorithmPairs,
            mode: IndicatorMode::Symmetric,
            lower: Ratio::new(9, 10),
            upper: Ratio::new(11, 10),
            min_pixels_warning: 16,
        }
    }
}

impl GsaaConfig {
    pub fn new(pair_set: PairSet, mode: IndicatorMode) -> Self {
        Self { pair_set, mode, ..Self::default() }
    }

    /// Replaces the ratio band; requires `0 < lower <= 1 <= upper`.
    pub fn with_band(mut self, lower: Ratio<u64>, upper: Ratio<u64>) -> Result<Self> {
        let one = Ratio::from_integer(1);
        if *lower.numer() == 0 || lower > one || upper < one {
            return Err(Error::InvalidConfig(format!("band must satisfy 0 < lower <= 1 <= upper, got [{lower}, {upper}]")));
        }
        self.lower = lower;
        self.upper = upper;
        Ok(self)
    }

    /// The four configurations obtained from both pair sets and both modes.
    pub fn all_variants() -> [GsaaConfig; 4] {
        [
            GsaaConfig::new(PairSet::AlgorithmPairs, IndicatorMode::Symmetric),
            GsaaConfig::new(PairSet::AlgorithmPairs, IndicatorMode::Literal),
            GsaaConfig::new(PairSet::TablePairs, IndicatorMode::Symmetric),
            GsaaConfig::new(PairSet::TablePairs, IndicatorMode::Literal),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GsaaWarning {
    /// A tested ratio had a zero denominator (or both sides zero).
    EmptyQuadrantPair { num: Quadrant, den: Quadrant },
    TinyMask { pixels: u64 },
    NonBinaryInput,
}

impl fmt::Display for GsaaWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GsaaWarning::EmptyQuadrantPair { num, den } => write!(f, "empty_quadrant_pair:{num}/{den}"),
            GsaaWarning::TinyMask { pixels } => write!(f, "tiny_mask:{pixels}"),
            GsaaWarning::NonBinaryInput => f.write_str("non_binary_input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsaaResult {
    pub label: SymmetryClass,
    pub counts: QuadrantCounts,
    /// In the order of the configured pair set.
    pub indicators: [bool; 4],
    pub ones_count: u8,
    pub warnings: Vec<GsaaWarning>,
}

pub fn centroid(mask: &BinaryMask) -> Result<Centroid> {
    let (mut sum_rows, mut sum_cols, mut count) = (0u64, 0u64, 0u64);
    for p in mask.lesion_pixels() {
        sum_rows += p.row as u64;
        sum_cols += p.col as u64;
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(Centroid { sum_rows, sum_cols, count })
}

/// Splits lesion pixels at the centroid. A pixel lying exactly on a split
/// line goes right (for the column) and bottom (for the row).
pub fn quadrant_counts(mask: &BinaryMask) -> Result<QuadrantCounts> {
    let c = centroid(mask)?;
    Ok(counts_about(mask, &c))
}

fn counts_about(mask: &BinaryMask, c: &Centroid) -> QuadrantCounts {
    let n = u128::from(c.count);
    let (sr, sc) = (u128::from(c.sum_rows), u128::from(c.sum_cols));
    let mut counts = QuadrantCounts::default();
    for p in mask.lesion_pixels() {
        let right = p.col as u128 * n >= sc;
        let bottom = p.row as u128 * n >= sr;
        match (right, bottom) {
            (true, true) => counts.a_p += 1,
            (false, true) => counts.b_p += 1,
            (false, false) => counts.c_p += 1,
            (true, false) => counts.d_p += 1,
        }
    }
    counts
}

/// Evaluates the four ratio indicators of `config.pair_set`.
pub fn quotient_indicators(counts: &QuadrantCounts, config: &GsaaConfig) -> ([bool; 4], Vec<GsaaWarning>) {
    let (lo_n, lo_d) = (u128::from(*config.lower.numer()), u128::from(*config.lower.denom()));
    let (hi_n, hi_d) = (u128::from(*config.upper.numer()), u128::from(*config.upper.denom()));
    let mut bits = [false; 4];
    let mut warnings = Vec::new();
    for (slot, (nq, dq)) in config.pair_set.pairs().into_iter().enumerate() {
        let num = u128::from(counts.get(nq));
        let den = u128::from(counts.get(dq));
        bits[slot] = match config.mode {
            IndicatorMode::Symmetric => {
                if num == 0 && den == 0 {
                    warnings.push(GsaaWarning::EmptyQuadrantPair { num: nq, den: dq });
                    false
                } else {
                    // min/max >= lo_n/lo_d
                    num.min(den) * lo_d >= num.max(den) * lo_n
                }
            }
            IndicatorMode::Literal => {
                if den == 0 {
                    warnings.push(GsaaWarning::EmptyQuadrantPair { num: nq, den: dq });
                    false
                } else {
                    num * lo_d >= den * lo_n && num * hi_d <= den * hi_n
                }
            }
        };
    }
    (bits, warnings)
}

pub fn classify(mask: &BinaryMask, config: &GsaaConfig) -> Result<GsaaResult> {
    let c = centroid(mask)?;
    let counts = counts_about(mask, &c);
    let (indicators, mut warnings) = quotient_indicators(&counts, config);
    if c.count < config.min_pixels_warning {
        warnings.push(GsaaWarning::TinyMask { pixels: c.count });
    }
    let ones_count = indicators.iter().filter(|&&b| b).count() as u8;
    Ok(GsaaResult {
        label: SymmetryClass::from_ones_count(ones_count),
        counts,
        indicators,
        ones_count,
        warnings,
    })
}
