//! Reference confusion matrices and the two-decimal scores reported for them.
#![allow(dead_code)]

use lesion_symmetry::metrics::{ClassSet, ConfusionMatrix};

/// Rows are predicted classes, columns actual, both in
/// asymmetric / half-symmetric / symmetric order.
pub const DERMOSCOPY_SMALL: [[u64; 3]; 3] = [[116, 1, 0], [1, 30, 0], [0, 0, 52]];
pub const DERMOSCOPY_LARGE: [[u64; 3]; 3] = [[267, 4, 7], [1, 340, 0], [0, 0, 660]];

pub struct ReferenceRun {
    pub name: &'static str,
    pub cells: [[u64; 3]; 3],
    /// precision x3, recall x3, f1 x3, macro f1, weighted f1, kappa
    pub scores: [f64; 12],
}

pub const CLASSIFIER_RUNS: [ReferenceRun; 12] = [
    ReferenceRun { name: "run01", cells: [[32, 0, 1], [1, 16, 0], [3, 0, 10]], scores: [0.97, 0.94, 0.77, 0.89, 1.00, 0.91, 0.93, 0.97, 0.83, 0.91, 0.92, 0.87] },
    ReferenceRun { name: "run02", cells: [[32, 1, 0], [2, 15, 0], [1, 0, 12]], scores: [0.97, 0.88, 0.92, 0.91, 0.94, 1.00, 0.94, 0.91, 0.96, 0.94, 0.94, 0.89] },
    ReferenceRun { name: "run03", cells: [[31, 1, 1], [1, 16, 0], [1, 0, 12]], scores: [0.94, 0.94, 0.92, 0.94, 0.94, 0.92, 0.94, 0.94, 0.92, 0.93, 0.94, 0.90] },
    ReferenceRun { name: "run04", cells: [[31, 0, 2], [3, 14, 0], [2, 1, 10]], scores: [0.94, 0.82, 0.77, 0.86, 0.93, 0.83, 0.90, 0.88, 0.80, 0.86, 0.87, 0.79] },
    ReferenceRun { name: "run05", cells: [[28, 3, 2], [0, 17, 0], [3, 0, 10]], scores: [0.85, 1.00, 0.77, 0.90, 0.85, 0.83, 0.88, 0.92, 0.80, 0.86, 0.87, 0.79] },
    ReferenceRun { name: "run06", cells: [[29, 3, 1], [1, 16, 0], [1, 0, 12]], scores: [0.88, 0.94, 0.92, 0.94, 0.84, 0.92, 0.91, 0.89, 0.92, 0.91, 0.90, 0.85] },
    ReferenceRun { name: "run07", cells: [[6, 2, 0], [0, 4, 1], [0, 0, 18]], scores: [0.75, 0.80, 1.00, 1.00, 0.67, 0.95, 0.86, 0.73, 0.97, 0.85, 0.90, 0.83] },
    ReferenceRun { name: "run08", cells: [[8, 0, 0], [0, 4, 1], [0, 1, 17]], scores: [1.00, 0.80, 0.94, 1.00, 0.80, 0.94, 1.00, 0.80, 0.94, 0.91, 0.94, 0.89] },
    ReferenceRun { name: "run09", cells: [[8, 0, 0], [0, 4, 1], [0, 0, 18]], scores: [1.00, 0.80, 1.00, 1.00, 1.00, 0.95, 1.00, 0.89, 0.97, 0.95, 0.97, 0.94] },
    ReferenceRun { name: "run10", cells: [[8, 0, 0], [0, 5, 0], [3, 2, 13]], scores: [1.00, 1.00, 0.72, 0.73, 0.71, 1.00, 0.84, 0.83, 0.84, 0.84, 0.84, 0.74] },
    ReferenceRun { name: "run11", cells: [[8, 0, 0], [0, 4, 1], [0, 2, 16]], scores: [1.00, 0.80, 0.89, 1.00, 0.67, 0.94, 1.00, 0.73, 0.91, 0.88, 0.90, 0.83] },
    ReferenceRun { name: "run12", cells: [[8, 0, 0], [0, 3, 2], [0, 0, 18]], scores: [1.00, 0.60, 1.00, 1.00, 1.00, 0.90, 1.00, 0.75, 0.95, 0.90, 0.94, 0.88] },
];

pub const SCORE_NAMES: [&str; 12] = [
    "P_asym", "P_half", "P_sym", "R_asym", "R_half", "R_sym", "F_asym", "F_half", "F_sym", "macro_f1", "weighted_f1",
    "kappa",
];

pub fn matrix(cells: [[u64; 3]; 3]) -> ConfusionMatrix {
    ConfusionMatrix::from_cells(ClassSet::default(), cells.iter().map(|r| r.to_vec()).collect()).unwrap()
}

/// Quadrant counts `(A, B, C, D)` with the expected indicator bits (table pair
/// order A/C, B/D, A/B, C/D) and label.
pub type IndicatorRow = ((u64, u64, u64, u64), [bool; 4], &'static str);

pub const INDICATOR_ROWS: [IndicatorRow; 10] = [
    ((80, 80, 80, 80), [true, true, true, true], "symmetric"),
    ((100, 50, 25, 12), [false, false, false, false], "asymmetric"),
    ((100, 100, 50, 50), [false, false, true, true], "half_symmetric"),
    ((40, 40, 40, 40), [true, true, true, true], "symmetric"),
    ((90, 30, 60, 7), [false, false, false, false], "asymmetric"),
    ((100, 12, 25, 50), [false, false, false, false], "asymmetric"),
    ((100, 50, 100, 50), [true, true, false, false], "half_symmetric"),
    ((12, 25, 50, 100), [false, false, false, false], "asymmetric"),
    ((60, 60, 30, 30), [false, false, true, true], "half_symmetric"),
    ((7, 7, 7, 7), [true, true, true, true], "symmetric"),
];
