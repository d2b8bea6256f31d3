//! Metric suite on a confusion matrix and on paired label lists.
//!
//! Rows of a confusion matrix are predicted classes, columns actual classes.

use lesion_symmetry::metrics::{confusion_matrix, full_report, render, ClassSet, ConfusionMatrix};

fn main() -> lesion_symmetry::Result<()> {
    let cm = ConfusionMatrix::from_csv("116,1,0\n1,30,0\n0,0,52\n", None)?;
    let report = full_report(&cm)?;
    println!("accuracy {}  kappa {}", render(&report.accuracy, 3), render(&report.kappa, 3));
    for c in &report.per_class {
        println!(
            "  {:<15} P {}  R {}  F1 {}  support {}",
            c.class,
            render(&c.precision, 4),
            render(&c.recall, 4),
            render(&c.f1, 4),
            c.support
        );
    }
    print!("{}", report.to_json(6));

    // Two classes, one never predicted: its precision is 0/0 and reported as 0.
    let classes = ClassSet::new(&["benign", "malignant"])?;
    let pred = ["benign", "benign", "benign", "benign"];
    let actual = ["benign", "malignant", "benign", "benign"];
    let report = full_report(&confusion_matrix(&pred, &actual, &classes)?)?;
    println!("macro F1 {}  weighted F1 {}", render(&report.macro_f1, 4), render(&report.weighted_f1, 4));
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
