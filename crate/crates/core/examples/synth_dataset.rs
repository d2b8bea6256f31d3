//! Synthetic masks of each kind, checked against the reference classifier.

use lesion_symmetry::gsaa::{GsaaConfig, IndicatorMode, PairSet};
use lesion_symmetry::synth::{generate, oracle_classify, ShapeKind, ShapeSpec};

fn main() -> lesion_symmetry::Result<()> {
    for kind in ShapeKind::ALL {
        let mask = generate(&ShapeSpec::new(kind, 20, 5)?)?;
        let r = oracle_classify(&mask, &GsaaConfig::default())?;
        let table = oracle_classify(&mask, &GsaaConfig::new(PairSet::TablePairs, IndicatorMode::Symmetric))?;
        println!("{} (built as {}):", kind.as_str(), kind.target_class());
        println!("{mask:?}");
        println!(
            "counts {}/{}/{}/{}  label {}  (table pairs: {})\n",
            r.counts.a_p, r.counts.b_p, r.counts.c_p, r.counts.d_p, r.label, table.label
        );
    }
    Ok(())
}
