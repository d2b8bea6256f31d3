//! Mirror augmentation (x3) followed by a seeded train/val/test split.

use std::collections::HashMap;

use lesion_symmetry::dataset::{augment_mirror, augmented_labels, split, LabelTable, SplitFractions};
use lesion_symmetry::synth::{generate, ShapeKind, ShapeSpec};

fn main() -> lesion_symmetry::Result<()> {
    let kinds = [ShapeKind::FreeBlob, ShapeKind::OneAxisBlob, ShapeKind::MirroredBlob];
    let mut masks = HashMap::new();
    let mut labels = LabelTable::new();
    for i in 0..200u64 {
        let kind = kinds[i as usize % kinds.len()];
        let id = format!("IMD{i:03}");
        masks.insert(id.clone(), generate(&ShapeSpec::new(kind, 32, i)?)?);
        labels.insert(id, kind.target_class())?;
    }

    let items = augment_mirror(&masks, &labels)?;
    let augmented = augmented_labels(&items)?;
    println!("{} masks -> {} after mirroring", masks.len(), items.len());
    println!("class counts before {:?}, after {:?}", labels.class_counts(), augmented.class_counts());

    let fractions = SplitFractions::new(0.75, 0.20, 0.05)?;
    let manifest = split(&augmented.ids(), fractions, 7, None)?;
    println!("train {}  val {}  test {}", manifest.train.len(), manifest.val.len(), manifest.test.len());
    println!("first test ids: {:?}", &manifest.test[..3]);

    // A fixed test size overrides the fraction.
    let fixed = split(&augmented.ids(), fractions, 7, Some(29))?;
    println!("with --test-count 29: train {}  val {}  test {}", fixed.train.len(), fixed.val.len(), fixed.test.len());
    Ok(())
}
