//! Classify masks under every pair-set / indicator-mode combination.
//!
//! ```text
//! cargo run --example classify_masks            # built-in shapes
//! cargo run --example classify_masks -- DIR     # every .png/.pbm/.pgm in DIR
//! ```

use lesion_symmetry::cli::discover_masks;
use lesion_symmetry::gsaa::{classify, GsaaConfig};
use lesion_symmetry::mask::{load_mask, BinaryMask};
use lesion_symmetry::synth::{centered_disk, generate, ShapeKind, ShapeSpec};

fn main() -> lesion_symmetry::Result<()> {
    let masks: Vec<(String, BinaryMask)> = match std::env::args().nth(1) {
        Some(dir) => discover_masks(dir.as_ref())?
            .into_iter()
            .map(|(id, path, format)| Ok((id, load_mask(&std::fs::read(path)?, Some(format))?.mask)))
            .collect::<lesion_symmetry::Result<_>>()?,
        None => vec![
            ("disk".into(), centered_disk(32, 20)),
            ("one_axis".into(), generate(&ShapeSpec::new(ShapeKind::OneAxisBlob, 48, 2)?)?),
            ("blob".into(), generate(&ShapeSpec::new(ShapeKind::FreeBlob, 48, 11)?)?),
            ("l_shape".into(), BinaryMask::from_rows(&["#...", "#...", "#...", "####"])?),
        ],
    };

    println!("{:<10} {:<15} {:<10} {:>16}  bits  label", "mask", "pairs", "mode", "A/B/C/D");
    for (id, mask) in &masks {
        for config in GsaaConfig::all_variants() {
            let r = classify(mask, &config)?;
            let c = r.counts;
            let bits: String = r.indicators.iter().map(|&b| if b { '1' } else { '0' }).collect();
            println!(
                "{id:<10} {:<15} {:<10} {:>16}  {bits}  {}",
                format!("{:?}", config.pair_set),
                format!("{:?}", config.mode),
                format!("{}/{}/{}/{}", c.a_p, c.b_p, c.c_p, c.d_p),
                r.label
            );
            for w in &r.warnings {
                println!("{:>12}warning: {w}", "");
            }
        }
    }
    Ok(())
}
