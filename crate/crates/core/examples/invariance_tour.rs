//! How mirrors, rotation and padding move quadrant counts around.

use lesion_symmetry::gsaa::{centroid, classify, GsaaConfig};
use lesion_symmetry::mask::{Axis, BinaryMask};

fn show(name: &str, m: &BinaryMask) -> lesion_symmetry::Result<()> {
    let r = classify(m, &GsaaConfig::default())?;
    let c = r.counts;
    println!("{name:<12} A {:>2} B {:>2} C {:>2} D {:>2}  {:?}  {}", c.a_p, c.b_p, c.c_p, c.d_p, r.indicators, r.label);
    Ok(())
}

fn main() -> lesion_symmetry::Result<()> {
    let m = BinaryMask::from_rows(&[
        "..##....", //
        ".####...",
        "######..",
        ".#####..",
        "..####..",
        "...###.#",
    ])?;
    let c = centroid(&m)?;
    println!("centroid row {} col {}  generic: {}", c.row(), c.col(), c.is_generic());
    show("original", &m)?;
    show("horizontal", &m.mirror(Axis::Horizontal))?;
    show("vertical", &m.mirror(Axis::Vertical))?;
    show("rotate180", &m.rotate180())?;
    show("padded", &m.pad(3, 0, 5, 1))?;

    // A pixel sitting exactly on the centroid goes right/bottom, so mirroring
    // moves it to a different quadrant.
    let tie = BinaryMask::from_rows(&["##.", "..#", ".#."])?;
    println!("\ncentroid on a pixel (generic: {}):", centroid(&tie)?.is_generic());
    show("original", &tie)?;
    show("horizontal", &tie.mirror(Axis::Horizontal))?;
    Ok(())
}
