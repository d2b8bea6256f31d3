//! One-vs-one linear SVM on three Gaussian clusters.

use lesion_symmetry::metrics::{full_report, render};
use lesion_symmetry::svm::{train_ovo, OvoEnsemble, SvmHyper};
use lesion_symmetry::synth::gaussian_blobs;

fn main() -> lesion_symmetry::Result<()> {
    let classes = [
        ("asymmetric", vec![0.0, 0.0, 0.0]),
        ("half_symmetric", vec![5.0, 0.0, 1.0]),
        ("symmetric", vec![0.0, 5.0, -1.0]),
    ];
    let train = gaussian_blobs(&classes, 120, 1.0, 1)?;
    let test = gaussian_blobs(&classes, 40, 1.0, 2)?;

    let model = train_ovo(&train, &SvmHyper::default(), 42, true)?;
    println!("{} pair models", model.models.len());
    for m in &model.models {
        println!("  {} vs {}: w = {:?}, b = {:.4}", m.pos_class, m.neg_class, m.weights, m.bias);
    }

    let cm = model.evaluate(&test)?;
    let report = full_report(&cm)?;
    println!("test accuracy {}  kappa {}", render(&report.accuracy, 4), render(&report.kappa, 4));
    print!("{}", cm.to_csv());

    let p = model.predict(&[4.0, 0.5, 0.8])?;
    println!("predict [4, 0.5, 0.8] -> {} (votes {:?})", p.label, p.votes);

    let json = model.to_json();
    assert_eq!(OvoEnsemble::from_json(&json)?, model);
    println!("model JSON: {} bytes, reloads exactly", json.len());
    Ok(())
}
