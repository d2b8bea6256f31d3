//! The command line pipeline end to end in a scratch directory:
//! synth -> classify -> eval -> split -> (features) -> svm train -> svm predict.

use lesion_symmetry::cli;
use lesion_symmetry::dataset::ingest_labels;
use lesion_symmetry::svm::save_features;
use lesion_symmetry::synth::synthetic_features;

fn step(args: &[&str]) {
    println!("$ lesion-symmetry {}", args.join(" "));
    let code = cli::run(std::iter::once("lesion-symmetry").chain(args.iter().copied()));
    assert_eq!(code, 0, "step failed");
}

fn main() -> lesion_symmetry::Result<()> {
    let dir = std::env::temp_dir().join("lesion-symmetry-pipeline");
    std::fs::create_dir_all(&dir)?;
    std::env::set_current_dir(&dir)?;

    step(&["synth", "--kind", "mixed", "--count", "90", "--seed", "3", "--out", "masks"]);
    step(&["classify", "--masks", "masks", "--out", "pred.csv"]);
    step(&["eval", "--pred", "pred.csv", "--truth", "masks/labels.csv", "--out", "gsaa_report.json"]);
    step(&["split", "--labels", "masks/labels.csv", "--seed", "3", "--out", "split.json"]);

    // Features normally come from an external extractor.
    let labels = ingest_labels(&std::fs::read_to_string("masks/labels.csv")?)?;
    let labeled: Vec<_> = labels.iter().map(|(id, c)| (id.to_string(), Some(c))).collect();
    std::fs::write("features.csv", save_features(&synthetic_features(&labeled, 6, 3.0, 3)?))?;

    step(&["svm", "train", "--features", "features.csv", "--manifest", "split.json", "--seed", "3", "--out", "model.json"]);
    step(&["svm", "predict", "--model", "model.json", "--features", "features.csv", "--out", "svm_pred.csv"]);
    step(&["eval", "--pred", "svm_pred.csv", "--truth", "masks/labels.csv", "--out", "svm_report.json"]);

    println!("\nartifacts in {}", dir.display());
    print!("{}", std::fs::read_to_string("svm_report.json")?);
    Ok(())
}
