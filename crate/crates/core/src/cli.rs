//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 for data errors (reported on stderr as a single
//! `error[Kind]: message` line), 2 for usage errors.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::dataset::{augment_mirror, augmented_labels, ingest_labels, split, SplitFractions, SplitManifest};
use crate::error::{Error, Result};
use crate::gsaa::{classify, GsaaConfig, GsaaResult, GsaaWarning, IndicatorMode, PairSet};
use crate::mask::{load_mask, save_mask, BinaryMask, MaskFormat};
use crate::metrics::{confusion_matrix, full_report, ClassSet, ConfusionMatrix};
use crate::rng::SeededRng;
use crate::svm::{load_features, train_ovo, OvoEnsemble, SvmHyper};
use crate::synth::{generate, ShapeKind, ShapeSpec};

#[derive(Debug, Parser)]
#[command(name = "lesion-symmetry", version, about = "Shape asymmetry of binary lesion masks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify every mask in a directory
    Classify(ClassifyArgs),
    /// Same as `classify`; for producing ground-truth labels for unannotated masks
    Label(ClassifyArgs),
    /// Compute the metric suite from predictions or a confusion matrix
    Eval(EvalArgs),
    /// Add horizontal and vertical mirrors of every labeled mask
    Augment(AugmentArgs),
    /// Seeded train/validation/test split of a label table
    Split(SplitArgs),
    /// One-vs-one linear SVM
    #[command(subcommand)]
    Svm(SvmCommand),
    /// Generate synthetic masks of known class
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairSetArg {
    Algorithm,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Symmetric,
    Literal,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    masks: PathBuf,
    #[arg(long, value_enum, default_value = "algorithm")]
    pair_set: PairSetArg,
    #[arg(long, value_enum, default_value = "symmetric")]
    mode: ModeArg,
    /// Output CSV (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["pred", "cm"]))]
struct EvalArgs {
    /// Predictions CSV with `image_id,label` columns
    #[arg(long, requires = "truth")]
    pred: Option<PathBuf>,
    /// Ground-truth CSV with `image_id,label` columns
    #[arg(long, requires = "pred")]
    truth: Option<PathBuf>,
    /// Confusion matrix CSV, one row per predicted class
    #[arg(long, conflicts_with_all = ["pred", "truth"])]
    cm: Option<PathBuf>,
    /// Comma-separated class names for `--cm`
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<String>>,
    #[arg(long)]
    out: PathBuf,
    /// Decimal places in the report
    #[arg(long, default_value_t = 6)]
    precision: u32,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    #[arg(long)]
    masks: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    labels: PathBuf,
    /// train,val,test
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0.75,0.20,0.05")]
    fractions: Vec<f64>,
    /// Exact test-set size, overriding the test fraction
    #[arg(long)]
    test_count: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum SvmCommand {
    /// Train on the `train` ids of a split manifest
    Train(TrainArgs),
    /// Predict every row of a feature file
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    lambda: f64,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long)]
    no_standardize: bool,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// disk, ellipse, mirrored_blob, one_axis_blob, free_blob or mixed
    #[arg(long)]
    kind: String,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Canvas side in pixels
    #[arg(long, default_value_t = 64)]
    size: usize,
    #[arg(long, default_value = "png")]
    format: String,
}

/// Runs the tool with `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {}", e.kind(), e.to_string().replace('\n', " "));
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Classify(a) | Command::Label(a) => cmd_classify(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Augment(a) => cmd_augment(&a),
        Command::Split(a) => cmd_split(&a),
        Command::Svm(SvmCommand::Train(a)) => cmd_svm_train(&a),
        Command::Svm(SvmCommand::Predict(a)) => cmd_svm_predict(&a),
        Command::Synth(a) => cmd_synth(&a),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Mask files (`.png`, `.pbm`, `.pgm`) in `dir`, keyed by file stem, sorted by id.
pub fn discover_masks(dir: &Path) -> Result<Vec<(String, PathBuf, MaskFormat)>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut found = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if !path.is_file() {
            continue;
        }
        let Some(format) = path.extension().and_then(|e| e.to_str()).and_then(MaskFormat::from_extension) else {
            continue;
        };
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else { continue };
        found.push((stem.to_string(), path.clone(), format));
    }
    found.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    if let Some(w) = found.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateId(w[0].0.clone()));
    }
    Ok(found)
}

fn load_mask_file(id: &str, path: &Path, format: MaskFormat) -> Result<(BinaryMask, bool)> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let loaded = load_mask(&bytes, Some(format)).map_err(|e| e.in_item(id))?;
    let non_binary = loaded.is_non_binary();
    Ok((loaded.mask.with_source_id(id), non_binary))
}

/// One CSV line per mask: `image_id,label,a_p,b_p,c_p,d_p,i1,i2,i3,i4,warnings`.
pub fn classify_dir(dir: &Path, config: &GsaaConfig) -> Result<String> {
    let files = discover_masks(dir)?;
    let rows = files
        .par_iter()
        .map(|(id, path, format)| {
            let (mask, non_binary) = load_mask_file(id, path, *format)?;
            let mut result = classify(&mask, config).map_err(|e| e.in_item(id.as_str()))?;
            if non_binary {
                result.warnings.push(GsaaWarning::NonBinaryInput);
            }
            Ok(prediction_row(id, &result))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = String::from("image_id,label,a_p,b_p,c_p,d_p,i1,i2,i3,i4,warnings\n");
    for row in rows {
        out.push_str(&row);
    }
    Ok(out)
}

fn prediction_row(id: &str, r: &GsaaResult) -> String {
    let c = &r.counts;
    let bits: Vec<&str> = r.indicators.iter().map(|&b| if b { "1" } else { "0" }).collect();
    let warnings: Vec<String> = r.warnings.iter().map(ToString::to_string).collect();
    format!(
        "{id},{},{},{},{},{},{},{}\n",
        r.label,
        c.a_p,
        c.b_p,
        c.c_p,
        c.d_p,
        bits.join(","),
        warnings.join(";")
    )
}

fn cmd_classify(a: &ClassifyArgs) -> Result<()> {
    let pair_set = match a.pair_set {
        PairSetArg::Algorithm => PairSet::AlgorithmPairs,
        PairSetArg::Table => PairSet::TablePairs,
    };
    let mode = match a.mode {
        ModeArg::Symmetric => IndicatorMode::Symmetric,
        ModeArg::Literal => IndicatorMode::Literal,
    };
    let csv = classify_dir(&a.masks, &GsaaConfig::new(pair_set, mode))?;
    match &a.out {
        Some(path) => write_file(path, csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

/// `(id, label)` pairs from a CSV with an `image_id` (or `id`) and a `label` column.
pub fn read_id_labels(text: &str) -> Result<Vec<(String, String)>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let col = |names: &[&str]| header.iter().position(|h| names.contains(&h));
    let (Some(id_col), Some(label_col)) = (col(&["image_id", "id"]), col(&["label"])) else {
        return Err(Error::HeaderMismatch("need `image_id` and `label` columns".into()));
    };
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let id = row.get(id_col).unwrap_or_default().to_string();
        let label = row.get(label_col).unwrap_or_default().to_string();
        if out.iter().any(|(seen, _): &(String, String)| *seen == id) {
            return Err(Error::DuplicateId(id));
        }
        out.push((id, label));
    }
    Ok(out)
}

/// Confusion matrix from predictions joined to ground truth by id.
pub fn join_predictions(pred_csv: &str, truth_csv: &str) -> Result<ConfusionMatrix> {
    let preds: HashMap<String, String> = read_id_labels(pred_csv)?.into_iter().collect();
    let truth = read_id_labels(truth_csv)?;
    if let Some(extra) = preds.keys().find(|id| !truth.iter().any(|(t, _)| t == *id)) {
        return Err(Error::IdMismatch(format!("prediction for `{extra}` has no ground truth")));
    }
    let mut p = Vec::with_capacity(truth.len());
    let mut t = Vec::with_capacity(truth.len());
    for (id, label) in &truth {
        let pred = preds.get(id).ok_or_else(|| Error::IdMismatch(format!("no prediction for `{id}`")))?;
        p.push(pred.as_str());
        t.push(label.as_str());
    }
    let classes = ClassSet::infer(p.iter().chain(&t))?;
    confusion_matrix(&p, &t, &classes)
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let cm = match (&a.cm, &a.pred, &a.truth) {
        (Some(cm), _, _) => {
            let classes = a.classes.as_deref().map(ClassSet::new).transpose()?;
            ConfusionMatrix::from_csv(&read_text(cm)?, classes)?
        }
        (None, Some(pred), Some(truth)) => join_predictions(&read_text(pred)?, &read_text(truth)?)?,
        _ => unreachable!("clap enforces the input group"),
    };
    let report = full_report(&cm)?;
    write_file(&a.out, report.to_json(a.precision))
}

fn cmd_augment(a: &AugmentArgs) -> Result<()> {
    let labels = ingest_labels(&read_text(&a.labels)?)?;
    let files = discover_masks(&a.masks)?;
    let mut masks = HashMap::new();
    let mut formats = HashMap::new();
    for (id, path, format) in &files {
        let (mask, _) = load_mask_file(id, path, *format)?;
        masks.insert(id.clone(), mask);
        formats.insert(id.clone(), *format);
    }
    let items = augment_mirror(&masks, &labels)?;
    fs::create_dir_all(&a.out)?;
    for item in &items {
        let base = item.id.trim_end_matches("_h").trim_end_matches("_v");
        let format = formats.get(&item.id).or_else(|| formats.get(base)).copied().unwrap_or(MaskFormat::Png);
        let bytes = save_mask(&item.mask, format)?;
        write_file(&a.out.join(format!("{}.{}", item.id, format.extension())), bytes)?;
    }
    write_file(&a.out.join("labels.csv"), augmented_labels(&items)?.to_csv())
}

fn cmd_split(a: &SplitArgs) -> Result<()> {
    let [train, val, test] = a.fractions[..] else {
        return Err(Error::BadFractions(format!("expected three fractions, got {}", a.fractions.len())));
    };
    let labels = ingest_labels(&read_text(&a.labels)?)?;
    let manifest = split(&labels.ids(), SplitFractions::new(train, val, test)?, a.seed, a.test_count)?;
    write_file(&a.out, manifest.to_json())
}

fn cmd_svm_train(a: &TrainArgs) -> Result<()> {
    let features = load_features(&read_text(&a.features)?)?;
    let manifest = SplitManifest::from_json(&read_text(&a.manifest)?)?;
    let train = features.select(&manifest.train)?;
    let hyper = SvmHyper { lambda: a.lambda, epochs: a.epochs };
    let model = train_ovo(&train, &hyper, a.seed, !a.no_standardize)?;
    write_file(&a.out, model.to_json())
}

fn cmd_svm_predict(a: &PredictArgs) -> Result<()> {
    let model = OvoEnsemble::from_json(&read_text(&a.model)?)?;
    let features = load_features(&read_text(&a.features)?)?;
    write_file(&a.out, prediction_csv(&model, &features)?)
}

/// `image_id,label,votes_<class>...,margin_<class>...` for every record.
pub fn prediction_csv(model: &OvoEnsemble, features: &crate::svm::FeatureSet) -> Result<String> {
    let mut out = String::from("image_id,label");
    for c in model.classes.labels() {
        write!(out, ",votes_{c}").unwrap();
    }
    for c in model.classes.labels() {
        write!(out, ",margin_{c}").unwrap();
    }
    out.push('\n');
    for r in features.records() {
        let p = model.predict(&r.features)?;
        write!(out, "{},{}", r.id, p.label).unwrap();
        for v in &p.votes {
            write!(out, ",{v}").unwrap();
        }
        for m in &p.margins {
            write!(out, ",{m:.6}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let format = MaskFormat::from_extension(&a.format)
        .ok_or_else(|| Error::UnsupportedFormat(format!("cannot write `{}`", a.format)))?;
    let mixed = a.kind.eq_ignore_ascii_case("mixed");
    let fixed_kind = if mixed { None } else { Some(ShapeKind::parse(&a.kind)?) };
    let cycle = [ShapeKind::MirroredBlob, ShapeKind::OneAxisBlob, ShapeKind::FreeBlob];
    let prefix = if mixed { "synth" } else { fixed_kind.map_or("synth", ShapeKind::as_str) };
    let mut seeds = SeededRng::new(a.seed);
    let jobs: Vec<(String, ShapeSpec)> = (0..a.count)
        .map(|i| {
            let kind = fixed_kind.unwrap_or(cycle[i % cycle.len()]);
            Ok((format!("{prefix}_{i:04}"), ShapeSpec::new(kind, a.size, seeds.next_u64())?))
        })
        .collect::<Result<_>>()?;
    let masks = jobs
        .par_iter()
        .map(|(id, spec)| Ok((id.clone(), spec.kind.target_class(), generate(spec)?)))
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(&a.out)?;
    let mut labels = crate::dataset::LabelTable::new();
    for (id, class, mask) in &masks {
        write_file(&a.out.join(format!("{id}.{}", format.extension())), save_mask(mask, format)?)?;
        labels.insert(id.clone(), *class)?;
    }
    write_file(&a.out.join("labels.csv"), labels.to_csv())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_rejects_mismatched_ids() {
        let truth = "image_id,label\na,symmetric\nb,asymmetric\n";
        assert_eq!(join_predictions("image_id,label\na,symmetric\n", truth).unwrap_err().kind(), "IdMismatch");
        assert_eq!(
            join_predictions("image_id,label\na,symmetric\nb,symmetric\nc,symmetric\n", truth).unwrap_err().kind(),
            "IdMismatch"
        );
        let cm = join_predictions("id,label,votes\nb,symmetric,1\na,symmetric,2\n", truth).unwrap();
        assert_eq!(cm.cells(), &[vec![0, 0, 0], vec![0, 0, 0], vec![1, 0, 1]]);
    }
}
