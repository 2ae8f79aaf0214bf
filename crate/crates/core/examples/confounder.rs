//! A filter that looks decisive when compared with everything it excludes
//! can look weak against similar excluded rows. Here a hidden variable `z`
//! drives both the filtered feature and the outcome; a second dataset
//! makes the feature a direct cause instead.

use counterfact::{analyze, Dataset, FilterStack, LoadOptions, Mode, SimilarityConfig, SubsetKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn generate(direct: bool, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["f", "y", "n1", "n2", "n3"];
    let mut cols: Vec<(String, Vec<Option<String>>)> = names.iter().map(|n| (n.to_string(), Vec::new())).collect();
    for _ in 0..2000 {
        let z = rng.random_bool(0.5);
        let (f, y) = if direct {
            let f = rng.random_bool(0.5);
            (f, f ^ rng.random_bool(0.05))
        } else {
            (z ^ rng.random_bool(0.3), z ^ rng.random_bool(0.05))
        };
        let cells = [f, y, z ^ rng.random_bool(0.1), z ^ rng.random_bool(0.2), z ^ rng.random_bool(0.25)];
        for (col, v) in cols.iter_mut().zip(cells) {
            col.1.push(Some(u8::from(v).to_string()));
        }
    }
    Dataset::from_columns("synthetic", cols, &LoadOptions::default()).expect("well-formed columns")
}

fn main() -> counterfact::Result<()> {
    let stack: FilterStack = ["f=1".parse()?].into_iter().collect();
    let cfg = SimilarityConfig::default();
    for (label, direct) in [("hidden cause", false), ("direct cause", true)] {
        let ds = generate(direct, 7);
        let cf = analyze(&ds, "y", Mode::Counterfactual, &cfg, &stack, None)?;
        let control = analyze(&ds, "y", Mode::Control, &cfg, &stack, None)?;
        let share = |snap: &counterfact::AnalysisSnapshot, kind| {
            snap.outcome_distribution
                .get(kind)
                .map(|o| o.summary.fractions().last().copied().unwrap_or(0.0))
                .unwrap_or(f64::NAN)
        };
        let report = cf.strength.as_ref().unwrap();
        println!("{label}");
        println!(
            "  P(y=1): IN {:.3}  CF {:.3}  EX {:.3}  everything excluded {:.3}",
            share(&cf, SubsetKind::In),
            share(&cf, SubsetKind::Cf),
            share(&cf, SubsetKind::Ex),
            share(&control, SubsetKind::ExControl)
        );
        println!("  d(IN, CF) = {:.4} -> {:?}\n", report.d, report.strength);
    }
    Ok(())
}
