//! Rate single filters by how differently the outcome behaves in the
//! included rows and in their counterfactual counterparts.

use counterfact::{analyze, Dataset, FilterStack, Mode, SimilarityConfig};

const CSV: &str = include_str!("data/recidivism_synthetic.csv");

fn main() -> counterfact::Result<()> {
    let ds = Dataset::load_csv(CSV.as_bytes(), "recidivism")?;
    let cfg = SimilarityConfig::default();
    println!("{:<22} {:>7} {:<20} {:<9}", "filter", "d", "measure", "strength");
    for text in ["sex=female", "age:18..25", "priors_count:4..", "juv_count:1..", "charge_degree=F", "decile_score:6..10"] {
        let stack: FilterStack = [text.parse()?].into_iter().collect();
        let snapshot = analyze(&ds, "two_year_recid", Mode::Counterfactual, &cfg, &stack, None)?;
        let report = snapshot.strength.expect("counterfactual mode reports strength");
        println!(
            "{text:<22} {:>7.4} {:<20} {:<9}",
            report.d,
            format!("{:?}", report.measure),
            format!("{:?}", report.strength)
        );
    }

    // a numerical outcome switches the measure to the KS statistic
    let stack: FilterStack = ["sex=female".parse()?].into_iter().collect();
    let snapshot = analyze(&ds, "priors_count", Mode::Counterfactual, &cfg, &stack, None)?;
    let report = snapshot.strength.unwrap();
    println!("\noutcome priors_count, filter sex=female: d {:.4} ({:?}, {:?})", report.d, report.measure, report.strength);
    Ok(())
}
