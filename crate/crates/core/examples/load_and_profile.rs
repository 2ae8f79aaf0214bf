//! Load a CSV to see the inferred column types and one column's summary.
//!
//! ```sh
//! cargo run -p counterfact --example load_and_profile [path.csv] [column]
//! ```

use std::fs::File;

use counterfact::{column_distribution, Dataset, DistributionSummary};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/recidivism_synthetic.csv").into());
    let ds = Dataset::load_csv(File::open(&path)?, "profile")?;
    println!("{} rows, {} columns\n", ds.n_rows(), ds.columns().len());
    println!("{:<16} {:<18} {:>8} {:>8}", "column", "type", "distinct", "missing");
    for col in ds.columns() {
        println!(
            "{:<16} {:<18} {:>8} {:>8}",
            col.name(),
            format!("{:?}", col.kind()),
            col.distinct_count(),
            col.missing_count()
        );
    }

    let target = args.next().unwrap_or_else(|| "age".into());
    println!("\ndistribution of `{target}`");
    match column_distribution(&ds, &target, None)? {
        DistributionSummary::Categorical { categories, missing } => {
            for c in categories {
                println!("  {:<10} {:>5}  {:.3}", c.category, c.count, c.fraction);
            }
            println!("  missing    {missing:>5}");
        }
        DistributionSummary::Numerical { edges, counts, mean, missing, .. } => {
            let peak = counts.iter().copied().max().unwrap_or(1).max(1);
            for (i, count) in counts.iter().enumerate() {
                let bar = "#".repeat(count * 40 / peak);
                println!("  [{:>7.2}, {:>7.2}) {count:>5} {bar}", edges[i], edges[i + 1]);
            }
            if let Some(mean) = mean {
                println!("  mean {mean:.3}, missing {missing}");
            }
        }
    }
    Ok(())
}
