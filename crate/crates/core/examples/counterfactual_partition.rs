//! Split the rows a filter excludes into the counterfactual subset (the
//! excluded rows most similar to the included ones) and the rest.

use counterfact::{partition, Dataset, FilterStack, SimilarityConfig};

const CSV: &str = include_str!("data/recidivism_synthetic.csv");

fn main() -> counterfact::Result<()> {
    let ds = Dataset::load_csv(CSV.as_bytes(), "recidivism")?;
    let stack: FilterStack = ["age:18..25".parse()?].into_iter().collect();
    let cfg = SimilarityConfig::default();
    let p = partition(&ds, &stack, &cfg, Some("two_year_recid"))?;

    println!("similarity features: {}", p.features.join(", "));
    println!("IN {}  CF {}  EX {}", p.in_rows.len(), p.cf_rows.len(), p.ex_rows.len());

    let mut ranked: Vec<(usize, f64)> = p.mean_distance.iter().map(|(r, d)| (*r, *d)).collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
    let age = ds.column("age")?;
    println!("\nclosest excluded rows");
    for (row, d) in ranked.iter().take(5) {
        println!("  row {row:>3}  age {:>3}  mean distance {d:.4}", age.raw(*row).unwrap_or("?"));
    }
    println!("farthest excluded rows");
    for (row, d) in ranked.iter().rev().take(5) {
        println!("  row {row:>3}  age {:>3}  mean distance {d:.4}", age.raw(*row).unwrap_or("?"));
    }

    let wider = SimilarityConfig { cf_fraction: 0.25, ..cfg };
    let q = partition(&ds, &stack, &wider, Some("two_year_recid"))?;
    println!("\nwith cf_fraction 0.25: CF {}  EX {}", q.cf_rows.len(), q.ex_rows.len());
    Ok(())
}
