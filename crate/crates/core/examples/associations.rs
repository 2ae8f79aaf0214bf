//! Rank features by their association with the outcome inside each subset.

use counterfact::partition;
use counterfact::stats::{association, sort_associations, SortOrder};
use counterfact::{Dataset, FilterStack, SimilarityConfig};

const CSV: &str = include_str!("data/recidivism_synthetic.csv");

fn main() -> counterfact::Result<()> {
    let ds = Dataset::load_csv(CSV.as_bytes(), "recidivism")?;
    let stack: FilterStack = ["sex=male".parse()?].into_iter().collect();
    let p = partition(&ds, &stack, &SimilarityConfig::default(), Some("two_year_recid"))?;

    for (label, rows) in [("IN", &p.in_rows), ("CF", &p.cf_rows), ("EX", &p.ex_rows)] {
        let mut records = ds
            .column_names()
            .filter(|c| *c != "two_year_recid")
            .map(|feature| association(&ds, feature, "two_year_recid", rows))
            .collect::<counterfact::Result<Vec<_>>>()?;
        sort_associations(&mut records, SortOrder::Desc, true);
        println!("{label} ({} rows)", rows.len());
        for r in records {
            println!("  {:<14} {:<13} {:+.4}", r.feature, format!("{:?}", r.method), r.value);
        }
    }
    Ok(())
}
