//! Drive an analysis session, then rebuild the same state from its saved
//! event log.

use std::sync::Arc;

use counterfact::{to_canonical_json, Dataset, Error, Mode, Session, SessionLog, SimilarityConfig};

const CSV: &str = include_str!("data/recidivism_synthetic.csv");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = Arc::new(Dataset::load_csv(CSV.as_bytes(), "recidivism")?);
    let mut session = Session::create(ds.clone(), "two_year_recid", Mode::Counterfactual, SimilarityConfig::default())?;

    for text in ["sex=female", "age:18..35", "age:18..25"] {
        let snap = session.push_filter(text.parse()?)?;
        let s = snap.strength.as_ref().unwrap();
        println!("push {text:<12} -> d {:.4} {:?}", s.d, s.strength);
    }
    match session.push_filter("two_year_recid=1".parse()?) {
        Err(Error::OutcomeConstraint(col)) => println!("push on `{col}` refused: it is the outcome"),
        other => println!("unexpected: {other:?}"),
    }
    match session.push_filter("age:90..99".parse()?) {
        Err(e) => println!("push age:90..99 refused: {e}"),
        Ok(_) => unreachable!(),
    }
    let snap = session.pop_filter("sex")?;
    println!("pop sex -> filters {:?}", snap.filters.iter().map(ToString::to_string).collect::<Vec<_>>());

    let log_json = serde_json::to_string_pretty(&session.log("recidivism_synthetic"))?;
    println!("\n{log_json}\n");

    let log: SessionLog = serde_json::from_str(&log_json)?;
    let replayed = Session::replay(ds, &log)?;
    let same = to_canonical_json(&replayed.snapshot(None)?)? == to_canonical_json(&session.snapshot(None)?)?;
    println!("replayed snapshot identical: {same}");
    Ok(())
}
