//! Parse filter constraints from text and count the rows a stack matches.

use counterfact::{included_mask, Dataset, FilterConstraint, FilterStack};

const CSV: &str = include_str!("data/recidivism_synthetic.csv");

fn main() -> counterfact::Result<()> {
    let ds = Dataset::load_csv(CSV.as_bytes(), "recidivism")?;

    let mut stack = FilterStack::new();
    for text in ["sex=female", "age:18..30", "charge_degree=F|M"] {
        let constraint: FilterConstraint = text.parse()?;
        constraint.validate(&ds)?;
        stack.push(constraint);
        let rows = included_mask(&ds, &stack)?;
        println!("{:<40} {:>4} of {} rows match", stack_text(&stack), rows.len(), ds.n_rows());
    }

    // pushing a constraint on a column already in the stack replaces it
    stack.push("age:31..".parse()?);
    println!("{:<40} {:>4} rows", stack_text(&stack), included_mask(&ds, &stack)?.len());

    stack.remove("sex")?;
    println!("{:<40} {:>4} rows", stack_text(&stack), included_mask(&ds, &stack)?.len());

    for bad in ["age 1..2", "age:9..3", "sex="] {
        match bad.parse::<FilterConstraint>() {
            Ok(c) => println!("`{bad}` parsed as {c}"),
            Err(e) => println!("`{bad}` rejected: {e}"),
        }
    }
    let unknown: FilterConstraint = "sex=other".parse()?;
    println!("`sex=other` on this data: {}", unknown.validate(&ds).unwrap_err());
    Ok(())
}

fn stack_text(stack: &FilterStack) -> String {
    stack.iter().map(ToString::to_string).collect::<Vec<_>>().join(" & ")
}
