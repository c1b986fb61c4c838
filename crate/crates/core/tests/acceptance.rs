//! Runs every acceptance criterion and prints one line per criterion.
//! Exits nonzero if any criterion fails.

mod common;

use std::time::Instant;

use common::Outcome;

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 dichotomy reproduction", common::criterion_dichotomy),
        ("2 prolongation dimensions", common::criterion_dimensions),
        ("3 metric construction", common::criterion_metric),
        ("4 derivation suite", common::criterion_derivations),
        ("5 prolongation properties", common::criterion_prolongation),
        ("6 structure suite", common::criterion_structure),
        ("7 central injectivity", common::criterion_central_injectivity),
        ("8 negative control", common::criterion_negative_control),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name:<28} {elapsed:>9.2?}  {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name:<28} {elapsed:>9.2?}  {reason}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
