//! Acceptance criteria 1–12, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

use orlicz_cli::acceptance;

fn main() {
    let mut failed = Vec::new();
    for id in 1..=12u8 {
        let r = acceptance::run(id);
        println!("{r}");
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: 12/12 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
