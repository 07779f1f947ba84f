//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

use hurwitz_core::selftest::run_all;

fn main() {
    let results = run_all();
    let mut failed = 0;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {} ({:.2?})", r.id, r.title, r.elapsed);
        if !r.passed {
            failed += 1;
            for d in &r.details {
                println!("     {d}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
