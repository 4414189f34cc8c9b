//! Runs the quick self-check suites and prints a summary line for each.

use relmon::selftest::run_suite;

pub fn run_example() -> relmon::Result<Vec<String>> {
    let mut lines = Vec::new();
    for name in ["integrality-separation", "language-separation", "refutation", "oracle-agreement"] {
        let r = run_suite(name, 1)?;
        lines.push(format!("{name}: {} {}", if r.passed { "pass" } else { "FAIL" }, r.summary));
    }
    Ok(lines)
}

fn main() -> relmon::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
