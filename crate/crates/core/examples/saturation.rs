//! Building an integral countermodel step by step.

use relmon::saturation::{check_invariants, refute, SatBudget, SatGraph};
use relmon::term::parse;

pub fn run_example() -> relmon::Result<Vec<String>> {
    let budget = SatBudget::default();
    let mut lines = Vec::new();
    let mut g = SatGraph::init(&parse("x;(y & z) & u;v")?, &budget)?;
    while g.pending() > 0 {
        g.run(1)?;
        let r = check_invariants(&g);
        let unknown = r.conditions().iter().filter(|(_, s)| !matches!(s, relmon::saturation::Status::Holds)).count();
        lines.push(format!("step {}: {} nodes, {} edges, violations {:?}, open {unknown}", r.step, r.nodes, r.edges, r.violations()));
    }
    lines.extend(g.to_dot().lines().map(String::from));
    for (a, b) in [("x;y", "y;x"), ("x;(y & z)", "x;y;z"), ("x", "x")] {
        let r = refute(&parse(a)?, &parse(b)?, 10, &budget)?;
        let found = match &r.report {
            Some(rep) => format!("refuted by {}", serde_json::to_string(&rep.model)?),
            None => "no refutation".to_string(),
        };
        lines.push(format!("{a} <= {b}: {found}"));
    }
    Ok(lines)
}

fn main() -> relmon::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
