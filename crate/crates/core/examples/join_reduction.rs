//! Inequalities with joins, reduced to join-free pairs.

use relmon::model::RelSearchBounds;
use relmon::prover::Budget;
use relmon::term::parse;
use relmon::termgraph::{decide_with_join_reduction, integral_oracle, term_graph_oracle};

pub fn run_example() -> relmon::Result<Vec<String>> {
    let mut lines = Vec::new();
    for (a, b) in [("x;(y + z)", "x;y + x;z"), ("x + y", "x"), ("(x + 1);(x + 1)", "1 + x + x;x")] {
        let r = decide_with_join_reduction(&parse(a)?, &parse(b)?, term_graph_oracle)?;
        lines.push(format!("{a} <= {b}: {:?}, matched {:?}", r.verdict, r.matched));
    }
    // Over integral relations the identity part of a composition commutes.
    let budget = Budget::new(4, 20_000);
    let bounds = RelSearchBounds { max_base: 3, random_samples: 200, ..Default::default() };
    let (a, b) = ("1 & x;y + 1 & z", "1 & y;x + z");
    let r = decide_with_join_reduction(&parse(a)?, &parse(b)?, integral_oracle(&budget, &bounds))?;
    lines.push(format!("{a} <= {b} over integral relations: {:?}", r.verdict));
    Ok(lines)
}

fn main() -> relmon::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
