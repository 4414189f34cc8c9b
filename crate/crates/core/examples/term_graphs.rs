//! Deciding join-free inequalities with term graphs.

use relmon::term::parse;
use relmon::termgraph::{build_term_graph, decide_leq, to_dot};

pub fn run_example() -> relmon::Result<Vec<String>> {
    let mut lines = Vec::new();
    for (a, b) in [("x & y", "x"), ("x;y", "x"), ("x;(y & z)", "x;y & x;z"), ("1 & x;y", "1 & y;x")] {
        let d = decide_leq(&parse(a)?, &parse(b)?)?;
        let evidence = match (&d.homomorphism, &d.countermodel) {
            (Some(h), _) => format!("homomorphism {:?}", h.map),
            (_, Some(c)) => format!("countermodel {}", serde_json::to_string(&c.model)?),
            _ => String::new(),
        };
        lines.push(format!("{a} <= {b}: {} {evidence}", if d.valid { "valid" } else { "invalid" }));
    }
    let g = build_term_graph(&parse("(1 & x);y & z")?)?;
    lines.extend(to_dot(&g).lines().map(String::from));
    Ok(lines)
}

fn main() -> relmon::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
