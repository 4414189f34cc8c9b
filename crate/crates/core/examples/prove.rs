//! Bounded proof search with a replayable trace.

use relmon::axioms::AxiomSet;
use relmon::prover::{prove, Budget};
use relmon::term::parse_equation;

pub fn run_example() -> relmon::Result<Vec<String>> {
    let goals = [
        ("(1 & x);(1 & y) = 1 & x & y", AxiomSet::Base),
        ("1 & x;y = 1 & y;x", AxiomSet::Integral),
        ("(1 & z);(x & y) = (1 & z);x & (1 & z);y", AxiomSet::Integral),
        ("1 & x;y = 1 & y;x", AxiomSet::Base),
    ];
    let mut lines = Vec::new();
    for (src, set) in goals {
        let out = prove(&parse_equation(src)?, set, &Budget::new(6, 20_000))?;
        lines.push(format!("{src}  [{set}]  {:?} after {} terms", out.status, out.stats.nodes));
        for step in &out.trace {
            lines.push(format!("    {} = {}   by {} ({:?})", step.from, step.to, step.axiom, step.direction));
        }
        if out.is_proved() {
            out.replay()?;
        }
    }
    Ok(lines)
}

fn main() -> relmon::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
