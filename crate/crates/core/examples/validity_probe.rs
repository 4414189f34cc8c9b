//! A law valid in all relation models whose derivation is not obvious:
//! `1 & x;y <= x;(1 & y;x);y`.

use relmon::axioms::AxiomSet;
use relmon::model::{search_lang_counterexample, search_rel_counterexample, LangSearchBounds, RelMode, RelSearchBounds};
use relmon::prover::{prove, Budget};
use relmon::term::parse_equation;

pub fn run_example() -> relmon::Result<Vec<String>> {
    let e = parse_equation("1 & x;y <= x;(1 & y;x);y")?;
    let rel = search_rel_counterexample(&e, RelMode::General, &RelSearchBounds::default());
    let lang = search_lang_counterexample(&e, &LangSearchBounds::default());
    let mut lines = vec![
        format!("relation models: {} counterexample, {:?}", if rel.found() { "a" } else { "no" }, rel.stats.spaces),
        format!("language models: {} counterexample", if lang.found() { "a" } else { "no" }),
    ];
    let out = prove(&e, AxiomSet::Integral, &Budget::new(10, 200_000))?;
    lines.push(format!("derivation from the integral axioms: {:?}", out.status));
    for s in &out.trace {
        lines.push(format!("    {} = {}   by {} ({:?})", s.from, s.to, s.axiom, s.direction));
    }
    Ok(lines)
}

fn main() -> relmon::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
