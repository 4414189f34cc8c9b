//! Parsing, normal forms and the join-free decomposition.

use relmon::term::{join_free_decompose, parse, parse_equation};

pub fn run_example() -> relmon::Result<Vec<String>> {
    let mut lines = Vec::new();
    for src in ["y & x & (x & y)", "1;x;(y;1);z", "0 & x + y", "x;(y + z) & w"] {
        let t = parse(src)?;
        lines.push(format!("{src:<18} => {t}  ({} ops)", t.op_count()));
    }
    let t = parse("(x + y);(1 & z)")?;
    let parts: Vec<String> = join_free_decompose(&t).iter().map(ToString::to_string).collect();
    lines.push(format!("{t} splits into {}", parts.join(" , ")));
    let e = parse_equation("x <= x + y")?;
    lines.push(format!("{e} desugars to {}", e.desugar()));
    Ok(lines)
}

fn main() -> relmon::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
