//! Finite counterexamples: which model class separates which law.

use relmon::model::{
    search_lang_counterexample, search_rel_counterexample, LangSearchBounds, RelMode, RelSearchBounds,
};
use relmon::term::parse_equation;

pub fn run_example() -> relmon::Result<Vec<String>> {
    let rel = RelSearchBounds { max_base: 3, ..Default::default() };
    let lang = LangSearchBounds::default();
    let mut lines = Vec::new();
    for src in ["1 & x;y = 1 & y;x", "x;y & 1 = (x & 1);(y & 1)", "x;y = y;x"] {
        let e = parse_equation(src)?;
        lines.push(src.to_string());
        for mode in [RelMode::General, RelMode::Integral, RelMode::Commutative] {
            let out = search_rel_counterexample(&e, mode, &rel);
            let found = match &out.report {
                Some(r) => format!("refuted by {}", serde_json::to_string(&r.model)?),
                None => "no counterexample".to_string(),
            };
            lines.push(format!("  {mode:?}: {found}"));
        }
        let out = search_lang_counterexample(&e, &lang);
        let found = match &out.report {
            Some(r) => format!("refuted by {}", serde_json::to_string(&r.model)?),
            None => "no counterexample".to_string(),
        };
        lines.push(format!("  languages: {found}"));
    }
    Ok(lines)
}

fn main() -> relmon::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
