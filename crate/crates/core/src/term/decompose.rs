use super::Term;

/// Splits a term into join-free disjuncts by distributing meet and
/// composition over join.
///
/// The result is sorted and duplicate-free, contains neither `+` nor `0`,
/// and is empty exactly when the term is `0`.
pub fn join_free_decompose(t: &Term) -> Vec<Term> {
    let mut out = match t {
        Term::Zero => Vec::new(),
        Term::Ide | Term::Var(_) => vec![t.clone()],
        Term::Join(cs) => cs.iter().flat_map(join_free_decompose).collect(),
        Term::Meet(cs) => product(cs, Term::meet),
        Term::Comp(cs) => product(cs, Term::comp),
    };
    out.retain(|d| !d.is_zero());
    out.sort();
    out.dedup();
    out
}

fn product(args: &[Term], build: fn(Vec<Term>) -> Term) -> Vec<Term> {
    let parts: Vec<Vec<Term>> = args.iter().map(join_free_decompose).collect();
    if parts.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
    for choices in &parts {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    acc.into_iter().map(build).collect()
}

/// Sound syntactic test for being below `1`: `0`, `1`, or a meet with a
/// `1` argument.
pub fn is_subidentity_syntactic(t: &Term) -> bool {
    match t {
        Term::Zero | Term::Ide => true,
        Term::Meet(cs) => cs.contains(&Term::Ide),
        _ => false,
    }
}
