//! Separation checking and fragment classification.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{
    atoms, extract_signature, free_vars, rename_apart, Formula, QuantifierPrefix, Quantifier, Sym,
};
use crate::transform::to_prenex;

/// Sentence classes recognised by [`classify`]. Labels are cumulative: a
/// sentence carries every class it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    Bs,
    Bsr,
    RelationalMonadic,
    RelationalMonadicEq,
    MonadicWithUnaryFns,
    Sf,
    SfExtendedUnaryFns,
    NotClassified,
}

impl Fragment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Fragment::Bs => "BS",
            Fragment::Bsr => "BSR",
            Fragment::RelationalMonadic => "RelationalMonadic",
            Fragment::RelationalMonadicEq => "RelationalMonadicEq",
            Fragment::MonadicWithUnaryFns => "MonadicWithUnaryFns",
            Fragment::Sf => "SF",
            Fragment::SfExtendedUnaryFns => "SFExtendedUnaryFns",
            Fragment::NotClassified => "NotClassified",
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentLabel {
    pub labels: BTreeSet<Fragment>,
    pub has_equality: bool,
    pub has_nonconstant_functions: bool,
}

impl FragmentLabel {
    pub fn contains(&self, fragment: Fragment) -> bool {
        self.labels.contains(&fragment)
    }

    pub fn is_sf(&self) -> bool {
        self.contains(Fragment::Sf)
    }
}

fn atom_vars(atom: &Formula) -> BTreeSet<Sym> {
    match atom {
        Formula::Atom(_, args) => {
            let mut out = BTreeSet::new();
            for t in args {
                out.extend(t.vars());
            }
            out
        }
        Formula::Equal(l, r) => {
            let mut out = l.vars();
            out.extend(r.vars());
            out
        }
        _ => BTreeSet::new(),
    }
}

/// True iff every atom of `phi` (equality included) avoids `x_set` or avoids
/// `y_set`.
pub fn are_separated(
    phi: &Formula,
    x_set: &BTreeSet<Sym>,
    y_set: &BTreeSet<Sym>,
) -> Result<bool> {
    if let Some(shared) = x_set.intersection(y_set).next() {
        return Err(Error::Overlap {
            variable: shared.clone(),
        });
    }
    for atom in atoms(phi) {
        let vars = atom_vars(&atom);
        if vars.iter().any(|v| x_set.contains(v)) && vars.iter().any(|v| y_set.contains(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Strips a prenex formula into its quantifier block prefix and matrix.
pub fn prefix_blocks(phi: &Formula) -> Result<(QuantifierPrefix, Formula)> {
    let mut raw: Vec<(Quantifier, Vec<Sym>)> = Vec::new();
    let mut body = phi;
    loop {
        match body {
            Formula::Forall(v, inner) => {
                raw.push((Quantifier::Forall, vec![v.clone()]));
                body = inner;
            }
            Formula::Exists(v, inner) => {
                raw.push((Quantifier::Exists, vec![v.clone()]));
                body = inner;
            }
            _ => break,
        }
    }
    if !body.is_quantifier_free() {
        return Err(Error::NotPrenex);
    }
    Ok((QuantifierPrefix::normalized(raw), body.clone()))
}

/// Splits a prenex prefix into the leading existential block and the
/// universal/existential variable pools of the alternating remainder.
pub(crate) fn split_prefix(
    prefix: &QuantifierPrefix,
) -> (Vec<Sym>, BTreeSet<Sym>, BTreeSet<Sym>) {
    let mut leading = Vec::new();
    let mut universals = BTreeSet::new();
    let mut existentials = BTreeSet::new();
    for (i, (q, vars)) in prefix.blocks.iter().enumerate() {
        match q {
            Quantifier::Exists if i == 0 => leading.extend(vars.iter().cloned()),
            Quantifier::Exists => existentials.extend(vars.iter().cloned()),
            Quantifier::Forall => universals.extend(vars.iter().cloned()),
        }
    }
    (leading, universals, existentials)
}

fn function_occurrences_monadic_only(phi: &Formula) -> bool {
    // every non-constant function application must sit inside an atom with a
    // unary predicate
    fn term_has_fn(t: &crate::syntax::Term) -> bool {
        match t {
            crate::syntax::Term::Var(_) | crate::syntax::Term::Const(_) => false,
            crate::syntax::Term::App(_, args) => !args.is_empty() || args.iter().any(term_has_fn),
        }
    }
    for atom in atoms(phi) {
        match &atom {
            Formula::Atom(_, args) => {
                let has_fn = args.iter().any(term_has_fn);
                if has_fn && args.len() != 1 {
                    return false;
                }
            }
            Formula::Equal(l, r) => {
                if term_has_fn(l) || term_has_fn(r) {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

/// Classifies a sentence against the recognised fragments. The sentence is
/// renamed apart and prenexed with the deterministic pull order first, so
/// labels are reproducible.
pub fn classify(phi: &Formula) -> Result<FragmentLabel> {
    let fv = free_vars(phi);
    if !fv.is_empty() {
        return Err(Error::NonSentence(fv.into_iter().collect()));
    }
    let prenex = to_prenex(phi);
    let (prefix, matrix) = prefix_blocks(&prenex)?;

    let signature = extract_signature(&prenex)?;
    let has_equality = atoms(&prenex)
        .iter()
        .any(|a| matches!(a, Formula::Equal(..)));
    let has_fns = signature.has_nonconstant_functions();
    let monadic_preds = signature.predicates.values().all(|&a| a <= 1);
    let fns_all_unary = signature.functions.values().all(|&a| a == 1);

    let (_, universals, existentials) = split_prefix(&prefix);
    let separated = are_separated(&matrix, &universals, &existentials)?;

    let bsr_prefix = {
        let qs: Vec<Quantifier> = prefix.blocks.iter().map(|(q, _)| *q).collect();
        matches!(
            qs.as_slice(),
            [] | [Quantifier::Exists]
                | [Quantifier::Forall]
                | [Quantifier::Exists, Quantifier::Forall]
        )
    };

    let mut labels = BTreeSet::new();
    if monadic_preds && !has_fns {
        labels.insert(Fragment::RelationalMonadicEq);
        if !has_equality {
            labels.insert(Fragment::RelationalMonadic);
        }
    }
    if monadic_preds && fns_all_unary && !has_equality {
        labels.insert(Fragment::MonadicWithUnaryFns);
    }
    if bsr_prefix && !has_fns {
        labels.insert(Fragment::Bsr);
        if !has_equality {
            labels.insert(Fragment::Bs);
        }
    }
    if !has_fns && separated {
        labels.insert(Fragment::Sf);
    }
    // BSR and equality-free relational monadic sentences are separated
    if labels.contains(&Fragment::Bsr) || labels.contains(&Fragment::RelationalMonadic) {
        labels.insert(Fragment::Sf);
    }
    if fns_all_unary
        && separated
        && function_occurrences_monadic_only(&matrix)
    {
        labels.insert(Fragment::SfExtendedUnaryFns);
    }
    if labels.contains(&Fragment::Sf) {
        labels.insert(Fragment::SfExtendedUnaryFns);
    }
    if labels.is_empty() {
        labels.insert(Fragment::NotClassified);
    }

    Ok(FragmentLabel {
        labels,
        has_equality,
        has_nonconstant_functions: has_fns,
    })
}

/// Convenience: classification applied after renaming apart, used by tests
/// for the invariance property.
pub fn classify_renamed(phi: &Formula) -> Result<FragmentLabel> {
    classify(&rename_apart(phi, &BTreeSet::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::parse_formula;

    fn set(names: &[&str]) -> BTreeSet<Sym> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn separation_examples() {
        let phi = parse_formula("p(X) <=> q(Y)").unwrap();
        assert!(are_separated(&phi, &set(&["x"]), &set(&["y"])).unwrap());

        let mixed = parse_formula("r(X, Y)").unwrap();
        assert!(!are_separated(&mixed, &set(&["x"]), &set(&["y"])).unwrap());

        let eq = parse_formula("X = Y").unwrap();
        assert!(!are_separated(&eq, &set(&["x"]), &set(&["y"])).unwrap());
    }

    #[test]
    fn separation_overlap_error() {
        let phi = parse_formula("p(X)").unwrap();
        assert!(matches!(
            are_separated(&phi, &set(&["x"]), &set(&["x", "y"])),
            Err(Error::Overlap { .. })
        ));
    }

    #[test]
    fn separation_monotone_under_shrinking() {
        let phi = parse_formula("(p(X) | q(Y)) & r(U, V)").unwrap();
        let x = set(&["x", "u"]);
        let y = set(&["y", "w"]);
        if are_separated(&phi, &x, &y).unwrap() {
            for xs in [set(&["x"]), set(&["u"]), BTreeSet::new()] {
                for ys in [set(&["y"]), set(&["w"]), BTreeSet::new()] {
                    assert!(are_separated(&phi, &xs, &ys).unwrap());
                }
            }
        }
    }

    #[test]
    fn prefix_blocks_examples() {
        let phi = parse_formula("![X, U]: ?[Y]: (p(X) | q(U) | r(Y))").unwrap();
        let (prefix, matrix) = prefix_blocks(&phi).unwrap();
        assert_eq!(
            prefix.blocks,
            vec![
                (Quantifier::Forall, vec!["x".to_string(), "u".to_string()]),
                (Quantifier::Exists, vec!["y".to_string()]),
            ]
        );
        assert!(matrix.is_quantifier_free());

        let qf = parse_formula("p(c) & q(d)").unwrap();
        let (prefix, matrix) = prefix_blocks(&qf).unwrap();
        assert!(prefix.is_empty());
        assert_eq!(matrix, qf);

        let ezy = parse_formula("?[Z]: ![X]: ?[Y]: (p(Z) | q(X) | r(Y))").unwrap();
        let (prefix, _) = prefix_blocks(&ezy).unwrap();
        assert_eq!(prefix.blocks.len(), 3);

        let not_prenex = parse_formula("(![X]: p(X)) & q(c)").unwrap();
        assert!(matches!(prefix_blocks(&not_prenex), Err(Error::NotPrenex)));
    }

    #[test]
    fn classify_bsr_sentence() {
        let phi = parse_formula("?[Z1, Z2]: ![X]: (r(Z1, X) | r(Z2, X))").unwrap();
        let label = classify(&phi).unwrap();
        assert!(label.contains(Fragment::Bsr));
        assert!(label.contains(Fragment::Sf));
    }

    #[test]
    fn classify_monadic_sentence() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        let label = classify(&phi).unwrap();
        assert!(label.contains(Fragment::RelationalMonadic));
        assert!(label.contains(Fragment::Sf));
        assert!(!label.has_equality);
    }

    #[test]
    fn classify_mixed_atom_is_not_sf() {
        let phi = parse_formula("![X]: ?[Y]: r(X, Y)").unwrap();
        let label = classify(&phi).unwrap();
        assert!(!label.is_sf());
        assert!(label.contains(Fragment::NotClassified));
    }

    #[test]
    fn classify_rejects_open_formulas() {
        let phi = parse_formula("p(X)").unwrap();
        assert!(matches!(classify(&phi), Err(Error::NonSentence(..))));
    }

    #[test]
    fn classify_extended_unary_functions() {
        let phi = parse_formula("![X]: p(f(X))").unwrap();
        let label = classify(&phi).unwrap();
        assert!(label.contains(Fragment::SfExtendedUnaryFns));
        assert!(!label.is_sf());
        assert!(label.has_nonconstant_functions);

        let bad = parse_formula("![X]: s(f(X), X)").unwrap();
        let label = classify(&bad).unwrap();
        assert!(!label.contains(Fragment::SfExtendedUnaryFns));
    }

    #[test]
    fn classify_separated_equality_counts_as_sf() {
        // equations over the leading existential block do not break separation
        let phi = parse_formula("?[Z1, Z2]: ![X]: ?[Y]: (Z1 != Z2 & (p(X) <=> q(Y)))").unwrap();
        let label = classify(&phi).unwrap();
        assert!(label.is_sf());
        assert!(label.has_equality);

        let broken = parse_formula("![X]: ?[Y]: X = Y").unwrap();
        let label = classify(&broken).unwrap();
        assert!(!label.is_sf());
    }
}
