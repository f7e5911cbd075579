//! Satisfiability-preserving translations: elimination of unary function
//! symbols, two equality encodings, and export of single-block separated
//! sentences to function-free clause sets for EPR reasoning.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use crate::bounds::{binom_central, decompose_sf};
use crate::error::{Error, Result};
use crate::syntax::{
    all_symbols, all_vars, atoms, consts, extract_signature, free_vars, fresh_name, substitute,
    Formula, Quantifier, Signature, Sym, Term,
};
use crate::transform::{matrix_to_nf, NfKind, DEFAULT_NODE_CAP};

// ---------------------------------------------------------------------------
// clause sets

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseOrigin {
    Matrix,
    Guard,
    DomainAxiom,
    Congruence,
}

impl ClauseOrigin {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClauseOrigin::Matrix => "matrix",
            ClauseOrigin::Guard => "guard",
            ClauseOrigin::DomainAxiom => "domain",
            ClauseOrigin::Congruence => "congruence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub literals: Vec<Formula>,
    pub origin: ClauseOrigin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSet {
    pub clauses: Vec<Clause>,
    pub signature: Signature,
}

impl ClauseSet {
    /// The universal closure of the clause conjunction.
    pub fn to_formula(&self) -> Formula {
        let mut vars: BTreeSet<Sym> = BTreeSet::new();
        let conjuncts: Vec<Formula> = self
            .clauses
            .iter()
            .map(|c| {
                for lit in &c.literals {
                    vars.extend(free_vars(lit));
                }
                Formula::or_all(c.literals.clone())
            })
            .collect();
        let vars: Vec<Sym> = vars.into_iter().collect();
        Formula::quantify(Quantifier::Forall, &vars, Formula::and_all(conjuncts))
    }

    /// TPTP `cnf` lines, one per clause, with per-origin counters in the
    /// clause names.
    pub fn print_tptp(&self) -> String {
        let mut counters: BTreeMap<&'static str, usize> = BTreeMap::new();
        let mut out = String::new();
        for clause in &self.clauses {
            let tag = clause.origin.as_str();
            let n = counters.entry(tag).or_insert(0);
            *n += 1;
            let body = if clause.literals.is_empty() {
                "$false".to_string()
            } else {
                clause
                    .literals
                    .iter()
                    .map(crate::tptp::print_tptp)
                    .collect::<Vec<_>>()
                    .join(" | ")
            };
            out.push_str(&format!("cnf({tag}_{n}, axiom, ({body})).\n"));
        }
        out
    }

    fn push(&mut self, literals: Vec<Formula>, origin: ClauseOrigin) {
        // drop tautological clauses and duplicates under literal-set equality
        let mut set: Vec<Formula> = literals;
        set.dedup();
        for lit in &set {
            let complement = match lit {
                Formula::Not(inner) => (**inner).clone(),
                other => Formula::not(other.clone()),
            };
            if set.contains(&complement) {
                return;
            }
        }
        let as_set: BTreeSet<Formula> = set.iter().cloned().collect();
        if self.clauses.iter().any(|c| {
            c.literals.len() == set.len()
                && c.literals.iter().cloned().collect::<BTreeSet<_>>() == as_set
        }) {
            return;
        }
        self.clauses.push(Clause {
            literals: set,
            origin,
        });
    }
}

// ---------------------------------------------------------------------------
// unary function elimination

fn term_has_application(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => false,
        Term::App(_, args) => !args.is_empty() || args.iter().any(term_has_application),
    }
}

/// Replaces unary function symbols that occur only inside monadic atoms by
/// fresh predicates plus one existential witness per function symbol.
pub fn eliminate_unary_functions(phi: &Formula) -> Result<Formula> {
    let fv = free_vars(phi);
    if !fv.is_empty() {
        return Err(Error::NonSentence(fv.into_iter().collect()));
    }
    let sig = extract_signature(phi)?;
    if !sig.has_nonconstant_functions() {
        return Ok(phi.clone());
    }
    for (f, &arity) in &sig.functions {
        if arity != 1 {
            return Err(Error::IneligibleOccurrence {
                function: f.clone(),
            });
        }
    }
    // every application must be the immediate argument of a unary predicate
    for atom in atoms(phi) {
        match &atom {
            Formula::Atom(_, args) if args.len() == 1 => {}
            Formula::Atom(_, args) => {
                for t in args {
                    if term_has_application(t) {
                        let name = match t {
                            Term::App(f, _) => f.clone(),
                            _ => String::new(),
                        };
                        return Err(Error::IneligibleOccurrence { function: name });
                    }
                }
            }
            Formula::Equal(l, r) => {
                for t in [l, r] {
                    if term_has_application(t) {
                        let name = match t {
                            Term::App(f, _) => f.clone(),
                            _ => String::new(),
                        };
                        return Err(Error::IneligibleOccurrence { function: name });
                    }
                }
            }
            _ => {}
        }
    }

    let mut used: BTreeSet<Sym> = all_vars(phi);
    used.extend(all_symbols(phi));

    // repeatedly rewrite P(f(t)) to R(t) for a fresh R per (P, f) pair
    fn rewrite(
        phi: &Formula,
        pred: &str,
        function: &str,
        replacement: &str,
    ) -> Formula {
        match phi {
            Formula::Atom(p, args) if p == pred && args.len() == 1 => {
                if let Term::App(f, inner) = &args[0] {
                    if f == function {
                        return Formula::Atom(replacement.to_string(), inner.clone());
                    }
                }
                phi.clone()
            }
            Formula::Atom(..) | Formula::Equal(..) | Formula::Truth | Formula::Falsity => {
                phi.clone()
            }
            Formula::Not(a) => Formula::not(rewrite(a, pred, function, replacement)),
            Formula::And(a, b) => Formula::and(
                rewrite(a, pred, function, replacement),
                rewrite(b, pred, function, replacement),
            ),
            Formula::Or(a, b) => Formula::or(
                rewrite(a, pred, function, replacement),
                rewrite(b, pred, function, replacement),
            ),
            Formula::Implies(a, b) => Formula::implies(
                rewrite(a, pred, function, replacement),
                rewrite(b, pred, function, replacement),
            ),
            Formula::Iff(a, b) => Formula::iff(
                rewrite(a, pred, function, replacement),
                rewrite(b, pred, function, replacement),
            ),
            Formula::Forall(v, a) => {
                Formula::forall(v.clone(), rewrite(a, pred, function, replacement))
            }
            Formula::Exists(v, a) => {
                Formula::exists(v.clone(), rewrite(a, pred, function, replacement))
            }
        }
    }

    fn find_target(phi: &Formula) -> Option<(Sym, Sym)> {
        atoms(phi).into_iter().find_map(|a| match a {
            Formula::Atom(p, args) if args.len() == 1 => match &args[0] {
                Term::App(f, _) => Some((p, f.clone())),
                _ => None,
            },
            _ => None,
        })
    }

    let mut psi = phi.clone();
    // function order of first elimination, with the predicates paired to it
    let mut fn_order: Vec<Sym> = Vec::new();
    let mut pairs: BTreeMap<Sym, Vec<(Sym, Sym)>> = BTreeMap::new();
    let mut table: BTreeMap<(Sym, Sym), Sym> = BTreeMap::new();
    while let Some((p, f)) = find_target(&psi) {
        let r = table
            .entry((p.clone(), f.clone()))
            .or_insert_with(|| {
                let name = fresh_name("r", &mut used);
                if !fn_order.contains(&f) {
                    fn_order.push(f.clone());
                }
                pairs.entry(f.clone()).or_default().push((p.clone(), name.clone()));
                name
            })
            .clone();
        psi = rewrite(&psi, &p, &f, &r);
    }

    // revert the functions as one existential witness per symbol
    let x = fresh_name("x", &mut used);
    let mut witnesses = Vec::with_capacity(fn_order.len());
    let mut conjuncts = Vec::new();
    for f in &fn_order {
        let y = fresh_name("y", &mut used);
        for (p, r) in &pairs[f] {
            conjuncts.push(Formula::iff(
                Formula::atom(p.clone(), vec![Term::var(y.clone())]),
                Formula::atom(r.clone(), vec![Term::var(x.clone())]),
            ));
        }
        witnesses.push(y);
    }
    let axiom = Formula::forall(
        x,
        Formula::quantify(Quantifier::Exists, &witnesses, Formula::and_all(conjuncts)),
    );
    Ok(Formula::and(psi, axiom))
}

// ---------------------------------------------------------------------------
// equality elimination

fn ceil_log2(k: u64) -> u32 {
    if k <= 1 {
        0
    } else {
        64 - (k - 1).leading_zeros()
    }
}

fn count_quantifiers(phi: &Formula) -> usize {
    match phi {
        Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + count_quantifiers(a),
        Formula::Not(a) => count_quantifiers(a),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b) => count_quantifiers(a) + count_quantifiers(b),
        _ => 0,
    }
}

fn has_equality(phi: &Formula) -> bool {
    atoms(phi).iter().any(|a| matches!(a, Formula::Equal(..)))
}

fn replace_equations(phi: &Formula, psi_eq: &dyn Fn(&Term, &Term) -> Formula) -> Formula {
    match phi {
        Formula::Equal(l, r) => psi_eq(l, r),
        Formula::Atom(..) | Formula::Truth | Formula::Falsity => phi.clone(),
        Formula::Not(a) => Formula::not(replace_equations(a, psi_eq)),
        Formula::And(a, b) => Formula::and(
            replace_equations(a, psi_eq),
            replace_equations(b, psi_eq),
        ),
        Formula::Or(a, b) => Formula::or(
            replace_equations(a, psi_eq),
            replace_equations(b, psi_eq),
        ),
        Formula::Implies(a, b) => Formula::implies(
            replace_equations(a, psi_eq),
            replace_equations(b, psi_eq),
        ),
        Formula::Iff(a, b) => Formula::iff(
            replace_equations(a, psi_eq),
            replace_equations(b, psi_eq),
        ),
        Formula::Forall(v, a) => Formula::forall(v.clone(), replace_equations(a, psi_eq)),
        Formula::Exists(v, a) => Formula::exists(v.clone(), replace_equations(a, psi_eq)),
    }
}

/// Equality elimination for relational monadic sentences: each equation
/// `s = t` becomes agreement on every occurring unary predicate plus
/// `ceil(log2 k)` fresh ones, with `k` counting quantifier occurrences and
/// constants.
pub fn eliminate_equality_monadic(phi: &Formula) -> Result<Formula> {
    let sig = extract_signature(phi)?;
    if sig.has_nonconstant_functions() {
        return Err(Error::NotRelationalMonadic(
            "non-constant function symbols present".into(),
        ));
    }
    if sig.predicates.values().any(|&a| a > 1) {
        return Err(Error::NotRelationalMonadic(
            "predicate of arity above one present".into(),
        ));
    }
    if !has_equality(phi) {
        return Ok(phi.clone());
    }

    let k = (count_quantifiers(phi) + consts(phi).len()) as u64;
    let kappa = ceil_log2(k);
    let unary_preds: Vec<Sym> = sig
        .predicates
        .iter()
        .filter(|(_, &a)| a == 1)
        .map(|(p, _)| p.clone())
        .collect();

    let mut used: BTreeSet<Sym> = all_vars(phi);
    used.extend(all_symbols(phi));
    let fresh_preds: Vec<Sym> = (0..kappa).map(|_| fresh_name("q", &mut used)).collect();

    let mut agreement_preds = unary_preds;
    agreement_preds.extend(fresh_preds);
    let psi_eq = move |s: &Term, t: &Term| {
        let parts: Vec<Formula> = agreement_preds
            .iter()
            .map(|p| {
                Formula::iff(
                    Formula::atom(p.clone(), vec![s.clone()]),
                    Formula::atom(p.clone(), vec![t.clone()]),
                )
            })
            .collect();
        Formula::and_all(parts)
    };
    Ok(replace_equations(phi, &psi_eq))
}

/// Equality elimination over a known finite-model bound `k`: equations
/// become agreement on `ceil(log2 k)` fresh unary predicates and congruence
/// axioms for every predicate and function position are conjoined.
pub fn eliminate_equality_bounded(phi: &Formula, k: u64) -> Result<Formula> {
    let sig = extract_signature(phi)?;
    let kappa = ceil_log2(k.max(1));

    let mut used: BTreeSet<Sym> = all_vars(phi);
    used.extend(all_symbols(phi));
    let fresh_preds: Vec<Sym> = (0..kappa).map(|_| fresh_name("q", &mut used)).collect();

    let psi_eq = {
        let fresh_preds = fresh_preds.clone();
        move |s: &Term, t: &Term| {
            let parts: Vec<Formula> = fresh_preds
                .iter()
                .map(|p| {
                    Formula::iff(
                        Formula::atom(p.clone(), vec![s.clone()]),
                        Formula::atom(p.clone(), vec![t.clone()]),
                    )
                })
                .collect();
            Formula::and_all(parts)
        }
    };

    let mut out = replace_equations(phi, &psi_eq);

    let xv = fresh_name("x", &mut used);
    let yv = fresh_name("y", &mut used);
    let premise = psi_eq(&Term::var(xv.clone()), &Term::var(yv.clone()));

    // one congruence instance per predicate symbol and argument position
    if !sig.predicates.is_empty() {
        let mut instances = Vec::new();
        for (p, &arity) in &sig.predicates {
            for i in 0..arity {
                let before: Vec<Sym> = (0..i).map(|_| fresh_name("u", &mut used)).collect();
                let after: Vec<Sym> =
                    (0..arity - i - 1).map(|_| fresh_name("u", &mut used)).collect();
                let args_with = |mid: &Sym| -> Vec<Term> {
                    before
                        .iter()
                        .map(|v| Term::var(v.clone()))
                        .chain(std::iter::once(Term::var(mid.clone())))
                        .chain(after.iter().map(|v| Term::var(v.clone())))
                        .collect()
                };
                let mut inst = Formula::implies(
                    Formula::atom(p.clone(), args_with(&xv)),
                    Formula::atom(p.clone(), args_with(&yv)),
                );
                let mut quantified: Vec<Sym> = before.clone();
                quantified.extend(after.clone());
                inst = Formula::quantify(Quantifier::Forall, &quantified, inst);
                instances.push(inst);
            }
        }
        let psi_pred = Formula::forall(
            xv.clone(),
            Formula::forall(
                yv.clone(),
                Formula::implies(premise.clone(), Formula::and_all(instances)),
            ),
        );
        out = Formula::and(out, psi_pred);
    }

    if !sig.functions.is_empty() {
        let mut instances = Vec::new();
        for (f, &arity) in &sig.functions {
            for i in 0..arity {
                let before: Vec<Sym> = (0..i).map(|_| fresh_name("v", &mut used)).collect();
                let after: Vec<Sym> =
                    (0..arity - i - 1).map(|_| fresh_name("v", &mut used)).collect();
                let term_with = |mid: &Sym| -> Term {
                    Term::app(
                        f.clone(),
                        before
                            .iter()
                            .map(|v| Term::var(v.clone()))
                            .chain(std::iter::once(Term::var(mid.clone())))
                            .chain(after.iter().map(|v| Term::var(v.clone())))
                            .collect(),
                    )
                };
                let mut inst = psi_eq(&term_with(&xv), &term_with(&yv));
                let mut quantified: Vec<Sym> = before.clone();
                quantified.extend(after.clone());
                inst = Formula::quantify(Quantifier::Forall, &quantified, inst);
                instances.push(inst);
            }
        }
        let psi_func = Formula::forall(
            xv,
            Formula::forall(
                yv,
                Formula::implies(premise, Formula::and_all(instances)),
            ),
        );
        out = Formula::and(out, psi_func);
    }

    Ok(out)
}

// ---------------------------------------------------------------------------
// BS(R) clause export

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsrEncoding {
    SkolemFn,
    Relational,
}

/// Exports a single-block separated sentence as a clause set of the BS(R)
/// fragment. The Skolem-function encoding keeps `f_i(x)` terms and equality
/// in the finite-domain axiom; the relational encoding replaces them by
/// guard predicates `R_i` and is function-free.
pub fn to_bsr_clauses(phi: &Formula, encoding: BsrEncoding) -> Result<ClauseSet> {
    to_bsr_clauses_capped(phi, encoding, DEFAULT_NODE_CAP)
}

pub fn to_bsr_clauses_capped(
    phi: &Formula,
    encoding: BsrEncoding,
    cap: usize,
) -> Result<ClauseSet> {
    let mut parts = decompose_sf(phi)?;
    if parts.pairs.len() > 1 {
        return Err(Error::NotSf(
            "expected a single universal/existential alternation".into(),
        ));
    }
    let (x, y) = parts
        .pairs
        .first()
        .cloned()
        .unwrap_or((Vec::new(), Vec::new()));

    let cnf = matrix_to_nf(&parts.matrix, NfKind::Cnf, &x, &y, &[])?;
    let dnf = matrix_to_nf(&parts.matrix, NfKind::Dnf, &x, &y, &[])?;
    let kappa = binom_central(cnf.count() as u64);
    let m_star = if kappa > BigUint::from(dnf.count() as u64) {
        dnf.count()
    } else {
        kappa.to_u64_digits().first().copied().unwrap_or(0) as usize
    };

    let mut out = ClauseSet {
        clauses: Vec::new(),
        signature: Signature::default(),
    };

    if y.is_empty() {
        for clause in &cnf.constituents {
            out.push(clause.literals().cloned().collect(), ClauseOrigin::Matrix);
        }
        out.signature = extract_signature(&out.to_formula())?;
        return Ok(out);
    }

    // the finite-domain axiom expands into |y|^(m*) clauses
    let axiom_clauses = (y.len() as u64).checked_pow(m_star as u32);
    match axiom_clauses {
        Some(n) if (n as usize) <= cap => {}
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "finite-domain axiom needs {}^{m_star} clauses",
                y.len()
            )))
        }
    }

    // fresh constants shared by both encodings
    let mut c_names: Vec<Vec<Sym>> = Vec::with_capacity(m_star);
    for l in 1..=m_star {
        let mut row = Vec::with_capacity(y.len());
        for i in 1..=y.len() {
            let base = format!("c_{l}_{i}");
            let name = if parts.used.insert(base.clone()) {
                base
            } else {
                fresh_name(&base, &mut parts.used)
            };
            row.push(name);
        }
        c_names.push(row);
    }

    match encoding {
        BsrEncoding::SkolemFn => {
            let mut sigma = BTreeMap::new();
            let mut sk_terms = Vec::with_capacity(y.len());
            for (i, yi) in y.iter().enumerate() {
                let base = format!("f_{}", i + 1);
                let name = if parts.used.insert(base.clone()) {
                    base
                } else {
                    fresh_name(&base, &mut parts.used)
                };
                let term = if x.is_empty() {
                    Term::constant(name)
                } else {
                    Term::app(name, x.iter().map(|v| Term::var(v.clone())).collect())
                };
                sigma.insert(yi.clone(), term.clone());
                sk_terms.push(term);
            }
            for clause in &cnf.constituents {
                let lits: Vec<Formula> = clause
                    .literals()
                    .map(|l| substitute(l, &sigma))
                    .collect::<Result<_>>()?;
                out.push(lits, ClauseOrigin::Matrix);
            }
            for selector in selections(y.len(), m_star) {
                let lits: Vec<Formula> = selector
                    .iter()
                    .enumerate()
                    .map(|(l, &i)| {
                        Formula::equal(sk_terms[i].clone(), Term::constant(c_names[l][i].clone()))
                    })
                    .collect();
                out.push(lits, ClauseOrigin::DomainAxiom);
            }
        }
        BsrEncoding::Relational => {
            let mut guards = Vec::with_capacity(y.len());
            for (i, yi) in y.iter().enumerate() {
                let base = format!("r_{}", i + 1);
                let name = if parts.used.insert(base.clone()) {
                    base
                } else {
                    fresh_name(&base, &mut parts.used)
                };
                let mut args: Vec<Term> = x.iter().map(|v| Term::var(v.clone())).collect();
                args.push(Term::var(yi.clone()));
                guards.push((name, args));
            }
            for clause in &cnf.constituents {
                let mut lits: Vec<Formula> = guards
                    .iter()
                    .map(|(r, args)| Formula::not(Formula::atom(r.clone(), args.clone())))
                    .collect();
                lits.extend(clause.literals().cloned());
                out.push(lits, ClauseOrigin::Guard);
            }
            for selector in selections(y.len(), m_star) {
                let lits: Vec<Formula> = selector
                    .iter()
                    .enumerate()
                    .map(|(l, &i)| {
                        let (r, _) = &guards[i];
                        let mut args: Vec<Term> =
                            x.iter().map(|v| Term::var(v.clone())).collect();
                        args.push(Term::constant(c_names[l][i].clone()));
                        Formula::atom(r.clone(), args)
                    })
                    .collect();
                out.push(lits, ClauseOrigin::DomainAxiom);
            }
        }
    }

    out.signature = extract_signature(&out.to_formula())?;
    Ok(out)
}

/// All choice functions from `[slots]` (one per disjunct of the domain
/// axiom) into `0..width`, lexicographic, first slot most significant.
fn selections(width: usize, slots: usize) -> Vec<Vec<usize>> {
    if width == 0 {
        return if slots == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; slots];
    loop {
        out.push(current.clone());
        let mut pos = slots;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if current[pos] + 1 < width {
                current[pos] += 1;
                for slot in current.iter_mut().skip(pos + 1) {
                    *slot = 0;
                }
                break;
            }
            if pos == 0 {
                return out;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{oracle_decide, Verdict};
    use crate::tptp::{parse_formula, print_tptp};

    #[test]
    fn unary_function_elimination_shape() {
        let phi = parse_formula("![X]: p(f(X))").unwrap();
        let out = eliminate_unary_functions(&phi).unwrap();
        let sig = extract_signature(&out).unwrap();
        assert!(!sig.has_nonconstant_functions());
        let expected =
            parse_formula("(![X]: r_1(X)) & (![X_1]: ?[Y]: (p(Y) <=> r_1(X_1)))").unwrap();
        assert_eq!(out, expected, "got {}", print_tptp(&out));
    }

    #[test]
    fn unary_function_elimination_nested() {
        let phi = parse_formula("![X]: p(f(g(X)))").unwrap();
        let out = eliminate_unary_functions(&phi).unwrap();
        let sig = extract_signature(&out).unwrap();
        assert!(!sig.has_nonconstant_functions());
        // both sides satisfiable
        assert!(oracle_decide(&phi, 2).unwrap().is_sat());
        assert!(oracle_decide(&out, 3).unwrap().is_sat());
    }

    #[test]
    fn unary_function_elimination_identity_without_functions() {
        let phi = parse_formula("![X]: p(X)").unwrap();
        assert_eq!(eliminate_unary_functions(&phi).unwrap(), phi);
    }

    #[test]
    fn unary_function_elimination_rejects_wide_atoms() {
        let phi = parse_formula("![X]: s(f(X), X)").unwrap();
        assert!(matches!(
            eliminate_unary_functions(&phi),
            Err(Error::IneligibleOccurrence { .. })
        ));
    }

    #[test]
    fn monadic_equality_elimination() {
        let phi = parse_formula("![X]: ?[Y]: X = Y").unwrap();
        let out = eliminate_equality_monadic(&phi).unwrap();
        let expected = parse_formula("![X]: ?[Y]: (q_1(X) <=> q_1(Y))").unwrap();
        assert_eq!(out, expected, "got {}", print_tptp(&out));

        let two = parse_formula("?[Z1, Z2]: Z1 != Z2").unwrap();
        let out = eliminate_equality_monadic(&two).unwrap();
        let expected = parse_formula("?[Z1, Z2]: ~(q_1(Z1) <=> q_1(Z2))").unwrap();
        assert_eq!(out, expected, "got {}", print_tptp(&out));
        assert!(oracle_decide(&out, 2).unwrap().is_sat());

        let no_eq = parse_formula("![X]: p(X)").unwrap();
        assert_eq!(eliminate_equality_monadic(&no_eq).unwrap(), no_eq);
    }

    #[test]
    fn bounded_equality_elimination() {
        let phi = parse_formula("![X]: ?[Y]: X = Y").unwrap();
        let out = eliminate_equality_bounded(&phi, 2).unwrap();
        let expected = parse_formula("![X]: ?[Y]: (q_1(X) <=> q_1(Y))").unwrap();
        assert_eq!(out, expected, "got {}", print_tptp(&out));

        // k = 1 degenerates every equation to truth
        let out = eliminate_equality_bounded(&phi, 1).unwrap();
        assert_eq!(out, parse_formula("![X]: ?[Y]: $true").unwrap());
    }

    #[test]
    fn bounded_equality_congruence_instances() {
        let phi = parse_formula("![X, Y]: (X = Y | s(X, Y))").unwrap();
        let out = eliminate_equality_bounded(&phi, 4).unwrap();
        let text = print_tptp(&out);
        // kappa = 2 fresh predicates, two position instances for s
        assert!(text.contains("q_1"));
        assert!(text.contains("q_2"));
        assert!(!text.contains("q_3"));
        let instances = text.matches("s(U").count() + text.matches("s(X_1").count();
        assert!(instances >= 1, "congruence instances missing: {text}");
    }

    #[test]
    fn bsr_relational_clauses() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        let cs = to_bsr_clauses(&phi, BsrEncoding::Relational).unwrap();
        // function-free and equality-free
        assert!(!cs.signature.has_nonconstant_functions());
        for clause in &cs.clauses {
            for lit in &clause.literals {
                assert!(!matches!(lit, Formula::Equal(..)));
                assert!(!matches!(lit, Formula::Not(inner) if matches!(inner.as_ref(), Formula::Equal(..))));
            }
        }
        let text = cs.print_tptp();
        assert!(text.contains("~r_1(X, Y) | ~p(X) | q(Y)"), "{text}");
        assert!(text.contains("r_1(X, c_1_1) | r_1(X, c_2_1)"), "{text}");
    }

    #[test]
    fn bsr_skolem_clauses() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        let cs = to_bsr_clauses(&phi, BsrEncoding::SkolemFn).unwrap();
        let text = cs.print_tptp();
        assert!(text.contains("f_1(X) = c_1_1 | f_1(X) = c_2_1"), "{text}");
    }

    #[test]
    fn bsr_universal_input_is_plain_cnf() {
        let phi = parse_formula("![X]: (p(X) | q(X))").unwrap();
        let cs = to_bsr_clauses(&phi, BsrEncoding::Relational).unwrap();
        assert_eq!(cs.clauses.len(), 1);
        assert_eq!(cs.clauses[0].origin, ClauseOrigin::Matrix);
        assert_eq!(cs.clauses[0].literals.len(), 2);
    }
}
