//! Normal forms and the equivalence-preserving quantifier transpositions.
//!
//! The transposition machinery manipulates matrices as lists of
//! "constituents" (conjunctions) or "clauses" (disjunctions) over
//! pseudo-literals: either plain literals or quantified units that are
//! treated as indivisible while quantifier blocks move around them.
//! Distribution never introduces fresh predicates (renaming would break
//! variable separation), so growth is guarded by an explicit node budget.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::are_separated;
use crate::error::{Error, Result};
use crate::syntax::{
    all_symbols, all_vars, formula_len, free_vars, fresh_name, rename_apart, substitute,
    Formula, Quantifier, Sym, Term,
};

/// Default node budget for distribution-based transformations.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

// ---------------------------------------------------------------------------
// negation normal form

/// Rewrites implications and equivalences away and pushes negations onto
/// atoms. `a <=> b` becomes `(~a | b) & (a | ~b)`, matching the length
/// conventions used everywhere else.
pub fn to_nnf(phi: &Formula) -> Formula {
    match phi {
        Formula::Atom(..) | Formula::Equal(..) | Formula::Truth | Formula::Falsity => phi.clone(),
        Formula::And(a, b) => Formula::and(to_nnf(a), to_nnf(b)),
        Formula::Or(a, b) => Formula::or(to_nnf(a), to_nnf(b)),
        Formula::Implies(a, b) => Formula::or(to_nnf(&Formula::not((**a).clone())), to_nnf(b)),
        Formula::Iff(a, b) => Formula::and(
            Formula::or(
                to_nnf(&Formula::not((**a).clone())),
                to_nnf(b),
            ),
            Formula::or(to_nnf(a), to_nnf(&Formula::not((**b).clone()))),
        ),
        Formula::Forall(v, a) => Formula::forall(v.clone(), to_nnf(a)),
        Formula::Exists(v, a) => Formula::exists(v.clone(), to_nnf(a)),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(..) | Formula::Equal(..) => phi.clone(),
            Formula::Truth => Formula::Falsity,
            Formula::Falsity => Formula::Truth,
            Formula::Not(a) => to_nnf(a),
            Formula::And(a, b) => Formula::or(
                to_nnf(&Formula::not((**a).clone())),
                to_nnf(&Formula::not((**b).clone())),
            ),
            Formula::Or(a, b) => Formula::and(
                to_nnf(&Formula::not((**a).clone())),
                to_nnf(&Formula::not((**b).clone())),
            ),
            Formula::Implies(a, b) => Formula::and(
                to_nnf(a),
                to_nnf(&Formula::not((**b).clone())),
            ),
            Formula::Iff(a, b) => to_nnf(&Formula::not(Formula::and(
                Formula::or(Formula::not((**a).clone()), (**b).clone()),
                Formula::or((**a).clone(), Formula::not((**b).clone())),
            ))),
            Formula::Forall(v, a) => {
                Formula::exists(v.clone(), to_nnf(&Formula::not((**a).clone())))
            }
            Formula::Exists(v, a) => {
                Formula::forall(v.clone(), to_nnf(&Formula::not((**a).clone())))
            }
        },
    }
}

// ---------------------------------------------------------------------------
// miniscoping

/// Pushes quantifiers inwards as far as the four standard rules allow,
/// splitting bound variables where an existential distributes over a
/// disjunction (or a universal over a conjunction). Vacuous quantifiers are
/// dropped.
pub fn miniscope(phi: &Formula) -> Formula {
    let phi = rename_apart(phi, &BTreeSet::new());
    let mut used: BTreeSet<Sym> = all_vars(&phi);
    used.extend(all_symbols(&phi));
    used.extend(free_vars(&phi));
    mini(&phi, &mut used)
}

fn mini(phi: &Formula, used: &mut BTreeSet<Sym>) -> Formula {
    match phi {
        Formula::Forall(v, a) => {
            let body = mini(a, used);
            push_quant(Quantifier::Forall, v, body, used)
        }
        Formula::Exists(v, a) => {
            let body = mini(a, used);
            push_quant(Quantifier::Exists, v, body, used)
        }
        Formula::Not(a) => Formula::not(mini(a, used)),
        Formula::And(a, b) => Formula::and(mini(a, used), mini(b, used)),
        Formula::Or(a, b) => Formula::or(mini(a, used), mini(b, used)),
        Formula::Implies(a, b) => Formula::implies(mini(a, used), mini(b, used)),
        Formula::Iff(a, b) => Formula::iff(mini(a, used), mini(b, used)),
        _ => phi.clone(),
    }
}

fn rename_free(phi: &Formula, from: &str, to: &str) -> Formula {
    substitute(phi, &BTreeMap::from([(from.to_string(), Term::var(to))]))
        .expect("renaming a bound variable to a fresh name cannot capture")
}

fn push_quant(q: Quantifier, var: &str, body: Formula, used: &mut BTreeSet<Sym>) -> Formula {
    if !free_vars(&body).contains(var) {
        return body;
    }
    match (&q, body) {
        (Quantifier::Exists, Formula::Or(a, b)) => {
            if !free_vars(&a).contains(var) {
                let b = push_quant(q, var, *b, used);
                Formula::or(*a, b)
            } else if !free_vars(&b).contains(var) {
                let a = push_quant(q, var, *a, used);
                Formula::or(a, *b)
            } else {
                let v1 = fresh_name(var, used);
                let v2 = fresh_name(var, used);
                let left = push_quant(q, &v1, rename_free(&a, var, &v1), used);
                let right = push_quant(q, &v2, rename_free(&b, var, &v2), used);
                Formula::or(left, right)
            }
        }
        (Quantifier::Exists, Formula::And(a, b)) => {
            if !free_vars(&a).contains(var) {
                let b = push_quant(q, var, *b, used);
                Formula::and(*a, b)
            } else if !free_vars(&b).contains(var) {
                let a = push_quant(q, var, *a, used);
                Formula::and(a, *b)
            } else {
                Formula::exists(var.to_string(), Formula::And(a, b))
            }
        }
        (Quantifier::Forall, Formula::And(a, b)) => {
            if !free_vars(&a).contains(var) {
                let b = push_quant(q, var, *b, used);
                Formula::and(*a, b)
            } else if !free_vars(&b).contains(var) {
                let a = push_quant(q, var, *a, used);
                Formula::and(a, *b)
            } else {
                let v1 = fresh_name(var, used);
                let v2 = fresh_name(var, used);
                let left = push_quant(q, &v1, rename_free(&a, var, &v1), used);
                let right = push_quant(q, &v2, rename_free(&b, var, &v2), used);
                Formula::and(left, right)
            }
        }
        (Quantifier::Forall, Formula::Or(a, b)) => {
            if !free_vars(&a).contains(var) {
                let b = push_quant(q, var, *b, used);
                Formula::or(*a, b)
            } else if !free_vars(&b).contains(var) {
                let a = push_quant(q, var, *a, used);
                Formula::or(a, *b)
            } else {
                Formula::forall(var.to_string(), Formula::Or(a, b))
            }
        }
        (Quantifier::Forall, body) => Formula::forall(var.to_string(), body),
        (Quantifier::Exists, body) => Formula::exists(var.to_string(), body),
    }
}

// ---------------------------------------------------------------------------
// prenex normal form

/// Moves all quantifiers to the front. Pull order is deterministic: at each
/// junction existential quantifiers are pulled before universal ones, left
/// side before right. An equivalence with quantifiers below it is expanded
/// into the two implications first.
pub fn to_prenex(phi: &Formula) -> Formula {
    let phi = rename_apart(phi, &BTreeSet::new());
    let mut used: BTreeSet<Sym> = all_vars(&phi);
    used.extend(all_symbols(&phi));
    let (prefix, matrix) = prenex(&phi, &mut used);
    let mut out = matrix;
    for (q, v) in prefix.into_iter().rev() {
        out = match q {
            Quantifier::Forall => Formula::forall(v, out),
            Quantifier::Exists => Formula::exists(v, out),
        };
    }
    out
}

fn flip(q: Quantifier) -> Quantifier {
    match q {
        Quantifier::Forall => Quantifier::Exists,
        Quantifier::Exists => Quantifier::Forall,
    }
}

fn merge_prefixes(
    mut left: Vec<(Quantifier, Sym)>,
    mut right: Vec<(Quantifier, Sym)>,
) -> Vec<(Quantifier, Sym)> {
    let mut out = Vec::with_capacity(left.len() + right.len());
    let mut li = 0;
    let mut ri = 0;
    while li < left.len() || ri < right.len() {
        let lh = left.get(li).map(|(q, _)| *q);
        let rh = right.get(ri).map(|(q, _)| *q);
        let take_left = match (lh, rh) {
            (Some(Quantifier::Exists), _) => true,
            (_, Some(Quantifier::Exists)) => false,
            (Some(Quantifier::Forall), _) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!(),
        };
        if take_left {
            out.push(left[li].clone());
            li += 1;
        } else {
            out.push(right[ri].clone());
            ri += 1;
        }
    }
    left.clear();
    right.clear();
    out
}

fn prenex(phi: &Formula, used: &mut BTreeSet<Sym>) -> (Vec<(Quantifier, Sym)>, Formula) {
    match phi {
        Formula::Atom(..) | Formula::Equal(..) | Formula::Truth | Formula::Falsity => {
            (Vec::new(), phi.clone())
        }
        Formula::Not(a) => {
            let (pa, ma) = prenex(a, used);
            (
                pa.into_iter().map(|(q, v)| (flip(q), v)).collect(),
                Formula::not(ma),
            )
        }
        Formula::Forall(v, a) => {
            let (pa, ma) = prenex(a, used);
            let mut prefix = vec![(Quantifier::Forall, v.clone())];
            prefix.extend(pa);
            (prefix, ma)
        }
        Formula::Exists(v, a) => {
            let (pa, ma) = prenex(a, used);
            let mut prefix = vec![(Quantifier::Exists, v.clone())];
            prefix.extend(pa);
            (prefix, ma)
        }
        Formula::And(a, b) => {
            let (pa, ma) = prenex(a, used);
            let (pb, mb) = prenex(b, used);
            (merge_prefixes(pa, pb), Formula::and(ma, mb))
        }
        Formula::Or(a, b) => {
            let (pa, ma) = prenex(a, used);
            let (pb, mb) = prenex(b, used);
            (merge_prefixes(pa, pb), Formula::or(ma, mb))
        }
        Formula::Implies(a, b) => {
            let (pa, ma) = prenex(a, used);
            let (pb, mb) = prenex(b, used);
            let pa = pa.into_iter().map(|(q, v)| (flip(q), v)).collect();
            (merge_prefixes(pa, pb), Formula::implies(ma, mb))
        }
        Formula::Iff(a, b) => {
            if a.is_quantifier_free() && b.is_quantifier_free() {
                return (Vec::new(), phi.clone());
            }
            let expanded = Formula::and(
                Formula::implies((**a).clone(), (**b).clone()),
                Formula::implies((**b).clone(), (**a).clone()),
            );
            let expanded = rename_apart(&expanded, used);
            used.extend(all_vars(&expanded));
            prenex(&expanded, used)
        }
    }
}

// ---------------------------------------------------------------------------
// pseudo-literals

/// A matrix element during transposition: a plain literal or a quantified
/// unit that is moved around as one piece. An existential unit's body is a
/// conjunction of elements, a universal unit's body a disjunction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Elem {
    Lit(Formula),
    Unit(Quantifier, Vec<Sym>, Vec<Elem>),
}

impl Elem {
    fn free_vars(&self) -> BTreeSet<Sym> {
        match self {
            Elem::Lit(f) => free_vars(f),
            Elem::Unit(_, vars, body) => {
                let mut out = BTreeSet::new();
                for e in body {
                    out.extend(e.free_vars());
                }
                for v in vars {
                    out.remove(v);
                }
                out
            }
        }
    }

    fn to_formula(&self) -> Formula {
        match self {
            Elem::Lit(f) => f.clone(),
            Elem::Unit(q, vars, body) => {
                Formula::quantify(*q, vars, fold_body(*q, body))
            }
        }
    }

    fn node_count(&self) -> usize {
        match self {
            Elem::Lit(_) => 1,
            Elem::Unit(_, _, body) => 1 + body.iter().map(Elem::node_count).sum::<usize>(),
        }
    }
}

fn fold_body(q: Quantifier, body: &[Elem]) -> Formula {
    let parts: Vec<Formula> = body.iter().map(Elem::to_formula).collect();
    match q {
        Quantifier::Exists => Formula::and_all(parts),
        Quantifier::Forall => Formula::or_all(parts),
    }
}

fn is_literal(phi: &Formula) -> bool {
    match phi {
        Formula::Atom(..) | Formula::Equal(..) => true,
        Formula::Not(inner) => matches!(inner.as_ref(), Formula::Atom(..) | Formula::Equal(..)),
        _ => false,
    }
}

fn literal_complement(phi: &Formula) -> Formula {
    match phi {
        Formula::Not(inner) => (**inner).clone(),
        _ => Formula::not(phi.clone()),
    }
}

// ---------------------------------------------------------------------------
// propositional checks over flattened elements

fn prop_leaves(phi: &Formula, out: &mut BTreeSet<Formula>) {
    match phi {
        Formula::Atom(..) | Formula::Equal(..) | Formula::Forall(..) | Formula::Exists(..) => {
            out.insert(phi.clone());
        }
        Formula::Truth | Formula::Falsity => {}
        Formula::Not(a) => prop_leaves(a, out),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b) => {
            prop_leaves(a, out);
            prop_leaves(b, out);
        }
    }
}

fn prop_eval(phi: &Formula, val: &BTreeMap<Formula, bool>) -> bool {
    match phi {
        Formula::Atom(..) | Formula::Equal(..) | Formula::Forall(..) | Formula::Exists(..) => {
            val[phi]
        }
        Formula::Truth => true,
        Formula::Falsity => false,
        Formula::Not(a) => !prop_eval(a, val),
        Formula::And(a, b) => prop_eval(a, val) && prop_eval(b, val),
        Formula::Or(a, b) => prop_eval(a, val) || prop_eval(b, val),
        Formula::Implies(a, b) => !prop_eval(a, val) || prop_eval(b, val),
        Formula::Iff(a, b) => prop_eval(a, val) == prop_eval(b, val),
    }
}

const PROP_LEAF_CAP: usize = 12;

/// Truth-table check with quantified subformulas treated as opaque leaves.
/// Returns `false` when the table would be too large, which only means the
/// property is unknown.
fn prop_holds_everywhere(phi: &Formula, want: bool) -> bool {
    let mut leaves = BTreeSet::new();
    prop_leaves(phi, &mut leaves);
    let leaves: Vec<Formula> = leaves.into_iter().collect();
    if leaves.len() > PROP_LEAF_CAP {
        return false;
    }
    let rows = 1usize << leaves.len();
    let mut val = BTreeMap::new();
    for row in 0..rows {
        for (i, leaf) in leaves.iter().enumerate() {
            val.insert(leaf.clone(), row >> i & 1 == 1);
        }
        if prop_eval(phi, &val) != want {
            return false;
        }
    }
    true
}

fn prop_tautology(phi: &Formula) -> bool {
    prop_holds_everywhere(phi, true)
}

fn prop_unsat(phi: &Formula) -> bool {
    prop_holds_everywhere(&Formula::not(phi.clone()), false)
}

fn prop_entails(a: &Formula, b: &Formula) -> bool {
    prop_unsat(&Formula::and(a.clone(), Formula::not(b.clone())))
}

/// One-level flattening of an element for the semantic pruning checks,
/// deeper units stay opaque. In a conjunction the bound tuple of an
/// existential unit must be renamed to private placeholders (two witnesses
/// are independent), while universal tuples may be shared; in a disjunction
/// the roles swap.
fn flat_in_context(e: &Elem, context: NfKind, counter: &mut usize) -> Formula {
    match e {
        Elem::Lit(f) => f.clone(),
        Elem::Unit(q, vars, body) => {
            let share = matches!(
                (context, q),
                (NfKind::Dnf, Quantifier::Forall) | (NfKind::Cnf, Quantifier::Exists)
            );
            let folded = fold_body(*q, body);
            if share {
                return folded;
            }
            let mut sigma = BTreeMap::new();
            for v in vars {
                *counter += 1;
                sigma.insert(v.clone(), Term::var(format!("$flat_{counter}")));
            }
            substitute(&folded, &sigma).unwrap_or(folded)
        }
    }
}

/// Flattening without renaming, used for entailment between elements whose
/// bound tuples are either identical or disjoint.
fn flat_shared(e: &Elem) -> Formula {
    match e {
        Elem::Lit(f) => f.clone(),
        Elem::Unit(q, _, body) => fold_body(*q, body),
    }
}

fn elem_entails(a: &Elem, b: &Elem) -> bool {
    if a == b {
        return true;
    }
    // existential lower bounds combined with universal upper bounds over a
    // shared tuple would be unsound, but x- and y-side tuples are disjoint
    if let (Elem::Unit(Quantifier::Exists, va, _), Elem::Unit(Quantifier::Forall, vb, _)) = (a, b)
    {
        if va.iter().any(|v| vb.contains(v)) {
            return false;
        }
    }
    prop_entails(&flat_shared(a), &flat_shared(b))
}

// ---------------------------------------------------------------------------
// distribution with pruning

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NfKind {
    Dnf,
    Cnf,
}

type ElemSet = Vec<Elem>;

fn normalize_set(mut set: ElemSet) -> ElemSet {
    set.sort();
    set.dedup();
    set
}

/// Drops a conjunction with a complementary literal pair (DNF) or a clause
/// with one (CNF); additionally runs the flattened truth-table check when
/// quantified units are present.
fn is_degenerate(set: &ElemSet, kind: NfKind) -> bool {
    let lits: Vec<&Formula> = set
        .iter()
        .filter_map(|e| match e {
            Elem::Lit(f) => Some(f),
            _ => None,
        })
        .collect();
    for l in &lits {
        let comp = literal_complement(l);
        if lits.iter().any(|other| **other == comp) {
            return true;
        }
    }
    if set.iter().any(|e| matches!(e, Elem::Unit(..))) {
        let mut counter = 0;
        let parts: Vec<Formula> = set
            .iter()
            .map(|e| flat_in_context(e, kind, &mut counter))
            .collect();
        match kind {
            NfKind::Dnf => prop_unsat(&Formula::and_all(parts)),
            NfKind::Cnf => prop_tautology(&Formula::or_all(parts)),
        }
    } else {
        false
    }
}

/// Absorption inside one conjunction or disjunction: in a conjunction an
/// element entailed by another is redundant, in a disjunction an element
/// entailing another is.
fn absorb_within(set: ElemSet, kind: NfKind) -> ElemSet {
    let mut keep: Vec<bool> = vec![true; set.len()];
    for i in 0..set.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..set.len() {
            if i == j || !keep[j] {
                continue;
            }
            let redundant = match kind {
                NfKind::Dnf => elem_entails(&set[i], &set[j]),
                NfKind::Cnf => elem_entails(&set[j], &set[i]),
            };
            if redundant {
                keep[j] = false;
            }
        }
    }
    set.into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

fn subset_of(a: &ElemSet, b: &ElemSet) -> bool {
    a.iter().all(|e| b.contains(e))
}

/// Removes strict supersets (and duplicates) from a constituent or clause
/// list; in both normal forms the larger set is the redundant one.
fn prune_supersets(sets: Vec<ElemSet>) -> Vec<ElemSet> {
    let mut keep: Vec<bool> = vec![true; sets.len()];
    for i in 0..sets.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..sets.len() {
            if i == j || !keep[j] {
                continue;
            }
            if subset_of(&sets[i], &sets[j]) && (sets[i] != sets[j] || j > i) {
                keep[j] = false;
            }
        }
    }
    sets.into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect()
}

fn prune(sets: Vec<ElemSet>, kind: NfKind, semantic: bool) -> Vec<ElemSet> {
    let mut out: Vec<ElemSet> = Vec::new();
    for set in sets {
        let set = normalize_set(set);
        if semantic && is_degenerate(&set, kind) {
            continue;
        }
        let set = if semantic { absorb_within(set, kind) } else { set };
        out.push(set);
    }
    out.sort();
    out.dedup();
    prune_supersets(out)
}

fn check_budget(sets: &[ElemSet], cap: usize) -> Result<()> {
    let total: usize = sets
        .iter()
        .map(|s| s.iter().map(Elem::node_count).sum::<usize>())
        .sum();
    if total > cap {
        return Err(Error::BudgetExceeded(format!(
            "normal form grew to {total} nodes (cap {cap})"
        )));
    }
    Ok(())
}

/// Distributes a list of disjunctions into a list of conjunctions (or
/// dually); the transversal product of the input sets.
fn cross_distribute(sets: &[ElemSet], out_kind: NfKind, cap: usize) -> Result<Vec<ElemSet>> {
    let mut acc: Vec<ElemSet> = vec![Vec::new()];
    for set in sets {
        let mut next: Vec<ElemSet> = Vec::new();
        for partial in &acc {
            for e in set {
                let mut grown = partial.clone();
                grown.push(e.clone());
                next.push(normalize_set(grown));
            }
        }
        acc = prune(next, out_kind, true);
        check_budget(&acc, cap)?;
    }
    Ok(acc)
}

/// Literal-level normal form of a quantifier-free formula, as element sets.
/// For DNF the result is a list of conjunctions, for CNF a list of clauses.
fn formula_to_elems(qf: &Formula, kind: NfKind, cap: usize) -> Result<Vec<ElemSet>> {
    fn dnf(phi: &Formula) -> Result<Vec<ElemSet>> {
        Ok(match phi {
            Formula::Truth => vec![Vec::new()],
            Formula::Falsity => vec![],
            Formula::Or(a, b) => {
                let mut out = dnf(a)?;
                out.extend(dnf(b)?);
                out
            }
            Formula::And(a, b) => {
                let left = dnf(a)?;
                let right = dnf(b)?;
                let mut out = Vec::with_capacity(left.len() * right.len());
                for l in &left {
                    for r in &right {
                        let mut set = l.clone();
                        set.extend(r.iter().cloned());
                        out.push(normalize_set(set));
                    }
                }
                out
            }
            f if is_literal(f) => vec![vec![Elem::Lit(f.clone())]],
            _ => return Err(Error::NotPrenex),
        })
    }
    fn cnf(phi: &Formula) -> Result<Vec<ElemSet>> {
        Ok(match phi {
            Formula::Truth => vec![],
            Formula::Falsity => vec![Vec::new()],
            Formula::And(a, b) => {
                let mut out = cnf(a)?;
                out.extend(cnf(b)?);
                out
            }
            Formula::Or(a, b) => {
                let left = cnf(a)?;
                let right = cnf(b)?;
                let mut out = Vec::with_capacity(left.len() * right.len());
                for l in &left {
                    for r in &right {
                        let mut set = l.clone();
                        set.extend(r.iter().cloned());
                        out.push(normalize_set(set));
                    }
                }
                out
            }
            f if is_literal(f) => vec![vec![Elem::Lit(f.clone())]],
            _ => return Err(Error::NotPrenex),
        })
    }
    let nnf = to_nnf(qf);
    let sets = match kind {
        NfKind::Dnf => dnf(&nnf)?,
        NfKind::Cnf => cnf(&nnf)?,
    };
    check_budget(&sets, cap)?;
    Ok(sets)
}

// ---------------------------------------------------------------------------
// separated normal form matrices

/// One disjunct of a separated DNF (or clause of a CNF): literals split into
/// the part over the universal variables, the part over the existential
/// variables, and the parameter part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constituent {
    pub chi: Vec<Formula>,
    pub eta: Vec<Formula>,
    pub param: Vec<Formula>,
}

impl Constituent {
    pub fn literals(&self) -> impl Iterator<Item = &Formula> {
        self.chi.iter().chain(self.eta.iter()).chain(self.param.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormMatrix {
    pub kind: NfKind,
    pub constituents: Vec<Constituent>,
    pub x_vars: Vec<Sym>,
    pub y_vars: Vec<Sym>,
    pub z_vars: Vec<Sym>,
    /// Constituent count before complementary/tautological pruning (the
    /// subset rule alone), reported alongside the pruned count.
    pub unpruned_count: usize,
}

impl NormalFormMatrix {
    pub fn count(&self) -> usize {
        self.constituents.len()
    }

    /// The full matrix as a formula again.
    pub fn to_formula(&self) -> Formula {
        let parts: Vec<Formula> = self
            .constituents
            .iter()
            .map(|c| {
                let lits: Vec<Formula> = c.literals().cloned().collect();
                match self.kind {
                    NfKind::Dnf => Formula::and_all(lits),
                    NfKind::Cnf => Formula::or_all(lits),
                }
            })
            .collect();
        match self.kind {
            NfKind::Dnf => Formula::or_all(parts),
            NfKind::Cnf => Formula::and_all(parts),
        }
    }
}

fn literal_vars(lit: &Formula) -> BTreeSet<Sym> {
    free_vars(lit)
}

/// Normal form of a separated quantifier-free matrix, with constituents
/// split into x-part, y-part, and parameter part.
pub fn matrix_to_nf(
    psi: &Formula,
    kind: NfKind,
    x_vars: &[Sym],
    y_vars: &[Sym],
    z_vars: &[Sym],
) -> Result<NormalFormMatrix> {
    let x_set: BTreeSet<Sym> = x_vars.iter().cloned().collect();
    let y_set: BTreeSet<Sym> = y_vars.iter().cloned().collect();
    if !are_separated(psi, &x_set, &y_set)? {
        let offending = crate::syntax::atoms(psi)
            .into_iter()
            .find(|a| {
                let vars = free_vars(a);
                vars.iter().any(|v| x_set.contains(v)) && vars.iter().any(|v| y_set.contains(v))
            })
            .map(|a| a.to_string())
            .unwrap_or_default();
        return Err(Error::Separation { atom: offending });
    }

    let raw = formula_to_elems(psi, kind, DEFAULT_NODE_CAP)?;
    let unpruned = prune(raw.clone(), kind, false);
    let pruned = prune(raw, kind, true);

    let mut constituents = Vec::with_capacity(pruned.len());
    for set in pruned {
        let mut chi = Vec::new();
        let mut eta = Vec::new();
        let mut param = Vec::new();
        for e in set {
            let lit = match e {
                Elem::Lit(f) => f,
                Elem::Unit(..) => unreachable!("literal-level normal form"),
            };
            let vars = literal_vars(&lit);
            if vars.iter().any(|v| x_set.contains(v)) {
                chi.push(lit);
            } else if vars.iter().any(|v| y_set.contains(v)) {
                eta.push(lit);
            } else {
                param.push(lit);
            }
        }
        constituents.push(Constituent { chi, eta, param });
    }

    Ok(NormalFormMatrix {
        kind,
        constituents,
        x_vars: x_vars.to_vec(),
        y_vars: y_vars.to_vec(),
        z_vars: z_vars.to_vec(),
        unpruned_count: unpruned.len(),
    })
}

// ---------------------------------------------------------------------------
// transposition

/// One universal/existential alternation of the prefix.
#[derive(Debug, Clone)]
struct StagePair {
    x_vars: Vec<Sym>,
    y_vars: Vec<Sym>,
}

fn side_of(e: &Elem, x_all: &BTreeSet<Sym>, y_all: &BTreeSet<Sym>) -> Result<u8> {
    let vars = e.free_vars();
    let in_x = vars.iter().any(|v| x_all.contains(v));
    let in_y = vars.iter().any(|v| y_all.contains(v));
    match (in_x, in_y) {
        (true, true) => Err(Error::Separation {
            atom: e.to_formula().to_string(),
        }),
        (true, false) => Ok(0),
        (false, true) => Ok(1),
        (false, false) => Ok(2),
    }
}

/// Runs the staged transposition: starting from the innermost alternation,
/// the existential block is pushed onto the y-side of every DNF constituent,
/// the matrix is redistributed into clauses, and the universal block is
/// pushed onto the x-side of every clause. The result is the clause list
/// after the outermost stage.
fn transpose_stages(
    pairs: &[StagePair],
    matrix: &Formula,
    x_all: &BTreeSet<Sym>,
    y_all: &BTreeSet<Sym>,
    cap: usize,
) -> Result<Vec<ElemSet>> {
    let mut clauses: Option<Vec<ElemSet>> = None;
    for pair in pairs.iter().rev() {
        // disjunction of conjunctions, units treated as atoms
        let constituents = match clauses.take() {
            None => prune(formula_to_elems(matrix, NfKind::Dnf, cap)?, NfKind::Dnf, true),
            Some(cs) => cross_distribute(&cs, NfKind::Dnf, cap)?,
        };
        check_budget(&constituents, cap)?;

        // bind the current existential block over each constituent's y-side
        let y_block: BTreeSet<Sym> = pair.y_vars.iter().cloned().collect();
        let mut after_exists: Vec<ElemSet> = Vec::with_capacity(constituents.len());
        for set in constituents {
            let mut x_part = Vec::new();
            let mut y_part = Vec::new();
            let mut rest = Vec::new();
            for e in set {
                match side_of(&e, x_all, y_all)? {
                    0 => x_part.push(e),
                    1 => y_part.push(e),
                    _ => rest.push(e),
                }
            }
            let touches_block = y_part
                .iter()
                .any(|e| e.free_vars().iter().any(|v| y_block.contains(v)));
            let mut set = x_part;
            if touches_block {
                set.push(Elem::Unit(
                    Quantifier::Exists,
                    pair.y_vars.clone(),
                    normalize_set(y_part),
                ));
            } else {
                set.extend(y_part);
            }
            set.extend(rest);
            after_exists.push(normalize_set(set));
        }
        let after_exists = prune(after_exists, NfKind::Dnf, true);

        // conjunction of disjunctions, then bind the universal block over
        // each clause's x-side
        let clause_sets = cross_distribute(&after_exists, NfKind::Cnf, cap)?;
        let x_block: BTreeSet<Sym> = pair.x_vars.iter().cloned().collect();
        let mut after_forall: Vec<ElemSet> = Vec::with_capacity(clause_sets.len());
        for set in clause_sets {
            let mut x_part = Vec::new();
            let mut rest = Vec::new();
            for e in set {
                match side_of(&e, x_all, y_all)? {
                    0 => x_part.push(e),
                    _ => rest.push(e),
                }
            }
            let touches_block = x_part
                .iter()
                .any(|e| e.free_vars().iter().any(|v| x_block.contains(v)));
            let mut set = rest;
            if touches_block {
                set.push(Elem::Unit(
                    Quantifier::Forall,
                    pair.x_vars.clone(),
                    normalize_set(x_part),
                ));
            } else {
                set.extend(x_part);
            }
            after_forall.push(normalize_set(set));
        }
        let after_forall = prune(after_forall, NfKind::Cnf, true);
        check_budget(&after_forall, cap)?;
        clauses = Some(after_forall);
    }
    Ok(clauses.unwrap_or_default())
}

/// Turns the final clause list into a prenex formula. The outermost
/// universal tuple is shared across clauses; every other unit is opened with
/// fresh variables, one fresh tuple per clause for its top-level existential
/// units.
fn unpack_clauses(
    clauses: Vec<ElemSet>,
    outer_x: &[Sym],
    used: &mut BTreeSet<Sym>,
) -> (Vec<Sym>, Vec<Sym>, Formula) {
    let mut exists_prefix: Vec<Sym> = Vec::new();
    let mut forall_prefix: Vec<Sym> = Vec::new();

    // the outermost universal block may be shared iff no clause holds more
    // than one unit binding it
    let share_outer = !outer_x.is_empty()
        && clauses.iter().all(|clause| {
            clause
                .iter()
                .filter(
                    |e| matches!(e, Elem::Unit(Quantifier::Forall, vars, _) if vars == outer_x),
                )
                .count()
                <= 1
        });

    fn rename_elems(elems: &[Elem], sigma: &BTreeMap<Sym, Term>) -> Vec<Elem> {
        elems
            .iter()
            .map(|e| match e {
                Elem::Lit(f) => Elem::Lit(substitute(f, sigma).expect("fresh names cannot capture")),
                Elem::Unit(q, vars, body) => {
                    Elem::Unit(*q, vars.clone(), rename_elems(body, sigma))
                }
            })
            .collect()
    }

    fn fresh_tuple(
        vars: &[Sym],
        used: &mut BTreeSet<Sym>,
        prefix: &mut Vec<Sym>,
    ) -> BTreeMap<Sym, Term> {
        let mut sigma = BTreeMap::new();
        for v in vars {
            let fresh = fresh_name(v, used);
            prefix.push(fresh.clone());
            sigma.insert(v.clone(), Term::var(fresh));
        }
        sigma
    }

    // conjunction context: only literals and existential units occur here
    fn open_conj(
        elems: &[Elem],
        used: &mut BTreeSet<Sym>,
        exists_prefix: &mut Vec<Sym>,
        forall_prefix: &mut Vec<Sym>,
    ) -> Formula {
        let mut parts = Vec::new();
        for e in elems {
            match e {
                Elem::Lit(f) => parts.push(f.clone()),
                Elem::Unit(Quantifier::Exists, vars, body) => {
                    let sigma = fresh_tuple(vars, used, exists_prefix);
                    let body = rename_elems(body, &sigma);
                    parts.push(open_conj(&body, used, exists_prefix, forall_prefix));
                }
                Elem::Unit(Quantifier::Forall, vars, body) => {
                    let sigma = fresh_tuple(vars, used, forall_prefix);
                    let body = rename_elems(body, &sigma);
                    parts.push(open_disj(&body, used, exists_prefix, forall_prefix, None));
                }
            }
        }
        Formula::and_all(parts)
    }

    // disjunction context; existential units binding the same tuple share one
    // fresh tuple, and `inline_forall` opens units that bind the shared outer
    // block without renaming
    fn open_disj(
        elems: &[Elem],
        used: &mut BTreeSet<Sym>,
        exists_prefix: &mut Vec<Sym>,
        forall_prefix: &mut Vec<Sym>,
        inline_forall: Option<&[Sym]>,
    ) -> Formula {
        let mut parts = Vec::new();
        let mut shared: BTreeMap<Vec<Sym>, BTreeMap<Sym, Term>> = BTreeMap::new();
        for e in elems {
            match e {
                Elem::Lit(f) => parts.push(f.clone()),
                Elem::Unit(Quantifier::Exists, vars, body) => {
                    let sigma = shared
                        .entry(vars.clone())
                        .or_insert_with(|| fresh_tuple(vars, used, exists_prefix))
                        .clone();
                    let body = rename_elems(body, &sigma);
                    parts.push(open_conj(&body, used, exists_prefix, forall_prefix));
                }
                Elem::Unit(Quantifier::Forall, vars, body) => {
                    if inline_forall == Some(vars.as_slice()) {
                        parts.push(open_disj(body, used, exists_prefix, forall_prefix, None));
                    } else {
                        let sigma = fresh_tuple(vars, used, forall_prefix);
                        let body = rename_elems(body, &sigma);
                        parts.push(open_disj(&body, used, exists_prefix, forall_prefix, None));
                    }
                }
            }
        }
        Formula::or_all(parts)
    }

    let inline = if share_outer { Some(outer_x) } else { None };
    let mut clause_formulas = Vec::with_capacity(clauses.len());
    for clause in &clauses {
        clause_formulas.push(open_disj(
            clause,
            used,
            &mut exists_prefix,
            &mut forall_prefix,
            inline,
        ));
    }
    if share_outer {
        let mut prefix = outer_x.to_vec();
        prefix.extend(forall_prefix);
        forall_prefix = prefix;
    }
    (exists_prefix, forall_prefix, Formula::and_all(clause_formulas))
}

/// Decomposes a prenex prefix into the leading existential block and the
/// universal/existential alternation pairs.
fn prefix_pairs(phi: &Formula) -> Result<(Vec<Sym>, Vec<StagePair>, Formula)> {
    let (prefix, matrix) = crate::analysis::prefix_blocks(phi)?;
    let mut leading: Vec<Sym> = Vec::new();
    let mut pairs: Vec<StagePair> = Vec::new();
    for (i, (q, vars)) in prefix.blocks.iter().enumerate() {
        match q {
            Quantifier::Exists if i == 0 => leading.extend(vars.iter().cloned()),
            Quantifier::Forall => pairs.push(StagePair {
                x_vars: vars.clone(),
                y_vars: Vec::new(),
            }),
            Quantifier::Exists => {
                let last = pairs
                    .last_mut()
                    .expect("normalized prefix alternates, exists follows forall");
                last.y_vars = vars.clone();
            }
        }
    }
    Ok((leading, pairs, matrix))
}

/// Transposes one `forall x / exists y` alternation on a quantifier-free,
/// separated matrix, yielding an `exists* forall*` sentence whose atoms are
/// variants of the input atoms. Free variables act as parameters.
pub fn transpose_block(phi: &Formula) -> Result<Formula> {
    transpose_block_capped(phi, DEFAULT_NODE_CAP)
}

pub fn transpose_block_capped(phi: &Formula, cap: usize) -> Result<Formula> {
    let phi = rename_apart(phi, &BTreeSet::new());
    let mut body = &phi;
    let mut x_vars: Vec<Sym> = Vec::new();
    while let Formula::Forall(v, inner) = body {
        x_vars.push(v.clone());
        body = inner;
    }
    let mut y_vars: Vec<Sym> = Vec::new();
    while let Formula::Exists(v, inner) = body {
        y_vars.push(v.clone());
        body = inner;
    }
    if !body.is_quantifier_free() {
        return Err(Error::NotPrenex);
    }
    let matrix = body.clone();
    let x_set: BTreeSet<Sym> = x_vars.iter().cloned().collect();
    let y_set: BTreeSet<Sym> = y_vars.iter().cloned().collect();
    if !are_separated(&matrix, &x_set, &y_set)? {
        return Err(separation_error(&matrix, &x_set, &y_set));
    }

    let pairs = vec![StagePair {
        x_vars: x_vars.clone(),
        y_vars,
    }];
    let clauses = transpose_stages(&pairs, &matrix, &x_set, &y_set, cap)?;
    let mut used: BTreeSet<Sym> = all_vars(&phi);
    used.extend(all_symbols(&phi));
    used.extend(free_vars(&phi));
    let (ex, fa, matrix) = unpack_clauses(clauses, &x_vars, &mut used);
    Ok(Formula::quantify(
        Quantifier::Exists,
        &ex,
        Formula::quantify(Quantifier::Forall, &fa, matrix),
    ))
}

fn separation_error(
    matrix: &Formula,
    x_set: &BTreeSet<Sym>,
    y_set: &BTreeSet<Sym>,
) -> Error {
    let offending = crate::syntax::atoms(matrix)
        .into_iter()
        .find(|a| {
            let vars = free_vars(a);
            vars.iter().any(|v| x_set.contains(v)) && vars.iter().any(|v| y_set.contains(v))
        })
        .map(|a| a.to_string())
        .unwrap_or_default();
    Error::Separation { atom: offending }
}

/// Transposes every alternation of a separated prenex sentence, producing an
/// equivalent `exists* forall*` sentence. The innermost existential block
/// is eliminated first, stage by stage. Inputs that already have no
/// existential block after a universal one are returned unchanged (up to
/// renaming apart and prenexing).
pub fn transpose_all(phi: &Formula) -> Result<Formula> {
    transpose_all_capped(phi, DEFAULT_NODE_CAP)
}

pub fn transpose_all_capped(phi: &Formula, cap: usize) -> Result<Formula> {
    let prenexed = to_prenex(phi);
    let (leading, pairs, matrix) = prefix_pairs(&prenexed)?;

    if pairs.iter().all(|p| p.y_vars.is_empty()) {
        return Ok(prenexed);
    }

    let x_all: BTreeSet<Sym> = pairs.iter().flat_map(|p| p.x_vars.iter().cloned()).collect();
    let y_all: BTreeSet<Sym> = pairs.iter().flat_map(|p| p.y_vars.iter().cloned()).collect();
    if !are_separated(&matrix, &x_all, &y_all)? {
        return Err(separation_error(&matrix, &x_all, &y_all));
    }

    let clauses = transpose_stages(&pairs, &matrix, &x_all, &y_all, cap)?;
    let mut used: BTreeSet<Sym> = all_vars(&prenexed);
    used.extend(all_symbols(&prenexed));
    used.extend(free_vars(&prenexed));
    let outer_x = pairs[0].x_vars.clone();
    let (ex, fa, matrix) = unpack_clauses(clauses, &outer_x, &mut used);

    let mut exists_front = leading;
    exists_front.extend(ex);
    Ok(Formula::quantify(
        Quantifier::Exists,
        &exists_front,
        Formula::quantify(Quantifier::Forall, &fa, matrix),
    ))
}

// ---------------------------------------------------------------------------
// worst-case blow-up family

/// Builds the blow-up pair: the n-fold biconditional sentence
/// `![X]: ?[Y]: (p1(X) <=> q1(Y)) & ... & (pn(X) <=> qn(Y))` and its
/// equivalent transposed form with one existential variable per sign
/// pattern, `2^n` in total.
pub fn gen_blowup(n: usize) -> Result<(Formula, Formula)> {
    gen_blowup_capped(n, 12)
}

pub fn gen_blowup_capped(n: usize, max_n: usize) -> Result<(Formula, Formula)> {
    if n == 0 {
        return Err(Error::BudgetExceeded("blow-up family needs n >= 1".into()));
    }
    if n > max_n {
        return Err(Error::BudgetExceeded(format!(
            "blow-up family with n = {n} exceeds the cap {max_n}"
        )));
    }

    let p = |i: usize, v: &str| Formula::atom(format!("p{i}"), vec![Term::var(v)]);
    let q = |i: usize, v: &str| Formula::atom(format!("q{i}"), vec![Term::var(v)]);

    let mut conjuncts = Vec::with_capacity(n);
    for i in 1..=n {
        conjuncts.push(Formula::iff(p(i, "x"), q(i, "y")));
    }
    let phi = Formula::forall("x", Formula::exists("y", Formula::and_all(conjuncts)));

    // one variable y_<bits> per sign pattern, lexicographic over {0,1}^n
    let patterns: Vec<Vec<bool>> = (0..1usize << n)
        .map(|m| (0..n).map(|i| m >> (n - 1 - i) & 1 == 1).collect())
        .collect();
    let var_of = |bits: &[bool]| {
        let s: String = bits.iter().map(|b| if *b { '1' } else { '0' }).collect();
        format!("y_{s}")
    };

    let mut outer = Vec::with_capacity(patterns.len());
    for bits in &patterns {
        let yv = var_of(bits);
        let mut p_pos = Vec::new();
        let mut p_neg = Vec::new();
        let mut q_pos = Vec::new();
        let mut q_neg = Vec::new();
        for (i, &b) in bits.iter().enumerate() {
            if b {
                p_pos.push(p(i + 1, "x"));
                q_pos.push(q(i + 1, &yv));
            } else {
                p_neg.push(Formula::not(p(i + 1, "x")));
                q_neg.push(Formula::not(q(i + 1, &yv)));
            }
        }
        p_pos.extend(p_neg);
        q_pos.extend(q_neg);
        outer.push(Formula::implies(
            Formula::and_all(p_pos),
            Formula::and_all(q_pos),
        ));
    }
    let mut phi_prime = Formula::forall("x", Formula::and_all(outer));
    for bits in patterns.iter().rev() {
        phi_prime = Formula::exists(var_of(bits), phi_prime);
    }
    Ok((phi, phi_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::{parse_formula, print_tptp};

    #[test]
    fn nnf_examples() {
        let phi = parse_formula("~(p(X) & q(Y))").unwrap();
        assert_eq!(to_nnf(&phi), parse_formula("~p(X) | ~q(Y)").unwrap());

        let iff = parse_formula("p(X) <=> q(Y)").unwrap();
        assert_eq!(
            to_nnf(&iff),
            parse_formula("(~p(X) | q(Y)) & (p(X) | ~q(Y))").unwrap()
        );

        let dneg = parse_formula("~(~p(X))").unwrap();
        assert_eq!(to_nnf(&dneg), parse_formula("p(X)").unwrap());
    }

    #[test]
    fn miniscope_splits_existential_disjunction() {
        let phi = parse_formula("?[X]: (p(X) | q(X))").unwrap();
        let out = miniscope(&phi);
        assert_eq!(
            out,
            parse_formula("(?[X_1]: p(X_1)) | (?[X_2]: q(X_2))").unwrap()
        );
    }

    #[test]
    fn miniscope_moves_past_free_conjunct() {
        let phi = parse_formula("?[X]: (p(X) & q(c))").unwrap();
        let out = miniscope(&phi);
        assert_eq!(out, parse_formula("(?[X]: p(X)) & q(c)").unwrap());
    }

    #[test]
    fn miniscope_splits_universal_conjunction() {
        let phi = parse_formula("![X]: (p(X) & q(X))").unwrap();
        let out = miniscope(&phi);
        assert_eq!(
            out,
            parse_formula("(![X_1]: p(X_1)) & (![X_2]: q(X_2))").unwrap()
        );
    }

    #[test]
    fn prenex_pull_order() {
        let phi = parse_formula("(?[Y]: q(Y)) & (![X]: p(X))").unwrap();
        assert_eq!(
            to_prenex(&phi),
            parse_formula("?[Y]: ![X]: (q(Y) & p(X))").unwrap()
        );

        let duals = parse_formula("(![X]: p(X)) | (![U]: s(U))").unwrap();
        assert_eq!(
            to_prenex(&duals),
            parse_formula("![X, U]: (p(X) | s(U))").unwrap()
        );

        let already = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        assert_eq!(to_prenex(&already), already);
    }

    #[test]
    fn matrix_nf_of_the_biconditional() {
        let psi = parse_formula("p(X) <=> q(Y)").unwrap();
        let x = vec!["x".to_string()];
        let y = vec!["y".to_string()];

        let dnf = matrix_to_nf(&psi, NfKind::Dnf, &x, &y, &[]).unwrap();
        assert_eq!(dnf.count(), 2);
        assert_eq!(dnf.unpruned_count, 2);
        let pos = &dnf.constituents[0];
        assert_eq!(pos.chi, vec![parse_formula("p(X)").unwrap()]);
        assert_eq!(pos.eta, vec![parse_formula("q(Y)").unwrap()]);
        let neg = &dnf.constituents[1];
        assert_eq!(neg.chi, vec![parse_formula("~p(X)").unwrap()]);
        assert_eq!(neg.eta, vec![parse_formula("~q(Y)").unwrap()]);

        let cnf = matrix_to_nf(&psi, NfKind::Cnf, &x, &y, &[]).unwrap();
        assert_eq!(cnf.count(), 2);
        let first = &cnf.constituents[0];
        assert_eq!(first.chi, vec![parse_formula("p(X)").unwrap()]);
        assert_eq!(first.eta, vec![parse_formula("~q(Y)").unwrap()]);
        let second = &cnf.constituents[1];
        assert_eq!(second.chi, vec![parse_formula("~p(X)").unwrap()]);
        assert_eq!(second.eta, vec![parse_formula("q(Y)").unwrap()]);
    }

    #[test]
    fn matrix_nf_single_conjunction() {
        let psi = parse_formula("p(X) & q(Y)").unwrap();
        let dnf = matrix_to_nf(
            &psi,
            NfKind::Dnf,
            &["x".to_string()],
            &["y".to_string()],
            &[],
        )
        .unwrap();
        assert_eq!(dnf.count(), 1);
        assert_eq!(dnf.constituents[0].chi, vec![parse_formula("p(X)").unwrap()]);
        assert_eq!(dnf.constituents[0].eta, vec![parse_formula("q(Y)").unwrap()]);
    }

    #[test]
    fn matrix_nf_rejects_mixed_atoms() {
        let psi = parse_formula("r(X, Y)").unwrap();
        assert!(matches!(
            matrix_to_nf(
                &psi,
                NfKind::Dnf,
                &["x".to_string()],
                &["y".to_string()],
                &[]
            ),
            Err(Error::Separation { .. })
        ));
    }

    #[test]
    fn transpose_block_on_the_worked_example() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        let out = transpose_block(&phi).unwrap();
        // shape: two existentials, one universal, matrix of two clauses
        let (prefix, matrix) = crate::analysis::prefix_blocks(&out).unwrap();
        assert_eq!(prefix.blocks.len(), 2);
        assert_eq!(prefix.blocks[0].0, Quantifier::Exists);
        assert_eq!(prefix.blocks[0].1.len(), 2);
        assert_eq!(prefix.blocks[1].0, Quantifier::Forall);
        assert_eq!(prefix.blocks[1].1, vec!["x".to_string()]);
        let expected = parse_formula("(p(X) | ~q(Y_1)) & (~p(X) | q(Y_2))").unwrap();
        assert_eq!(matrix, expected, "got {}", print_tptp(&matrix));
    }

    #[test]
    fn transpose_block_vacuous_universal() {
        let phi = parse_formula("![X]: ?[Y]: q(Y)").unwrap();
        let out = transpose_block(&phi).unwrap();
        assert_eq!(out, parse_formula("?[Y_1]: ![X]: q(Y_1)").unwrap());
    }

    #[test]
    fn transpose_block_single_group() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) & q(Y))").unwrap();
        let out = transpose_block(&phi).unwrap();
        let (prefix, _) = crate::analysis::prefix_blocks(&out).unwrap();
        assert_eq!(prefix.blocks[0].0, Quantifier::Exists);
        assert_eq!(prefix.blocks[0].1.len(), 1);
    }

    #[test]
    fn transpose_all_is_identity_on_bsr() {
        let phi = parse_formula("?[Z]: ![X]: (r(Z, X) | p(X))").unwrap();
        let out = transpose_all(&phi).unwrap();
        assert_eq!(out, to_prenex(&phi));
    }

    #[test]
    fn transpose_all_single_alternation_matches_block() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        assert_eq!(transpose_all(&phi).unwrap(), transpose_block(&phi).unwrap());
    }

    #[test]
    fn blowup_counts() {
        let (_, prime1) = gen_blowup(1).unwrap();
        let (p1, _) = crate::analysis::prefix_blocks(&prime1).unwrap();
        assert_eq!(p1.blocks[0].0, Quantifier::Exists);
        assert_eq!(p1.blocks[0].1.len(), 2);

        let (_, prime2) = gen_blowup(2).unwrap();
        let (p2, _) = crate::analysis::prefix_blocks(&prime2).unwrap();
        assert_eq!(p2.blocks[0].1.len(), 4);
        assert_eq!(
            p2.blocks[0].1,
            vec!["y_00", "y_01", "y_10", "y_11"]
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>()
        );

        assert!(gen_blowup(0).is_err());
        assert!(gen_blowup_capped(20, 12).is_err());
    }
}
