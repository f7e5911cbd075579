//! Abstract syntax for first-order formulas with equality, together with the
//! basic syntactic operations everything else builds on: free variables,
//! capture-checked simultaneous substitution, renaming apart, the length
//! measure, and signature extraction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Symbol names. Variables are kept lowercase internally; the TPTP layer maps
/// case at the boundary.
pub type Sym = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Sym),
    Const(Sym),
    App(Sym, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Sym>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<Sym>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(function: impl Into<Sym>, args: Vec<Term>) -> Term {
        Term::App(function.into(), args)
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    fn substitute(&self, sigma: &BTreeMap<Sym, Term>) -> Term {
        match self {
            Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(sigma)).collect())
            }
        }
    }

    fn len(&self) -> u64 {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::len).sum::<u64>(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Sym, Vec<Term>),
    Equal(Term, Term),
    Truth,
    Falsity,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Sym, Box<Formula>),
    Exists(Sym, Box<Formula>),
}

/// Quantifier polarity of one prefix block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// A prenex quantifier prefix as maximal same-polarity blocks. Adjacent
/// blocks always alternate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuantifierPrefix {
    pub blocks: Vec<(Quantifier, Vec<Sym>)>,
}

impl QuantifierPrefix {
    /// Normalizes by merging same-polarity neighbours and dropping empty blocks.
    pub fn normalized(blocks: Vec<(Quantifier, Vec<Sym>)>) -> Self {
        let mut out: Vec<(Quantifier, Vec<Sym>)> = Vec::new();
        for (q, vars) in blocks {
            if vars.is_empty() {
                continue;
            }
            match out.last_mut() {
                Some((lq, lv)) if *lq == q => lv.extend(vars),
                _ => out.push((q, vars)),
            }
        }
        QuantifierPrefix { blocks: out }
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Re-attaches the prefix in front of a matrix.
    pub fn apply(&self, matrix: Formula) -> Formula {
        let mut phi = matrix;
        for (q, vars) in self.blocks.iter().rev() {
            for v in vars.iter().rev() {
                phi = match q {
                    Quantifier::Forall => Formula::forall(v.clone(), phi),
                    Quantifier::Exists => Formula::exists(v.clone(), phi),
                };
            }
        }
        phi
    }
}

impl Formula {
    pub fn atom(predicate: impl Into<Sym>, args: Vec<Term>) -> Formula {
        Formula::Atom(predicate.into(), args)
    }

    pub fn equal(left: Term, right: Term) -> Formula {
        Formula::Equal(left, right)
    }

    pub fn not(phi: Formula) -> Formula {
        Formula::Not(Box::new(phi))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn implies(premise: Formula, conclusion: Formula) -> Formula {
        Formula::Implies(Box::new(premise), Box::new(conclusion))
    }

    pub fn iff(left: Formula, right: Formula) -> Formula {
        Formula::Iff(Box::new(left), Box::new(right))
    }

    pub fn forall(var: impl Into<Sym>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<Sym>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// Left fold of a conjunction; the empty conjunction is truth.
    pub fn and_all(mut conjuncts: Vec<Formula>) -> Formula {
        if conjuncts.is_empty() {
            return Formula::Truth;
        }
        let first = conjuncts.remove(0);
        conjuncts.into_iter().fold(first, Formula::and)
    }

    /// Left fold of a disjunction; the empty disjunction is falsity.
    pub fn or_all(mut disjuncts: Vec<Formula>) -> Formula {
        if disjuncts.is_empty() {
            return Formula::Falsity;
        }
        let first = disjuncts.remove(0);
        disjuncts.into_iter().fold(first, Formula::or)
    }

    pub fn quantify(q: Quantifier, vars: &[Sym], body: Formula) -> Formula {
        let mut phi = body;
        for v in vars.iter().rev() {
            phi = match q {
                Quantifier::Forall => Formula::forall(v.clone(), phi),
                Quantifier::Exists => Formula::exists(v.clone(), phi),
            };
        }
        phi
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => false,
            _ => self.children().iter().all(|c| c.is_quantifier_free()),
        }
    }

    fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(..) | Formula::Equal(..) | Formula::Truth | Formula::Falsity => vec![],
            Formula::Not(a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => vec![a, b],
            Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
        }
    }

    /// Node count of the formula tree, used for transformation budgets.
    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }
}

/// Variables with a free occurrence in `phi`.
pub fn free_vars(phi: &Formula) -> BTreeSet<Sym> {
    fn walk(phi: &Formula, bound: &mut Vec<Sym>, out: &mut BTreeSet<Sym>) {
        match phi {
            Formula::Atom(_, args) => {
                for t in args {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Equal(l, r) => {
                for v in l.vars().into_iter().chain(r.vars()) {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Truth | Formula::Falsity => {}
            Formula::Not(a) => walk(a, bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                walk(a, bound, out);
                walk(b, bound, out);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(v.clone());
                walk(a, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(phi, &mut Vec::new(), &mut out);
    out
}

/// Every variable name occurring in `phi`, free or bound.
pub fn all_vars(phi: &Formula) -> BTreeSet<Sym> {
    let mut out = BTreeSet::new();
    fn walk(phi: &Formula, out: &mut BTreeSet<Sym>) {
        match phi {
            Formula::Atom(_, args) => {
                for t in args {
                    out.extend(t.vars());
                }
            }
            Formula::Equal(l, r) => {
                out.extend(l.vars());
                out.extend(r.vars());
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                out.insert(v.clone());
                walk(a, out);
            }
            _ => {
                for c in phi.children() {
                    walk(c, out);
                }
            }
        }
    }
    walk(phi, &mut out);
    out
}

/// Every non-variable symbol name occurring in `phi` (predicates, functions,
/// constants).
pub fn all_symbols(phi: &Formula) -> BTreeSet<Sym> {
    fn term(t: &Term, out: &mut BTreeSet<Sym>) {
        match t {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::App(f, args) => {
                out.insert(f.clone());
                for a in args {
                    term(a, out);
                }
            }
        }
    }
    fn walk(phi: &Formula, out: &mut BTreeSet<Sym>) {
        match phi {
            Formula::Atom(p, args) => {
                out.insert(p.clone());
                for a in args {
                    term(a, out);
                }
            }
            Formula::Equal(l, r) => {
                term(l, out);
                term(r, out);
            }
            _ => {
                for c in phi.children() {
                    walk(c, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(phi, &mut out);
    out
}

/// Simultaneous substitution of free variable occurrences. The keys of
/// `sigma` must be pairwise distinct (guaranteed by the map) and the formula
/// must not capture any variable of an image term.
pub fn substitute(phi: &Formula, sigma: &BTreeMap<Sym, Term>) -> Result<Formula> {
    fn walk(
        phi: &Formula,
        sigma: &BTreeMap<Sym, Term>,
        bound: &mut Vec<Sym>,
    ) -> Result<Formula> {
        Ok(match phi {
            Formula::Atom(p, args) => {
                let args = subst_terms(args, sigma, bound)?;
                Formula::Atom(p.clone(), args)
            }
            Formula::Equal(l, r) => Formula::Equal(
                subst_term(l, sigma, bound)?,
                subst_term(r, sigma, bound)?,
            ),
            Formula::Truth => Formula::Truth,
            Formula::Falsity => Formula::Falsity,
            Formula::Not(a) => Formula::not(walk(a, sigma, bound)?),
            Formula::And(a, b) => Formula::and(walk(a, sigma, bound)?, walk(b, sigma, bound)?),
            Formula::Or(a, b) => Formula::or(walk(a, sigma, bound)?, walk(b, sigma, bound)?),
            Formula::Implies(a, b) => {
                Formula::implies(walk(a, sigma, bound)?, walk(b, sigma, bound)?)
            }
            Formula::Iff(a, b) => Formula::iff(walk(a, sigma, bound)?, walk(b, sigma, bound)?),
            Formula::Forall(v, a) => {
                bound.push(v.clone());
                let body = walk(a, sigma, bound)?;
                bound.pop();
                Formula::forall(v.clone(), body)
            }
            Formula::Exists(v, a) => {
                bound.push(v.clone());
                let body = walk(a, sigma, bound)?;
                bound.pop();
                Formula::exists(v.clone(), body)
            }
        })
    }

    fn subst_terms(
        args: &[Term],
        sigma: &BTreeMap<Sym, Term>,
        bound: &[Sym],
    ) -> Result<Vec<Term>> {
        args.iter().map(|t| subst_term(t, sigma, bound)).collect()
    }

    // Replaces a free occurrence; a key shadowed by a binder stays untouched,
    // and an image variable already bound at this occurrence is a capture.
    fn subst_term(t: &Term, sigma: &BTreeMap<Sym, Term>, bound: &[Sym]) -> Result<Term> {
        match t {
            Term::Var(v) => {
                if bound.contains(v) {
                    return Ok(t.clone());
                }
                match sigma.get(v) {
                    None => Ok(t.clone()),
                    Some(image) => {
                        for iv in image.vars() {
                            if bound.contains(&iv) {
                                return Err(Error::Capture { variable: iv });
                            }
                        }
                        Ok(image.clone())
                    }
                }
            }
            Term::Const(_) => Ok(t.clone()),
            Term::App(f, args) => Ok(Term::App(f.clone(), subst_terms(args, sigma, bound)?)),
        }
    }

    walk(phi, sigma, &mut Vec::new())
}

/// Substitution of a single variable.
pub fn substitute_one(phi: &Formula, var: &str, term: Term) -> Result<Formula> {
    let mut sigma = BTreeMap::new();
    sigma.insert(var.to_string(), term);
    substitute(phi, &sigma)
}

/// Picks the least `base_<n>` (n = 1, 2, ...) not contained in `used` and
/// records it there. `base` itself is never returned.
pub fn fresh_name(base: &str, used: &mut BTreeSet<Sym>) -> Sym {
    let mut n = 1usize;
    loop {
        let candidate = format!("{base}_{n}");
        if !used.contains(&candidate) {
            used.insert(candidate.clone());
            return candidate;
        }
        n += 1;
    }
}

/// Renames bound variables so that all binders are pairwise distinct and
/// disjoint from free variables, from every symbol of the formula, and from
/// `reserved`. Deterministic: binders are visited left to right and keep
/// their name whenever it is still unclaimed.
pub fn rename_apart(phi: &Formula, reserved: &BTreeSet<Sym>) -> Formula {
    let mut taken: BTreeSet<Sym> = reserved.clone();
    taken.extend(free_vars(phi));
    taken.extend(all_symbols(phi));
    let mut avoid: BTreeSet<Sym> = taken.clone();
    avoid.extend(all_vars(phi));

    fn walk(
        phi: &Formula,
        renaming: &mut Vec<(Sym, Sym)>,
        taken: &mut BTreeSet<Sym>,
        avoid: &mut BTreeSet<Sym>,
    ) -> Formula {
        match phi {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|t| rename_term(t, renaming)).collect())
            }
            Formula::Equal(l, r) => {
                Formula::Equal(rename_term(l, renaming), rename_term(r, renaming))
            }
            Formula::Truth => Formula::Truth,
            Formula::Falsity => Formula::Falsity,
            Formula::Not(a) => Formula::not(walk(a, renaming, taken, avoid)),
            Formula::And(a, b) => Formula::and(
                walk(a, renaming, taken, avoid),
                walk(b, renaming, taken, avoid),
            ),
            Formula::Or(a, b) => Formula::or(
                walk(a, renaming, taken, avoid),
                walk(b, renaming, taken, avoid),
            ),
            Formula::Implies(a, b) => Formula::implies(
                walk(a, renaming, taken, avoid),
                walk(b, renaming, taken, avoid),
            ),
            Formula::Iff(a, b) => Formula::iff(
                walk(a, renaming, taken, avoid),
                walk(b, renaming, taken, avoid),
            ),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let name = if taken.contains(v) {
                    let mut used = avoid.clone();
                    let fresh = fresh_name(v, &mut used);
                    avoid.insert(fresh.clone());
                    fresh
                } else {
                    v.clone()
                };
                taken.insert(name.clone());
                avoid.insert(name.clone());
                renaming.push((v.clone(), name.clone()));
                let body = walk(a, renaming, taken, avoid);
                renaming.pop();
                match phi {
                    Formula::Forall(..) => Formula::forall(name, body),
                    _ => Formula::exists(name, body),
                }
            }
        }
    }

    fn rename_term(t: &Term, renaming: &[(Sym, Sym)]) -> Term {
        match t {
            Term::Var(v) => {
                // innermost binding wins
                for (from, to) in renaming.iter().rev() {
                    if from == v {
                        return Term::Var(to.clone());
                    }
                }
                t.clone()
            }
            Term::Const(_) => t.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| rename_term(a, renaming)).collect())
            }
        }
    }

    walk(phi, &mut Vec::new(), &mut taken, &mut avoid)
}

/// Length of a formula: one per variable, constant, function, predicate and
/// n-ary connective occurrence, two per quantifier, with implications and
/// equivalences measured through their disjunctive expansions.
pub fn formula_len(phi: &Formula) -> u64 {
    match phi {
        Formula::Atom(_, args) => 1 + args.iter().map(Term::len).sum::<u64>(),
        Formula::Equal(l, r) => 1 + l.len() + r.len(),
        Formula::Truth | Formula::Falsity => 1,
        Formula::Not(a) => 1 + formula_len(a),
        Formula::And(a, b) | Formula::Or(a, b) => 1 + formula_len(a) + formula_len(b),
        // len(a -> b) = len(~a | b)
        Formula::Implies(a, b) => 2 + formula_len(a) + formula_len(b),
        // len(a <-> b) = len((~a | b) & (a | ~b))
        Formula::Iff(a, b) => 5 + 2 * formula_len(a) + 2 * formula_len(b),
        Formula::Forall(_, a) | Formula::Exists(_, a) => 2 + formula_len(a),
    }
}

/// Every atom and equality occurrence, in left-to-right order.
pub fn atoms(phi: &Formula) -> Vec<Formula> {
    fn walk(phi: &Formula, out: &mut Vec<Formula>) {
        match phi {
            Formula::Atom(..) | Formula::Equal(..) => out.push(phi.clone()),
            _ => {
                for c in phi.children() {
                    walk(c, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(phi, &mut out);
    out
}

/// Constant symbols occurring in `phi`.
pub fn consts(phi: &Formula) -> BTreeSet<Sym> {
    fn term(t: &Term, out: &mut BTreeSet<Sym>) {
        match t {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::App(f, args) => {
                if args.is_empty() {
                    out.insert(f.clone());
                }
                for a in args {
                    term(a, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for a in atoms(phi) {
        match a {
            Formula::Atom(_, args) => {
                for t in &args {
                    term(t, &mut out);
                }
            }
            Formula::Equal(l, r) => {
                term(&l, &mut out);
                term(&r, &mut out);
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Predicate and function symbols with arities, plus constants. Equality is
/// distinguished and never appears here.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub predicates: BTreeMap<Sym, usize>,
    pub functions: BTreeMap<Sym, usize>,
    pub constants: BTreeSet<Sym>,
}

impl Signature {
    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty() && self.functions.is_empty() && self.constants.is_empty()
    }

    pub fn has_nonconstant_functions(&self) -> bool {
        !self.functions.is_empty()
    }

    fn claim(&mut self, symbol: &str, role: &str) -> Result<()> {
        let as_pred = self.predicates.contains_key(symbol);
        let as_fn = self.functions.contains_key(symbol);
        let as_const = self.constants.contains(symbol);
        let clash = match role {
            "predicate" => as_fn || as_const,
            "function" => as_pred || as_const,
            _ => as_pred || as_fn,
        };
        if clash {
            return Err(Error::ArityConflict {
                symbol: symbol.to_string(),
                detail: format!("already used in another role than {role}"),
            });
        }
        Ok(())
    }

    pub fn add_predicate(&mut self, symbol: &str, arity: usize) -> Result<()> {
        self.claim(symbol, "predicate")?;
        if let Some(&prev) = self.predicates.get(symbol) {
            if prev != arity {
                return Err(Error::ArityConflict {
                    symbol: symbol.to_string(),
                    detail: format!("predicate arity {prev} vs {arity}"),
                });
            }
        }
        self.predicates.insert(symbol.to_string(), arity);
        Ok(())
    }

    pub fn add_function(&mut self, symbol: &str, arity: usize) -> Result<()> {
        if arity == 0 {
            return self.add_constant(symbol);
        }
        self.claim(symbol, "function")?;
        if let Some(&prev) = self.functions.get(symbol) {
            if prev != arity {
                return Err(Error::ArityConflict {
                    symbol: symbol.to_string(),
                    detail: format!("function arity {prev} vs {arity}"),
                });
            }
        }
        self.functions.insert(symbol.to_string(), arity);
        Ok(())
    }

    pub fn add_constant(&mut self, symbol: &str) -> Result<()> {
        self.claim(symbol, "constant")?;
        self.constants.insert(symbol.to_string());
        Ok(())
    }

    pub fn merge(&self, other: &Signature) -> Result<Signature> {
        let mut out = self.clone();
        for (p, &a) in &other.predicates {
            out.add_predicate(p, a)?;
        }
        for (f, &a) in &other.functions {
            out.add_function(f, a)?;
        }
        for c in &other.constants {
            out.add_constant(c)?;
        }
        Ok(out)
    }

    /// All symbol names claimed by this signature.
    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut out: BTreeSet<Sym> = self.predicates.keys().cloned().collect();
        out.extend(self.functions.keys().cloned());
        out.extend(self.constants.iter().cloned());
        out
    }
}

/// Collects the signature of a formula, failing on arity conflicts.
pub fn extract_signature(phi: &Formula) -> Result<Signature> {
    fn term(t: &Term, sig: &mut Signature) -> Result<()> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => sig.add_constant(c),
            Term::App(f, args) => {
                sig.add_function(f, args.len())?;
                for a in args {
                    term(a, sig)?;
                }
                Ok(())
            }
        }
    }
    fn walk(phi: &Formula, sig: &mut Signature) -> Result<()> {
        match phi {
            Formula::Atom(p, args) => {
                sig.add_predicate(p, args.len())?;
                for a in args {
                    term(a, sig)?;
                }
                Ok(())
            }
            Formula::Equal(l, r) => {
                term(l, sig)?;
                term(r, sig)
            }
            _ => {
                for c in phi.children() {
                    walk(c, sig)?;
                }
                Ok(())
            }
        }
    }
    let mut sig = Signature::default();
    walk(phi, &mut sig)?;
    Ok(sig)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Formula {
    /// Compact debugging form; the TPTP printer is the exchange format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) if args.is_empty() => write!(f, "{p}"),
            Formula::Atom(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Equal(l, r) => write!(f, "{l} = {r}"),
            Formula::Truth => write!(f, "$true"),
            Formula::Falsity => write!(f, "$false"),
            Formula::Not(a) => write!(f, "~({a})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <=> {b})"),
            Formula::Forall(v, a) => write!(f, "![{v}]: {a}"),
            Formula::Exists(v, a) => write!(f, "?[{v}]: {a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &str) -> Formula {
        Formula::atom("p", vec![Term::var(v)])
    }

    fn q(v: &str) -> Formula {
        Formula::atom("q", vec![Term::var(v)])
    }

    #[test]
    fn free_vars_basics() {
        let pxy = Formula::atom("p", vec![Term::var("x"), Term::var("y")]);
        assert_eq!(
            free_vars(&pxy),
            ["x", "y"].iter().map(|s| s.to_string()).collect()
        );

        let phi = Formula::forall("x", Formula::atom("p", vec![Term::var("x"), Term::var("y")]));
        assert_eq!(free_vars(&phi), ["y".to_string()].into_iter().collect());

        let sentence = Formula::forall("x", Formula::exists("y", Formula::iff(p("x"), q("y"))));
        assert!(free_vars(&sentence).is_empty());
    }

    #[test]
    fn simultaneous_substitution_swaps() {
        // p(x,y)[x/f(y), y/g(x)] = p(f(y), g(x))
        let pxy = Formula::atom("p", vec![Term::var("x"), Term::var("y")]);
        let mut sigma = BTreeMap::new();
        sigma.insert("x".to_string(), Term::app("f", vec![Term::var("y")]));
        sigma.insert("y".to_string(), Term::app("g", vec![Term::var("x")]));
        let out = substitute(&pxy, &sigma).unwrap();
        assert_eq!(
            out,
            Formula::atom(
                "p",
                vec![
                    Term::app("f", vec![Term::var("y")]),
                    Term::app("g", vec![Term::var("x")]),
                ]
            )
        );
    }

    #[test]
    fn substitution_identity_and_bound() {
        let px = p("x");
        assert_eq!(substitute(&px, &BTreeMap::new()).unwrap(), px);

        let phi = Formula::forall(
            "z",
            Formula::atom("q", vec![Term::var("z"), Term::var("x")]),
        );
        let out = substitute_one(&phi, "x", Term::constant("c")).unwrap();
        assert_eq!(
            out,
            Formula::forall(
                "z",
                Formula::atom("q", vec![Term::var("z"), Term::constant("c")])
            )
        );
    }

    #[test]
    fn substitution_capture_detected() {
        let phi = Formula::forall(
            "y",
            Formula::atom("q", vec![Term::var("y"), Term::var("x")]),
        );
        let err = substitute_one(&phi, "x", Term::app("f", vec![Term::var("y")])).unwrap_err();
        assert_eq!(
            err,
            Error::Capture {
                variable: "y".to_string()
            }
        );
    }

    #[test]
    fn substitute_identity_map_is_identity() {
        let phi = Formula::forall("x", Formula::or(p("x"), q("y")));
        let mut sigma = BTreeMap::new();
        sigma.insert("y".to_string(), Term::var("y"));
        assert_eq!(substitute(&phi, &sigma).unwrap(), phi);
    }

    #[test]
    fn substitute_removes_free_var() {
        let phi = Formula::and(p("x"), q("y"));
        let out = substitute_one(&phi, "x", Term::constant("c")).unwrap();
        assert_eq!(free_vars(&out), ["y".to_string()].into_iter().collect());
    }

    #[test]
    fn rename_apart_forces_distinct_binders() {
        let phi = Formula::and(
            Formula::forall("x", p("x")),
            Formula::forall("x", q("x")),
        );
        let out = rename_apart(&phi, &BTreeSet::new());
        assert_eq!(
            out,
            Formula::and(
                Formula::forall("x", p("x")),
                Formula::forall("x_1", q("x_1")),
            )
        );
    }

    #[test]
    fn rename_apart_already_apart_is_identity() {
        let phi = Formula::forall("x", Formula::exists("y", Formula::iff(p("x"), q("y"))));
        let out = rename_apart(&phi, &BTreeSet::new());
        assert_eq!(out, phi);
        // idempotent
        assert_eq!(rename_apart(&out, &BTreeSet::new()), out);
    }

    #[test]
    fn rename_apart_respects_reserved() {
        let phi = Formula::exists("y", Formula::atom("r", vec![Term::var("y")]));
        let reserved = ["y".to_string()].into_iter().collect();
        let out = rename_apart(&phi, &reserved);
        assert_eq!(
            out,
            Formula::exists("y_1", Formula::atom("r", vec![Term::var("y_1")]))
        );
    }

    #[test]
    fn length_measure() {
        assert_eq!(formula_len(&p("x")), 2);
        assert_eq!(formula_len(&Formula::not(p("x"))), 3);
        assert_eq!(formula_len(&Formula::implies(p("x"), q("y"))), 6);
        assert_eq!(
            formula_len(&Formula::implies(p("x"), q("y"))),
            formula_len(&Formula::or(Formula::not(p("x")), q("y")))
        );
        let a = Formula::iff(p("x"), q("y"));
        let expansion = Formula::and(
            Formula::or(Formula::not(p("x")), q("y")),
            Formula::or(p("x"), Formula::not(q("y"))),
        );
        assert_eq!(formula_len(&a), formula_len(&expansion));
    }

    #[test]
    fn atoms_and_consts() {
        let phi = Formula::or(
            Formula::forall("x", Formula::atom("p", vec![Term::var("x"), Term::constant("c")])),
            Formula::atom("q", vec![Term::constant("d")]),
        );
        assert_eq!(
            consts(&phi),
            ["c".to_string(), "d".to_string()].into_iter().collect()
        );
        let iff = Formula::iff(p("x"), q("y"));
        assert_eq!(atoms(&iff), vec![p("x"), q("y")]);
    }

    #[test]
    fn signature_of_pure_equality_is_empty() {
        let phi = Formula::forall(
            "x",
            Formula::exists("y", Formula::equal(Term::var("x"), Term::var("y"))),
        );
        let sig = extract_signature(&phi).unwrap();
        assert!(sig.is_empty());
    }

    #[test]
    fn signature_arity_conflict() {
        let phi = Formula::and(
            p("x"),
            Formula::atom("p", vec![Term::var("x"), Term::var("y")]),
        );
        assert!(matches!(
            extract_signature(&phi),
            Err(Error::ArityConflict { .. })
        ));
    }
}
