//! Small-model cardinality bounds and the range-restricting constraint
//! emitters: range-restricted Skolemization for single-block sentences, the
//! per-block and nested constraints for several alternations, and the
//! open-formula variant with parameter-dependent function symbols.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use crate::analysis::{are_separated, classify, prefix_blocks};
use crate::error::{Error, Result};
use crate::syntax::{
    all_symbols, all_vars, atoms, consts, free_vars, fresh_name, substitute, Formula,
    Quantifier, QuantifierPrefix, Sym, Term,
};
use crate::transform::{matrix_to_nf, to_prenex, NfKind, NormalFormMatrix};

/// Bounds and constraint sizes above this are reported as overflow instead
/// of being materialized.
pub const DEFAULT_MAGNITUDE_CAP: u64 = 1_000_000_000;

/// A natural number that may have exceeded the magnitude cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Magnitude {
    Finite(u64),
    Overflow,
}

impl Magnitude {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Magnitude::Finite(v) => Some(*v),
            Magnitude::Overflow => None,
        }
    }

    fn from_big(value: &BigUint, cap: u64) -> Magnitude {
        if *value > BigUint::from(cap) {
            Magnitude::Overflow
        } else {
            let digits = value.to_u64_digits();
            Magnitude::Finite(digits.first().copied().unwrap_or(0))
        }
    }
}

/// Central binomial coefficient `C(m, floor(m/2))`, the Sperner bound on an
/// antichain in the subset lattice of an m-element set.
pub fn binom_central(m: u64) -> BigUint {
    let k = m / 2;
    let mut result = BigUint::from(1u32);
    for i in 0..k {
        result = result * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    result
}

/// The iterated exponential `twoup(0, m) = m`, `twoup(k+1, m) = 2^twoup(k, m)`,
/// collapsed to `Overflow` past the cap.
pub fn twoup(k: u64, m: u64, cap: u64) -> Magnitude {
    let cap_big = BigUint::from(cap);
    let mut value = BigUint::from(m);
    for _ in 0..k {
        // an exponent past 10^4 exceeds any u64 cap; the tower is monotone,
        // so exceeding the cap once settles the answer
        if value > BigUint::from(10_000u32) {
            return Magnitude::Overflow;
        }
        let exp = value.to_u64_digits().first().copied().unwrap_or(0) as u32;
        value = BigUint::from(2u32).pow(exp);
        if value > cap_big {
            return Magnitude::Overflow;
        }
    }
    Magnitude::from_big(&value, cap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRegime {
    SingleBlock,
    StrongSeparation,
    GeneralNested,
}

impl BoundRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundRegime::SingleBlock => "single-block",
            BoundRegime::StrongSeparation => "strong-separation",
            BoundRegime::GeneralNested => "general-nested",
        }
    }
}

/// The record of normal-form sizes and the resulting domain-size bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub m_dnf: usize,
    pub m_cnf: usize,
    pub m_dnf_unpruned: usize,
    pub m_cnf_unpruned: usize,
    pub kappa_cnf: Magnitude,
    pub m_star: usize,
    pub per_block: Vec<(usize, Magnitude)>,
    pub domain_bound: Magnitude,
    pub regime: BoundRegime,
}

// ---------------------------------------------------------------------------
// prefix decomposition shared by every emitter

/// A separated sentence split into its leading existential block, the
/// universal/existential alternation pairs, and the matrix with the leading
/// block already Skolemized to fresh constants.
pub(crate) struct SfParts {
    pub leading: Vec<Sym>,
    pub leading_consts: Vec<Sym>,
    pub pairs: Vec<(Vec<Sym>, Vec<Sym>)>,
    pub matrix: Formula,
    pub used: BTreeSet<Sym>,
}

impl SfParts {
    pub fn x_all(&self) -> Vec<Sym> {
        self.pairs.iter().flat_map(|(x, _)| x.iter().cloned()).collect()
    }

    pub fn y_all(&self) -> Vec<Sym> {
        self.pairs.iter().flat_map(|(_, y)| y.iter().cloned()).collect()
    }
}

pub(crate) fn decompose_sf(phi: &Formula) -> Result<SfParts> {
    let fv = free_vars(phi);
    if !fv.is_empty() {
        return Err(Error::NonSentence(fv.into_iter().collect()));
    }
    let label = classify(phi)?;
    if !label.is_sf() {
        return Err(Error::NotSf(
            "universally and existentially quantified variables are not separated".into(),
        ));
    }
    let prenexed = to_prenex(phi);
    let (prefix, matrix) = prefix_blocks(&prenexed)?;

    let mut leading: Vec<Sym> = Vec::new();
    let mut pairs: Vec<(Vec<Sym>, Vec<Sym>)> = Vec::new();
    for (i, (q, vars)) in prefix.blocks.iter().enumerate() {
        match q {
            Quantifier::Exists if i == 0 => leading.extend(vars.iter().cloned()),
            Quantifier::Forall => pairs.push((vars.clone(), Vec::new())),
            Quantifier::Exists => {
                pairs
                    .last_mut()
                    .expect("normalized prefix alternates")
                    .1 = vars.clone();
            }
        }
    }

    let mut used: BTreeSet<Sym> = all_vars(&prenexed);
    used.extend(all_symbols(&prenexed));

    // leading existential quantifiers become fresh constants
    let mut leading_consts = Vec::with_capacity(leading.len());
    let mut sigma = BTreeMap::new();
    for z in &leading {
        let name = fresh_name("d", &mut used);
        sigma.insert(z.clone(), Term::constant(name.clone()));
        leading_consts.push(name);
    }
    let matrix = substitute(&matrix, &sigma)?;

    Ok(SfParts {
        leading,
        leading_consts,
        pairs,
        matrix,
        used,
    })
}

fn nf_counts(
    parts: &SfParts,
) -> Result<(NormalFormMatrix, NormalFormMatrix)> {
    let x = parts.x_all();
    let y = parts.y_all();
    let dnf = matrix_to_nf(&parts.matrix, NfKind::Dnf, &x, &y, &[])?;
    let cnf = matrix_to_nf(&parts.matrix, NfKind::Cnf, &x, &y, &[])?;
    Ok((dnf, cnf))
}

fn y_blocks_pairwise_separated(parts: &SfParts) -> bool {
    let blocks: Vec<&Vec<Sym>> = parts.pairs.iter().map(|(_, y)| y).collect();
    for atom in atoms(&parts.matrix) {
        let vars = free_vars(&atom);
        let touched = blocks
            .iter()
            .filter(|b| b.iter().any(|v| vars.contains(v)))
            .count();
        if touched > 1 {
            return false;
        }
    }
    true
}

/// Computes the small-model bound of a separated sentence under the regime
/// its prefix shape and separation structure select.
pub fn compute_bounds(phi: &Formula, cap: u64) -> Result<Bounds> {
    let parts = decompose_sf(phi)?;
    let (dnf, cnf) = nf_counts(&parts)?;
    let m_dnf = dnf.count() as u64;
    let m_cnf = cnf.count() as u64;
    let kappa_cnf_big = binom_central(m_cnf);
    let kappa_cnf = Magnitude::from_big(&kappa_cnf_big, cap);
    let m_star = match kappa_cnf {
        Magnitude::Finite(k) => m_dnf.min(k),
        Magnitude::Overflow => m_dnf,
    };

    let const_count = consts(&parts.matrix).len() as u64;
    let n = parts.pairs.len();

    let (regime, per_block, domain_bound) = if n <= 1 {
        let y_len = parts.pairs.first().map(|(_, y)| y.len()).unwrap_or(0) as u64;
        let bound = m_star
            .checked_mul(y_len)
            .and_then(|m| const_count.checked_add(m))
            .map(|b| b.max(1));
        let per_block = if n == 1 {
            vec![(1usize, Magnitude::Finite(m_star))]
        } else {
            Vec::new()
        };
        let bound = match bound {
            Some(b) if b <= cap => Magnitude::Finite(b),
            _ => Magnitude::Overflow,
        };
        (BoundRegime::SingleBlock, per_block, bound)
    } else if y_blocks_pairwise_separated(&parts) {
        let kappa_dnf = binom_central(m_dnf);
        let mut total = BigUint::from(const_count);
        let mut per_block = Vec::new();
        for (k, (_, y)) in parts.pairs.iter().enumerate() {
            let width = if k + 1 < n {
                kappa_dnf.clone()
            } else {
                BigUint::from(m_dnf)
            };
            per_block.push((k + 1, Magnitude::from_big(&width, cap)));
            total += width * BigUint::from(y.len() as u64);
        }
        if total == BigUint::from(0u32) {
            total = BigUint::from(1u32);
        }
        (
            BoundRegime::StrongSeparation,
            per_block,
            Magnitude::from_big(&total, cap),
        )
    } else {
        // block n-k needs the product of twoup(l, m_dnf) for l = k .. n-1
        let mut total = Some(BigUint::from(const_count));
        let mut per_block: Vec<(usize, Magnitude)> = Vec::new();
        for k in 0..n {
            let mut product: Option<BigUint> = Some(BigUint::from(1u32));
            for l in k..n {
                match twoup(l as u64, m_dnf, cap) {
                    Magnitude::Finite(v) => {
                        product = product.map(|p| p * BigUint::from(v));
                    }
                    Magnitude::Overflow => product = None,
                }
            }
            let block_index = n - k;
            let y_len = parts.pairs[block_index - 1].1.len() as u64;
            match &product {
                Some(p) => {
                    per_block.push((block_index, Magnitude::from_big(p, cap)));
                    total = total.map(|t| t + p * BigUint::from(y_len));
                }
                None => {
                    per_block.push((block_index, Magnitude::Overflow));
                    if y_len > 0 {
                        total = None;
                    }
                }
            }
        }
        per_block.sort_by_key(|(k, _)| *k);
        let bound = match total {
            Some(t) => {
                let t = if t == BigUint::from(0u32) {
                    BigUint::from(1u32)
                } else {
                    t
                };
                Magnitude::from_big(&t, cap)
            }
            None => Magnitude::Overflow,
        };
        (BoundRegime::GeneralNested, per_block, bound)
    };

    Ok(Bounds {
        m_dnf: dnf.count(),
        m_cnf: cnf.count(),
        m_dnf_unpruned: dnf.unpruned_count,
        m_cnf_unpruned: cnf.unpruned_count,
        kappa_cnf,
        m_star: m_star as usize,
        per_block,
        domain_bound,
        regime,
    })
}

// ---------------------------------------------------------------------------
// constraint emitters

fn require_single_block(parts: &SfParts) -> Result<(Vec<Sym>, Vec<Sym>)> {
    if parts.pairs.len() > 1 {
        return Err(Error::NotSf(
            "expected a single universal/existential alternation".into(),
        ));
    }
    Ok(parts
        .pairs
        .first()
        .cloned()
        .unwrap_or((Vec::new(), Vec::new())))
}

fn single_block_m_star(parts: &SfParts, x: &[Sym], y: &[Sym]) -> Result<(usize, usize)> {
    let dnf = matrix_to_nf(&parts.matrix, NfKind::Dnf, x, y, &[])?;
    let cnf = matrix_to_nf(&parts.matrix, NfKind::Cnf, x, y, &[])?;
    let kappa = binom_central(cnf.count() as u64);
    let m_star = if kappa > BigUint::from(dnf.count() as u64) {
        dnf.count()
    } else {
        kappa.to_u64_digits().first().copied().unwrap_or(0) as usize
    };
    Ok((dnf.count(), m_star))
}

/// Fresh constant named `c_<l>_<i>` (avoiding collisions with `used`).
fn constraint_const(l: usize, i: usize, used: &mut BTreeSet<Sym>) -> Sym {
    let base = format!("c_{l}_{i}");
    if used.insert(base.clone()) {
        base
    } else {
        fresh_name(&base, used)
    }
}

fn indexed_name(base: String, used: &mut BTreeSet<Sym>) -> Sym {
    if used.insert(base.clone()) {
        base
    } else {
        fresh_name(&base, used)
    }
}

/// Conjoins the m*-way range restriction: every existential tuple must equal
/// one of m* tuples of fresh constants. Leading existential quantifiers are
/// replaced by fresh constants first.
pub fn range_restrict(phi: &Formula) -> Result<Formula> {
    let mut parts = decompose_sf(phi)?;
    let (x, y) = require_single_block(&parts)?;
    let (_, m_star) = single_block_m_star(&parts, &x, &y)?;

    let mut disjuncts = Vec::with_capacity(m_star);
    for l in 1..=m_star {
        let mut eqs = Vec::with_capacity(y.len());
        for (i, yi) in y.iter().enumerate() {
            let c = constraint_const(l, i + 1, &mut parts.used);
            eqs.push(Formula::equal(Term::var(yi.clone()), Term::constant(c)));
        }
        disjuncts.push(Formula::and_all(eqs));
    }
    let constraint = Formula::or_all(disjuncts);

    let body = Formula::and(parts.matrix.clone(), constraint);
    Ok(Formula::quantify(
        Quantifier::Forall,
        &x,
        Formula::quantify(Quantifier::Exists, &y, body),
    ))
}

/// Full range-restricted Skolemization: existential variables become Skolem
/// functions over the universal tuple, with the finite range axiom over
/// fresh constants.
pub fn skolemize_range_restricted(phi: &Formula) -> Result<Formula> {
    let mut parts = decompose_sf(phi)?;
    let (x, y) = require_single_block(&parts)?;
    let (_, m_star) = single_block_m_star(&parts, &x, &y)?;

    let mut skolem_terms = Vec::with_capacity(y.len());
    let mut sigma = BTreeMap::new();
    for (i, yi) in y.iter().enumerate() {
        let name = indexed_name(format!("f_{}", i + 1), &mut parts.used);
        let term = if x.is_empty() {
            Term::constant(name)
        } else {
            Term::app(name, x.iter().map(|v| Term::var(v.clone())).collect())
        };
        sigma.insert(yi.clone(), term.clone());
        skolem_terms.push(term);
    }
    let matrix_sk = substitute(&parts.matrix, &sigma)?;

    let mut disjuncts = Vec::with_capacity(m_star);
    for l in 1..=m_star {
        let mut eqs = Vec::with_capacity(y.len());
        for (i, term) in skolem_terms.iter().enumerate() {
            let c = constraint_const(l, i + 1, &mut parts.used);
            eqs.push(Formula::equal(term.clone(), Term::constant(c)));
        }
        disjuncts.push(Formula::and_all(eqs));
    }
    let constraint = Formula::or_all(disjuncts);

    Ok(Formula::quantify(
        Quantifier::Forall,
        &x,
        Formula::and(matrix_sk, constraint),
    ))
}

/// Inner Skolemization over the disjunctive normal form: one fresh constant
/// tuple per constituent, substituted into its y-part.
pub fn inner_skolemize(phi: &Formula) -> Result<Formula> {
    let mut parts = decompose_sf(phi)?;
    let (x, y) = require_single_block(&parts)?;
    let dnf = matrix_to_nf(&parts.matrix, NfKind::Dnf, &x, &y, &[])?;

    let mut disjuncts = Vec::with_capacity(dnf.count());
    for (k, constituent) in dnf.constituents.iter().enumerate() {
        let mut sigma = BTreeMap::new();
        for (i, yi) in y.iter().enumerate() {
            let base = if y.len() == 1 {
                format!("c_{}", k + 1)
            } else {
                format!("c_{}_{}", k + 1, i + 1)
            };
            let name = indexed_name(base, &mut parts.used);
            sigma.insert(yi.clone(), Term::constant(name));
        }
        let mut lits: Vec<Formula> = constituent.chi.clone();
        for eta in &constituent.eta {
            lits.push(substitute(eta, &sigma)?);
        }
        lits.extend(constituent.param.iter().cloned());
        disjuncts.push(Formula::and_all(lits));
    }

    Ok(Formula::quantify(
        Quantifier::Forall,
        &x,
        Formula::or_all(disjuncts),
    ))
}

/// Emits the range-restricting constraint for several alternations: the flat
/// per-block constraint under strong separation, the nested tree-indexed one
/// otherwise. Single-alternation sentences delegate to [`range_restrict`].
pub fn multi_block_constraints(phi: &Formula, cap: u64) -> Result<Formula> {
    let mut parts = decompose_sf(phi)?;
    let n = parts.pairs.len();
    if n <= 1 {
        return range_restrict(phi);
    }
    let x_all = parts.x_all();
    let y_all = parts.y_all();
    let dnf = matrix_to_nf(&parts.matrix, NfKind::Dnf, &x_all, &y_all, &[])?;
    let m_dnf = dnf.count() as u64;

    let constraint = if y_blocks_pairwise_separated(&parts) {
        let kappa_dnf = binom_central(m_dnf);
        let kappa: u64 = match Magnitude::from_big(&kappa_dnf, cap) {
            Magnitude::Finite(v) => v,
            Magnitude::Overflow => {
                return Err(Error::BudgetExceeded(
                    "per-block constraint width exceeds the cap".into(),
                ))
            }
        };
        let mut conjuncts = Vec::new();
        let pairs = parts.pairs.clone();
        for (k, (_, y)) in pairs.iter().enumerate() {
            if y.is_empty() {
                continue;
            }
            let width = if k + 1 < n { kappa } else { m_dnf };
            let mut disjuncts = Vec::new();
            for j in 1..=width {
                let mut eqs = Vec::new();
                for (i, yi) in y.iter().enumerate() {
                    let name = indexed_name(
                        format!("c_{}_{}_{}", k + 1, j, i + 1),
                        &mut parts.used,
                    );
                    eqs.push(Formula::equal(Term::var(yi.clone()), Term::constant(name)));
                }
                disjuncts.push(Formula::and_all(eqs));
            }
            conjuncts.push(Formula::or_all(disjuncts));
        }
        Formula::and_all(conjuncts)
    } else {
        // widths |P^(n-k)[m]| per level; fail fast if the constant count
        // would exceed the cap
        let mut widths = Vec::with_capacity(n);
        let mut total_consts: u64 = 0;
        let mut path_product: u64 = 1;
        for k in 1..=n {
            let width = match twoup((n - k) as u64, m_dnf, cap) {
                Magnitude::Finite(v) => v,
                Magnitude::Overflow => {
                    return Err(Error::BudgetExceeded(
                        "nested constraint width exceeds the cap".into(),
                    ))
                }
            };
            path_product = path_product.checked_mul(width).ok_or_else(|| {
                Error::BudgetExceeded("nested constraint width exceeds the cap".into())
            })?;
            let y_len = parts.pairs[k - 1].1.len() as u64;
            total_consts = total_consts
                .checked_add(path_product.checked_mul(y_len).ok_or_else(|| {
                    Error::BudgetExceeded("nested constraint width exceeds the cap".into())
                })?)
                .ok_or_else(|| {
                    Error::BudgetExceeded("nested constraint width exceeds the cap".into())
                })?;
            if total_consts > cap {
                return Err(Error::BudgetExceeded(format!(
                    "nested constraint needs {total_consts} constants (cap {cap})"
                )));
            }
            widths.push(width);
        }

        fn build(
            level: usize,
            path: &mut Vec<u64>,
            widths: &[u64],
            pairs: &[(Vec<Sym>, Vec<Sym>)],
            used: &mut BTreeSet<Sym>,
        ) -> Formula {
            if level == pairs.len() {
                return Formula::Truth;
            }
            let y = &pairs[level].1;
            let mut disjuncts = Vec::new();
            for j in 1..=widths[level] {
                path.push(j);
                let mut eqs = Vec::new();
                for (i, yi) in y.iter().enumerate() {
                    let path_str = path
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join("_");
                    let name = indexed_name(format!("c_{}__{}", path_str, i + 1), used);
                    eqs.push(Formula::equal(Term::var(yi.clone()), Term::constant(name)));
                }
                let deeper = build(level + 1, path, widths, pairs, used);
                path.pop();
                let here = Formula::and_all(eqs);
                disjuncts.push(match deeper {
                    Formula::Truth => here,
                    d => Formula::and(here, d),
                });
            }
            Formula::or_all(disjuncts)
        }
        let pairs = parts.pairs.clone();
        build(0, &mut Vec::new(), &widths, &pairs, &mut parts.used)
    };

    // reassemble the alternating prefix over matrix /\ constraint
    let mut body = Formula::and(parts.matrix.clone(), constraint);
    for (x, y) in parts.pairs.iter().rev() {
        body = Formula::quantify(Quantifier::Exists, y, body);
        body = Formula::quantify(Quantifier::Forall, x, body);
    }
    Ok(body)
}

/// The open-formula variant: the final existential block is range-restricted
/// by fresh function symbols over the parameter variables, which may be
/// quantified either way. Here `m* = min(2^m_cnf, m_dnf)`.
pub fn range_restrict_open(phi: &Formula) -> Result<Formula> {
    let prenexed = to_prenex(phi);
    let (prefix, matrix) = prefix_blocks(&prenexed)?;
    if prefix.blocks.is_empty()
        || prefix.blocks.last().map(|(q, _)| *q) != Some(Quantifier::Exists)
    {
        return Err(Error::NotSf(
            "expected a trailing existential block to restrict".into(),
        ));
    }
    let y: Vec<Sym> = prefix.blocks.last().unwrap().1.clone();
    let y_set: BTreeSet<Sym> = y.iter().cloned().collect();

    // split the preceding universal block into variables separated from the
    // y-block and mixed parameters
    let n_blocks = prefix.blocks.len();
    let mut x: Vec<Sym> = Vec::new();
    let mut z: Vec<Sym> = Vec::new();
    for (i, (q, vars)) in prefix.blocks.iter().enumerate() {
        if i + 2 == n_blocks && *q == Quantifier::Forall {
            for v in vars {
                let mixes = atoms(&matrix).iter().any(|a| {
                    let av = free_vars(a);
                    av.contains(v) && av.iter().any(|w| y_set.contains(w))
                });
                if mixes {
                    z.push(v.clone());
                } else {
                    x.push(v.clone());
                }
            }
        } else if i + 1 < n_blocks {
            z.extend(vars.iter().cloned());
        }
    }
    z.extend(free_vars(&prenexed));

    let dnf = matrix_to_nf(&matrix, NfKind::Dnf, &x, &y, &z)?;
    let cnf = matrix_to_nf(&matrix, NfKind::Cnf, &x, &y, &z)?;
    let m_dnf = dnf.count() as u64;
    let m_cnf = cnf.count() as u64;
    let two_pow = if m_cnf >= 63 {
        u64::MAX
    } else {
        1u64 << m_cnf
    };
    let m_star = m_dnf.min(two_pow) as usize;

    let mut used: BTreeSet<Sym> = all_vars(&prenexed);
    used.extend(all_symbols(&prenexed));
    let z_args: Vec<Term> = z.iter().map(|v| Term::var(v.clone())).collect();

    let mut disjuncts = Vec::with_capacity(m_star);
    for j in 1..=m_star {
        let mut eqs = Vec::with_capacity(y.len());
        for (i, yi) in y.iter().enumerate() {
            let base = if y.len() == 1 {
                format!("g_{j}")
            } else {
                format!("g_{}_{}", j, i + 1)
            };
            let name = indexed_name(base, &mut used);
            let term = if z_args.is_empty() {
                Term::constant(name)
            } else {
                Term::app(name, z_args.clone())
            };
            eqs.push(Formula::equal(Term::var(yi.clone()), term));
        }
        disjuncts.push(Formula::and_all(eqs));
    }
    let constraint = Formula::or_all(disjuncts);

    let prefix = QuantifierPrefix {
        blocks: prefix.blocks,
    };
    Ok(prefix.apply(Formula::and(matrix, constraint)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{oracle_decide, Verdict};
    use crate::tptp::{parse_formula, print_tptp};

    #[test]
    fn central_binomial_values() {
        assert_eq!(binom_central(0), BigUint::from(1u32));
        assert_eq!(binom_central(1), BigUint::from(1u32));
        assert_eq!(binom_central(2), BigUint::from(2u32));
        assert_eq!(binom_central(4), BigUint::from(6u32));
    }

    #[test]
    fn twoup_values() {
        let cap = 1_000_000_000;
        assert_eq!(twoup(0, 5, cap), Magnitude::Finite(5));
        assert_eq!(twoup(2, 3, cap), Magnitude::Finite(256));
        assert_eq!(twoup(5, 2, cap), Magnitude::Overflow);
    }

    #[test]
    fn bounds_of_the_worked_example() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        let b = compute_bounds(&phi, DEFAULT_MAGNITUDE_CAP).unwrap();
        assert_eq!(b.m_dnf, 2);
        assert_eq!(b.m_cnf, 2);
        assert_eq!(b.kappa_cnf, Magnitude::Finite(2));
        assert_eq!(b.m_star, 2);
        assert_eq!(b.regime, BoundRegime::SingleBlock);
        assert_eq!(b.domain_bound, Magnitude::Finite(2));
    }

    #[test]
    fn bounds_of_a_bsr_sentence() {
        let phi = parse_formula("?[Z1, Z2]: ![X]: (r(Z1, X) | r(Z2, X))").unwrap();
        let b = compute_bounds(&phi, DEFAULT_MAGNITUDE_CAP).unwrap();
        assert_eq!(b.domain_bound, Magnitude::Finite(2));
        assert_eq!(b.regime, BoundRegime::SingleBlock);
    }

    #[test]
    fn bounds_overflow_on_deep_nesting() {
        // four alternations, mixed y-blocks, at least three constituents
        let phi = parse_formula(
            "![X1]: ?[Y1]: ![X2]: ?[Y2]: ![X3]: ?[Y3]: ![X4]: ?[Y4]: \
             ((r(Y1, Y2) & p1(X1)) | (r(Y2, Y3) & p2(X2)) | (r(Y3, Y4) & p3(X3)) | p4(X4))",
        )
        .unwrap();
        let b = compute_bounds(&phi, DEFAULT_MAGNITUDE_CAP).unwrap();
        assert_eq!(b.regime, BoundRegime::GeneralNested);
        assert_eq!(b.domain_bound, Magnitude::Overflow);
    }

    #[test]
    fn range_restrict_shape() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        let out = range_restrict(&phi).unwrap();
        let expected = parse_formula(
            "![X]: ?[Y]: ((p(X) <=> q(Y)) & (Y = c_1_1 | Y = c_2_1))",
        )
        .unwrap();
        assert_eq!(out, expected, "got {}", print_tptp(&out));
    }

    #[test]
    fn skolemize_shape() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        let out = skolemize_range_restricted(&phi).unwrap();
        let expected = parse_formula(
            "![X]: ((p(X) <=> q(f_1(X))) & (f_1(X) = c_1_1 | f_1(X) = c_2_1))",
        )
        .unwrap();
        assert_eq!(out, expected, "got {}", print_tptp(&out));
    }

    #[test]
    fn inner_skolemize_shape() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        let out = inner_skolemize(&phi).unwrap();
        let expected =
            parse_formula("![X]: ((p(X) & q(c_1)) | (~p(X) & ~q(c_2)))").unwrap();
        assert_eq!(out, expected, "got {}", print_tptp(&out));
    }

    #[test]
    fn inner_skolemize_false_matrix() {
        let phi = parse_formula("![X]: ?[Y]: (q(Y) & ~q(Y))").unwrap();
        let out = inner_skolemize(&phi).unwrap();
        assert_eq!(out, parse_formula("![X]: $false").unwrap());
        assert_eq!(
            oracle_decide(&out, 2).unwrap(),
            Verdict::Unsat { bound_checked: 2 }
        );
    }

    #[test]
    fn leading_existentials_become_constants() {
        let phi = parse_formula("?[Z]: ![X]: ?[Y]: ((p(X) <=> q(Y)) & q(Z))").unwrap();
        let out = skolemize_range_restricted(&phi).unwrap();
        // the leading Z is gone; a fresh constant d_1 appears
        assert!(print_tptp(&out).contains("d_1"));
        assert!(!print_tptp(&out).contains('Z'));
    }

    #[test]
    fn multi_block_constraint_widths() {
        // strongly separated, two alternations, one constituent
        let phi =
            parse_formula("![X1]: ?[Y1]: ![X2]: ?[Y2]: (p(X1, X2) & q(Y1) & r(Y2))").unwrap();
        let out = multi_block_constraints(&phi, DEFAULT_MAGNITUDE_CAP).unwrap();
        let text = print_tptp(&out);
        // kappa_dnf = C(1,0) = 1: block 1 has width 1, block 2 width 1
        assert!(text.contains("c_1_1_1"));
        assert!(text.contains("c_2_1_1"));
        assert!(!text.contains("c_1_2_1"));

        // general case: blocks share an atom, so the nested constraint fires
        let nested =
            parse_formula("![X1]: ?[Y1]: ![X2]: ?[Y2]: (p(X1, X2) & r(Y1, Y2))").unwrap();
        let out = multi_block_constraints(&nested, DEFAULT_MAGNITUDE_CAP).unwrap();
        let text = print_tptp(&out);
        // outer width |P^1[1]| = 2, inner width 1
        assert!(text.contains("c_1__1"));
        assert!(text.contains("c_2__1"));
        assert!(text.contains("c_1_1__1"));
        assert!(text.contains("c_2_1__1"));
        assert!(!text.contains("c_3__1"));
    }

    #[test]
    fn open_variant_restricts_with_functions() {
        let phi = parse_formula("![Z]: ![X]: ?[Y]: (q(Z, Y) <=> p(X))").unwrap();
        let out = range_restrict_open(&phi).unwrap();
        let expected = parse_formula(
            "![Z, X]: ?[Y]: ((q(Z, Y) <=> p(X)) & (Y = g_1(Z) | Y = g_2(Z)))",
        )
        .unwrap();
        assert_eq!(out, expected, "got {}", print_tptp(&out));
    }
}
