//! Finite-structure semantics: evaluation, exhaustive structure enumeration
//! (the brute-force oracle), fingerprint diagnostics, and the end-to-end
//! decision procedure for separated sentences.

use std::collections::{BTreeMap, BTreeSet};

use crate::bounds::{compute_bounds, Magnitude, DEFAULT_MAGNITUDE_CAP};
use crate::error::{Error, Result};
use crate::syntax::{
    extract_signature, free_vars, Formula, Quantifier, Signature, Sym, Term,
};

/// Default cap on the number of structures enumerated per universe size.
pub const DEFAULT_STRUCTURE_CAP: u128 = 10_000_000;

/// Default cap on the universe sizes the decision procedure will search.
pub const DEFAULT_SIZE_CAP: u64 = 64;

// ---------------------------------------------------------------------------
// structures

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnTable {
    pub arity: usize,
    /// Output values in lexicographic argument order, `universe^arity` many.
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredTable {
    pub arity: usize,
    /// Membership bits in lexicographic argument order.
    pub bits: Vec<bool>,
}

/// A finite interpretation over the universe `{0, ..., universe - 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub universe: usize,
    pub constants: BTreeMap<Sym, usize>,
    pub functions: BTreeMap<Sym, FnTable>,
    pub predicates: BTreeMap<Sym, PredTable>,
}

pub type Assignment = BTreeMap<Sym, usize>;

fn tuple_index(universe: usize, tuple: &[usize]) -> usize {
    let mut idx = 0;
    for &t in tuple {
        idx = idx * universe + t;
    }
    idx
}

fn index_tuple(universe: usize, arity: usize, mut idx: usize) -> Vec<usize> {
    let mut tuple = vec![0; arity];
    for slot in (0..arity).rev() {
        tuple[slot] = idx % universe;
        idx /= universe;
    }
    tuple
}

impl Structure {
    pub fn new(universe: usize) -> Structure {
        Structure {
            universe,
            constants: BTreeMap::new(),
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
        }
    }

    pub fn holds(&self, predicate: &str, tuple: &[usize]) -> Result<bool> {
        let table = self
            .predicates
            .get(predicate)
            .ok_or_else(|| Error::MissingInterpretation {
                symbol: predicate.to_string(),
            })?;
        Ok(table.bits[tuple_index(self.universe, tuple)])
    }

    pub fn apply(&self, function: &str, tuple: &[usize]) -> Result<usize> {
        let table = self
            .functions
            .get(function)
            .ok_or_else(|| Error::MissingInterpretation {
                symbol: function.to_string(),
            })?;
        Ok(table.values[tuple_index(self.universe, tuple)])
    }

    pub fn constant(&self, name: &str) -> Result<usize> {
        self.constants
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingInterpretation {
                symbol: name.to_string(),
            })
    }

    /// Verifies sizes and index ranges of every table.
    pub fn validate(&self) -> Result<()> {
        if self.universe == 0 {
            return Err(Error::Schema("universe must be nonempty".into()));
        }
        for (c, &v) in &self.constants {
            if v >= self.universe {
                return Err(Error::Schema(format!("constant `{c}` out of range")));
            }
        }
        for (f, table) in &self.functions {
            let expect = self.universe.pow(table.arity as u32);
            if table.values.len() != expect {
                return Err(Error::Schema(format!("function `{f}` table is not total")));
            }
            if table.values.iter().any(|&v| v >= self.universe) {
                return Err(Error::Schema(format!("function `{f}` value out of range")));
            }
        }
        for (p, table) in &self.predicates {
            let expect = self.universe.pow(table.arity as u32);
            if table.bits.len() != expect {
                return Err(Error::Schema(format!(
                    "predicate `{p}` table has wrong size"
                )));
            }
        }
        Ok(())
    }

    /// Checks that every symbol of `sig` is interpreted with the right
    /// arity. Predicates with empty tables are accepted at any arity.
    pub fn matches_signature(&self, sig: &Signature) -> Result<()> {
        for c in &sig.constants {
            self.constant(c)?;
        }
        for (f, &arity) in &sig.functions {
            let table = self
                .functions
                .get(f)
                .ok_or_else(|| Error::MissingInterpretation { symbol: f.clone() })?;
            if table.arity != arity {
                return Err(Error::Schema(format!(
                    "function `{f}` has arity {} in the model, {arity} in the formula",
                    table.arity
                )));
            }
        }
        for (p, &arity) in &sig.predicates {
            let table = self
                .predicates
                .get(p)
                .ok_or_else(|| Error::MissingInterpretation { symbol: p.clone() })?;
            if table.arity != arity && !table.bits.iter().all(|b| !b) {
                return Err(Error::Schema(format!(
                    "predicate `{p}` has arity {} in the model, {arity} in the formula",
                    table.arity
                )));
            }
        }
        Ok(())
    }

    /// Restriction to a subset of the universe; `None` when the subset
    /// misses a constant or is not closed under some function.
    pub fn substructure(&self, subset: &[usize]) -> Option<Structure> {
        if subset.is_empty() {
            return None;
        }
        let mut reindex: BTreeMap<usize, usize> = BTreeMap::new();
        for (new, &old) in subset.iter().enumerate() {
            reindex.insert(old, new);
        }
        let m = subset.len();
        let mut out = Structure::new(m);
        for (c, &v) in &self.constants {
            out.constants.insert(c.clone(), *reindex.get(&v)?);
        }
        for (f, table) in &self.functions {
            let mut values = Vec::with_capacity(m.pow(table.arity as u32));
            for idx in 0..m.pow(table.arity as u32) {
                let small = index_tuple(m, table.arity, idx);
                let big: Vec<usize> = small.iter().map(|&i| subset[i]).collect();
                let v = table.values[tuple_index(self.universe, &big)];
                values.push(*reindex.get(&v)?);
            }
            out.functions.insert(
                f.clone(),
                FnTable {
                    arity: table.arity,
                    values,
                },
            );
        }
        for (p, table) in &self.predicates {
            let mut bits = Vec::with_capacity(m.pow(table.arity as u32));
            for idx in 0..m.pow(table.arity as u32) {
                let small = index_tuple(m, table.arity, idx);
                let big: Vec<usize> = small.iter().map(|&i| subset[i]).collect();
                bits.push(table.bits[tuple_index(self.universe, &big)]);
            }
            out.predicates.insert(
                p.clone(),
                PredTable {
                    arity: table.arity,
                    bits,
                },
            );
        }
        Some(out)
    }
}

// ---------------------------------------------------------------------------
// structure JSON

/// Renders a structure in the canonical JSON layout, with sorted keys.
pub fn print_structure(s: &Structure) -> String {
    use serde_json::{json, Map, Value};
    let mut constants = Map::new();
    for (c, &v) in &s.constants {
        constants.insert(c.clone(), json!(v));
    }
    let mut functions = Map::new();
    for (f, table) in &s.functions {
        let mut entries = Map::new();
        for (idx, &v) in table.values.iter().enumerate() {
            let tuple = index_tuple(s.universe, table.arity, idx);
            let key = format!(
                "[{}]",
                tuple
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            entries.insert(key, json!(v));
        }
        functions.insert(f.clone(), Value::Object(entries));
    }
    let mut predicates = Map::new();
    for (p, table) in &s.predicates {
        let mut tuples = Vec::new();
        for (idx, &b) in table.bits.iter().enumerate() {
            if b {
                tuples.push(json!(index_tuple(s.universe, table.arity, idx)));
            }
        }
        predicates.insert(p.clone(), Value::Array(tuples));
    }
    let value = json!({
        "universe": s.universe,
        "constants": Value::Object(constants),
        "functions": Value::Object(functions),
        "predicates": Value::Object(predicates),
    });
    serde_json::to_string_pretty(&value).expect("structure serialization cannot fail")
}

fn parse_tuple_key(key: &str) -> Result<Vec<usize>> {
    let inner = key
        .strip_prefix('[')
        .and_then(|k| k.strip_suffix(']'))
        .ok_or_else(|| Error::Schema(format!("malformed tuple key `{key}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::Schema(format!("malformed tuple key `{key}`")))
        })
        .collect()
}

/// Parses the canonical JSON structure layout.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("expected a JSON object".into()))?;
    let universe = obj
        .get("universe")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Schema("missing `universe`".into()))? as usize;
    if universe == 0 {
        return Err(Error::Schema("universe must be nonempty".into()));
    }
    let mut s = Structure::new(universe);

    if let Some(consts) = obj.get("constants") {
        let consts = consts
            .as_object()
            .ok_or_else(|| Error::Schema("`constants` must be an object".into()))?;
        for (c, v) in consts {
            let v = v
                .as_u64()
                .ok_or_else(|| Error::Schema(format!("constant `{c}` must be an index")))?
                as usize;
            if v >= universe {
                return Err(Error::Schema(format!("constant `{c}` out of range")));
            }
            s.constants.insert(c.clone(), v);
        }
    }

    if let Some(fns) = obj.get("functions") {
        let fns = fns
            .as_object()
            .ok_or_else(|| Error::Schema("`functions` must be an object".into()))?;
        for (f, entries) in fns {
            let entries = entries
                .as_object()
                .ok_or_else(|| Error::Schema(format!("function `{f}` must be an object")))?;
            let mut parsed: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut arity: Option<usize> = None;
            for (key, v) in entries {
                let tuple = parse_tuple_key(key)?;
                match arity {
                    None => arity = Some(tuple.len()),
                    Some(a) if a != tuple.len() => {
                        return Err(Error::Schema(format!(
                            "function `{f}` has mixed tuple arities"
                        )))
                    }
                    _ => {}
                }
                if tuple.iter().any(|&t| t >= universe) {
                    return Err(Error::Schema(format!(
                        "function `{f}` argument out of range"
                    )));
                }
                let v = v.as_u64().ok_or_else(|| {
                    Error::Schema(format!("function `{f}` value must be an index"))
                })? as usize;
                if v >= universe {
                    return Err(Error::Schema(format!("function `{f}` value out of range")));
                }
                parsed.insert(tuple, v);
            }
            let arity = arity
                .ok_or_else(|| Error::Schema(format!("function `{f}` table is empty")))?;
            let expect = universe.pow(arity as u32);
            if parsed.len() != expect {
                return Err(Error::Schema(format!("function `{f}` table is not total")));
            }
            let mut values = vec![0; expect];
            for (tuple, v) in parsed {
                values[tuple_index(universe, &tuple)] = v;
            }
            s.functions.insert(f.clone(), FnTable { arity, values });
        }
    }

    if let Some(preds) = obj.get("predicates") {
        let preds = preds
            .as_object()
            .ok_or_else(|| Error::Schema("`predicates` must be an object".into()))?;
        for (p, tuples) in preds {
            let tuples = tuples
                .as_array()
                .ok_or_else(|| Error::Schema(format!("predicate `{p}` must be an array")))?;
            let mut arity: Option<usize> = None;
            let mut members: Vec<Vec<usize>> = Vec::new();
            for t in tuples {
                let tuple: Vec<usize> = t
                    .as_array()
                    .ok_or_else(|| Error::Schema(format!("predicate `{p}` tuples must be arrays")))?
                    .iter()
                    .map(|v| {
                        v.as_u64().map(|x| x as usize).ok_or_else(|| {
                            Error::Schema(format!("predicate `{p}` tuple entry must be an index"))
                        })
                    })
                    .collect::<Result<_>>()?;
                match arity {
                    None => arity = Some(tuple.len()),
                    Some(a) if a != tuple.len() => {
                        return Err(Error::Schema(format!(
                            "predicate `{p}` has mixed tuple arities"
                        )))
                    }
                    _ => {}
                }
                if tuple.iter().any(|&t| t >= universe) {
                    return Err(Error::Schema(format!(
                        "predicate `{p}` tuple index out of range"
                    )));
                }
                members.push(tuple);
            }
            let arity = arity.unwrap_or(0);
            let expect = universe.pow(arity as u32);
            let mut bits = vec![false; expect];
            for tuple in &members {
                bits[tuple_index(universe, tuple)] = true;
            }
            if members.is_empty() {
                bits = vec![false; 1];
            }
            s.predicates.insert(
                p.clone(),
                PredTable {
                    arity: if members.is_empty() { 0 } else { arity },
                    bits,
                },
            );
        }
    }
    s.validate()?;
    Ok(s)
}

// ---------------------------------------------------------------------------
// evaluation

/// A compiled evaluation plan. Quantifier blocks carry only the variables
/// their body mentions, and blocks are distributed over their transparent
/// connective (universal over conjunction, existential over disjunction) and
/// split into independent components over the dual one, so enumeration never
/// ranges over irrelevant variables.
#[derive(Debug, Clone)]
enum Plan {
    Atom(Sym, Vec<Term>),
    Equal(Term, Term),
    Truth,
    Falsity,
    Not(Box<Plan>),
    And(Vec<Plan>),
    Or(Vec<Plan>),
    Implies(Box<Plan>, Box<Plan>),
    Iff(Box<Plan>, Box<Plan>),
    Block {
        quant: Quantifier,
        vars: Vec<Sym>,
        body: Box<Plan>,
    },
}

fn flatten_chain<'a>(phi: &'a Formula, q: Quantifier, out: &mut Vec<&'a Formula>) {
    match (q, phi) {
        (Quantifier::Forall, Formula::Or(a, b)) | (Quantifier::Exists, Formula::And(a, b)) => {
            flatten_chain(a, q, out);
            flatten_chain(b, q, out);
        }
        _ => out.push(phi),
    }
}

fn compile(phi: &Formula) -> Plan {
    match phi {
        Formula::Atom(p, args) => Plan::Atom(p.clone(), args.clone()),
        Formula::Equal(l, r) => Plan::Equal(l.clone(), r.clone()),
        Formula::Truth => Plan::Truth,
        Formula::Falsity => Plan::Falsity,
        Formula::Not(a) => Plan::Not(Box::new(compile(a))),
        Formula::And(a, b) => Plan::And(vec![compile(a), compile(b)]),
        Formula::Or(a, b) => Plan::Or(vec![compile(a), compile(b)]),
        Formula::Implies(a, b) => Plan::Implies(Box::new(compile(a)), Box::new(compile(b))),
        Formula::Iff(a, b) => Plan::Iff(Box::new(compile(a)), Box::new(compile(b))),
        Formula::Forall(v, a) => compile_block(Quantifier::Forall, vec![v.clone()], a),
        Formula::Exists(v, a) => compile_block(Quantifier::Exists, vec![v.clone()], a),
    }
}

fn compile_block(q: Quantifier, mut vars: Vec<Sym>, body: &Formula) -> Plan {
    // absorb adjacent binders of the same polarity
    let mut body = body;
    loop {
        match (q, body) {
            (Quantifier::Forall, Formula::Forall(v, inner))
            | (Quantifier::Exists, Formula::Exists(v, inner)) => {
                vars.push(v.clone());
                body = inner;
            }
            _ => break,
        }
    }
    let fv = free_vars(body);
    vars.retain(|v| fv.contains(v));
    if vars.is_empty() {
        return compile(body);
    }
    match (q, body) {
        // a universal block distributes over a conjunction
        (Quantifier::Forall, Formula::And(a, b)) => {
            Plan::And(vec![compile_block(q, vars.clone(), a), compile_block(q, vars, b)])
        }
        // an existential block distributes over a disjunction
        (Quantifier::Exists, Formula::Or(a, b)) => {
            Plan::Or(vec![compile_block(q, vars.clone(), a), compile_block(q, vars, b)])
        }
        // over the dual connective, independent components split
        (Quantifier::Forall, Formula::Or(..)) | (Quantifier::Exists, Formula::And(..)) => {
            let mut parts = Vec::new();
            flatten_chain(body, q, &mut parts);
            let part_vars: Vec<BTreeSet<Sym>> = parts
                .iter()
                .map(|p| {
                    free_vars(p)
                        .into_iter()
                        .filter(|v| vars.contains(v))
                        .collect()
                })
                .collect();
            // union-find over parts sharing block variables
            let mut component: Vec<usize> = (0..parts.len()).collect();
            fn root(component: &mut Vec<usize>, mut i: usize) -> usize {
                while component[i] != i {
                    component[i] = component[component[i]];
                    i = component[i];
                }
                i
            }
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    if part_vars[i].intersection(&part_vars[j]).next().is_some() {
                        let (ri, rj) = (root(&mut component, i), root(&mut component, j));
                        component[ri] = rj;
                    }
                }
            }
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for i in 0..parts.len() {
                groups.entry(root(&mut component, i)).or_default().push(i);
            }
            let mut out = Vec::new();
            for members in groups.values() {
                let group_vars: Vec<Sym> = vars
                    .iter()
                    .filter(|v| members.iter().any(|&m| part_vars[m].contains(*v)))
                    .cloned()
                    .collect();
                let plans: Vec<Plan> = members.iter().map(|&m| compile(parts[m])).collect();
                let inner = if plans.len() == 1 {
                    plans.into_iter().next().unwrap()
                } else {
                    match q {
                        Quantifier::Forall => Plan::Or(plans),
                        Quantifier::Exists => Plan::And(plans),
                    }
                };
                if group_vars.is_empty() {
                    out.push(inner);
                } else {
                    out.push(Plan::Block {
                        quant: q,
                        vars: group_vars,
                        body: Box::new(inner),
                    });
                }
            }
            if out.len() == 1 {
                out.into_iter().next().unwrap()
            } else {
                match q {
                    Quantifier::Forall => Plan::Or(out),
                    Quantifier::Exists => Plan::And(out),
                }
            }
        }
        _ => Plan::Block {
            quant: q,
            vars,
            body: Box::new(compile(body)),
        },
    }
}

struct EvalCtx<'a> {
    structure: &'a Structure,
    beta: &'a Assignment,
    env: Vec<(Sym, usize)>,
}

impl<'a> EvalCtx<'a> {
    fn lookup(&self, var: &str) -> Result<usize> {
        for (name, value) in self.env.iter().rev() {
            if name == var {
                return Ok(*value);
            }
        }
        self.beta
            .get(var)
            .copied()
            .ok_or_else(|| Error::MissingInterpretation {
                symbol: var.to_string(),
            })
    }

    fn term(&self, t: &Term) -> Result<usize> {
        match t {
            Term::Var(v) => self.lookup(v),
            Term::Const(c) => self.structure.constant(c),
            Term::App(f, args) => {
                let mut tuple = Vec::with_capacity(args.len());
                for a in args {
                    tuple.push(self.term(a)?);
                }
                self.structure.apply(f, &tuple)
            }
        }
    }

    fn eval(&mut self, plan: &Plan) -> Result<bool> {
        match plan {
            Plan::Atom(p, args) => {
                let mut tuple = Vec::with_capacity(args.len());
                for a in args {
                    tuple.push(self.term(a)?);
                }
                self.structure.holds(p, &tuple)
            }
            Plan::Equal(l, r) => Ok(self.term(l)? == self.term(r)?),
            Plan::Truth => Ok(true),
            Plan::Falsity => Ok(false),
            Plan::Not(a) => Ok(!self.eval(a)?),
            Plan::And(parts) => {
                for p in parts {
                    if !self.eval(p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Plan::Or(parts) => {
                for p in parts {
                    if self.eval(p)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Plan::Implies(a, b) => Ok(!self.eval(a)? || self.eval(b)?),
            Plan::Iff(a, b) => Ok(self.eval(a)? == self.eval(b)?),
            Plan::Block { quant, vars, body } => self.eval_block(*quant, vars, body),
        }
    }

    fn eval_block(&mut self, quant: Quantifier, vars: &[Sym], body: &Plan) -> Result<bool> {
        match vars.split_first() {
            None => self.eval(body),
            Some((v, rest)) => {
                for value in 0..self.structure.universe {
                    self.env.push((v.clone(), value));
                    let r = self.eval_block(quant, rest, body);
                    self.env.pop();
                    let r = r?;
                    match quant {
                        Quantifier::Forall if !r => return Ok(false),
                        Quantifier::Exists if r => return Ok(true),
                        _ => {}
                    }
                }
                Ok(quant == Quantifier::Forall)
            }
        }
    }
}

/// Tarskian truth value of `phi` in `s` under `beta`.
pub fn eval(s: &Structure, beta: &Assignment, phi: &Formula) -> Result<bool> {
    let plan = compile(phi);
    let mut ctx = EvalCtx {
        structure: s,
        beta,
        env: Vec::new(),
    };
    ctx.eval(&plan)
}

// ---------------------------------------------------------------------------
// exhaustive enumeration

/// Number of structures over `sig` with the given universe size, or `None`
/// on overflow.
pub fn count_structures(sig: &Signature, size: usize) -> Option<u128> {
    let n = size as u128;
    let mut total: u128 = 1;
    for _ in &sig.constants {
        total = total.checked_mul(n)?;
    }
    for &arity in sig.functions.values() {
        let cells = (size as u64).checked_pow(arity as u32)?;
        for _ in 0..cells {
            total = total.checked_mul(n)?;
        }
    }
    for &arity in sig.predicates.values() {
        let cells = (size as u64).checked_pow(arity as u32)?;
        total = total.checked_mul(2u128.checked_pow(cells.try_into().ok()?)?)?;
    }
    Some(total)
}

/// Deterministic enumeration of every structure over `sig` with universe
/// `{0, ..., size-1}`: constants vary slowest, then function tables, then
/// predicate tables.
pub struct StructureIter {
    size: usize,
    const_names: Vec<Sym>,
    fn_names: Vec<(Sym, usize)>,
    pred_names: Vec<(Sym, usize)>,
    consts: Vec<usize>,
    fn_tables: Vec<Vec<usize>>,
    pred_tables: Vec<Vec<bool>>,
    done: bool,
}

pub fn enumerate_structures(sig: &Signature, size: usize) -> StructureIter {
    let fn_names: Vec<(Sym, usize)> = sig
        .functions
        .iter()
        .map(|(f, &a)| (f.clone(), a))
        .collect();
    let pred_names: Vec<(Sym, usize)> = sig
        .predicates
        .iter()
        .map(|(p, &a)| (p.clone(), a))
        .collect();
    StructureIter {
        size,
        const_names: sig.constants.iter().cloned().collect(),
        consts: vec![0; sig.constants.len()],
        fn_tables: fn_names
            .iter()
            .map(|(_, a)| vec![0; size.pow(*a as u32)])
            .collect(),
        pred_tables: pred_names
            .iter()
            .map(|(_, a)| vec![false; size.pow(*a as u32)])
            .collect(),
        fn_names,
        pred_names,
        done: size == 0,
    }
}

impl StructureIter {
    fn current(&self) -> Structure {
        let mut s = Structure::new(self.size);
        for (name, &v) in self.const_names.iter().zip(&self.consts) {
            s.constants.insert(name.clone(), v);
        }
        for ((name, arity), values) in self.fn_names.iter().zip(&self.fn_tables) {
            s.functions.insert(
                name.clone(),
                FnTable {
                    arity: *arity,
                    values: values.clone(),
                },
            );
        }
        for ((name, arity), bits) in self.pred_names.iter().zip(&self.pred_tables) {
            s.predicates.insert(
                name.clone(),
                PredTable {
                    arity: *arity,
                    bits: bits.clone(),
                },
            );
        }
        s
    }

    // Increments the least significant digit: predicate bits first, then
    // function cells, then constants.
    fn advance(&mut self) {
        for table in self.pred_tables.iter_mut().rev() {
            for bit in table.iter_mut().rev() {
                if !*bit {
                    *bit = true;
                    return;
                }
                *bit = false;
            }
        }
        for table in self.fn_tables.iter_mut().rev() {
            for cell in table.iter_mut().rev() {
                if *cell + 1 < self.size {
                    *cell += 1;
                    return;
                }
                *cell = 0;
            }
        }
        for c in self.consts.iter_mut().rev() {
            if *c + 1 < self.size {
                *c += 1;
                return;
            }
            *c = 0;
        }
        self.done = true;
    }
}

impl Iterator for StructureIter {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        if self.done {
            return None;
        }
        let s = self.current();
        self.advance();
        Some(s)
    }
}

// ---------------------------------------------------------------------------
// oracles

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    BoundOverflow,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat { model: Structure, size: usize },
    Unsat { bound_checked: u64 },
    Unknown { reason: UnknownReason },
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }
}

/// Brute-force satisfiability check over all structures of universe size up
/// to `max_size`. `Unsat` only means "no model up to `max_size`"; it is a
/// complete verdict when `max_size` is at least a valid small-model bound.
pub fn oracle_decide(phi: &Formula, max_size: u64) -> Result<Verdict> {
    oracle_decide_capped(phi, max_size, DEFAULT_STRUCTURE_CAP)
}

pub fn oracle_decide_capped(phi: &Formula, max_size: u64, cap: u128) -> Result<Verdict> {
    let fv = free_vars(phi);
    if !fv.is_empty() {
        return Err(Error::NonSentence(fv.into_iter().collect()));
    }
    let sig = extract_signature(phi)?;
    let plan = compile(phi);
    let beta = Assignment::new();
    for size in 1..=max_size {
        let count = count_structures(&sig, size as usize)
            .ok_or_else(|| Error::BudgetExceeded("structure count overflow".into()))?;
        if count > cap {
            return Err(Error::BudgetExceeded(format!(
                "{count} structures of size {size} exceed the cap {cap}"
            )));
        }
        for s in enumerate_structures(&sig, size as usize) {
            let mut ctx = EvalCtx {
                structure: &s,
                beta: &beta,
                env: Vec::new(),
            };
            if ctx.eval(&plan)? {
                return Ok(Verdict::Sat {
                    model: s,
                    size: size as usize,
                });
            }
        }
    }
    Ok(Verdict::Unsat {
        bound_checked: max_size,
    })
}

/// True iff `phi` and `psi` agree in every structure of size up to
/// `max_size` over their joint signature, under every assignment of their
/// free variables.
pub fn oracle_equivalent(phi: &Formula, psi: &Formula, max_size: u64) -> Result<bool> {
    oracle_equivalent_capped(phi, psi, max_size, DEFAULT_STRUCTURE_CAP)
}

pub fn oracle_equivalent_capped(
    phi: &Formula,
    psi: &Formula,
    max_size: u64,
    cap: u128,
) -> Result<bool> {
    let sig = extract_signature(phi)?.merge(&extract_signature(psi)?)?;
    let mut fv: BTreeSet<Sym> = free_vars(phi);
    fv.extend(free_vars(psi));
    let fv: Vec<Sym> = fv.into_iter().collect();
    let plan_phi = compile(phi);
    let plan_psi = compile(psi);
    let beta = Assignment::new();

    for size in 1..=max_size {
        let n = size as usize;
        let assignments = (n as u128).checked_pow(fv.len() as u32);
        let count = count_structures(&sig, n)
            .and_then(|c| assignments.and_then(|a| c.checked_mul(a)))
            .ok_or_else(|| Error::BudgetExceeded("structure count overflow".into()))?;
        if count > cap {
            return Err(Error::BudgetExceeded(format!(
                "{count} checks at size {size} exceed the cap {cap}"
            )));
        }
        let assignment_count = (n as u128).pow(fv.len() as u32);
        for s in enumerate_structures(&sig, n) {
            for a_idx in 0..assignment_count {
                let mut env: Vec<(Sym, usize)> = Vec::with_capacity(fv.len());
                let mut rest = a_idx;
                for v in &fv {
                    env.push((v.clone(), (rest % n as u128) as usize));
                    rest /= n as u128;
                }
                let mut ctx = EvalCtx {
                    structure: &s,
                    beta: &beta,
                    env: env.clone(),
                };
                let a = ctx.eval(&plan_phi)?;
                ctx.env = env;
                let b = ctx.eval(&plan_psi)?;
                if a != b {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// fingerprints

/// A fingerprint: at the deepest level the set of satisfied formula indices
/// (1-based), above that the set of reachable next-level fingerprints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fingerprint {
    Indices(BTreeSet<usize>),
    Nested(BTreeSet<Fingerprint>),
}

impl Fingerprint {
    pub fn render(&self) -> String {
        match self {
            Fingerprint::Indices(set) => {
                let items: Vec<String> = set.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            }
            Fingerprint::Nested(set) => {
                let items: Vec<String> = set.iter().map(Fingerprint::render).collect();
                format!("{{{}}}", items.join(","))
            }
        }
    }
}

/// The fingerprint table of one level: keys are tuples over the first
/// `level` existential blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FingerprintTable {
    pub level: usize,
    pub arity: usize,
    pub eta_formulas: Vec<Formula>,
    pub entries: BTreeMap<Vec<usize>, Fingerprint>,
}

/// Computes the nested fingerprint functions of a structure with respect to
/// the given y-part formulas. The deepest table maps full tuples over all
/// blocks to their satisfied indices; each level above maps a block prefix
/// to the set of fingerprints reachable by extending it with one more
/// block. Tables are returned deepest first.
pub fn fingerprint_table(
    s: &Structure,
    eta_list: &[Formula],
    y_blocks: &[Vec<Sym>],
) -> Result<Vec<FingerprintTable>> {
    let n_blocks = y_blocks.len();
    let block_width: Vec<usize> = y_blocks.iter().map(|b| b.len()).collect();
    let plans: Vec<Plan> = eta_list.iter().map(compile).collect();
    let beta = Assignment::new();

    let mut tables: Vec<FingerprintTable> = Vec::new();

    // deepest level: direct evaluation over full tuples
    let full_width: usize = block_width.iter().sum();
    let full_count = s.universe.pow(full_width as u32);
    let mut deepest: BTreeMap<Vec<usize>, Fingerprint> = BTreeMap::new();
    for idx in 0..full_count {
        let tuple = index_tuple(s.universe, full_width, idx);
        let mut env: Vec<(Sym, usize)> = Vec::with_capacity(full_width);
        let mut at = 0;
        for block in y_blocks {
            for v in block {
                env.push((v.clone(), tuple[at]));
                at += 1;
            }
        }
        let mut indices = BTreeSet::new();
        for (j, plan) in plans.iter().enumerate() {
            let mut ctx = EvalCtx {
                structure: s,
                beta: &beta,
                env: env.clone(),
            };
            if ctx.eval(plan)? {
                indices.insert(j + 1);
            }
        }
        deepest.insert(tuple, Fingerprint::Indices(indices));
    }
    tables.push(FingerprintTable {
        level: n_blocks,
        arity: full_width,
        eta_formulas: eta_list.to_vec(),
        entries: deepest,
    });

    // each higher level collects the reachable fingerprints one block down
    for level in (1..n_blocks).rev() {
        let prefix_width: usize = block_width[..level].iter().sum();
        let ext_width = block_width[level];
        let prev = &tables.last().unwrap().entries;
        let mut entries: BTreeMap<Vec<usize>, Fingerprint> = BTreeMap::new();
        for idx in 0..s.universe.pow(prefix_width as u32) {
            let prefix = index_tuple(s.universe, prefix_width, idx);
            let mut reachable = BTreeSet::new();
            for ext_idx in 0..s.universe.pow(ext_width as u32) {
                let ext = index_tuple(s.universe, ext_width, ext_idx);
                let mut full = prefix.clone();
                full.extend(ext);
                reachable.insert(prev[&full].clone());
            }
            entries.insert(prefix, Fingerprint::Nested(reachable));
        }
        tables.push(FingerprintTable {
            level,
            arity: prefix_width,
            eta_formulas: eta_list.to_vec(),
            entries,
        });
    }
    Ok(tables)
}

// ---------------------------------------------------------------------------
// the decision procedure

/// Decides satisfiability of a separated sentence by bounded model search:
/// the small-model bound is computed first, then universe sizes 1 up to the
/// bound are searched exhaustively. `Unsat` at the bound is a complete
/// verdict; bounds past `size_cap` (or overflowing) give `Unknown`.
pub fn decide_sf(phi: &Formula, size_cap: u64) -> Result<Verdict> {
    decide_sf_capped(phi, size_cap, DEFAULT_MAGNITUDE_CAP, DEFAULT_STRUCTURE_CAP)
}

pub fn decide_sf_capped(
    phi: &Formula,
    size_cap: u64,
    magnitude_cap: u64,
    structure_cap: u128,
) -> Result<Verdict> {
    let bounds = compute_bounds(phi, magnitude_cap)?;
    let bound = match bounds.domain_bound {
        Magnitude::Overflow => {
            return Ok(Verdict::Unknown {
                reason: UnknownReason::BoundOverflow,
            })
        }
        Magnitude::Finite(b) => b,
    };
    if bound > size_cap {
        return Ok(Verdict::Unknown {
            reason: UnknownReason::CapExceeded,
        });
    }
    match oracle_decide_capped(phi, bound, structure_cap) {
        Ok(Verdict::Sat { model, size }) => {
            // the witness is re-checked before being reported
            debug_assert!(eval(&model, &Assignment::new(), phi)?);
            if !eval(&model, &Assignment::new(), phi)? {
                return Err(Error::Schema("witness failed re-evaluation".into()));
            }
            Ok(Verdict::Sat { model, size })
        }
        Ok(v) => Ok(v),
        Err(Error::BudgetExceeded(_)) => Ok(Verdict::Unknown {
            reason: UnknownReason::CapExceeded,
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::parse_formula;

    fn example_structure() -> Structure {
        // U = {a, b}; P = Q = {a}
        let mut s = Structure::new(2);
        s.predicates.insert(
            "p".into(),
            PredTable {
                arity: 1,
                bits: vec![true, false],
            },
        );
        s.predicates.insert(
            "q".into(),
            PredTable {
                arity: 1,
                bits: vec![true, false],
            },
        );
        s
    }

    #[test]
    fn eval_on_the_worked_example_model() {
        let s = example_structure();
        let beta = Assignment::new();
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        assert!(eval(&s, &beta, &phi).unwrap());
        let transposed_naively = parse_formula("?[Y]: ![X]: (p(X) <=> q(Y))").unwrap();
        assert!(!eval(&s, &beta, &transposed_naively).unwrap());
        assert!(eval(&s, &beta, &Formula::Truth).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let sig = extract_signature(&parse_formula("p(c)").unwrap()).unwrap();
        // one unary predicate, one constant at size 2: 2^2 * 2
        assert_eq!(count_structures(&sig, 2), Some(8));
        assert_eq!(enumerate_structures(&sig, 2).count(), 8);

        let unary = extract_signature(&parse_formula("p(X) | ~p(X)").unwrap()).unwrap();
        assert_eq!(enumerate_structures(&unary, 1).count(), 2);

        let binary = extract_signature(&parse_formula("r(X, X)").unwrap()).unwrap();
        assert_eq!(enumerate_structures(&binary, 2).count(), 16);

        let with_fn = extract_signature(&parse_formula("p(f(X))").unwrap()).unwrap();
        // 2^2 function tables times 2^2 predicate tables
        assert_eq!(count_structures(&with_fn, 2), Some(16));
        assert_eq!(enumerate_structures(&with_fn, 2).count(), 16);
    }

    #[test]
    fn oracle_decide_finds_least_witness() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        match oracle_decide(&phi, 2).unwrap() {
            Verdict::Sat { model, size } => {
                assert_eq!(size, 1);
                // first structure in enumeration order: all tables empty
                assert!(model.predicates["p"].bits.iter().all(|b| !b));
                assert!(model.predicates["q"].bits.iter().all(|b| !b));
            }
            v => panic!("expected sat, got {v:?}"),
        }

        let contradiction = parse_formula("(![X]: p(X)) & (?[Y]: ~p(Y))").unwrap();
        assert_eq!(
            oracle_decide(&contradiction, 3).unwrap(),
            Verdict::Unsat { bound_checked: 3 }
        );

        let two = parse_formula("?[Z1, Z2]: Z1 != Z2").unwrap();
        assert_eq!(
            oracle_decide(&two, 1).unwrap(),
            Verdict::Unsat { bound_checked: 1 }
        );
        assert!(oracle_decide(&two, 2).unwrap().is_sat());
    }

    #[test]
    fn oracle_equivalence_basics() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        assert!(oracle_equivalent(&phi, &phi, 2).unwrap());
        let p = parse_formula("p(X)").unwrap();
        let q = parse_formula("q(X)").unwrap();
        assert!(!oracle_equivalent(&p, &q, 1).unwrap());
    }

    #[test]
    fn structure_json_round_trip() {
        let mut s = Structure::new(2);
        s.constants.insert("c".into(), 1);
        s.functions.insert(
            "f".into(),
            FnTable {
                arity: 1,
                values: vec![1, 0],
            },
        );
        s.predicates.insert(
            "p".into(),
            PredTable {
                arity: 2,
                bits: vec![true, false, false, true],
            },
        );
        let text = print_structure(&s);
        let back = parse_structure(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(print_structure(&back), text);
    }

    #[test]
    fn structure_json_rejects_bad_indices() {
        let err = parse_structure(r#"{"universe": 2, "predicates": {"p": [[3]]}}"#).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
        let err = parse_structure(r#"{"universe": 0, "predicates": {}}"#).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
        // partial function tables are rejected
        let err =
            parse_structure(r#"{"universe": 2, "functions": {"f": {"[0]": 1}}}"#).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn fingerprints_of_the_three_element_structure() {
        // U = {a, a', b} as 0, 1, 2
        let mut s = Structure::new(3);
        let mut r1 = PredTable {
            arity: 2,
            bits: vec![false; 9],
        };
        for (x, y) in [(0, 2), (1, 0), (1, 1), (2, 2)] {
            r1.bits[x * 3 + y] = true;
        }
        let mut r2 = PredTable {
            arity: 2,
            bits: vec![false; 9],
        };
        for (x, y) in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0)] {
            r2.bits[x * 3 + y] = true;
        }
        s.predicates.insert("r1".into(), r1);
        s.predicates.insert("r2".into(), r2);

        let eta = vec![
            parse_formula("r1(Y1, Y2)").unwrap(),
            parse_formula("r2(Y1, Y2)").unwrap(),
        ];
        let blocks = vec![vec!["y1".to_string()], vec!["y2".to_string()]];
        let tables = fingerprint_table(&s, &eta, &blocks).unwrap();
        assert_eq!(tables.len(), 2);

        let l2 = &tables[0];
        assert_eq!(l2.level, 2);
        let fp = |items: &[usize]| Fingerprint::Indices(items.iter().copied().collect());
        assert_eq!(l2.entries[&vec![0, 0]], fp(&[2]));
        assert_eq!(l2.entries[&vec![0, 2]], fp(&[1, 2]));
        assert_eq!(l2.entries[&vec![2, 1]], fp(&[]));
        assert_eq!(l2.entries[&vec![2, 2]], fp(&[1]));

        let l1 = &tables[1];
        assert_eq!(l1.level, 1);
        let nest = |sets: &[&[usize]]| {
            Fingerprint::Nested(sets.iter().map(|s| fp(s)).collect())
        };
        assert_eq!(l1.entries[&vec![0]], nest(&[&[2], &[1, 2]]));
        assert_eq!(l1.entries[&vec![1]], nest(&[&[2], &[1, 2]]));
        assert_eq!(l1.entries[&vec![2]], nest(&[&[], &[1], &[2]]));
    }

    #[test]
    fn substructure_restriction() {
        let mut s = Structure::new(3);
        s.constants.insert("c".into(), 0);
        s.predicates.insert(
            "p".into(),
            PredTable {
                arity: 1,
                bits: vec![true, false, true],
            },
        );
        let sub = s.substructure(&[0, 2]).unwrap();
        assert_eq!(sub.universe, 2);
        assert_eq!(sub.constants["c"], 0);
        assert_eq!(sub.predicates["p"].bits, vec![true, true]);
        // dropping the constant's element is not a substructure
        assert!(s.substructure(&[1, 2]).is_none());
    }
}
