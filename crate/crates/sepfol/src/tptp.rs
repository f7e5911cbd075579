//! Reader and writer for a small TPTP-FOF subset.
//!
//! The accepted grammar, with TPTP operator rules:
//!
//! ```text
//! formula := quant | binary
//! quant   := ("!" | "?") "[" Var ("," Var)* "]" ":" formula
//! binary  := unary (("&" | "|" | "=>" | "<=>") unary)*
//! unary   := "~" unary | "(" formula ")" | atom
//! atom    := lowerId ["(" term ("," term)* ")"]
//!          | term "=" term | term "!=" term | "$true" | "$false"
//! ```
//!
//! `&` and `|` chains must not be mixed without parentheses, `=>` is
//! right-associative, `<=>` is non-associative. Variables are TPTP uppercase
//! identifiers; internally they are stored with the first character
//! lowercased so that printing (which uppercases again) round-trips.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::syntax::{extract_signature, Formula, Signature, Sym, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Axiom,
    Conjecture,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Conjecture => "conjecture",
        }
    }
}

/// A parsed TPTP problem: labelled formulas plus their joint signature.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub formulas: Vec<(String, Role, Formula)>,
    pub signature: Signature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    IffOp,
    Eq,
    Neq,
    Bang,
    Question,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Spanned {
                tok: $tok,
                line,
                column: col,
            });
            i += $len;
            col += $len;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                let (sl, sc) = (line, col);
                i += 2;
                col += 2;
                loop {
                    if i + 1 >= chars.len() {
                        return Err(Error::parse(sl, sc, "unterminated block comment"));
                    }
                    if chars[i] == '*' && chars[i + 1] == '/' {
                        i += 2;
                        col += 2;
                        break;
                    }
                    if chars[i] == '\n' {
                        line += 1;
                        col = 1;
                    } else {
                        col += 1;
                    }
                    i += 1;
                }
            }
            '(' => push!(Tok::LParen, 1),
            ')' => push!(Tok::RParen, 1),
            '[' => push!(Tok::LBracket, 1),
            ']' => push!(Tok::RBracket, 1),
            ',' => push!(Tok::Comma, 1),
            ':' => push!(Tok::Colon, 1),
            '.' => push!(Tok::Dot, 1),
            '~' => push!(Tok::Tilde, 1),
            '&' => push!(Tok::Amp, 1),
            '|' => push!(Tok::Pipe, 1),
            '?' => push!(Tok::Question, 1),
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::Neq, 2);
                } else {
                    push!(Tok::Bang, 1);
                }
            }
            '=' => {
                if chars.get(i + 1) == Some(&'>') {
                    push!(Tok::Arrow, 2);
                } else {
                    push!(Tok::Eq, 1);
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'=') && chars.get(i + 2) == Some(&'>') {
                    push!(Tok::IffOp, 3);
                } else {
                    return Err(Error::parse(line, col, "expected `<=>`"));
                }
            }
            '$' => {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_')
                {
                    end += 1;
                }
                let word: String = chars[start..end].iter().collect();
                if word.is_empty() {
                    return Err(Error::parse(line, col, "bare `$`"));
                }
                let len = end - i;
                push!(Tok::Dollar(word), len);
            }
            _ if c.is_ascii_lowercase() => {
                let start = i;
                let mut end = i;
                while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_')
                {
                    end += 1;
                }
                let word: String = chars[start..end].iter().collect();
                let len = end - start;
                push!(Tok::Lower(word), len);
            }
            _ if c.is_ascii_uppercase() => {
                let start = i;
                let mut end = i;
                while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_')
                {
                    end += 1;
                }
                let word: String = chars[start..end].iter().collect();
                let len = end - start;
                push!(Tok::Upper(word), len);
            }
            _ => return Err(Error::parse(line, col, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

fn lower_first(name: &str) -> String {
    let mut cs = name.chars();
    match cs.next() {
        Some(c) => c.to_ascii_lowercase().to_string() + cs.as_str(),
        None => String::new(),
    }
}

fn upper_first(name: &str) -> String {
    let mut cs = name.chars();
    match cs.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + cs.as_str(),
        None => String::new(),
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.column),
            None => self
                .toks
                .last()
                .map(|s| (s.line, s.column + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.here();
        Error::parse(line, column, message)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Bang) | Some(Tok::Question) => self.quantified(),
            _ => self.binary(),
        }
    }

    fn quantified(&mut self) -> Result<Formula> {
        let quant = self.next().unwrap();
        self.expect(Tok::LBracket, "`[`")?;
        let mut vars = Vec::new();
        loop {
            match self.next() {
                Some(Tok::Upper(v)) => vars.push(lower_first(&v)),
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.err("expected a variable (uppercase identifier)"));
                }
            }
            match self.peek() {
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        self.expect(Tok::Colon, "`:`")?;
        let body = self.formula()?;
        let mut phi = body;
        for v in vars.into_iter().rev() {
            phi = match quant {
                Tok::Bang => Formula::forall(v, phi),
                _ => Formula::exists(v, phi),
            };
        }
        Ok(phi)
    }

    fn binary(&mut self) -> Result<Formula> {
        let first = self.unary()?;
        let mut items = vec![first];
        let mut ops: Vec<Tok> = Vec::new();
        while let Some(t) = self.peek() {
            match t {
                Tok::Amp | Tok::Pipe | Tok::Arrow | Tok::IffOp => {
                    let op = self.next().unwrap();
                    if let Some(prev) = ops.first() {
                        if *prev != op {
                            return Err(self.err(
                                "mixed binary operators need explicit parentheses",
                            ));
                        }
                        if op == Tok::IffOp {
                            return Err(self.err("`<=>` is non-associative; add parentheses"));
                        }
                    }
                    ops.push(op);
                    items.push(self.unary()?);
                }
                _ => break,
            }
        }
        Ok(match ops.first() {
            None => items.pop().unwrap(),
            Some(Tok::Amp) => {
                let mut it = items.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Formula::and)
            }
            Some(Tok::Pipe) => {
                let mut it = items.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Formula::or)
            }
            Some(Tok::Arrow) => {
                let last = items.pop().unwrap();
                items.into_iter().rev().fold(last, |acc, lhs| {
                    Formula::implies(lhs, acc)
                })
            }
            Some(Tok::IffOp) => {
                let right = items.pop().unwrap();
                let left = items.pop().unwrap();
                Formula::iff(left, right)
            }
            _ => unreachable!(),
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let phi = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(phi)
            }
            Some(Tok::Bang) | Some(Tok::Question) => {
                Err(self.err("quantified formula must be parenthesised here"))
            }
            Some(Tok::Dollar(w)) => {
                let w = w.clone();
                self.pos += 1;
                match w.as_str() {
                    "true" => Ok(Formula::Truth),
                    "false" => Ok(Formula::Falsity),
                    other => Err(self.err(format!("unsupported defined symbol `${other}`"))),
                }
            }
            _ => self.atom(),
        }
    }

    // A lower-led item is an atom unless `=`/`!=` follows; an upper-led item
    // must be the left side of an equation.
    fn atom(&mut self) -> Result<Formula> {
        let term = self.term()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                let right = self.term()?;
                Ok(Formula::equal(term, right))
            }
            Some(Tok::Neq) => {
                self.pos += 1;
                let right = self.term()?;
                Ok(Formula::not(Formula::equal(term, right)))
            }
            _ => match term {
                Term::Const(name) => Ok(Formula::Atom(name, vec![])),
                Term::App(name, args) => Ok(Formula::Atom(name, args)),
                Term::Var(_) => Err(self.err("a bare variable is not a formula")),
            },
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.next() {
            Some(Tok::Upper(v)) => Ok(Term::Var(lower_first(&v))),
            Some(Tok::Lower(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let mut args = vec![self.term()?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::App(name, args))
                } else {
                    Ok(Term::Const(name))
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("expected a term"))
            }
        }
    }

    fn fof_line(&mut self) -> Result<(String, Role, Formula)> {
        match self.next() {
            Some(Tok::Lower(kw)) if kw == "fof" => {}
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.err("expected `fof(`"));
            }
        }
        self.expect(Tok::LParen, "`(`")?;
        let label = match self.next() {
            Some(Tok::Lower(name)) => name,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.err("expected a formula label"));
            }
        };
        self.expect(Tok::Comma, "`,`")?;
        let role = match self.next() {
            Some(Tok::Lower(r)) if r == "axiom" => Role::Axiom,
            Some(Tok::Lower(r)) if r == "conjecture" => Role::Conjecture,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.err("expected role `axiom` or `conjecture`"));
            }
        };
        self.expect(Tok::Comma, "`,`")?;
        let phi = self.formula()?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Dot, "`.`")?;
        Ok((label, role, phi))
    }
}

/// Parses a whole problem file (one or more `fof` lines).
pub fn parse_problem(name: &str, text: &str) -> Result<Problem> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let mut formulas = Vec::new();
    let mut labels = BTreeSet::new();
    while parser.peek().is_some() {
        let (label, role, phi) = parser.fof_line()?;
        if !labels.insert(label.clone()) {
            return Err(parser.err(format!("duplicate formula label `{label}`")));
        }
        formulas.push((label, role, phi));
    }
    if formulas.is_empty() {
        return Err(parser.err("no `fof` formulas found"));
    }
    let mut signature = Signature::default();
    for (_, _, phi) in &formulas {
        signature = signature.merge(&extract_signature(phi)?)?;
    }
    Ok(Problem {
        name: name.to_string(),
        formulas,
        signature,
    })
}

/// Parses a single bare formula (no `fof` wrapper).
pub fn parse_formula(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let phi = parser.formula()?;
    if parser.peek().is_some() {
        return Err(parser.err("trailing input after formula"));
    }
    Ok(phi)
}

fn print_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&upper_first(v)),
        Term::Const(c) => out.push_str(c),
        Term::App(f, args) => {
            out.push_str(f);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_term(a, out);
            }
            out.push(')');
        }
    }
}

fn is_self_delimited(phi: &Formula) -> bool {
    matches!(
        phi,
        Formula::Atom(..) | Formula::Truth | Formula::Falsity
    )
}

fn print_formula(phi: &Formula, out: &mut String) {
    match phi {
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    print_term(a, out);
                }
                out.push(')');
            }
        }
        Formula::Equal(l, r) => {
            print_term(l, out);
            out.push_str(" = ");
            print_term(r, out);
        }
        Formula::Truth => out.push_str("$true"),
        Formula::Falsity => out.push_str("$false"),
        Formula::Not(inner) => {
            if let Formula::Equal(l, r) = inner.as_ref() {
                print_term(l, out);
                out.push_str(" != ");
                print_term(r, out);
            } else {
                out.push('~');
                print_operand(inner, out);
            }
        }
        Formula::And(..) => print_chain(phi, "&", out),
        Formula::Or(..) => print_chain(phi, "|", out),
        Formula::Implies(a, b) => {
            // right-associative: flatten the right spine
            print_operand(a, out);
            out.push_str(" => ");
            if matches!(b.as_ref(), Formula::Implies(..)) {
                print_formula(b, out);
            } else {
                print_operand(b, out);
            }
        }
        Formula::Iff(a, b) => {
            print_operand(a, out);
            out.push_str(" <=> ");
            print_operand(b, out);
        }
        Formula::Forall(..) | Formula::Exists(..) => {
            // merge adjacent binders of the same polarity into one block
            let mut vars = Vec::new();
            let mut body = phi;
            let existential = matches!(phi, Formula::Exists(..));
            loop {
                match body {
                    Formula::Forall(v, inner) if !existential => {
                        vars.push(v.clone());
                        body = inner;
                    }
                    Formula::Exists(v, inner) if existential => {
                        vars.push(v.clone());
                        body = inner;
                    }
                    _ => break,
                }
            }
            out.push(if existential { '?' } else { '!' });
            out.push('[');
            for (i, v) in vars.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&upper_first(v));
            }
            out.push_str("]: ");
            match body {
                Formula::Forall(..) | Formula::Exists(..) => print_formula(body, out),
                b if is_self_delimited(b) => print_formula(body, out),
                Formula::Not(inner) if !matches!(inner.as_ref(), Formula::Equal(..)) => {
                    print_formula(body, out)
                }
                _ => {
                    out.push('(');
                    print_formula(body, out);
                    out.push(')');
                }
            }
        }
    }
}

// Flattens the left spine of `&`/`|`, which is how the parser folds chains.
fn print_chain(phi: &Formula, op: &str, out: &mut String) {
    match (phi, op) {
        (Formula::And(a, b), "&") | (Formula::Or(a, b), "|") => {
            print_chain(a, op, out);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            print_operand(b, out);
        }
        _ => print_operand(phi, out),
    }
}

// An operand position accepts only unary formulas; everything else is
// parenthesised.
fn print_operand(phi: &Formula, out: &mut String) {
    let needs_parens = match phi {
        Formula::Atom(..) | Formula::Truth | Formula::Falsity => false,
        Formula::Equal(..) => false,
        Formula::Not(..) => false,
        _ => true,
    };
    if needs_parens {
        out.push('(');
        print_formula(phi, out);
        out.push(')');
    } else {
        print_formula(phi, out);
    }
}

/// Renders a formula in TPTP syntax.
pub fn print_tptp(phi: &Formula) -> String {
    let mut out = String::new();
    print_formula(phi, &mut out);
    out
}

/// Renders a labelled `fof` line.
pub fn print_fof(label: &str, role: Role, phi: &Formula) -> String {
    format!("fof({label}, {}, {}).", role.as_str(), print_tptp(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::free_vars;

    #[test]
    fn parses_the_leading_example() {
        let problem =
            parse_problem("t", "fof(a, axiom, ![X]: ?[Y]: (p(X) <=> q(Y))).").unwrap();
        let (_, role, phi) = &problem.formulas[0];
        assert_eq!(*role, Role::Axiom);
        let expected = Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::iff(
                    Formula::atom("p", vec![Term::var("x")]),
                    Formula::atom("q", vec![Term::var("y")]),
                ),
            ),
        );
        assert_eq!(*phi, expected);
        assert!(free_vars(phi).is_empty());
    }

    #[test]
    fn parses_equality() {
        let phi = parse_formula("![X]: ?[Y]: X = Y").unwrap();
        assert_eq!(
            phi,
            Formula::forall(
                "x",
                Formula::exists("y", Formula::equal(Term::var("x"), Term::var("y")))
            )
        );
        let neq = parse_formula("?[X, Y]: X != Y").unwrap();
        assert_eq!(
            neq,
            Formula::exists(
                "x",
                Formula::exists(
                    "y",
                    Formula::not(Formula::equal(Term::var("x"), Term::var("y")))
                )
            )
        );
    }

    #[test]
    fn reports_parse_errors_with_position() {
        let err = parse_problem("t", "fof(a, axiom, p(X,Y").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_formula("p & q | r").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_formula("p <=> q <=> r").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn prints_the_leading_example() {
        let phi = parse_formula("![X]: ?[Y]: (p(X) <=> q(Y))").unwrap();
        assert_eq!(print_tptp(&phi), "![X]: ?[Y]: (p(X) <=> q(Y))");
    }

    #[test]
    fn round_trips_assorted_formulas() {
        for text in [
            "![X]: ?[Y]: (p(X) <=> q(Y))",
            "![X, Y]: (r(X, Y) => r(Y, X))",
            "p(c) & q(d) & r(c, d)",
            "(p | q) & r",
            "~(p & q)",
            "![X]: (f(X) = c | f(X) != d)",
            "$true => $false",
            "?[Z_1]: p(Z_1)",
            "p => q => r",
            "(p <=> q) <=> r",
        ] {
            let phi = parse_formula(text).unwrap();
            let printed = print_tptp(&phi);
            let reparsed = parse_formula(&printed).unwrap();
            assert_eq!(phi, reparsed, "round trip failed for `{text}` -> `{printed}`");
        }
    }

    #[test]
    fn associativity_matches_parser_folds() {
        let abc = parse_formula("p & q & r").unwrap();
        assert_eq!(
            abc,
            Formula::and(
                Formula::and(Formula::atom("p", vec![]), Formula::atom("q", vec![])),
                Formula::atom("r", vec![]),
            )
        );
        let imp = parse_formula("p => q => r").unwrap();
        assert_eq!(
            imp,
            Formula::implies(
                Formula::atom("p", vec![]),
                Formula::implies(Formula::atom("q", vec![]), Formula::atom("r", vec![])),
            )
        );
    }

    #[test]
    fn rejects_conflicting_arities() {
        let err = parse_problem("t", "fof(a, axiom, p(c) & p(c, d)).").unwrap_err();
        assert!(matches!(err, Error::ArityConflict { .. }));
    }

    #[test]
    fn quantifier_over_binary_operand_requires_parens() {
        assert!(parse_formula("p & ![X]: q(X)").is_err());
        assert!(parse_formula("p & (![X]: q(X))").is_ok());
    }
}
