use std::collections::BTreeSet;

use super::ast::*;
use crate::error::{Error, Result};

/// Which fragment of the language a formula may use.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Dialect {
    Tlcga,
    TlcgaPlus,
    Mu,
}

impl std::str::FromStr for Dialect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tlcga" => Ok(Dialect::Tlcga),
            "tlcga_plus" | "tlcga+" => Ok(Dialect::TlcgaPlus),
            "mu" => Ok(Dialect::Mu),
            other => Err(Error::Dialect(format!("unknown dialect `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    Bang,
    Amp,
    AmpAmp,
    Bar,
    Arrow,
    LAngle,
    RAngle,
}

const KEYWORDS: &[&str] = &["true", "false", "mu", "nu", "X", "G", "U"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = text.get(i..i + 2).unwrap_or("");
        let tok = match two {
            "&&" => Some(Tok::AmpAmp),
            "->" => Some(Tok::Arrow),
            "<<" => Some(Tok::LAngle),
            ">>" => Some(Tok::RAngle),
            _ => None,
        };
        if let Some(t) = tok {
            out.push((start, t));
            i += 2;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '.' => Tok::Dot,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{other}`") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    bound: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn state(&mut self) -> Result<Formula> {
        if self.is_keyword("mu") || self.is_keyword("nu") {
            let least = self.is_keyword("mu");
            self.at += 1;
            let z = self.ident("variable")?;
            self.expect(Tok::Dot, "`.`")?;
            self.bound.push(z.clone());
            let body = self.state();
            self.bound.pop();
            let body = body?;
            return Ok(if least { mu(z, body) } else { nu(z, body) });
        }
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.state()?;
            return Ok(implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let right = self.conjunction()?;
            left = or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut left = self.unary()?;
        while self.eat(&Tok::Amp) {
            let right = self.unary()?;
            left = and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(not(self.unary()?));
        }
        if self.is_keyword("mu") || self.is_keyword("nu") {
            return self.state();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.state()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::LAngle) => {
                self.at += 1;
                self.goal_body()
            }
            Some(Tok::Ident(s)) if s == "true" => {
                self.at += 1;
                Ok(tt())
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.at += 1;
                Ok(ff())
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident("proposition")?;
                if self.bound.contains(&name) {
                    Ok(var(name))
                } else {
                    Ok(prop(name))
                }
            }
            _ => self.err("expected a state formula"),
        }
    }

    fn goal_body(&mut self) -> Result<Formula> {
        let mut entries: Vec<(Coalition, PathFormula)> = Vec::new();
        if self.eat(&Tok::RAngle) {
            return Ok(tt());
        }
        loop {
            let at = self.pos();
            let c = self.coalition()?;
            self.expect(Tok::Arrow, "`->`")?;
            let g = self.path()?;
            if entries.iter().any(|(k, _)| *k == c) {
                return Err(Error::Syntax { pos: at, msg: format!("duplicate coalition {c}") });
            }
            entries.push((c, g));
            if self.eat(&Tok::Semi) {
                continue;
            }
            self.expect(Tok::RAngle, "`;` or `>>`")?;
            break;
        }
        Ok(brak(GoalAssignment::from_entries(entries)))
    }

    fn coalition(&mut self) -> Result<Coalition> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut c = Coalition::empty();
        if self.eat(&Tok::RBrace) {
            return Ok(c);
        }
        loop {
            c.insert(self.ident("agent name")?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RBrace, "`,` or `}`")?;
            return Ok(c);
        }
    }

    fn path(&mut self) -> Result<PathFormula> {
        let mut left = self.path_atom()?;
        while self.eat(&Tok::AmpAmp) {
            let right = self.path_atom()?;
            left = PathFormula::and(left, right);
        }
        Ok(left)
    }

    fn path_atom(&mut self) -> Result<PathFormula> {
        if self.is_keyword("X") {
            self.at += 1;
            return Ok(PathFormula::next(self.state()?));
        }
        if self.is_keyword("G") {
            self.at += 1;
            return Ok(PathFormula::globally(self.state()?));
        }
        if self.eat(&Tok::LParen) {
            let a = self.state()?;
            if !self.is_keyword("U") {
                return self.err("expected `U`");
            }
            self.at += 1;
            let b = self.state()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(PathFormula::until(a, b));
        }
        self.err("expected a path formula (`X`, `G` or `(... U ...)`)")
    }
}

/// Parses a state formula and checks it against the dialect.
pub fn parse_state_formula(text: &str, dialect: Dialect) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), bound: Vec::new() };
    let f = p.state()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    check_dialect(&f, dialect)?;
    check_positive(&f)?;
    Ok(f)
}

pub fn check_dialect(f: &StateFormula, dialect: Dialect) -> Result<()> {
    let mut problem = None;
    f.visit(&mut |g| match g {
        StateFormula::Mu(..) | StateFormula::Nu(..) if dialect != Dialect::Mu => {
            problem.get_or_insert("fixpoint binders are only allowed in the mu dialect");
        }
        StateFormula::Brak(ga) if dialect == Dialect::Tlcga && ga.has_path_and() => {
            problem.get_or_insert("`&&` is only allowed in the tlcga_plus dialect");
        }
        _ => {}
    });
    match problem {
        Some(m) => Err(Error::Dialect(m.to_string())),
        None => Ok(()),
    }
}

/// Bound variables must occur under an even number of negations.
pub fn check_positive(f: &StateFormula) -> Result<()> {
    fn go(f: &StateFormula, negative: &mut BTreeSet<String>, bound: &mut Vec<(String, bool)>, neg: bool) {
        match f {
            StateFormula::Var(z) => {
                if let Some((_, pol)) = bound.iter().rev().find(|(n, _)| n == z) {
                    if *pol != neg {
                        negative.insert(z.clone());
                    }
                }
            }
            StateFormula::Mu(z, a) | StateFormula::Nu(z, a) => {
                bound.push((z.clone(), neg));
                go(a, negative, bound, neg);
                bound.pop();
            }
            StateFormula::Not(a) => go(a, negative, bound, !neg),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                go(a, negative, bound, neg);
                go(b, negative, bound, neg);
            }
            StateFormula::Implies(a, b) => {
                go(a, negative, bound, !neg);
                go(b, negative, bound, neg);
            }
            StateFormula::Brak(ga) => {
                for (_, g) in ga.iter() {
                    for s in g.state_operands() {
                        go(s, negative, bound, neg);
                    }
                }
            }
            _ => {}
        }
    }
    let mut negative = BTreeSet::new();
    go(f, &mut negative, &mut Vec::new(), false);
    match negative.into_iter().next() {
        Some(z) => Err(Error::Dialect(format!("variable `{z}` occurs negatively under its binder"))),
        None => Ok(()),
    }
}

pub fn parse_coalition(text: &str) -> Result<Coalition> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), bound: Vec::new() };
    let c = p.coalition()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(c)
}

pub fn parse_path_formula(text: &str, dialect: Dialect) -> Result<PathFormula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), bound: Vec::new() };
    let g = p.path()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    let wrapped = brak(GoalAssignment::single(Coalition::empty(), g.clone()));
    check_dialect(&wrapped, dialect)?;
    Ok(g)
}
